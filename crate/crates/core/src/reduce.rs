//! Truncated two-sided-ideal normal forms and hom-space bases.
//!
//! For a presentation `KQ/⟨I⟩` and vertices `i, j`, the engine spans the
//! `(i,j)`-component of the ideal by all products `m · r · m'` (relation `r`,
//! monomial cofactors) of total length at most `L + slack`, reduced to a row
//! echelon over the graded path order. Because relations may be inhomogeneous
//! in length (loop relations carry `γ ± e_v` factors), no finite slack is
//! provably sufficient in general; the engine therefore recomputes at
//! `slack + 1` and at `L + 1` and reports stabilization flags instead of
//! silently trusting the bound.

use std::collections::HashMap;

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, SparseVec};
use crate::presentation::Presentation;
use crate::quiver::{GradedQuiver, Path, VertexId};

/// Budgets for path enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    /// Cap on paths enumerated per `(i, j, L)` query.
    pub max_paths: usize,
    /// Extra length allowed for ideal products beyond the basis bound.
    pub slack: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_paths: 1_000_000, slack: 2 }
    }
}

/// All paths from `i` to `j` of length at most `len`, in graded order.
pub fn paths_between(
    q: &GradedQuiver,
    i: VertexId,
    j: VertexId,
    len: usize,
    limits: &EnumLimits,
) -> Result<Vec<Path>> {
    let mut out = Vec::new();
    let mut stack = vec![Path::trivial(i)];
    let mut visited_count = 0usize;
    while let Some(p) = stack.pop() {
        visited_count += 1;
        if visited_count > limits.max_paths {
            return Err(Error::Budget(format!(
                "more than {} paths between {} and {}",
                limits.max_paths,
                q.vertex_name(i),
                q.vertex_name(j)
            )));
        }
        if p.target(q) == j {
            out.push(p.clone());
        }
        if p.len() < len {
            for a in q.arrows() {
                if q.source(a) == p.target(q) {
                    stack.push(p.push(q, a).unwrap());
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Paths from `i` to every vertex, grouped by target, lengths `<= len`.
fn paths_from(
    q: &GradedQuiver,
    i: VertexId,
    len: usize,
    limits: &EnumLimits,
) -> Result<HashMap<VertexId, Vec<Path>>> {
    let mut out: HashMap<VertexId, Vec<Path>> = HashMap::new();
    let mut stack = vec![Path::trivial(i)];
    let mut count = 0usize;
    while let Some(p) = stack.pop() {
        count += 1;
        if count > limits.max_paths {
            return Err(Error::Budget(format!(
                "more than {} paths out of {}",
                limits.max_paths,
                q.vertex_name(i)
            )));
        }
        out.entry(p.target(q)).or_default().push(p.clone());
        if p.len() < len {
            for a in q.arrows() {
                if q.source(a) == p.target(q) {
                    stack.push(p.push(q, a).unwrap());
                }
            }
        }
    }
    Ok(out)
}

/// The truncated-ideal reduction engine for one `(i, j)` hom component.
#[derive(Clone, Debug)]
pub struct ReductionEngine<F: Field> {
    field: F,
    source: VertexId,
    target: VertexId,
    ambient_len: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    ideal: Echelon<F>,
}

impl<F: Field> ReductionEngine<F> {
    /// Span the `(i,j)` ideal component by products of total length
    /// `<= ambient_len` and echelonize.
    pub fn new(
        p: &Presentation<F>,
        i: VertexId,
        j: VertexId,
        ambient_len: usize,
        limits: &EnumLimits,
    ) -> Result<Self> {
        let q = p.quiver();
        let paths = paths_between(q, i, j, ambient_len, limits)?;
        let index: HashMap<Path, usize> =
            paths.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        let mut engine = ReductionEngine {
            field: p.field.clone(),
            source: i,
            target: j,
            ambient_len,
            paths,
            index,
            ideal: Echelon::new(p.field.clone()),
        };
        // Right cofactors start at i; left cofactors end at j.
        let right = paths_from(q, i, ambient_len, limits)?;
        for r in p.relations() {
            let rs = r.uniform_source().expect("validated relation");
            let rt = r.uniform_target(q).expect("validated relation");
            let rlen = r.max_len();
            let Some(rights) = right.get(&rs) else { continue };
            for m_right in rights {
                if m_right.len() + rlen > ambient_len {
                    continue;
                }
                // r · m_right as an element, then extend by left cofactors.
                let rm = mul_elem_path(&engine.field, q, r, m_right);
                if rm.is_zero() {
                    continue;
                }
                let lefts = paths_between(q, rt, j, ambient_len - m_right.len() - rlen, limits)?;
                for m_left in &lefts {
                    let prod = mul_path_elem(&engine.field, q, m_left, &rm);
                    if prod.is_zero() {
                        continue;
                    }
                    let vec = engine.to_vec(&prod)?;
                    engine.ideal.insert(&vec);
                }
            }
        }
        Ok(engine)
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient_len
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    /// Coordinates of an element over the ambient path index.
    pub fn to_sparse(&self, _field: &F, el: &AlgebraElement<F>) -> Result<SparseVec<F>> {
        self.to_vec(el)
    }

    fn to_vec(&self, el: &AlgebraElement<F>) -> Result<SparseVec<F>> {
        let mut v = SparseVec::zero();
        for (path, c) in el.terms() {
            let &k = self.index.get(path).ok_or_else(|| {
                Error::Precondition(format!(
                    "path of length {} exceeds the ambient truncation {}",
                    path.len(),
                    self.ambient_len
                ))
            })?;
            v.add_entry(&self.field, k, c.clone());
        }
        Ok(v)
    }

    fn decode_vec(&self, v: &SparseVec<F>) -> AlgebraElement<F> {
        AlgebraElement::from_terms(
            &self.field,
            v.iter().map(|(k, c)| (self.paths[k].clone(), c.clone())),
        )
    }

    /// Canonical normal form modulo the truncated ideal span.
    pub fn reduce(&self, el: &AlgebraElement<F>) -> Result<AlgebraElement<F>> {
        if el.is_zero() {
            return Ok(AlgebraElement::zero());
        }
        let v = self.to_vec(el)?;
        Ok(self.decode_vec(&self.ideal.reduce(&v)))
    }

    pub fn is_ideal_member(&self, el: &AlgebraElement<F>) -> Result<bool> {
        Ok(self.reduce(el)?.is_zero())
    }
}

fn mul_elem_path<F: Field>(
    field: &F,
    q: &GradedQuiver,
    el: &AlgebraElement<F>,
    right: &Path,
) -> AlgebraElement<F> {
    let rp = AlgebraElement::from_path(field, right.clone());
    el.mul(field, q, &rp)
}

fn mul_path_elem<F: Field>(
    field: &F,
    q: &GradedQuiver,
    left: &Path,
    el: &AlgebraElement<F>,
) -> AlgebraElement<F> {
    let lp = AlgebraElement::from_path(field, left.clone());
    lp.mul(field, q, el)
}

/// A basis of the image of the length-`<= len` paths from `source` to
/// `target` in the truncated quotient algebra.
#[derive(Clone, Debug)]
pub struct PathBasis<F: Field> {
    pub source: VertexId,
    pub target: VertexId,
    pub length_bound: usize,
    /// Reduced, independent basis elements in graded order of their leading
    /// paths. For gentle presentations each element is a single path.
    pub elements: Vec<AlgebraElement<F>>,
    /// Degree of each basis element (relations are homogeneous, so every
    /// element has a well-defined degree).
    pub degrees: Vec<i64>,
    /// Per-degree dimensions agree with the `len + 1` computation on all
    /// degrees realized here.
    pub stable_length: bool,
    /// The `slack + 1` computation produced the same per-degree dimensions.
    pub stable_slack: bool,
    engine: ReductionEngine<F>,
}

impl<F: Field> PathBasis<F> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn dims_by_degree(&self) -> std::collections::BTreeMap<i64, usize> {
        let mut m = std::collections::BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    pub fn stable(&self) -> bool {
        self.stable_length && self.stable_slack
    }

    pub fn engine(&self) -> &ReductionEngine<F> {
        &self.engine
    }

    pub fn reduce(&self, el: &AlgebraElement<F>) -> Result<AlgebraElement<F>> {
        self.engine.reduce(el)
    }

    /// Coordinates of `el` (after reduction) in the basis; None when the
    /// reduced element lies outside the span.
    pub fn coords(&self, el: &AlgebraElement<F>) -> Result<Option<Vec<F::Elem>>> {
        let field = &self.engine.field;
        let mut w = self.engine.reduce(el)?;
        let mut coords = vec![field.zero(); self.elements.len()];
        // Basis elements have strictly increasing leading paths; eliminate
        // from the largest down.
        loop {
            let Some((lead, c)) = w.leading().map(|(p, c)| (p.clone(), c.clone())) else {
                return Ok(Some(coords));
            };
            let Some(k) = self
                .elements
                .iter()
                .position(|b| b.leading().map(|(p, _)| p) == Some(&lead))
            else {
                return Ok(None);
            };
            coords[k] = field.add(&coords[k], &c);
            let scaled = self.elements[k].scale(field, &field.neg(&c));
            w = w.add(field, &scaled);
        }
    }
}

fn image_basis<F: Field>(
    engine: &ReductionEngine<F>,
    q: &GradedQuiver,
    len: usize,
    limits: &EnumLimits,
) -> Result<(Vec<AlgebraElement<F>>, Vec<i64>)> {
    let field = engine.field.clone();
    let paths = paths_between(q, engine.source, engine.target, len, limits)?;
    let mut ech = Echelon::new(field.clone());
    for p in &paths {
        let el = AlgebraElement::from_path(&field, p.clone());
        let v = engine.to_vec(&engine.reduce(&el)?)?;
        ech.insert(&v);
    }
    let mut rows: Vec<SparseVec<F>> = ech.rows().cloned().collect();
    rows.sort_by_key(|r| r.leading().map(|(i, _)| i));
    let elements: Vec<AlgebraElement<F>> = rows.iter().map(|r| engine.decode_vec(r)).collect();
    let degrees = elements
        .iter()
        .map(|e| {
            e.uniform_degree(q)
                .ok_or_else(|| Error::Internal("basis element not homogeneous".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((elements, degrees))
}

fn dims_of(degrees: &[i64]) -> std::collections::BTreeMap<i64, usize> {
    let mut m = std::collections::BTreeMap::new();
    for &d in degrees {
        *m.entry(d).or_insert(0) += 1;
    }
    m
}

/// Compute the hom-space basis `e_j Λ e_i` truncated at length `len`,
/// together with stabilization flags (see the module docs).
pub fn enumerate_paths<F: Field>(
    p: &Presentation<F>,
    i: VertexId,
    j: VertexId,
    len: usize,
    limits: &EnumLimits,
) -> Result<PathBasis<F>> {
    let q = p.quiver();
    let engine = ReductionEngine::new(p, i, j, len + limits.slack, limits)?;
    let (elements, degrees) = image_basis(&engine, q, len, limits)?;

    // One wider engine serves both checks: slack+1 at the same length, and
    // the same slack at length+1.
    let wide = ReductionEngine::new(p, i, j, len + limits.slack + 1, limits)?;
    let (_, deg_slack) = image_basis(&wide, q, len, limits)?;
    let (_, deg_longer) = image_basis(&wide, q, len + 1, limits)?;

    let dims = dims_of(&degrees);
    let stable_slack = dims == dims_of(&deg_slack);
    let longer = dims_of(&deg_longer);
    let stable_length = dims
        .iter()
        .all(|(d, n)| longer.get(d).copied().unwrap_or(0) == *n);

    Ok(PathBasis {
        source: i,
        target: j,
        length_bound: len,
        elements,
        degrees,
        stable_length,
        stable_slack,
        engine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::fixtures;
    use crate::oracle;

    #[test]
    fn trivial_basis_at_length_zero() {
        let p = fixtures::lambda1(&Rationals);
        let v1 = p.vertex_named("1").unwrap();
        let b = enumerate_paths(&p, v1, v1, 0, &EnumLimits::default()).unwrap();
        assert_eq!(b.dim(), 1);
        assert!(b.elements[0].terms().next().unwrap().0.is_trivial());
    }

    #[test]
    fn lambda1_bases_match_monomial_oracle() {
        let p = fixtures::lambda1(&Rationals);
        let q = p.quiver();
        let limits = EnumLimits::default();
        for i in q.vertices() {
            for j in q.vertices() {
                let b = enumerate_paths(&p, i, j, 4, &limits).unwrap();
                let expected = oracle::monomial_basis(&p, i, j, 4);
                let got: Vec<String> = b
                    .elements
                    .iter()
                    .map(|e| {
                        assert_eq!(e.num_terms(), 1, "gentle basis must be monomial");
                        e.terms().next().unwrap().0.display(q)
                    })
                    .collect();
                let want: Vec<String> = expected.iter().map(|p| p.display(q)).collect();
                assert_eq!(got, want, "mismatch at ({i:?}, {j:?})");
            }
        }
    }

    #[test]
    fn lambda1_named_examples() {
        let p = fixtures::lambda1(&Rationals);
        let q = p.quiver();
        let limits = EnumLimits::default();
        let v = |n: &str| p.vertex_named(n).unwrap();
        let b12 = enumerate_paths(&p, v("1"), v("2"), 4, &limits).unwrap();
        let names: Vec<String> =
            b12.elements.iter().map(|e| e.terms().next().unwrap().0.display(q)).collect();
        assert_eq!(names, vec!["α", "β"]);
        let b03 = enumerate_paths(&p, v("0"), v("3"), 4, &limits).unwrap();
        let names: Vec<String> =
            b03.elements.iter().map(|e| e.terms().next().unwrap().0.display(q)).collect();
        assert_eq!(names, vec!["α⁺ α α⁻"]);
        assert!(b03.stable());
    }

    #[test]
    fn normal_form_kills_relation_products() {
        let p = fixtures::lambda1_pinched(&Rationals);
        let q = p.quiver();
        let v1 = p.vertex_named("1").unwrap();
        let limits = EnumLimits::default();
        let b = enumerate_paths(&p, v1, v1, 5, &limits).unwrap();
        // β⁺(γ + e₁) is a relation: its product with γ must reduce to zero.
        // (γ + e₁) lives at vertex 1→1 only after multiplying suitable sides;
        // check γ(γ + e₁)-type products via relations of the presentation.
        for r in p.relations() {
            if r.uniform_source() == Some(v1) && r.uniform_target(q) == Some(v1) {
                assert!(b.reduce(r).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn normal_form_soundness_on_cofactor_products() {
        // reduce(x · r · y) = 0 for all short monomial cofactors x, y.
        let p = fixtures::lambda1_pinched(&Rationals);
        let q = p.quiver();
        let f = Rationals;
        let len = 5usize;
        let limits = EnumLimits::default();
        for r in p.relations() {
            let rs = r.uniform_source().unwrap();
            let rt = r.uniform_target(q).unwrap();
            for i in q.vertices() {
                for j in q.vertices() {
                    let rights = paths_between(q, i, rs, len - 2 - r.max_len().min(len - 2), &limits).unwrap();
                    let lefts = paths_between(q, rt, j, len - 2 - r.max_len().min(len - 2), &limits).unwrap();
                    if rights.is_empty() || lefts.is_empty() {
                        continue;
                    }
                    let b = enumerate_paths(&p, i, j, len, &limits).unwrap();
                    for m_right in &rights {
                        for m_left in &lefts {
                            if m_right.len() + r.max_len() + m_left.len() > len {
                                continue;
                            }
                            let re = AlgebraElement::from_path(&f, m_right.clone());
                            let le = AlgebraElement::from_path(&f, m_left.clone());
                            let prod = le.mul(&f, q, &r.mul(&f, q, &re));
                            if !prod.is_zero() {
                                assert!(b.reduce(&prod).unwrap().is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pinched_shadow_matches_gentle_part_for_distinct_vertices() {
        let p = fixtures::lambda1_pinched(&Rationals);
        let g = p.gentle_part().unwrap();
        let limits = EnumLimits::default();
        for i in p.quiver().vertices() {
            for j in p.quiver().vertices() {
                if i == j {
                    continue;
                }
                let bp = enumerate_paths(&p, i, j, 4, &limits).unwrap();
                let gi = g.vertex_named(p.quiver().vertex_name(i)).unwrap();
                let gj = g.vertex_named(p.quiver().vertex_name(j)).unwrap();
                let bg = enumerate_paths(&g, gi, gj, 4, &limits).unwrap();
                assert_eq!(bp.dim(), bg.dim(), "i={i:?} j={j:?}");
            }
        }
    }

    #[test]
    fn reduction_is_linear_and_idempotent() {
        use rand::{Rng, SeedableRng};
        let p = fixtures::lambda1_localized(&Rationals, &Rationals.from_i64(1));
        let v1 = p.vertex_named("1").unwrap();
        let limits = EnumLimits::default();
        let b = enumerate_paths(&p, v1, v1, 6, &limits).unwrap();
        let q = p.quiver();
        let paths = paths_between(q, v1, v1, 6, &limits).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = Rationals;
            let mut x = AlgebraElement::zero();
            let mut y = AlgebraElement::zero();
            for p in &paths {
                if rng.gen_bool(0.3) {
                    x.add_term(&f, p.clone(), f.from_i64(rng.gen_range(-3..=3)));
                }
                if rng.gen_bool(0.3) {
                    y.add_term(&f, p.clone(), f.from_i64(rng.gen_range(-3..=3)));
                }
            }
            let a = f.from_i64(rng.gen_range(-2..=2));
            let lhs = b.reduce(&x.scale(&f, &a).add(&f, &y)).unwrap();
            let rhs = b.reduce(&x).unwrap().scale(&f, &a).add(&f, &b.reduce(&y).unwrap());
            assert_eq!(lhs, rhs);
            let r = b.reduce(&x).unwrap();
            assert_eq!(b.reduce(&r).unwrap(), r);
        }
    }

    #[test]
    fn budget_cap_is_enforced() {
        let f = Rationals;
        let p = fixtures::lambda1_localized(&f, &f.from_i64(1));
        let v1 = p.vertex_named("1").unwrap();
        let tiny = EnumLimits { max_paths: 5, slack: 2 };
        let err = enumerate_paths(&p, v1, v1, 10, &tiny).unwrap_err();
        assert!(matches!(err, crate::error::Error::Budget(_)), "{err}");
    }

    #[test]
    fn localized_engine_sees_inverse_relation() {
        // δ(αδ)ⁿα survive; the spanned basis in degree 0 grows with level.
        let f = Rationals;
        let p = fixtures::lambda1_localized(&f, &f.from_i64(1));
        let v1 = p.vertex_named("1").unwrap();
        let b = enumerate_paths(&p, v1, v1, 10, &EnumLimits::default()).unwrap();
        // e₁, δα or δβ (one of them is rewritten into the other), δ(αδ)α, ...
        // Dimension at length 10: e₁ plus one class per δ-count 1..=5.
        assert_eq!(b.dim(), 6);
        // All 1→1 paths have even length, so 10 vs 11 agree; 11 vs 12 do not.
        assert!(b.stable_length);
        let b11 = enumerate_paths(&p, v1, v1, 11, &EnumLimits::default()).unwrap();
        assert!(!b11.stable_length, "localization is infinite dimensional");
    }
}
