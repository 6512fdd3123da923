//! One-sided twisted complexes, band objects, and their hom complexes.
//!
//! A twisted complex is a formal shifted sum of vertex projectives with a
//! strictly upper triangular differential whose entries are algebra
//! elements of total degree one, squaring to zero modulo the ideal. Hom
//! complexes between two twisted complexes are assembled from truncated
//! hom-space bases; their differential is
//! `d f = ∂' ∘ f - (-1)^{|f|} f ∘ ∂` and is verified to square to zero on
//! construction rather than assumed.

use std::collections::BTreeMap;

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel, Echelon, QuotientBasis, SparseVec};
use crate::presentation::Presentation;
use crate::quiver::{Path, VertexId};
use crate::reduce::{self, EnumLimits, PathBasis};
use crate::transforms::GradedKronecker;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedComplex<F: Field> {
    /// `(vertex, shift)` per summand.
    summands: Vec<(VertexId, i64)>,
    /// `diff[i][j]` maps summand `j` to summand `i`.
    diff: Vec<Vec<AlgebraElement<F>>>,
}

impl<F: Field> TwistedComplex<F> {
    pub fn new(
        summands: Vec<(VertexId, i64)>,
        diff: Vec<Vec<AlgebraElement<F>>>,
    ) -> TwistedComplex<F> {
        TwistedComplex { summands, diff }
    }

    /// The projective at a vertex, concentrated in shift zero.
    pub fn projective(v: VertexId) -> TwistedComplex<F> {
        TwistedComplex { summands: vec![(v, 0)], diff: vec![vec![AlgebraElement::zero()]] }
    }

    pub fn summands(&self) -> &[(VertexId, i64)] {
        &self.summands
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement<F> {
        &self.diff[i][j]
    }

    /// Shift: raises every summand shift by `k` and flips the sign of the
    /// differential when `k` is odd.
    pub fn shift(&self, field: &F, k: i64) -> TwistedComplex<F> {
        let summands = self.summands.iter().map(|&(v, r)| (v, r + k)).collect();
        let diff = if k.rem_euclid(2) == 0 {
            self.diff.clone()
        } else {
            self.diff
                .iter()
                .map(|row| row.iter().map(|e| e.neg(field)).collect())
                .collect()
        };
        TwistedComplex { summands, diff }
    }

    /// The two-summand band object of a Kronecker pair with parameter `mu`:
    /// target projective shifted by the arrow degree, source shifted by one,
    /// connected by `α + μ β`.
    pub fn band(
        p: &Presentation<F>,
        k: &GradedKronecker,
        mu: &F::Elem,
    ) -> Result<TwistedComplex<F>> {
        let q = p.quiver();
        let f = &p.field;
        if f.is_zero(mu) {
            return Err(Error::Precondition("the parameter must be nonzero".into()));
        }
        if q.degree(k.alpha) != q.degree(k.beta) {
            return Err(Error::Precondition(
                "the two arrows have different degrees; no graded band exists".into(),
            ));
        }
        let src = q.source(k.alpha);
        let tgt = q.target(k.alpha);
        let mut omega = AlgebraElement::from_path(f, Path::arrow(q, k.alpha));
        omega.add_term(f, Path::arrow(q, k.beta), mu.clone());
        let zero = AlgebraElement::zero;
        let tc = TwistedComplex {
            summands: vec![(tgt, q.degree(k.alpha)), (src, 1)],
            diff: vec![vec![zero(), omega], vec![zero(), zero()]],
        };
        let report = tc.validate(p, &EnumLimits::default())?;
        if !report.ok() {
            return Err(Error::Internal(format!(
                "band object failed validation: {:?}",
                report.violations
            )));
        }
        Ok(tc)
    }

    /// Check triangularity, entry endpoints, degree-one homogeneity, and the
    /// square-zero condition modulo the ideal. Report style.
    pub fn validate(
        &self,
        p: &Presentation<F>,
        limits: &EnumLimits,
    ) -> Result<TwistedReport> {
        let q = p.quiver();
        let n = self.summands.len();
        let mut violations = Vec::new();
        if self.diff.len() != n || self.diff.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("differential matrix has wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let e = &self.diff[i][j];
                if e.is_zero() {
                    continue;
                }
                if i >= j {
                    violations.push(format!("entry ({i}, {j}) breaks strict upper triangularity"));
                    continue;
                }
                let (vi, ri) = self.summands[i];
                let (vj, rj) = self.summands[j];
                if e.uniform_source() != Some(vj) || e.uniform_target(q) != Some(vi) {
                    violations.push(format!("entry ({i}, {j}) has wrong endpoints"));
                    continue;
                }
                match e.uniform_degree(q) {
                    Some(d) if d + rj - ri == 1 => {}
                    _ => violations.push(format!(
                        "entry ({i}, {j}) is not homogeneous of total degree 1"
                    )),
                }
            }
        }
        if !violations.is_empty() {
            return Ok(TwistedReport { violations });
        }
        // Square-zero modulo the ideal.
        let f = &p.field;
        for i in 0..n {
            for k in 0..n {
                let mut acc = AlgebraElement::zero();
                for j in 0..n {
                    acc = acc.add(f, &self.diff[i][j].mul(f, q, &self.diff[j][k]));
                }
                if acc.is_zero() {
                    continue;
                }
                let s = acc.uniform_source().unwrap();
                let t = acc.uniform_target(q).unwrap();
                let engine = reduce::ReductionEngine::new(
                    p,
                    s,
                    t,
                    acc.max_len() + limits.slack,
                    limits,
                )?;
                if !engine.reduce(&acc)?.is_zero() {
                    violations.push(format!(
                        "square of the differential is nonzero at ({i}, {k})"
                    ));
                }
            }
        }
        Ok(TwistedReport { violations })
    }
}

#[derive(Clone, Debug, Default)]
pub struct TwistedReport {
    pub violations: Vec<String>,
}

impl TwistedReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One basis element of a hom complex: basis vector `basis_index` of the
/// hom space from source summand `col` to target summand `row`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomItem {
    pub row: usize,
    pub col: usize,
    pub basis_index: usize,
    pub degree: i64,
}

/// The graded morphism complex between two twisted complexes, with an
/// explicit basis and differential.
#[derive(Clone, Debug)]
pub struct HomComplex<F: Field> {
    pub source: TwistedComplex<F>,
    pub target: TwistedComplex<F>,
    bases: BTreeMap<(usize, usize), PathBasis<F>>,
    items: Vec<HomItem>,
    item_index: BTreeMap<(usize, usize, usize), usize>,
    /// Differential columns: image of item `i` as `(item, coeff)` pairs.
    d: Vec<Vec<(usize, F::Elem)>>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl<F: Field> HomComplex<F> {
    pub fn items(&self) -> &[HomItem] {
        &self.items
    }

    pub fn dim(&self) -> usize {
        self.items.len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn items_of_degree(&self, n: i64) -> &[usize] {
        self.by_degree.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim_in_degree(&self, n: i64) -> usize {
        self.items_of_degree(n).len()
    }

    pub fn differential(&self, item: usize) -> &[(usize, F::Elem)] {
        &self.d[item]
    }

    pub fn apply_d(&self, field: &F, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zero();
        for (i, c) in v.iter() {
            for (j, x) in &self.d[i] {
                out.add_entry(field, *j, field.mul(c, x));
            }
        }
        out
    }

    /// The algebra element behind one item.
    pub fn item_element(&self, item: usize) -> &AlgebraElement<F> {
        let it = &self.items[item];
        &self.bases[&(it.row, it.col)].elements[it.basis_index]
    }

    /// Express a matrix of algebra elements in the item basis.
    pub fn element_from_matrix(
        &self,
        field: &F,
        entries: &[(usize, usize, AlgebraElement<F>)],
    ) -> Result<SparseVec<F>> {
        let mut out = SparseVec::zero();
        for (row, col, el) in entries {
            if el.is_zero() {
                continue;
            }
            let basis = self
                .bases
                .get(&(*row, *col))
                .ok_or_else(|| Error::Internal("no basis for the requested cell".into()))?;
            let coords = basis.coords(el)?.ok_or_else(|| {
                Error::Precondition("element lies outside the truncated hom basis".into())
            })?;
            for (h, c) in coords.into_iter().enumerate() {
                if field.is_zero(&c) {
                    continue;
                }
                let idx = *self
                    .item_index
                    .get(&(*row, *col, h))
                    .ok_or_else(|| Error::Internal("missing item for basis vector".into()))?;
                out.add_entry(field, idx, c);
            }
        }
        Ok(out)
    }

    /// Single-entry morphism `el` placed at `(row, col)`.
    pub fn single(
        &self,
        field: &F,
        row: usize,
        col: usize,
        el: &AlgebraElement<F>,
    ) -> Result<SparseVec<F>> {
        self.element_from_matrix(field, &[(row, col, el.clone())])
    }

    /// Matrix form of an item-basis vector.
    pub fn to_matrix(&self, field: &F, v: &SparseVec<F>) -> Vec<Vec<AlgebraElement<F>>> {
        let m = self.target.summands().len();
        let n = self.source.summands().len();
        let mut out = vec![vec![AlgebraElement::<F>::zero(); n]; m];
        for (i, c) in v.iter() {
            let it = &self.items[i];
            let el = self.item_element(i).scale(field, c);
            out[it.row][it.col] = out[it.row][it.col].add(field, &el);
        }
        out
    }

    pub fn display_vector(&self, p: &Presentation<F>, v: &SparseVec<F>) -> String {
        let mut parts = Vec::new();
        for (i, c) in v.iter() {
            let it = &self.items[i];
            parts.push(format!(
                "({},{}: {})*{}",
                it.row,
                it.col,
                self.item_element(i).display(&p.field, p.quiver()),
                p.field.display(c)
            ));
        }
        parts.join(" + ")
    }
}

/// Assemble the hom complex between validated twisted complexes, with all
/// hom-space bases truncated at `len`. The differential is checked to
/// square to zero.
pub fn hom_complex<F: Field>(
    p: &Presentation<F>,
    source: &TwistedComplex<F>,
    target: &TwistedComplex<F>,
    len: usize,
    limits: &EnumLimits,
) -> Result<HomComplex<F>> {
    let q = p.quiver();
    let f = &p.field;
    let mut bases = BTreeMap::new();
    let mut items = Vec::new();
    for (k, &(vt, rt)) in target.summands.iter().enumerate() {
        for (l, &(vs, rs)) in source.summands.iter().enumerate() {
            let basis = reduce::enumerate_paths(p, vs, vt, len, limits)?;
            for (h, deg) in basis.degrees.iter().enumerate() {
                items.push(HomItem { row: k, col: l, basis_index: h, degree: deg + rs - rt });
            }
            bases.insert((k, l), basis);
        }
    }
    let mut hc = HomComplex {
        source: source.clone(),
        target: target.clone(),
        bases,
        item_index: BTreeMap::new(),
        d: vec![Vec::new(); items.len()],
        by_degree: BTreeMap::new(),
        items,
    };
    for (i, it) in hc.items.iter().enumerate() {
        hc.by_degree.entry(it.degree).or_insert_with(Vec::new).push(i);
        hc.item_index.insert((it.row, it.col, it.basis_index), i);
    }

    // d f = ∂' f - (-1)^{|f|} f ∂, assembled cell by cell.
    let mut columns: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); hc.items.len()];
    for (i, it) in hc.items.iter().enumerate() {
        let b = hc.item_element(i).clone();
        let mut entries: Vec<(usize, usize, AlgebraElement<F>)> = Vec::new();
        for (krow, _) in hc.target.summands.iter().enumerate() {
            let e = hc.target.entry(krow, it.row);
            if !e.is_zero() {
                entries.push((krow, it.col, e.mul(f, q, &b)));
            }
        }
        let sign = if it.degree.rem_euclid(2) == 0 { f.neg(&f.one()) } else { f.one() };
        for (lcol, _) in hc.source.summands.iter().enumerate() {
            let e = hc.source.entry(it.col, lcol);
            if !e.is_zero() {
                entries.push((it.row, lcol, b.mul(f, q, e).scale(f, &sign)));
            }
        }
        let v = hc.element_from_matrix(f, &entries)?;
        columns[i] = v.iter().map(|(j, c)| (j, c.clone())).collect();
    }
    hc.d = columns;

    // Verified, not assumed.
    for i in 0..hc.items.len() {
        let v = SparseVec::unit(f, i);
        let dd = hc.apply_d(f, &hc.apply_d(f, &v));
        if !dd.is_zero() {
            return Err(Error::Internal(format!(
                "hom complex differential does not square to zero at item {i}"
            )));
        }
        // d must raise degree by exactly one.
        for (j, _) in hc.d[i].iter() {
            if hc.items[*j].degree != hc.items[i].degree + 1 {
                return Err(Error::Internal("differential is not of degree one".into()));
            }
        }
    }
    Ok(hc)
}

/// The cone of a closed degree-zero morphism: target summands followed by
/// the shifted source, glued by the morphism matrix.
pub fn cone<F: Field>(
    p: &Presentation<F>,
    hc: &HomComplex<F>,
    morphism: &SparseVec<F>,
    limits: &EnumLimits,
) -> Result<TwistedComplex<F>> {
    let f = &p.field;
    for (i, _) in morphism.iter() {
        if hc.items[i].degree != 0 {
            return Err(Error::Precondition("the morphism is not of degree zero".into()));
        }
    }
    if !hc.apply_d(f, morphism).is_zero() {
        return Err(Error::Precondition("the morphism is not closed".into()));
    }
    let shifted = hc.source.shift(f, 1);
    let m = hc.target.summands.len();
    let n = shifted.summands.len();
    let mut summands = hc.target.summands.clone();
    summands.extend_from_slice(shifted.summands());
    let mut diff = vec![vec![AlgebraElement::<F>::zero(); m + n]; m + n];
    for (i, row) in hc.target.diff.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            diff[i][j] = e.clone();
        }
    }
    for (i, row) in shifted.diff.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            diff[m + i][m + j] = e.clone();
        }
    }
    let matrix = hc.to_matrix(f, morphism);
    for (i, row) in matrix.iter().enumerate() {
        for (j, el) in row.iter().enumerate() {
            diff[i][m + j] = el.clone();
        }
    }
    let tc = TwistedComplex { summands, diff };
    let report = tc.validate(p, limits)?;
    if !report.ok() {
        return Err(Error::Internal(format!(
            "cone failed validation: {:?}",
            report.violations
        )));
    }
    Ok(tc)
}

/// Serialize a twisted complex as `[summands]` / `[differential]` blocks,
/// suitable for appending to a presentation file.
pub fn serialize_twisted<F: Field>(p: &Presentation<F>, tc: &TwistedComplex<F>) -> String {
    use std::fmt::Write as _;
    let q = p.quiver();
    let mut out = String::new();
    let _ = writeln!(out, "[summands]");
    for (v, r) in tc.summands() {
        let _ = writeln!(out, "{} @ {}", q.vertex_name(*v), r);
    }
    let _ = writeln!(out, "[differential]");
    let n = tc.summands().len();
    for i in 0..n {
        for j in 0..n {
            let e = tc.entry(i, j);
            if !e.is_zero() {
                let _ = writeln!(out, "{i} {j} : {}", e.display(&p.field, q));
            }
        }
    }
    out
}

/// Parse `[summands]` / `[differential]` blocks back into a twisted complex
/// over the given presentation.
pub fn parse_twisted<F: Field>(p: &Presentation<F>, text: &str) -> Result<TwistedComplex<F>> {
    let q = p.quiver();
    let mut summands: Vec<(VertexId, i64)> = Vec::new();
    let mut entries: Vec<(usize, usize, String)> = Vec::new();
    let mut section = "";
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "[summands]" => section = "summands",
            "[differential]" => section = "differential",
            _ if line.starts_with('[') => section = "",
            _ => match section {
                "summands" => {
                    let (v, r) = line
                        .split_once('@')
                        .ok_or_else(|| Error::Validation("expected `vertex @ shift`".into()))?;
                    let vid = q.find_vertex(v.trim()).ok_or_else(|| {
                        Error::Validation(format!("unknown vertex `{}`", v.trim()))
                    })?;
                    let shift: i64 = r
                        .trim()
                        .parse()
                        .map_err(|_| Error::Validation("bad shift".into()))?;
                    summands.push((vid, shift));
                }
                "differential" => {
                    let (pos, el) = line
                        .split_once(':')
                        .ok_or_else(|| Error::Validation("expected `i j : element`".into()))?;
                    let mut it = pos.split_whitespace();
                    let i: usize = it
                        .next()
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| Error::Validation("bad row index".into()))?;
                    let j: usize = it
                        .next()
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| Error::Validation("bad column index".into()))?;
                    entries.push((i, j, el.trim().to_string()));
                }
                _ => {}
            },
        }
    }
    if summands.is_empty() {
        return Err(Error::Validation("no [summands] block found".into()));
    }
    let n = summands.len();
    let mut diff = vec![vec![AlgebraElement::<F>::zero(); n]; n];
    for (i, j, el) in entries {
        if i >= n || j >= n {
            return Err(Error::Validation("differential index out of range".into()));
        }
        diff[i][j] = crate::parse::parse_element(&p.field, q, &el)?;
    }
    Ok(TwistedComplex::new(summands, diff))
}

/// Cohomology of a hom complex over a degree window.
#[derive(Clone, Debug)]
pub struct CohomologyTable<F: Field> {
    pub window: (i64, i64),
    pub by_degree: BTreeMap<i64, DegreeCohomology<F>>,
}

#[derive(Clone, Debug)]
pub struct DegreeCohomology<F: Field> {
    pub dim: usize,
    /// Cycle representatives in item coordinates.
    pub reps: Vec<SparseVec<F>>,
}

impl<F: Field> CohomologyTable<F> {
    pub fn dim(&self, n: i64) -> usize {
        self.by_degree.get(&n).map(|d| d.dim).unwrap_or(0)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.by_degree
            .iter()
            .filter(|(_, d)| d.dim > 0)
            .map(|(&n, d)| (n, d.dim))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(|d| d.dim).sum()
    }
}

/// Exact kernel/image ranks per degree in the window; representatives are
/// cycles reduced modulo boundaries, taken in deterministic item order.
pub fn cohomology<F: Field>(
    field: &F,
    hc: &HomComplex<F>,
    window: (i64, i64),
) -> CohomologyTable<F> {
    let mut by_degree = BTreeMap::new();
    for n in window.0..=window.1 {
        let degree_items = hc.items_of_degree(n);
        if degree_items.is_empty() {
            continue;
        }
        // Kernel of d on degree n.
        let images: Vec<SparseVec<F>> = degree_items
            .iter()
            .map(|&i| hc.apply_d(field, &SparseVec::unit(field, i)))
            .collect();
        let ker_local = kernel(field, &images);
        // Lift local kernel coordinates back to item indices.
        let ker: Vec<SparseVec<F>> = ker_local
            .iter()
            .map(|v| {
                SparseVec::from_entries(
                    field,
                    v.iter().map(|(loc, c)| (degree_items[loc], c.clone())),
                )
            })
            .collect();
        // Image from degree n-1.
        let mut im = Echelon::new(field.clone());
        for &i in hc.items_of_degree(n - 1) {
            im.insert(&hc.apply_d(field, &SparseVec::unit(field, i)));
        }
        let quot = QuotientBasis::new(field.clone(), im, &ker, hc.dim() + 1);
        let reps: Vec<SparseVec<F>> = quot.reps().to_vec();
        by_degree.insert(n, DegreeCohomology { dim: quot.dim(), reps });
    }
    CohomologyTable { window, by_degree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::fixtures;

    fn kron<F: Field>(p: &Presentation<F>) -> GradedKronecker {
        GradedKronecker {
            alpha: p.arrow_named("α").unwrap(),
            beta: p.arrow_named("β").unwrap(),
        }
    }

    fn band1(p: &Presentation<Rationals>) -> TwistedComplex<Rationals> {
        TwistedComplex::band(p, &kron(p), &Rationals.from_i64(1)).unwrap()
    }

    #[test]
    fn band_object_shape_and_validation() {
        let p = fixtures::lambda1(&Rationals);
        let b = band1(&p);
        let q = p.quiver();
        assert_eq!(b.summands().len(), 2);
        assert_eq!(q.vertex_name(b.summands()[0].0), "2");
        assert_eq!(b.summands()[0].1, 0);
        assert_eq!(q.vertex_name(b.summands()[1].0), "1");
        assert_eq!(b.summands()[1].1, 1);
        assert!(b.validate(&p, &EnumLimits::default()).unwrap().ok());
        // Graded variant: first summand shifted by the arrow degree.
        let g = fixtures::lambda1_graded(&Rationals, 2);
        let bg = TwistedComplex::band(&g, &kron(&g), &Rationals.from_i64(1)).unwrap();
        assert_eq!(bg.summands()[0].1, 2);
        assert!(bg.validate(&g, &EnumLimits::default()).unwrap().ok());
    }

    #[test]
    fn band_rejects_unequal_degrees() {
        let f = Rationals;
        let q = crate::quiver::GradedQuiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("α".into(), "1".into(), "2".into(), 2),
                ("β".into(), "1".into(), "2".into(), 0),
            ],
        )
        .unwrap();
        let p = Presentation::new(f, q, vec![]).unwrap();
        assert!(TwistedComplex::band(&p, &kron(&p), &Rationals.from_i64(1)).is_err());
    }

    #[test]
    fn validation_flags_lower_triangular_entry() {
        let p = fixtures::lambda1(&Rationals);
        let f = Rationals;
        let v1 = p.vertex_named("1").unwrap();
        let bad = TwistedComplex::new(
            vec![(v1, 0), (v1, 1)],
            vec![
                vec![AlgebraElement::zero(), AlgebraElement::zero()],
                vec![AlgebraElement::idempotent(&f, v1), AlgebraElement::zero()],
            ],
        );
        let rep = bad.validate(&p, &EnumLimits::default()).unwrap();
        assert!(!rep.ok());
        assert!(rep.violations[0].contains("triangularity"));
    }

    #[test]
    fn projective_summand_passes() {
        let p = fixtures::lambda1(&Rationals);
        let pv = TwistedComplex::projective(p.vertex_named("3").unwrap());
        assert!(pv.validate(&p, &EnumLimits::default()).unwrap().ok());
    }

    #[test]
    fn hom_p1_to_band_basis_and_differential() {
        let p = fixtures::lambda1(&Rationals);
        let f = Rationals;
        let b = band1(&p);
        let x = TwistedComplex::projective(p.vertex_named("1").unwrap());
        let hc = hom_complex(&p, &x, &b, 4, &EnumLimits::default()).unwrap();
        // Basis {[α], [β]} in degree 0, {[e₁]} in degree -1.
        assert_eq!(hc.dim(), 3);
        assert_eq!(hc.dim_in_degree(0), 2);
        assert_eq!(hc.dim_in_degree(-1), 1);
        let e1_item = hc.items_of_degree(-1)[0];
        let image = hc.apply_d(&f, &SparseVec::unit(&f, e1_item));
        // d[e₁] = ω = α + β.
        let m = hc.to_matrix(&f, &image);
        let disp = m[0][0].display(&f, p.quiver());
        assert_eq!(disp, "β + α");
    }

    #[test]
    fn end_of_band_cohomology_is_dual_numbers() {
        let p = fixtures::lambda1(&Rationals);
        let b = band1(&p);
        let hc = hom_complex(&p, &b, &b, 4, &EnumLimits::default()).unwrap();
        assert_eq!(hc.dim(), 4, "ρ = 0 in this fixture");
        let table = cohomology(&Rationals, &hc, (-3, 3));
        assert_eq!(table.dim(0), 1);
        assert_eq!(table.dim(1), 1);
        assert_eq!(table.total_dim(), 2);
        // The degree-zero class is the identity e₁ + e₂.
        let rep = &table.by_degree[&0].reps[0];
        let m = hc.to_matrix(&Rationals, rep);
        assert!(!m[0][0].is_zero() && !m[1][1].is_zero());
    }

    #[test]
    fn end_of_band_with_return_path() {
        // A nonzero 2→1 path adds the four classes ρ, ρα, βρ, βρα to the
        // endomorphism space, all killed in cohomology.
        let p = fixtures::kronecker_with_return(&Rationals);
        let b = band1(&p);
        let hc = hom_complex(&p, &b, &b, 6, &EnumLimits::default()).unwrap();
        assert_eq!(hc.dim(), 8);
        let table = cohomology(&Rationals, &hc, (-3, 3));
        assert_eq!(table.dim(0), 1);
        assert_eq!(table.dim(1), 1);
        assert_eq!(table.total_dim(), 2);
    }

    #[test]
    fn hom_vanishing_off_the_pair() {
        let p = fixtures::lambda1(&Rationals);
        let b = band1(&p);
        for name in ["0", "0t", "3", "3t"] {
            let pv = TwistedComplex::projective(p.vertex_named(name).unwrap());
            let into = hom_complex(&p, &pv, &b, 4, &EnumLimits::default()).unwrap();
            assert_eq!(cohomology(&Rationals, &into, (-4, 4)).total_dim(), 0, "P_{name} → B");
            let from = hom_complex(&p, &b, &pv, 4, &EnumLimits::default()).unwrap();
            assert_eq!(cohomology(&Rationals, &from, (-4, 4)).total_dim(), 0, "B → P_{name}");
        }
    }

    #[test]
    fn hom_p2_and_band_single_classes() {
        let p = fixtures::lambda1(&Rationals);
        let b = band1(&p);
        let p2 = TwistedComplex::projective(p.vertex_named("2").unwrap());
        let hc = hom_complex(&p, &p2, &b, 4, &EnumLimits::default()).unwrap();
        let t = cohomology(&Rationals, &hc, (-4, 4));
        assert_eq!(t.dims(), std::collections::BTreeMap::from([(0, 1)]));
        let p1 = TwistedComplex::projective(p.vertex_named("1").unwrap());
        let from = hom_complex(&p, &b, &p1, 4, &EnumLimits::default()).unwrap();
        let t = cohomology(&Rationals, &from, (-4, 4));
        assert_eq!(t.dims(), std::collections::BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn cone_of_omega_is_the_band() {
        let p = fixtures::lambda1(&Rationals);
        let f = Rationals;
        let b = band1(&p);
        // f = ω: P₁ → P₂ placed in degree 0.
        let x = TwistedComplex::projective(p.vertex_named("1").unwrap());
        let y = TwistedComplex::projective(p.vertex_named("2").unwrap());
        let hc = hom_complex(&p, &x, &y, 4, &EnumLimits::default()).unwrap();
        let mut omega = AlgebraElement::from_path(&f, Path::arrow(p.quiver(), p.arrow_named("α").unwrap()));
        omega.add_term(&f, Path::arrow(p.quiver(), p.arrow_named("β").unwrap()), f.one());
        let v = hc.single(&f, 0, 0, &omega).unwrap();
        let c = cone(&p, &hc, &v, &EnumLimits::default()).unwrap();
        assert_eq!(c, b);
    }

    #[test]
    fn cone_of_identity_and_zero() {
        let p = fixtures::lambda1(&Rationals);
        let f = Rationals;
        let v1 = p.vertex_named("1").unwrap();
        let pv = TwistedComplex::projective(v1);
        let hc = hom_complex(&p, &pv, &pv, 2, &EnumLimits::default()).unwrap();
        let id = hc.single(&f, 0, 0, &AlgebraElement::idempotent(&f, v1)).unwrap();
        let c = cone(&p, &hc, &id, &EnumLimits::default()).unwrap();
        assert_eq!(c.summands(), &[(v1, 0), (v1, 1)]);
        assert!(!c.entry(0, 1).is_zero());
        let z = cone(&p, &hc, &SparseVec::zero(), &EnumLimits::default()).unwrap();
        assert!(z.entry(0, 1).is_zero());
    }

    #[test]
    fn twisted_blocks_round_trip() {
        let p = fixtures::lambda1(&Rationals);
        let b = band1(&p);
        let text = serialize_twisted(&p, &b);
        assert!(text.contains("[summands]") && text.contains("[differential]"));
        let back = parse_twisted(&p, &text).unwrap();
        assert_eq!(back, b);
        assert!(back.validate(&p, &EnumLimits::default()).unwrap().ok());
    }

    #[test]
    fn euler_characteristic_matches_alternating_dims() {
        let p = fixtures::kronecker_with_return(&Rationals);
        let b = band1(&p);
        let hc = hom_complex(&p, &b, &b, 6, &EnumLimits::default()).unwrap();
        let t = cohomology(&Rationals, &hc, (-6, 6));
        let mut chi_basis = 0i64;
        for n in -6i64..=6 {
            let s = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_basis += s * hc.dim_in_degree(n) as i64;
        }
        let mut chi_h = 0i64;
        for (n, d) in t.dims() {
            let s = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_h += s * d as i64;
        }
        assert_eq!(chi_basis, chi_h);
    }

    #[test]
    fn shift_invariance_of_cohomology() {
        let p = fixtures::lambda1(&Rationals);
        let f = Rationals;
        let b = band1(&p);
        let p1 = TwistedComplex::projective(p.vertex_named("1").unwrap());
        let base = cohomology(
            &f,
            &hom_complex(&p, &p1, &b, 4, &EnumLimits::default()).unwrap(),
            (-5, 5),
        );
        for k in [1i64, 2, -1] {
            let shifted = b.shift(&f, k);
            assert!(shifted.validate(&p, &EnumLimits::default()).unwrap().ok());
            let t = cohomology(
                &f,
                &hom_complex(&p, &p1, &shifted, 4, &EnumLimits::default()).unwrap(),
                (-5, 5),
            );
            for n in -4..=4 {
                assert_eq!(t.dim(n - k), base.dim(n), "shift {k}, degree {n}");
            }
        }
    }
}
