//! Graded presentations: a quiver plus relation elements, with an optional
//! split of the arrows into a gentle part and a set of vanishing loops.

use std::collections::BTreeMap;

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::{ArrowId, GradedQuiver, VertexId};

/// The four possible companions of a vanishing loop at a vertex `v`:
/// `alpha_minus` ends at `v`, `alpha_plus` starts at `v`, and likewise for
/// the beta side. The alpha side is the one whose loop relations carry the
/// sign `γ - e_v`; the beta side carries `γ + e_v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopCompanions {
    pub alpha_minus: Option<ArrowId>,
    pub alpha_plus: Option<ArrowId>,
    pub beta_minus: Option<ArrowId>,
    pub beta_plus: Option<ArrowId>,
}

/// A certified split `Q1 = Q1^g ⊔ Q1^p`, `I = I^g ⊔ I^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinchedDecomposition {
    /// Vanishing loops and their labeled companion arrows.
    pub loops: BTreeMap<ArrowId, LoopCompanions>,
    /// Indices (into `Presentation::relations`) of the gentle relations.
    pub gentle_relations: Vec<usize>,
    /// Indices of the loop relations.
    pub pinched_relations: Vec<usize>,
}

impl PinchedDecomposition {
    pub fn is_pinched_loop(&self, a: ArrowId) -> bool {
        self.loops.contains_key(&a)
    }

    pub fn loop_at(&self, q: &GradedQuiver, v: VertexId) -> Option<ArrowId> {
        self.loops.keys().copied().find(|&a| q.source(a) == v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation<F: Field> {
    pub field: F,
    quiver: GradedQuiver,
    relations: Vec<AlgebraElement<F>>,
    decomposition: Option<PinchedDecomposition>,
}

impl<F: Field> Presentation<F> {
    /// Validate and canonicalize. Every relation must be a nonzero element
    /// whose terms share source, target, and degree (homogeneous generators
    /// of a graded ideal). Relations are sorted and deduplicated.
    pub fn new(
        field: F,
        quiver: GradedQuiver,
        relations: Vec<AlgebraElement<F>>,
    ) -> Result<Presentation<F>> {
        for r in &relations {
            if r.is_zero() {
                return Err(Error::Validation("zero relation".into()));
            }
            if r.uniform_source().is_none() || r.uniform_target(&quiver).is_none() {
                return Err(Error::Validation(format!(
                    "relation `{}` mixes sources or targets",
                    r.display(&field, &quiver)
                )));
            }
            if r.uniform_degree(&quiver).is_none() {
                return Err(Error::Validation(format!(
                    "relation `{}` is not homogeneous",
                    r.display(&field, &quiver)
                )));
            }
        }
        let mut relations = relations;
        relations.sort_by(|a, b| {
            let ka: Vec<_> = a.terms().collect();
            let kb: Vec<_> = b.terms().collect();
            ka.cmp(&kb)
        });
        relations.dedup();
        Ok(Presentation { field, quiver, relations, decomposition: None })
    }

    pub fn with_decomposition(mut self, d: PinchedDecomposition) -> Self {
        self.decomposition = Some(d);
        self
    }

    pub fn quiver(&self) -> &GradedQuiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[AlgebraElement<F>] {
        &self.relations
    }

    pub fn decomposition(&self) -> Option<&PinchedDecomposition> {
        self.decomposition.as_ref()
    }

    pub fn clear_decomposition(&mut self) {
        self.decomposition = None;
    }

    /// True when every relation is a single length-two path with unit
    /// coefficient (after scaling): the shape required of a gentle ideal.
    pub fn relations_are_monomial_quadratic(&self) -> bool {
        self.relations.iter().all(|r| {
            r.num_terms() == 1 && r.terms().next().map(|(p, _)| p.len() == 2).unwrap_or(false)
        })
    }

    /// The monomial relation paths (arrow pairs in application order), for
    /// presentations whose relations are all quadratic monomials.
    pub fn monomial_relation_pairs(&self) -> Vec<(ArrowId, ArrowId)> {
        self.relations
            .iter()
            .filter_map(|r| {
                let (p, _) = r.terms().next()?;
                if r.num_terms() == 1 && p.len() == 2 {
                    Some((p.arrows()[0], p.arrows()[1]))
                } else {
                    None
                }
            })
            .collect()
    }

    /// The gentle part `(Q^g, I^g)` of a decomposed presentation: the same
    /// vertices, the non-loop arrows, and the gentle relations.
    pub fn gentle_part(&self) -> Result<Presentation<F>> {
        let d = self
            .decomposition
            .as_ref()
            .ok_or_else(|| Error::Precondition("presentation carries no decomposition".into()))?;
        let vertices: Vec<String> =
            self.quiver.vertices().map(|v| self.quiver.vertex_name(v).to_string()).collect();
        let arrows: Vec<(String, String, String, i64)> = self
            .quiver
            .arrows()
            .filter(|a| !d.is_pinched_loop(*a))
            .map(|a| {
                let ar = self.quiver.arrow(a);
                (
                    ar.name.clone(),
                    self.quiver.vertex_name(ar.source).to_string(),
                    self.quiver.vertex_name(ar.target).to_string(),
                    ar.degree,
                )
            })
            .collect();
        let q = GradedQuiver::new(vertices, arrows)?;
        let relations = d
            .gentle_relations
            .iter()
            .map(|&i| reindex_element(&self.field, &self.quiver, &q, &self.relations[i]))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(self.field.clone(), q, relations)
    }

    pub fn vertex_named(&self, name: &str) -> Result<VertexId> {
        self.quiver
            .find_vertex(name)
            .ok_or_else(|| Error::Validation(format!("no vertex named `{name}`")))
    }

    pub fn arrow_named(&self, name: &str) -> Result<ArrowId> {
        self.quiver
            .find_arrow(name)
            .ok_or_else(|| Error::Validation(format!("no arrow named `{name}`")))
    }
}

/// Transport an element between quivers that share vertex and arrow names.
pub(crate) fn reindex_element<F: Field>(
    field: &F,
    from: &GradedQuiver,
    to: &GradedQuiver,
    el: &AlgebraElement<F>,
) -> Result<AlgebraElement<F>> {
    let mut out = AlgebraElement::zero();
    for (p, c) in el.terms() {
        let path = reindex_path(from, to, p)?;
        out.add_term(field, path, c.clone());
    }
    Ok(out)
}

pub(crate) fn reindex_path(
    from: &GradedQuiver,
    to: &GradedQuiver,
    p: &crate::quiver::Path,
) -> Result<crate::quiver::Path> {
    if p.is_trivial() {
        let name = from.vertex_name(p.source());
        let v = to
            .find_vertex(name)
            .ok_or_else(|| Error::Validation(format!("no vertex named `{name}`")))?;
        Ok(crate::quiver::Path::trivial(v))
    } else {
        let arrows = p
            .arrows()
            .iter()
            .map(|&a| {
                let name = from.arrow_name(a);
                to.find_arrow(name)
                    .ok_or_else(|| Error::Validation(format!("no arrow named `{name}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        crate::quiver::Path::from_arrows(to, arrows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::quiver::Path;

    #[test]
    fn values_are_shareable_across_threads() {
        // Everything is immutable after construction; concurrent reads on
        // shared presentations need Send + Sync.
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Presentation<Rationals>>();
        assert_send_sync::<AlgebraElement<Rationals>>();
        assert_send_sync::<GradedQuiver>();
        assert_send_sync::<crate::reduce::PathBasis<Rationals>>();
    }

    #[test]
    fn rejects_inhomogeneous_relation() {
        let q = GradedQuiver::new(
            vec!["1".into()],
            vec![("g".into(), "1".into(), "1".into(), 1)],
        )
        .unwrap();
        let g = q.find_arrow("g").unwrap();
        let v = q.find_vertex("1").unwrap();
        let f = Rationals;
        let mut bad = AlgebraElement::from_path(&f, Path::arrow(&q, g));
        bad.add_term(&f, Path::trivial(v), f.from_i64(1));
        assert!(Presentation::new(f, q, vec![bad]).is_err());
    }

    #[test]
    fn rejects_mixed_endpoints() {
        let q = GradedQuiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into(), 0),
                ("l".into(), "1".into(), "1".into(), 0),
            ],
        )
        .unwrap();
        let f = Rationals;
        let mut bad = AlgebraElement::from_path(&f, Path::arrow(&q, q.find_arrow("a").unwrap()));
        bad.add_term(&f, Path::arrow(&q, q.find_arrow("l").unwrap()), f.from_i64(1));
        assert!(Presentation::new(f, q, vec![bad]).is_err());
    }
}
