//! Finite linear combinations of paths with exact coefficients.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::quiver::{GradedQuiver, Path, VertexId};

/// An element of a path algebra: a finite map from paths to nonzero scalars.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<F: Field> {
    terms: BTreeMap<Path, F::Elem>,
}

impl<F: Field> Default for AlgebraElement<F> {
    fn default() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(field: &F, p: Path) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, field.one());
        AlgebraElement { terms }
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (Path, F::Elem)>) -> Self {
        let mut el = Self::zero();
        for (p, c) in terms {
            el.add_term(field, p, c);
        }
        el
    }

    pub fn idempotent(field: &F, v: VertexId) -> Self {
        Self::from_path(field, Path::trivial(v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, p: &Path) -> Option<&F::Elem> {
        self.terms.get(p)
    }

    /// The term with the largest path in the graded order.
    pub fn leading(&self) -> Option<(&Path, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, field: &F, p: Path, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.remove(&p) {
            None => {
                self.terms.insert(p, c);
            }
            Some(old) => {
                let s = field.add(&old, &c);
                if !field.is_zero(&s) {
                    self.terms.insert(p, s);
                }
            }
        }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(field, p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(field, p.clone(), field.neg(c));
        }
        out
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(p, x)| (p.clone(), field.mul(x, c))).collect();
        AlgebraElement { terms }
    }

    pub fn neg(&self, field: &F) -> Self {
        self.scale(field, &field.neg(&field.one()))
    }

    /// The product `self · other` with `self` applied second. Non-composable
    /// path pairs multiply to zero.
    pub fn mul(&self, field: &F, q: &GradedQuiver, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            for (p2, c2) in &other.terms {
                if let Some(prod) = p.compose_after(q, p2) {
                    out.add_term(field, prod, field.mul(c, c2));
                }
            }
        }
        out
    }

    /// All terms share this source if Some; mixed sources give None.
    pub fn uniform_source(&self) -> Option<VertexId> {
        let mut it = self.terms.keys();
        let s = it.next()?.source();
        it.all(|p| p.source() == s).then_some(s)
    }

    pub fn uniform_target(&self, q: &GradedQuiver) -> Option<VertexId> {
        let mut it = self.terms.keys();
        let t = it.next()?.target(q);
        it.all(|p| p.target(q) == t).then_some(t)
    }

    /// All terms share this degree if Some.
    pub fn uniform_degree(&self, q: &GradedQuiver) -> Option<i64> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree(q);
        it.all(|p| p.degree(q) == d).then_some(d)
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|p| p.len()).max().unwrap_or(0)
    }

    /// Deterministic plain-text rendering, e.g. `β⁺ γ + β⁺` or `γ α⁻ - α⁻`.
    pub fn display(&self, field: &F, q: &GradedQuiver) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Largest path first reads naturally for relations.
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let cs = field.display(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if mag == "1" {
                out.push_str(&p.display(q));
            } else {
                out.push_str(&format!("{} * {}", mag, p.display(q)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::quiver::GradedQuiver;

    fn setup() -> (Rationals, GradedQuiver) {
        let q = GradedQuiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into(), 0),
                ("b".into(), "2".into(), "1".into(), 0),
            ],
        )
        .unwrap();
        (Rationals, q)
    }

    #[test]
    fn product_respects_composability() {
        let (f, q) = setup();
        let a = AlgebraElement::from_path(&f, Path::arrow(&q, q.find_arrow("a").unwrap()));
        let b = AlgebraElement::from_path(&f, Path::arrow(&q, q.find_arrow("b").unwrap()));
        let ba = b.mul(&f, &q, &a);
        assert_eq!(ba.num_terms(), 1);
        assert_eq!(ba.leading().unwrap().0.display(&q), "b a");
        // a·a is not composable (target 2 vs source 1).
        assert!(a.mul(&f, &q, &a).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let (f, q) = setup();
        let a = AlgebraElement::from_path(&f, Path::arrow(&q, q.find_arrow("a").unwrap()));
        let diff = a.sub(&f, &a);
        assert!(diff.is_zero());
    }

    #[test]
    fn idempotents_multiply_as_units() {
        let (f, q) = setup();
        let v1 = q.find_vertex("1").unwrap();
        let e1 = AlgebraElement::idempotent(&f, v1);
        let a = AlgebraElement::from_path(&f, Path::arrow(&q, q.find_arrow("a").unwrap()));
        assert_eq!(a.mul(&f, &q, &e1), a);
        assert!(e1.mul(&f, &q, &a).is_zero()); // e1 · a: target of a is 2
    }
}
