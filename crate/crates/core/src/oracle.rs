//! Brute-force reference computations used by the test suite.
//!
//! Everything here is deliberately independent of the echelon-based engine
//! in [`crate::reduce`]: bases are produced by exhaustive path enumeration
//! and subpath filtering, which is valid for monomial quadratic ideals.

use crate::field::Field;
use crate::presentation::Presentation;
use crate::quiver::{Path, VertexId};

/// All nonzero paths `i -> j` of length `<= len` for a presentation whose
/// relations are monomial: a path is nonzero iff it avoids every relation
/// path as a contiguous subpath.
///
/// Panics when a relation is not a single monomial (the oracle does not
/// apply there).
pub fn monomial_basis<F: Field>(
    p: &Presentation<F>,
    i: VertexId,
    j: VertexId,
    len: usize,
) -> Vec<Path> {
    let q = p.quiver();
    let forbidden: Vec<Path> = p
        .relations()
        .iter()
        .map(|r| {
            assert_eq!(r.num_terms(), 1, "oracle needs a monomial ideal");
            r.terms().next().unwrap().0.clone()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![Path::trivial(i)];
    while let Some(path) = stack.pop() {
        if forbidden.iter().any(|f| path.contains_subpath(f)) {
            continue;
        }
        if path.target(q) == j {
            out.push(path.clone());
        }
        if path.len() < len {
            for a in q.arrows() {
                if q.source(a) == path.target(q) {
                    stack.push(path.push(q, a).unwrap());
                }
            }
        }
    }
    out.sort();
    out
}

/// Dimension count of [`monomial_basis`] split by degree.
pub fn monomial_dims_by_degree<F: Field>(
    p: &Presentation<F>,
    i: VertexId,
    j: VertexId,
    len: usize,
) -> std::collections::BTreeMap<i64, usize> {
    let q = p.quiver();
    let mut m = std::collections::BTreeMap::new();
    for path in monomial_basis(p, i, j, len) {
        *m.entry(path.degree(q)).or_insert(0) += 1;
    }
    m
}
