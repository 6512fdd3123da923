//! Built-in sample presentations used by the CLI and the test suite.

use crate::element::AlgebraElement;
use crate::field::Field;
use crate::gentle;
use crate::presentation::Presentation;
use crate::quiver::{GradedQuiver, Path};

fn relation<F: Field>(
    field: &F,
    q: &GradedQuiver,
    terms: &[(i64, &[&str])],
) -> AlgebraElement<F> {
    let mut el = AlgebraElement::zero();
    for (c, names) in terms {
        // Names written right to left (composition order).
        let arrows: Vec<_> = names
            .iter()
            .rev()
            .map(|n| q.find_arrow(n).unwrap_or_else(|| panic!("no arrow {n}")))
            .collect();
        let path = if arrows.is_empty() {
            unreachable!("use trivial_term")
        } else {
            Path::from_arrows(q, arrows).expect("composable fixture relation")
        };
        el.add_term(field, path, field.from_i64(*c));
    }
    el
}

fn add_trivial<F: Field>(field: &F, q: &GradedQuiver, el: &mut AlgebraElement<F>, c: i64, v: &str) {
    let vid = q.find_vertex(v).expect("fixture vertex");
    el.add_term(field, Path::trivial(vid), field.from_i64(c));
}

/// A six-vertex gentle algebra on one cycle of arrows `a..f` with a single
/// quadratic relation `d c` and mixed degrees; its surface is an annulus.
pub fn lambda0<F: Field>(field: &F) -> Presentation<F> {
    let q = GradedQuiver::new(
        (0..6).map(|i| i.to_string()).collect(),
        vec![
            ("a".into(), "0".into(), "1".into(), 0),
            ("b".into(), "1".into(), "2".into(), -1),
            ("c".into(), "2".into(), "3".into(), 1),
            ("d".into(), "3".into(), "4".into(), 0),
            ("e".into(), "5".into(), "4".into(), -1),
            ("f".into(), "0".into(), "5".into(), 0),
        ],
    )
    .unwrap();
    let rels = vec![relation(field, &q, &[(1, &["d", "c"])])];
    Presentation::new(field.clone(), q, rels).unwrap()
}

/// The six-vertex gentle algebra with a Kronecker pair `(α, β)` between
/// vertices 1 and 2 and hooks `α⁻ β⁻ α⁺ β⁺`, everything in degree `shift`.
pub fn lambda1_graded<F: Field>(field: &F, shift: i64) -> Presentation<F> {
    let q = GradedQuiver::new(
        vec!["0".into(), "0t".into(), "1".into(), "2".into(), "3".into(), "3t".into()],
        vec![
            ("α⁻".into(), "0".into(), "1".into(), 0),
            ("β⁻".into(), "0t".into(), "1".into(), 0),
            ("α".into(), "1".into(), "2".into(), shift),
            ("β".into(), "1".into(), "2".into(), shift),
            ("α⁺".into(), "2".into(), "3".into(), 0),
            ("β⁺".into(), "2".into(), "3t".into(), 0),
        ],
    )
    .unwrap();
    let rels = vec![
        relation(field, &q, &[(1, &["α⁺", "β"])]),
        relation(field, &q, &[(1, &["β", "α⁻"])]),
        relation(field, &q, &[(1, &["β⁺", "α"])]),
        relation(field, &q, &[(1, &["α", "β⁻"])]),
    ];
    Presentation::new(field.clone(), q, rels).unwrap()
}

/// `lambda1_graded` in degree zero.
pub fn lambda1<F: Field>(field: &F) -> Presentation<F> {
    lambda1_graded(field, 0)
}

/// The pinching of [`lambda1`] at `(α, β)`, written out explicitly: vertices
/// 1 and 2 merged, a vanishing loop `γ`, and the six relations.
pub fn lambda1_pinched<F: Field>(field: &F) -> Presentation<F> {
    let q = GradedQuiver::new(
        vec!["0".into(), "0t".into(), "1".into(), "3".into(), "3t".into()],
        vec![
            ("α⁻".into(), "0".into(), "1".into(), 0),
            ("β⁻".into(), "0t".into(), "1".into(), 0),
            ("α⁺".into(), "1".into(), "3".into(), 0),
            ("β⁺".into(), "1".into(), "3t".into(), 0),
            ("γ".into(), "1".into(), "1".into(), 0),
        ],
    )
    .unwrap();
    // x(γ ± e₁) and (γ ± e₁)x expand to x γ ± x and γ x ± x.
    let b_plus = relation(field, &q, &[(1, &["β⁺", "γ"]), (1, &["β⁺"])]);
    let b_minus = relation(field, &q, &[(1, &["γ", "β⁻"]), (1, &["β⁻"])]);
    let a_plus = relation(field, &q, &[(1, &["α⁺", "γ"]), (-1, &["α⁺"])]);
    let a_minus = relation(field, &q, &[(1, &["γ", "α⁻"]), (-1, &["α⁻"])]);
    let rels = vec![
        relation(field, &q, &[(1, &["α⁺", "β⁻"])]),
        relation(field, &q, &[(1, &["β⁺", "α⁻"])]),
        b_plus,
        b_minus,
        a_plus,
        a_minus,
    ];
    let p = Presentation::new(field.clone(), q, rels).unwrap();
    let lp = p.arrow_named("γ").unwrap();
    let d = gentle::decompose_with_loops(&p, &[lp]).expect("fixture decomposes");
    p.with_decomposition(d)
}

/// [`lambda1`] with a formal inverse `δ` of `ω = α + μ β` adjoined.
pub fn lambda1_localized<F: Field>(field: &F, mu: &F::Elem) -> Presentation<F> {
    let q = GradedQuiver::new(
        vec!["0".into(), "0t".into(), "1".into(), "2".into(), "3".into(), "3t".into()],
        vec![
            ("α⁻".into(), "0".into(), "1".into(), 0),
            ("β⁻".into(), "0t".into(), "1".into(), 0),
            ("α".into(), "1".into(), "2".into(), 0),
            ("β".into(), "1".into(), "2".into(), 0),
            ("α⁺".into(), "2".into(), "3".into(), 0),
            ("β⁺".into(), "2".into(), "3t".into(), 0),
            ("δ".into(), "2".into(), "1".into(), 0),
        ],
    )
    .unwrap();
    let mut left = relation(field, &q, &[(1, &["δ", "α"])]);
    let db = relation(field, &q, &[(1, &["δ", "β"])]);
    left = left.add(field, &db.scale(field, mu));
    add_trivial(field, &q, &mut left, -1, "1");
    let mut right = relation(field, &q, &[(1, &["α", "δ"])]);
    let bd = relation(field, &q, &[(1, &["β", "δ"])]);
    right = right.add(field, &bd.scale(field, mu));
    add_trivial(field, &q, &mut right, -1, "2");
    let rels = vec![
        relation(field, &q, &[(1, &["α⁺", "β"])]),
        relation(field, &q, &[(1, &["β", "α⁻"])]),
        relation(field, &q, &[(1, &["β⁺", "α"])]),
        relation(field, &q, &[(1, &["α", "β⁻"])]),
        left,
        right,
    ];
    Presentation::new(field.clone(), q, rels).unwrap()
}

/// The bare Kronecker quiver: two parallel arrows, no relations; an annulus.
pub fn kronecker<F: Field>(field: &F) -> Presentation<F> {
    let q = GradedQuiver::new(
        vec!["1".into(), "2".into()],
        vec![
            ("α".into(), "1".into(), "2".into(), 0),
            ("β".into(), "1".into(), "2".into(), 0),
        ],
    )
    .unwrap();
    Presentation::new(field.clone(), q, vec![]).unwrap()
}

/// One arc in a disk: a single vertex and no arrows.
pub fn disk<F: Field>(field: &F) -> Presentation<F> {
    let q = GradedQuiver::new(vec!["v".into()], vec![]).unwrap();
    Presentation::new(field.clone(), q, vec![]).unwrap()
}

/// Kronecker pair closed up by a return arrow `ρ: 2 → 1` with relations
/// `α ρ` and `ρ β`, so the pair stays acyclic but `End` of its band object
/// picks up the four extra classes `ρ, ρα, βρ, βρα`.
pub fn kronecker_with_return<F: Field>(field: &F) -> Presentation<F> {
    let q = GradedQuiver::new(
        vec!["1".into(), "2".into()],
        vec![
            ("α".into(), "1".into(), "2".into(), 0),
            ("β".into(), "1".into(), "2".into(), 0),
            ("ρ".into(), "2".into(), "1".into(), 0),
        ],
    )
    .unwrap();
    let rels = vec![
        relation(field, &q, &[(1, &["α", "ρ"])]),
        relation(field, &q, &[(1, &["ρ", "β"])]),
    ];
    Presentation::new(field.clone(), q, rels).unwrap()
}

/// A genus-one surface with one boundary circle carrying an acyclic
/// Kronecker pair; its dual curve is non-separating.
pub fn torus_kronecker<F: Field>(field: &F) -> Presentation<F> {
    let q = GradedQuiver::new(
        vec!["1".into(), "2".into(), "3".into()],
        vec![
            ("a1".into(), "3".into(), "1".into(), 0),
            ("α".into(), "1".into(), "2".into(), 0),
            ("β".into(), "1".into(), "2".into(), 0),
            ("b".into(), "2".into(), "3".into(), 0),
        ],
    )
    .unwrap();
    let rels = vec![
        relation(field, &q, &[(1, &["β", "a1"])]),
        relation(field, &q, &[(1, &["b", "α"])]),
        relation(field, &q, &[(1, &["a1", "b"])]),
    ];
    Presentation::new(field.clone(), q, rels).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::gentle::is_gentle;

    #[test]
    fn all_gentle_fixtures_pass_the_gentle_test() {
        assert!(is_gentle(&lambda0(&Rationals)).ok());
        assert!(is_gentle(&lambda1(&Rationals)).ok());
        assert!(is_gentle(&kronecker(&Rationals)).ok());
        assert!(is_gentle(&disk(&Rationals)).ok());
        assert!(is_gentle(&kronecker_with_return(&Rationals)).ok());
        assert!(is_gentle(&torus_kronecker(&Rationals)).ok());
    }

    #[test]
    fn pinched_fixture_carries_decomposition() {
        let p = lambda1_pinched(&Rationals);
        assert!(p.decomposition().is_some());
        assert_eq!(p.relations().len(), 6);
    }
}
