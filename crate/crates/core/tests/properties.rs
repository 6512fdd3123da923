//! Property tests: exact linear algebra laws and format round-trips on
//! randomized instances.

use proptest::prelude::*;

use gentle_core::field::{Field, Rationals};
use gentle_core::generate::Generator;
use gentle_core::linalg::{Echelon, SparseVec};
use gentle_core::parse::{parse_presentation, serialize_presentation};

fn sparse(entries: Vec<(usize, i64)>) -> SparseVec<Rationals> {
    SparseVec::from_entries(
        &Rationals,
        entries.into_iter().map(|(i, c)| (i % 12, Rationals.from_i64(c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn echelon_reduce_is_idempotent_and_linear(
        rows in prop::collection::vec(prop::collection::vec((0usize..12, -4i64..=4), 1..5), 1..6),
        x in prop::collection::vec((0usize..12, -4i64..=4), 0..6),
        y in prop::collection::vec((0usize..12, -4i64..=4), 0..6),
        c in -3i64..=3,
    ) {
        let mut ech = Echelon::new(Rationals);
        for r in rows {
            ech.insert(&sparse(r));
        }
        let xv = sparse(x);
        let yv = sparse(y);
        let rx = ech.reduce(&xv);
        prop_assert_eq!(ech.reduce(&rx), rx.clone());
        // reduce(c*x + y) = c*reduce(x) + reduce(y)
        let mut combo = xv.scale(&Rationals, &Rationals.from_i64(c));
        combo.add_scaled(&Rationals, &yv, &Rationals.from_i64(1));
        let lhs = ech.reduce(&combo);
        let mut rhs = rx.scale(&Rationals, &Rationals.from_i64(c));
        rhs.add_scaled(&Rationals, &ech.reduce(&yv), &Rationals.from_i64(1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_presentations_round_trip_through_the_file_format(
        seed in 0u64..500,
        arcs in 1usize..7,
    ) {
        let mut g = Generator::new(seed);
        let p = g.gentle(&Rationals, arcs);
        let text = serialize_presentation(&p, None);
        let reparsed = parse_presentation(&Rationals, &text).unwrap();
        prop_assert_eq!(serialize_presentation(&reparsed, None), text);
    }
}
