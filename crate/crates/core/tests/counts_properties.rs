//! Lattice-count invariants over random arguments.

use proptest::prelude::*;
use threesq::counts::{
    andrews_crandall_r3, decompose_solutions, n3_primitive, parity_lemma_check, proposition_checks, r_squares,
    r_triangular3, sorted_triples, Triple,
};

proptest! {
    #[test]
    fn andrews_crandall_matches_brute_force(n in 1u64..3000) {
        prop_assert_eq!(andrews_crandall_r3(n), r_squares(3, n) as i64);
    }

    #[test]
    fn decomposition_identity(n in 1u64..3000) {
        let d = decompose_solutions(n);
        prop_assert!(d.is_consistent());
        let from_sorted: u64 = sorted_triples(n).iter().map(Triple::permutations).sum();
        prop_assert_eq!(from_sorted, d.total);
    }

    #[test]
    fn parity_lemma_on_its_classes(m in 0u64..1500, two in any::<bool>()) {
        let n = 4 * m + if two { 2 } else { 1 };
        prop_assert!(parity_lemma_check(n).unwrap());
    }

    #[test]
    fn parity_lemma_rejects_other_classes(m in 0u64..1500, three in any::<bool>()) {
        let n = 4 * m + if three { 3 } else { 4 };
        prop_assert!(parity_lemma_check(n).is_err());
    }

    #[test]
    fn propositions(n in 1u64..1500) {
        prop_assert!(proposition_checks(n));
    }

    #[test]
    fn primitive_counts_bounded(n in 1u64..2000) {
        prop_assert!(n3_primitive(n) <= r_squares(3, n));
    }

    #[test]
    fn triangular_counts_positive(n in 0u64..20_000) {
        prop_assert!(r_triangular3(n) >= 1);
    }
}

#[test]
fn sorted_triples_are_sorted_and_solve() {
    for n in 1..=500 {
        for t in sorted_triples(n) {
            assert!(t.r >= t.s && t.s >= t.t && t.t >= 1);
            assert_eq!(t.value(), n);
        }
    }
}
