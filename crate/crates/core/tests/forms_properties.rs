//! Class-number and form invariants over random arguments.

use num_rational::Ratio;
use proptest::prelude::*;
use threesq::qforms::{
    bijection_report, class_number_h, classify_forms, dirichlet_ratio_check, enumerate_reduced, gauss_n3_check,
    gauss_r3_check, hurwitz_4n_lemma_check, hurwitz_direct, hurwitz_divisor_sum, is_fundamental, kronecker, FormType,
};

fn discriminant() -> impl Strategy<Value = i64> {
    (1i64..1500, any::<bool>()).prop_map(|(k, one)| if one { -(4 * k - 1) } else { -4 * k })
}

fn fundamental() -> impl Strategy<Value = i64> {
    let list: Vec<i64> = (-600..0).filter(|&d| is_fundamental(d)).collect();
    prop::sample::select(list)
}

proptest! {
    #[test]
    fn reduced_forms_are_reduced(d in discriminant()) {
        let forms = enumerate_reduced(d).unwrap();
        prop_assert!(!forms.is_empty());
        for f in &forms {
            prop_assert!(f.is_reduced());
            prop_assert_eq!(f.discriminant(), d);
        }
        let census = classify_forms(d).unwrap();
        let total: usize = census.by_type.values().sum();
        prop_assert_eq!(total, forms.len());
        prop_assert_eq!(census.primitive + census.even_content + census.odd_content, forms.len());
        prop_assert!(class_number_h(d).unwrap() >= 1);
    }

    #[test]
    fn hurwitz_routes_agree(n in 1u64..3000) {
        prop_assert_eq!(hurwitz_direct(n), hurwitz_divisor_sum(n));
    }

    #[test]
    fn hurwitz_r3_multiples_are_integral(n in 1u64..2000) {
        let mut base = n;
        while base % 4 == 0 { base /= 4; }
        match base % 8 {
            1 | 2 | 5 | 6 => prop_assert!((hurwitz_direct(4 * base) * 12).is_integer()),
            3 => prop_assert!((hurwitz_direct(base) * 24).is_integer()),
            _ => {}
        }
        prop_assert!(gauss_r3_check(n));
    }

    #[test]
    fn kronecker_is_multiplicative_in_m(d in discriminant(), a in 1u64..200, b in 1u64..200) {
        prop_assert_eq!(kronecker(d, a * b), kronecker(d, a) * kronecker(d, b));
    }

    #[test]
    fn dirichlet_ratio(d0 in fundamental(), f in 1u64..9) {
        prop_assert!(dirichlet_ratio_check(d0, f).unwrap());
    }

    #[test]
    fn hurwitz_4n(m in 0u64..700) {
        prop_assert!(hurwitz_4n_lemma_check(4 * m + 3).unwrap());
    }

    #[test]
    fn gauss_n3(n in 1u64..600) {
        match gauss_n3_check(n) {
            Ok(ok) => prop_assert!(ok),
            Err(_) => prop_assert!(matches!(n % 8, 0 | 4 | 7)),
        }
    }

    #[test]
    fn bijection(n in 1u64..1500) {
        prop_assert!(bijection_report(n).unwrap().holds());
    }
}

#[test]
fn bijection_census_example() {
    let r = bijection_report(11).unwrap();
    assert_eq!(r.census.count(FormType::I), 1);
    assert_eq!(r.positive_middle.len(), 2);
    assert_eq!(hurwitz_direct(44), Ratio::from_integer(4));
}
