use proptest::prelude::*;

use solvshear::corpus;
use solvshear::exterior::KForm;
use solvshear::lie::{ce_differential, jacobi_check};
use solvshear::linalg::unit_vector;
use solvshear::notation::{parse_algebra, parse_form, parse_scalar, print_algebra, print_form};
use solvshear::shear::{invert, shear, validate};
use solvshear::{Assignment, Scalar};

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    let term = (-5i64..=5, 1i64..=4, 0usize..3, 0u32..3);
    proptest::collection::vec(term, 1..4).prop_map(|terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, (n, d, p, e)| {
            let mut t = Scalar::ratio(n, d);
            for _ in 0..e {
                t = &t * &Scalar::param(["a1", "b", "c"][p]);
            }
            &acc + &t
        })
    })
}

fn form_strategy(n: usize, k: usize) -> impl Strategy<Value = KForm> {
    proptest::collection::vec((proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k), -3i64..=3), 0..5).prop_map(
        move |terms| {
            let mut f = KForm::zero(n, k);
            for (idx, c) in terms {
                f.add_term(&idx, Scalar::int(c));
            }
            f
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn scalar_print_parse(s in scalar_strategy()) {
        prop_assert_eq!(parse_scalar(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn scalar_ring_laws(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in scalar_strategy(), b in scalar_strategy(), v in -4i64..=4) {
        let s = Assignment::new().with("b", Scalar::int(v)).with("c", Scalar::param("a1"));
        prop_assert_eq!((&a * &b).instantiate(&s), &a.instantiate(&s) * &b.instantiate(&s));
    }

    #[test]
    fn form_print_parse(f in form_strategy(6, 3)) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(parse_form(&print_form(&f), 6).unwrap(), f);
    }

    #[test]
    fn wedge_is_graded_commutative(a in form_strategy(6, 2), b in form_strategy(6, 3)) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a));
    }

    #[test]
    fn interior_is_an_antiderivation(a in form_strategy(5, 1), b in form_strategy(5, 2), i in 0usize..5) {
        let v = unit_vector(5, i);
        let lhs = a.wedge(&b).interior(&v);
        let rhs = &a.interior(&v).wedge(&b) - &a.wedge(&b.interior(&v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn random_algebras_are_lie(seed in any::<u64>(), n in 3usize..7) {
        let g = corpus::random_algebra(&mut corpus::rng(seed), n);
        prop_assert!(jacobi_check(&g).passed);
        prop_assert_eq!(parse_algebra(&print_algebra(&g)).unwrap(), g.clone());
        for i in 0..n {
            let de = ce_differential(&g, &KForm::basis(n, &[i]));
            prop_assert!(ce_differential(&g, &de).is_zero());
        }
    }

    #[test]
    fn d_is_an_antiderivation(seed in any::<u64>(), a in form_strategy(5, 1), b in form_strategy(5, 2)) {
        let g = corpus::random_algebra(&mut corpus::rng(seed), 5);
        let lhs = ce_differential(&g, &a.wedge(&b));
        let rhs = &ce_differential(&g, &a).wedge(&b) - &a.wedge(&ce_differential(&g, &b));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn shear_paths_agree_and_invert(seed in any::<u64>(), n in 4usize..7) {
        let data = corpus::random_shear_data(&mut corpus::rng(seed), n);
        prop_assert!(validate(&data).passed());
        let r = shear(&data).unwrap();
        prop_assert!(r.path_mismatch().is_none());
        prop_assert!(jacobi_check(&r.extension).passed);
        let back = shear(&invert(&r).unwrap()).unwrap();
        prop_assert_eq!(&back.shear, data.base());
    }

    #[test]
    fn transferred_differential_matches(seed in any::<u64>(), f in form_strategy(5, 2)) {
        let data = corpus::random_shear_data(&mut corpus::rng(seed), 5);
        let r = shear(&data).unwrap();
        prop_assert_eq!(r.transfer_d_formula(&f).unwrap(), ce_differential(&r.shear, &f));
    }

    #[test]
    fn nijenhuis_residual_vanishes(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let data = corpus::random_shear_data(&mut rng, 6);
        let j = corpus::random_complex_structure(&mut rng, 6);
        let t = shear(&data).unwrap().transfer_acs(&j).unwrap();
        prop_assert!(t.residual_is_zero());
    }
}
