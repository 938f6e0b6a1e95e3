use algres::exterior::{exterior_derivative, pullback_to_branch, wedge, DiffForm};
use algres::germ::dx_tuples;
use algres::invariants::lagrangian_tangency_search;
use algres::parse::parse_series_tuple;
use algres::qpoly::{ratio, BranchParam, Monomial, Polynomial, Rational, Series1D};
use proptest::prelude::*;

const N: usize = 3;

fn coeff() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=3, N), coeff()), 0..5).prop_map(|terms| {
        let mut p = Polynomial::zero(N);
        for (e, c) in terms {
            p.add_term(Monomial(e), &c);
        }
        p
    })
}

fn form(degree: usize) -> impl Strategy<Value = DiffForm> {
    let tuples = dx_tuples(N, degree);
    prop::collection::vec((0..tuples.len(), poly()), 0..4).prop_map(move |terms| {
        let mut f = DiffForm::zero(N, degree);
        for (k, p) in terms {
            f.add_term(tuples[k].clone(), &p);
        }
        f
    })
}

fn w8_branch() -> BranchParam {
    BranchParam::new("C", parse_series_tuple("(t^6, t^5, -t^4)", "t").unwrap()).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(N), a.clone());
    }

    #[test]
    fn derivative_is_a_derivation(a in poly(), b in poly(), i in 0..N) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_vanishes(f in poly(), a in form(1)) {
        let df = exterior_derivative(&DiffForm::function(f).with_dim(N)).unwrap();
        prop_assert!(exterior_derivative(&df).unwrap().is_zero());
        prop_assert!(exterior_derivative(&exterior_derivative(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative(a in form(1), b in form(1), c in form(2)) {
        prop_assert_eq!(wedge(&a, &b).unwrap(), wedge(&b, &a).unwrap().scale(&ratio(-1, 1)));
        prop_assert!(wedge(&a, &a).unwrap().is_zero());
        prop_assert_eq!(wedge(&a, &c).unwrap(), wedge(&c, &a).unwrap());
    }

    #[test]
    fn leibniz_rule(a in form(1), b in form(1)) {
        let lhs = exterior_derivative(&wedge(&a, &b).unwrap()).unwrap();
        let rhs = wedge(&exterior_derivative(&a).unwrap(), &b)
            .unwrap()
            .sub(&wedge(&a, &exterior_derivative(&b).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly(), b in poly()) {
        let c = w8_branch();
        let sa = a.compose(&c.components, None).unwrap();
        let sb = b.compose(&c.components, None).unwrap();
        let mut sum = sa.clone();
        sum.add_assign(&sb);
        prop_assert_eq!((&a * &b).compose(&c.components, None).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).compose(&c.components, None).unwrap(), sum);
    }

    #[test]
    fn pullback_commutes_with_d(f in poly()) {
        let c = w8_branch();
        let df = exterior_derivative(&DiffForm::function(f.clone()).with_dim(N)).unwrap();
        let lhs: Series1D = pullback_to_branch(&df, &c).unwrap();
        prop_assert_eq!(lhs, f.compose(&c.components, None).unwrap().derivative());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_is_monotone_in_the_cap(k in 3u32..9, a in 1i64..4, cap in 1u32..4) {
        let src = format!("(t^2, {a}*t^{k}, t^3, 0)");
        let b = vec![BranchParam::new("C", parse_series_tuple(&src, "t").unwrap()).unwrap()];
        let lo = lagrangian_tangency_search(&b, cap).unwrap().outcome.order;
        let hi = lagrangian_tangency_search(&b, cap + 2).unwrap().outcome.order;
        prop_assert!(hi >= lo);
    }
}
