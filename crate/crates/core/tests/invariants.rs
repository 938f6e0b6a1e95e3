use algres::builtin::{class_realizations, ClassSample};
use algres::germ::{restriction_basis, GermDefinition, RestrictionSpace};
use algres::invariants::{
    geometric_class, lagrangian_tangency_search, lagrangian_tangency_single, multigerm_tangency, GeometricLabel,
    TangentFrame, DEFAULT_DEGREE_CAP,
};
use algres::qpoly::{ratio, Order};

fn space(name: &str) -> RestrictionSpace {
    restriction_basis(&GermDefinition::builtin(name).unwrap(), 2, true).unwrap()
}

fn sample() -> ClassSample {
    ClassSample::new(1, ratio(3, 2), ratio(-2, 1))
}

fn fin(v: &[u32]) -> Vec<Order> {
    v.iter().map(|&k| Order::Finite(k)).collect()
}

#[test]
fn w8_single_route_column() {
    let s = space("W8");
    let got: Vec<Order> = class_realizations(&s, &sample())
        .unwrap()
        .iter()
        .map(|r| lagrangian_tangency_single(&s, &r.class).unwrap())
        .collect();
    let mut want = fin(&[5, 6, 6, 6, 9, 10, 11, 13, 15]);
    want.push(Order::Infinite);
    assert_eq!(got, want);
}

#[test]
fn w8_search_route_column() {
    let s = space("W8");
    let mut got = Vec::new();
    for r in class_realizations(&s, &sample()).unwrap() {
        let res = lagrangian_tangency_search(&r.chart, DEFAULT_DEGREE_CAP).unwrap();
        assert!(!res.outcome.maxed, "{}", r.label);
        assert_eq!(multigerm_tangency(&r.chart, &res.witness).unwrap(), res.outcome.order, "{}", r.label);
        got.push(res.outcome.order);
    }
    let mut want = fin(&[5, 6, 6, 6, 9, 10, 11, 13, 15]);
    want.push(Order::Infinite);
    assert_eq!(got, want);
}

#[test]
fn w9_search_columns() {
    let s = space("W9");
    let ln = [4, 5, 5, 7, 8, 9, 10, 11, 13];
    let l2 = [4, 5, 5, 7, 8];
    for (i, r) in class_realizations(&s, &ClassSample::new(-1, ratio(1, 3), ratio(5, 1))).unwrap().iter().enumerate() {
        let res = lagrangian_tangency_search(&r.chart, DEFAULT_DEGREE_CAP).unwrap();
        match ln.get(i) {
            Some(&k) => assert_eq!(res.outcome.order, Order::Finite(k), "L_N {}", r.label),
            None => assert!(res.outcome.order.is_infinite() || res.outcome.maxed, "L_N {}", r.label),
        }
        let res2 = lagrangian_tangency_search(&r.chart[1..], DEFAULT_DEGREE_CAP).unwrap();
        match l2.get(i) {
            Some(&k) => {
                assert_eq!(res2.outcome.order, Order::Finite(k), "L2 {}", r.label);
                assert!(!res2.outcome.maxed);
            }
            None => assert!(res2.outcome.order.is_infinite() || res2.outcome.maxed, "L2 {} {}", r.label, res2.outcome),
        }
    }
}

#[test]
fn geometric_labels() {
    use GeometricLabel::*;
    let expect = |name: &str| -> Vec<GeometricLabel> {
        let mut v = vec![RestrictedToVNonzero, KernelNotTangent];
        if name == "W8" {
            v.push(KernelNotTangent);
        }
        v.push(KernelTangent);
        let top = if name == "W8" { 5 } else { 6 };
        v.extend(std::iter::repeat_n(VanishesOnW, top));
        v.push(LagrangianContained);
        v
    };
    for name in ["W8", "W9"] {
        let s = space(name);
        let frame = TangentFrame::coordinate(6);
        assert_eq!(TangentFrame::derive(&s.germ, 6).unwrap(), frame);
        let got: Vec<GeometricLabel> = class_realizations(&s, &sample())
            .unwrap()
            .iter()
            .map(|r| geometric_class(&s, &r.omega, &frame, Some(&r.chart), DEFAULT_DEGREE_CAP).unwrap().label)
            .collect();
        assert_eq!(got, expect(name), "{name}");
    }
}
