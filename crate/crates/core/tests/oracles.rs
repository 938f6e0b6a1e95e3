//! Worked examples checked against independently computed answers.

use algres::exterior::{exterior_derivative, DiffForm};
use algres::germ::{restriction_basis, zero_restriction_subspace, GermDefinition, RestrictionClass};
use algres::invariants::{tangency_order, SubmanifoldEquations};
use algres::linalg::Echelon;
use algres::parse::{parse_form, parse_polynomial, parse_series_tuple};
use algres::qpoly::{rat, ratio, BranchParam, Order, Rational};
use algres::restriction::{action_matrices, orbit_tangent_space, symplectic_multiplicity, TangentFieldFamily};

fn vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn class(v: &[Rational]) -> RestrictionClass {
    RestrictionClass { coords: v.to_vec() }
}

#[test]
fn reduce_exact_form_against_raw_elimination() {
    let g = GermDefinition::builtin("W8").unwrap();
    let s = restriction_basis(&g, 2, true).unwrap();
    let f = exterior_derivative(&parse_form("x2*x3*dx1", &vars(3)).unwrap()).unwrap();
    let mut want = vec![rat(0); 8];
    want[5] = rat(-1);
    assert_eq!(s.reduce_to_coordinates(&f).unwrap().coords, want);

    // Oracle: f + theta6 must lie in the raw degree-15 zero subspace, and f alone must not.
    let z = zero_restriction_subspace(&g, 2, 15);
    let theta6 = parse_form("x1*dx2^dx3 + x2*dx1^dx3", &vars(3)).unwrap();
    assert!(z.contains(&f.add(&theta6)));
    assert!(!z.contains(&f));
    let mut e = Echelon::new(z.index.len());
    for r in &z.rows {
        e.insert(r);
    }
    // sigma1 and sigma2 both survive in the quotient of all 2-forms
    assert_eq!(z.index.len() - e.rank(), 2);
}

#[test]
fn reduce_basis_sums_and_relations() {
    let g = GermDefinition::builtin("W8").unwrap();
    let s = restriction_basis(&g, 2, true).unwrap();
    let a = parse_form("dx1^dx3 + x2^2*dx2^dx3", &vars(3)).unwrap();
    let c = s.reduce_to_coordinates(&a).unwrap();
    assert_eq!(c.coords, [0, 1, 0, 0, 0, 0, 0, 1].map(rat).to_vec());
    let all = restriction_basis(&g, 2, false).unwrap();
    let r = parse_form("x2*dx2^dx3 + (1/2)*x3*dx1^dx3", &vars(3)).unwrap();
    assert!(all.reduce_to_coordinates(&r).unwrap().is_zero());
}

#[test]
fn orbit_tangent_ranks() {
    let cases: [(&str, Vec<Rational>, usize); 3] = [
        ("W8", vec![rat(1), ratio(2, 3), rat(-5), rat(0), rat(0), rat(0), rat(0), rat(0)], 6),
        ("W8", vec![rat(0), rat(-1), rat(0), rat(3), rat(0), rat(0), ratio(1, 2), rat(0)], 4),
        ("W9", vec![rat(1), rat(1), rat(1), rat(0), rat(0), rat(0), rat(0), rat(0), rat(0)], 7),
    ];
    for (name, a, want) in cases {
        let g = GermDefinition::builtin(name).unwrap();
        let s = restriction_basis(&g, 2, true).unwrap();
        let acts = action_matrices(&s, &TangentFieldFamily::for_space(&s).unwrap()).unwrap();
        let (_, r) = orbit_tangent_space(&class(&a), &acts);
        assert_eq!(r, want, "{name} {a:?}");
        assert_eq!(symplectic_multiplicity(&class(&a), &acts), a.len() - want);
    }
}

#[test]
fn w8_top_class_against_coordinate_lagrangian() {
    let v: Vec<String> = ["p1", "q1", "p2", "q2", "p3", "q3"].iter().map(|s| s.to_string()).collect();
    let h = ["q1", "q2", "q3"].map(|s| parse_polynomial(s, &v).unwrap()).to_vec();
    let l = SubmanifoldEquations::new(h, true).unwrap();
    let b = BranchParam::new("C", parse_series_tuple("(t^6, 0, t^5, 0, -t^4, -t^15)", "t").unwrap()).unwrap();
    assert_eq!(tangency_order(&b, &l).unwrap(), Order::Finite(15));
    // {q3 + p2^3/3, q2} = p2^2 does not vanish on the zero set
    let bent = ["q1", "q2", "q3 + (1/3)*p2^3"].map(|s| parse_polynomial(s, &v).unwrap()).to_vec();
    assert!(SubmanifoldEquations::new(bent, true).is_err());
}

#[test]
fn closedness_is_enforced() {
    let g = GermDefinition::builtin("W8").unwrap();
    let s = restriction_basis(&g, 2, true).unwrap();
    let open = DiffForm::monomial_form(3, parse_polynomial("x1", &vars(3)).unwrap(), &[1, 2]);
    assert!(s.reduce_to_coordinates(&open).is_err());
}
