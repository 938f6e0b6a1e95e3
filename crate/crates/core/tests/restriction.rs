use algres::germ::{restriction_basis, GermDefinition, RestrictionClass, RestrictionSpace};
use algres::qpoly::{rat, ratio, Order, Rational};
use algres::restriction::{
    action_matrices, builtin_ruleset, classify, moduli_certificate, ActionMatrix, Sign, TangentFieldFamily,
};

fn setup(name: &str) -> (RestrictionSpace, Vec<ActionMatrix>) {
    let g = GermDefinition::builtin(name).unwrap();
    let space = restriction_basis(&g, 2, true).unwrap();
    let fam = TangentFieldFamily::for_space(&space).unwrap();
    let acts = action_matrices(&space, &fam).unwrap();
    (space, acts)
}

fn class(v: &[i64]) -> RestrictionClass {
    RestrictionClass { coords: v.iter().map(|&x| rat(x)).collect() }
}

fn entry(acts: &[ActionMatrix], field: &str, from: usize, to: usize) -> Rational {
    let m = acts.iter().find(|m| m.label == field).unwrap();
    m.entries[to - 1][from - 1].clone()
}

#[test]
fn w8_action_entries() {
    let (_, acts) = setup("W8");
    assert_eq!(entry(&acts, "X1", 2, 5), rat(-28));
    assert_eq!(entry(&acts, "X3", 3, 7), ratio(51, 2));
    assert_eq!(entry(&acts, "X1", 6, 8), rat(-57));
    assert_eq!(entry(&acts, "X0", 8, 8), rat(19));
}

#[test]
fn w9_action_entries() {
    let (_, acts) = setup("W9");
    assert_eq!(entry(&acts, "X2", 1, 5), ratio(-11, 2));
    assert_eq!(entry(&acts, "X2", 3, 7), ratio(13, 4));
    assert_eq!(entry(&acts, "X9", 1, 9), rat(16));
}

#[test]
fn w8_pure_top_class() {
    let (space, acts) = setup("W8");
    let r = classify(&space, &acts, &builtin_ruleset("W8").unwrap(), &class(&[0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
    assert_eq!(r.class_label, "W8^7");
    assert_eq!(r.codimension, 7);
    assert_eq!(r.symplectic_multiplicity, 7);
    assert_eq!(r.index_of_isotropy, Order::Finite(2));
    assert!(moduli_certificate(&r, &acts).unwrap().moduli.is_empty());
}

#[test]
fn w8_generic_class_moduli() {
    let (space, acts) = setup("W8");
    let r = classify(&space, &acts, &builtin_ruleset("W8").unwrap(), &class(&[1, 2, 3, 0, 0, 0, 0, 0])).unwrap();
    assert_eq!(r.class_label, "W8^0");
    let m: Vec<_> = r.moduli.iter().map(|m| m.exact.clone().unwrap()).collect();
    assert_eq!(m, vec![rat(2), rat(3)]);
    assert_eq!(r.symplectic_multiplicity, 2);
    assert_eq!(r.index_of_isotropy, Order::Finite(0));
    moduli_certificate(&r, &acts).unwrap();
}

#[test]
fn w8_eliminates_tail() {
    let (space, acts) = setup("W8");
    let r = classify(&space, &acts, &builtin_ruleset("W8").unwrap(), &class(&[0, 0, 0, 1, 2, 5, -3, 7])).unwrap();
    assert_eq!(r.class_label, "W8^3");
    assert!(r.residual_coords[6] == rat(0) && r.residual_coords[7] == rat(0));
    assert_eq!(r.residual_coords[4], rat(2));
    assert_eq!(r.trace.len(), 2);
}

#[test]
fn w9_sign_survives() {
    let (space, acts) = setup("W9");
    let r = classify(&space, &acts, &builtin_ruleset("W9").unwrap(), &class(&[0, -1, 0, 0, 0, 0, 0, 0, 0])).unwrap();
    assert_eq!(r.class_label, "W9^1");
    assert_eq!(r.sign, Sign::Minus);
    assert_eq!(r.normal_form[1], Some(rat(-1)));
}

#[test]
fn multiplicity_and_index_columns() {
    let cases: [(&str, [u32; 10], [Option<u32>; 10]); 2] = [
        ("W8", [2, 3, 4, 4, 5, 6, 6, 7, 7, 8], [Some(0), Some(0), Some(0), Some(0), Some(1), Some(1), Some(1), Some(2), Some(2), None]),
        ("W9", [2, 3, 4, 5, 6, 7, 7, 8, 8, 9], [Some(0), Some(0), Some(0), Some(1), Some(1), Some(1), Some(2), Some(2), Some(3), None]),
    ];
    for (name, mu, ind) in cases {
        let (space, acts) = setup(name);
        let rules = builtin_ruleset(name).unwrap();
        let n = space.dim();
        for (k, rule) in rules.rules.iter().enumerate() {
            let mut c = vec![0i64; n];
            if let Some(p) = rule.pivot {
                c[p] = 1;
            }
            // W8^1 needs c2 != 0 as well
            if rule.class_label == "W8^1" {
                c[1] = 1;
            }
            let r = classify(&space, &acts, &rules, &class(&c)).unwrap();
            assert_eq!(r.class_label, rule.class_label);
            assert_eq!(r.symplectic_multiplicity as u32, mu[k], "{}", rule.class_label);
            let want = ind[k].map(Order::Finite).unwrap_or(Order::Infinite);
            assert_eq!(r.index_of_isotropy, want, "{}", rule.class_label);
        }
    }
}

#[test]
fn symbolic_normal_forms_match_reference_column() {
    for name in ["W8", "W9"] {
        let (space, _) = setup(name);
        let gold = algres::golden::GoldenTables::for_germ(name).unwrap().unwrap();
        let rules = builtin_ruleset(name).unwrap();
        for (rule, row) in rules.rules.iter().zip(&gold.classification) {
            assert_eq!(rule.normal_form_display(&space.labels()), row.normal_form);
        }
    }
}
