//! Normal-form representatives of the built-in germs: restriction classes,
//! symplectic forms realizing them, and the branches in Darboux charts.

use num_traits::Zero;

use crate::error::AlgresError;
use crate::exterior::DiffForm;
use crate::germ::{RestrictionClass, RestrictionSpace};
use crate::parse::{parse_form, parse_series_tuple};
use crate::qpoly::{BranchParam, Rational};

/// Parameters of one representative. `c` of the one-modulus classes is `c1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSample {
    pub sign: i64,
    pub c1: Rational,
    pub c2: Rational,
}

impl ClassSample {
    pub fn new(sign: i64, c1: Rational, c2: Rational) -> Self {
        ClassSample { sign, c1, c2 }
    }

    fn value(&self, key: &str) -> Rational {
        match key {
            "1" => Rational::from_integer(1.into()),
            "s" => Rational::from_integer(self.sign.into()),
            "c1" => self.c1.clone(),
            "c2" => self.c2.clone(),
            _ => unreachable!("unknown coefficient key {key}"),
        }
    }

    fn fill(&self, template: &str) -> String {
        template
            .replace("{s}", &format!("({})", self.sign))
            .replace("{c1}", &format!("({})", self.c1))
            .replace("{c2}", &format!("({})", self.c2))
    }
}

struct Template {
    label: &'static str,
    /// (1-based basis index, coefficient key)
    normal_form: &'static [(usize, &'static str)],
    sign_sensitive: bool,
    darboux: &'static str,
    chart: &'static [&'static str],
}

const TWO_PAIRS_1: &str = "dx1^dx4 + dx5^dx6";
const TWO_PAIRS_2: &str = "dx2^dx4 + dx5^dx6";
const TWO_PAIRS_3: &str = "dx3^dx4 + dx5^dx6";
const THREE_PAIRS: &str = "dx1^dx4 + dx2^dx5 + dx3^dx6";

const W8: &[Template] = &[
    Template {
        label: "W8^0",
        normal_form: &[(1, "1"), (2, "c1"), (3, "c2")],
        sign_sensitive: false,
        darboux: TWO_PAIRS_1,
        chart: &["(t^5, -t^4, t^6, -{c1}*t^4 + {c2}*t^5, 0, 0)"],
    },
    Template {
        label: "W8^1",
        normal_form: &[(2, "c1"), (3, "1"), (4, "c2")],
        sign_sensitive: false,
        darboux: TWO_PAIRS_3,
        chart: &["(t^6, t^5, {c1}*t^6 - {c2}*t^9, -t^4, 0, 0)"],
    },
    Template {
        label: "W8^2a",
        normal_form: &[(2, "s"), (4, "c1"), (7, "c2")],
        sign_sensitive: true,
        darboux: TWO_PAIRS_2,
        chart: &["({s}*t^6, -t^4, t^5, (1/2)*{c1}*t^8 - (1/3)*{c2}*t^12, 0, 0)"],
    },
    Template {
        label: "W8^2b",
        normal_form: &[(3, "1"), (4, "c1"), (5, "c2")],
        sign_sensitive: false,
        darboux: TWO_PAIRS_3,
        chart: &["(t^6, t^5, -{c1}*t^9 + (1/2)*{c2}*t^10, -t^4, 0, 0)"],
    },
    Template {
        label: "W8^3",
        normal_form: &[(4, "1"), (5, "c1"), (6, "c2")],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &["(t^6, 0, t^5, 0, -t^4, t^9 - (1/2)*{c1}*t^10 - {c2}*t^11)"],
    },
    Template {
        label: "W8^4",
        normal_form: &[(5, "s"), (6, "c1"), (7, "c2")],
        sign_sensitive: true,
        darboux: THREE_PAIRS,
        chart: &["(t^6, 0, t^5, 0, -t^4, -{s}*t^10 - {c1}*t^11 - {c2}*t^13)"],
    },
    Template {
        label: "W8^5",
        normal_form: &[(6, "1"), (7, "c1")],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &["(t^6, 0, t^5, 0, -t^4, -t^11 - {c1}*t^13)"],
    },
    Template {
        label: "W8^6",
        normal_form: &[(7, "1"), (8, "c1")],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &["(t^6, 0, t^5, 0, -t^4, -t^13 - (1/3)*{c1}*t^15)"],
    },
    Template {
        label: "W8^7",
        normal_form: &[(8, "1")],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &["(t^6, 0, t^5, 0, -t^4, -t^15)"],
    },
    Template {
        label: "W8^8",
        normal_form: &[],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &["(t^6, 0, t^5, 0, -t^4, 0)"],
    },
];

const W9_C1: &str = "(0, 0, 0, 0, t, 0)";

const W9: &[Template] = &[
    Template {
        label: "W9^0",
        normal_form: &[(1, "1"), (2, "c1"), (3, "c2")],
        sign_sensitive: false,
        darboux: TWO_PAIRS_1,
        chart: &["(0, {c1}*t, 0, t, 0, 0)", "(t^5, -{c1}*t^3 - {c2}*t^4, -t^4, -t^3, 0, 0)"],
    },
    Template {
        label: "W9^1",
        normal_form: &[(2, "s"), (3, "c1"), (4, "c2")],
        sign_sensitive: true,
        darboux: TWO_PAIRS_2,
        chart: &["(0, {s}*t, 0, (1/2)*{c2}*t^2, 0, 0)", "(t^5, -{s}*t^3, -t^4, -{c1}*t^5 + (1/2)*{c2}*t^6, 0, 0)"],
    },
    Template {
        label: "W9^2",
        normal_form: &[(3, "1"), (4, "c1"), (5, "c2")],
        sign_sensitive: false,
        darboux: TWO_PAIRS_3,
        chart: &["(0, 0, t, 0, 0, 0)", "(t^5, -t^4, -t^3, -{c1}*t^7 + {c2}*t^8, 0, 0)"],
    },
    Template {
        label: "W9^3",
        normal_form: &[(4, "s"), (5, "c1"), (6, "c2")],
        sign_sensitive: true,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, -{s}*t^7 + {c1}*t^8 + {c2}*t^9)"],
    },
    Template {
        label: "W9^4",
        normal_form: &[(5, "1"), (6, "c1"), (7, "c2")],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, t^8 + {c1}*t^9 + {c2}*t^10)"],
    },
    Template {
        label: "W9^5",
        normal_form: &[(6, "s"), (7, "c1"), (8, "c2")],
        sign_sensitive: true,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, {s}*t^9 + {c1}*t^10 - {c2}*t^11)"],
    },
    Template {
        label: "W9^6",
        normal_form: &[(7, "1"), (8, "c1")],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, t^10 - {c1}*t^11)"],
    },
    Template {
        label: "W9^7",
        normal_form: &[(8, "s"), (9, "c1")],
        sign_sensitive: true,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, -{s}*t^11 - {c1}*t^13)"],
    },
    Template {
        label: "W9^8",
        normal_form: &[(9, "s")],
        sign_sensitive: true,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, -{s}*t^13)"],
    },
    Template {
        label: "W9^9",
        normal_form: &[],
        sign_sensitive: false,
        darboux: THREE_PAIRS,
        chart: &[W9_C1, "(t^5, 0, -t^4, 0, -t^3, 0)"],
    },
];

fn templates(name: &str) -> Option<&'static [Template]> {
    match name {
        "W8" => Some(W8),
        "W9" => Some(W9),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct ClassRealization {
    pub label: String,
    pub sign_sensitive: bool,
    /// Normal-form coordinates over the closed basis.
    pub class: RestrictionClass,
    /// Symplectic form on the 6-dimensional chart realizing the class.
    pub omega: DiffForm,
    /// Branches in Darboux coordinates `(p1, q1, p2, q2, p3, q3)`.
    pub chart: Vec<BranchParam>,
}

pub fn class_labels(name: &str) -> Option<Vec<&'static str>> {
    templates(name).map(|ts| ts.iter().map(|t| t.label).collect())
}

/// One representative per normal form of a built-in germ.
pub fn class_realizations(space: &RestrictionSpace, sample: &ClassSample) -> Result<Vec<ClassRealization>, AlgresError> {
    let germ = &space.germ;
    let ts = templates(&germ.name)
        .ok_or_else(|| AlgresError::Unsupported(format!("no normal forms stored for germ {}", germ.name)))?;
    let dim = germ.symplectic_dim;
    let vars: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    let mut out = Vec::new();
    for t in ts {
        if t.normal_form.iter().any(|(i, _)| *i > space.dim()) || germ.branches.len() != t.chart.len() {
            return Err(AlgresError::Mismatch(format!(
                "germ {} does not have the shape of the built-in normal forms (class {})",
                germ.name, t.label
            )));
        }
        let mut coords = vec![Rational::zero(); space.dim()];
        let mut omega = parse_form(t.darboux, &vars)?;
        for (i, key) in t.normal_form {
            let c = sample.value(key);
            omega.add_scaled(&space.basis[i - 1].form.with_dim(dim), &c);
            coords[i - 1] = c;
        }
        let chart = t
            .chart
            .iter()
            .zip(germ.branches.iter())
            .map(|(src, b)| BranchParam::new(&b.label, parse_series_tuple(&sample.fill(src), "t")?))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(ClassRealization {
            label: t.label.to_string(),
            sign_sensitive: t.sign_sensitive,
            class: RestrictionClass { coords },
            omega,
            chart,
        });
    }
    Ok(out)
}
