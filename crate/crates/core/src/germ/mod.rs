//! Quasi-homogeneous curve germs and their definition files.

mod space;

pub(crate) use space::closed_candidates;
pub use space::{dx_tuples, monomial_forms, FormIndex};

pub use space::{
    restriction_basis, restriction_basis_with_cap, zero_restriction_subspace, BasisElement, GradedPiece,
    RestrictionClass, RestrictionSpace, Stabilization, ZeroSubspace,
};

use crate::error::AlgresError;
use crate::exterior::DiffForm;
use crate::linalg::{sparse_from_dense, Echelon};
use crate::qpoly::{monomial_basis, BranchParam, Polynomial, Rational, WeightSystem};
use crate::parse::{parse_form_at, parse_polynomial_at, parse_series_tuple_at};

use num_traits::Zero;

pub const W8_SOURCE: &str = include_str!("../../data/w8.germ");
pub const W9_SOURCE: &str = include_str!("../../data/w9.germ");

#[derive(Clone, Debug, PartialEq)]
pub struct GermDefinition {
    pub name: String,
    pub variables: Vec<String>,
    pub weights: WeightSystem,
    pub generators: Vec<Polynomial>,
    pub branches: Vec<BranchParam>,
    pub symplectic_dim: usize,
    /// Pinned representatives for the closed-form basis, in basis order.
    pub closed_reps: Vec<(String, DiffForm)>,
    /// Pinned representatives for the basis of all forms.
    pub all_reps: Vec<(String, DiffForm)>,
    /// Multipliers `m` of tangent fields `m*E`, in family order.
    pub fields: Vec<(String, Polynomial)>,
}

impl GermDefinition {
    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        self.generators
            .iter()
            .map(|g| g.homogeneous_degree(&self.weights).expect("validated"))
            .collect()
    }

    pub fn is_builtin_name(&self) -> bool {
        matches!(self.name.as_str(), "W8" | "W9")
    }

    pub fn from_source(src: &str) -> Result<Self, AlgresError> {
        parse_germ(src)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let src = match name.to_ascii_uppercase().as_str() {
            "W8" => W8_SOURCE,
            "W9" => W9_SOURCE,
            _ => return None,
        };
        Some(parse_germ(src).expect("built-in germ definitions parse"))
    }

    fn validate(&self) -> Result<(), AlgresError> {
        if self.generators.is_empty() {
            return Err(AlgresError::InvalidGerm("no generators".into()));
        }
        if self.branches.is_empty() {
            return Err(AlgresError::InvalidGerm("at least one branch is required".into()));
        }
        for g in &self.generators {
            if g.homogeneous_degree(&self.weights).is_none() {
                return Err(AlgresError::InvalidGerm(format!(
                    "generator {} is not quasi-homogeneous",
                    g.display_with(&self.variables, Some(&self.weights))
                )));
            }
        }
        for b in &self.branches {
            if b.dim() != self.dim() {
                return Err(AlgresError::InvalidGerm(format!(
                    "branch {} has {} components, expected {}",
                    b.label,
                    b.dim(),
                    self.dim()
                )));
            }
            for g in &self.generators {
                if !crate::qpoly::substitute_branch(g, b)?.is_zero() {
                    return Err(AlgresError::InvalidGerm(format!(
                        "generator {} does not vanish on branch {}",
                        g.display_with(&self.variables, Some(&self.weights)),
                        b.label
                    )));
                }
            }
        }
        if !self.symplectic_dim.is_multiple_of(2) || self.symplectic_dim < 2 {
            return Err(AlgresError::InvalidGerm("symplectic_dim must be even and positive".into()));
        }
        Ok(())
    }

    /// Graded membership test for the ideal generated by the defining equations.
    pub fn ideal_contains(&self, p: &Polynomial) -> bool {
        let w = &self.weights;
        let degs = self.generator_degrees();
        for (d, piece) in p.graded_pieces(w) {
            let basis = monomial_basis(d, w);
            let index = |m: &crate::qpoly::Monomial| basis.iter().position(|b| b == m);
            let mut e = Echelon::new(basis.len());
            for (g, &dg) in self.generators.iter().zip(&degs) {
                if dg > d {
                    continue;
                }
                for m in monomial_basis(d - dg, w) {
                    let prod = g.mul_monomial(&m);
                    let mut v = vec![Rational::zero(); basis.len()];
                    for (mm, c) in prod.terms() {
                        v[index(mm).unwrap()] = c.clone();
                    }
                    e.insert(&sparse_from_dense(&v));
                }
            }
            let mut v = vec![Rational::zero(); basis.len()];
            for (mm, c) in piece.terms() {
                v[index(mm).unwrap()] = c.clone();
            }
            if !e.contains(&sparse_from_dense(&v)) {
                return false;
            }
        }
        true
    }

    pub fn to_source(&self) -> String {
        let w = &self.weights;
        let mut out = String::new();
        out.push_str(&format!("germ {}\n", self.name));
        out.push_str(&format!("variables {}\n", self.variables.join(" ")));
        let ws: Vec<String> = w.weights().iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("weights {}\n", ws.join(" ")));
        out.push_str(&format!("symplectic_dim {}\n", self.symplectic_dim));
        for g in &self.generators {
            out.push_str(&format!("generator {}\n", g.display_with(&self.variables, Some(w))));
        }
        for b in &self.branches {
            out.push_str(&format!("branch {} {}\n", b.label, b.display()));
        }
        for (l, f) in &self.closed_reps {
            out.push_str(&format!("closed {} {}\n", l, f.display_with(&self.variables, Some(w))));
        }
        for (l, f) in &self.all_reps {
            out.push_str(&format!("all {} {}\n", l, f.display_with(&self.variables, Some(w))));
        }
        for (l, m) in &self.fields {
            out.push_str(&format!("field {} {}\n", l, m.display_with(&self.variables, Some(w))));
        }
        out
    }
}

fn shift_col(e: AlgresError, offset: usize) -> AlgresError {
    match e {
        AlgresError::Parse { line, col, msg } => AlgresError::Parse { line, col: col + offset, msg },
        other => other,
    }
}

/// Parse the line-oriented germ definition format.
pub fn parse_germ(src: &str) -> Result<GermDefinition, AlgresError> {
    let mut name = None;
    let mut variables: Option<Vec<String>> = None;
    let mut weights = None;
    let mut symplectic_dim = None;
    let mut generators = Vec::new();
    let mut branches = Vec::new();
    let mut closed_reps = Vec::new();
    let mut all_reps = Vec::new();
    let mut fields = Vec::new();

    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = content.len() - trimmed.len();
        let (key, rest) = match trimmed.find(char::is_whitespace) {
            Some(i) => (&trimmed[..i], &trimmed[i..]),
            None => (trimmed, ""),
        };
        let value_col = lead + key.len();
        let need_vars = |v: &Option<Vec<String>>| -> Result<Vec<String>, AlgresError> {
            v.clone().ok_or_else(|| AlgresError::parse(line, 1, "'variables' must come first"))
        };
        match key {
            "germ" => {
                let n = rest.trim();
                if n.is_empty() {
                    return Err(AlgresError::parse(line, value_col + 1, "missing germ name"));
                }
                name = Some(n.to_string());
            }
            "variables" => {
                let vs: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
                if vs.is_empty() {
                    return Err(AlgresError::parse(line, value_col + 1, "no variables"));
                }
                variables = Some(vs);
            }
            "weights" => {
                let mut ws = Vec::new();
                for tok in rest.split_whitespace() {
                    let w: u32 = tok
                        .parse()
                        .map_err(|_| AlgresError::parse(line, value_col + 1, format!("bad weight '{tok}'")))?;
                    ws.push(w);
                }
                weights = Some(WeightSystem::new(ws).map_err(|e| AlgresError::parse(line, value_col + 1, e.to_string()))?);
            }
            "symplectic_dim" => {
                let v = rest.trim();
                symplectic_dim = Some(
                    v.parse::<usize>()
                        .map_err(|_| AlgresError::parse(line, value_col + 1, format!("bad dimension '{v}'")))?,
                );
            }
            "generator" => {
                let vars = need_vars(&variables)?;
                let p = parse_polynomial_at(rest, &vars, line).map_err(|e| shift_col(e, value_col))?;
                generators.push(p);
            }
            "branch" | "closed" | "all" | "field" => {
                let vars = need_vars(&variables)?;
                let r = rest.trim_start();
                let label_off = value_col + (rest.len() - r.len());
                let (label, body) = match r.find(char::is_whitespace) {
                    Some(i) => (&r[..i], &r[i..]),
                    None => return Err(AlgresError::parse(line, label_off + 1, format!("'{key}' needs a label and a value"))),
                };
                let body_off = label_off + label.len();
                match key {
                    "branch" => {
                        let comps = parse_series_tuple_at(body, "t", line).map_err(|e| shift_col(e, body_off))?;
                        let b = BranchParam::new(label, comps).map_err(|e| AlgresError::parse(line, label_off + 1, e.to_string()))?;
                        branches.push(b);
                    }
                    "field" => {
                        let p = parse_polynomial_at(body, &vars, line).map_err(|e| shift_col(e, body_off))?;
                        fields.push((label.to_string(), p));
                    }
                    _ => {
                        let f = parse_form_at(body, &vars, line).map_err(|e| shift_col(e, body_off))?;
                        if f.degree() != 2 {
                            return Err(AlgresError::parse(line, body_off + 1, "representative must be a 2-form"));
                        }
                        if key == "closed" {
                            closed_reps.push((label.to_string(), f));
                        } else {
                            all_reps.push((label.to_string(), f));
                        }
                    }
                }
            }
            other => {
                return Err(AlgresError::parse(line, lead + 1, format!("unknown key '{other}'")));
            }
        }
    }

    let variables = variables.ok_or_else(|| AlgresError::parse(0, 0, "missing 'variables'"))?;
    let weights = weights.ok_or_else(|| AlgresError::parse(0, 0, "missing 'weights'"))?;
    if weights.dim() != variables.len() {
        return Err(AlgresError::InvalidGerm(format!(
            "{} weights for {} variables",
            weights.dim(),
            variables.len()
        )));
    }
    let germ = GermDefinition {
        name: name.unwrap_or_else(|| "unnamed".into()),
        symplectic_dim: symplectic_dim.unwrap_or(2 * variables.len()),
        variables,
        weights,
        generators,
        branches,
        closed_reps,
        all_reps,
        fields,
    };
    germ.validate()?;
    Ok(germ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn builtins_parse_and_roundtrip() {
        for name in ["W8", "W9"] {
            let g = GermDefinition::builtin(name).unwrap();
            let again = parse_germ(&g.to_source()).unwrap();
            assert_eq!(g, again);
        }
        let g = GermDefinition::builtin("W8").unwrap();
        assert_eq!(g.generator_degrees(), vec![12, 10]);
        assert_eq!(g.closed_reps.len(), 8);
        assert_eq!(g.fields.len(), 8);
        let g9 = GermDefinition::builtin("W9").unwrap();
        assert_eq!(g9.generator_degrees(), vec![10, 8]);
        assert_eq!(g9.branches.len(), 2);
    }

    #[test]
    fn bad_files_report_lines() {
        let src = "germ X\nvariables x y\nweights 1 1\ngenerator x + z\nbranch C (t, -t)\n";
        match parse_germ(src) {
            Err(AlgresError::Parse { line, col, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(col, 15);
            }
            other => panic!("{other:?}"),
        }
        let nonhom = "germ X\nvariables x y\nweights 2 1\ngenerator x + y^3\nbranch C (0, 0)\n";
        assert!(matches!(parse_germ(nonhom), Err(AlgresError::InvalidGerm(_))));
        let offcurve = "germ X\nvariables x y\nweights 1 1\ngenerator x - y\nbranch C (t, 2*t)\n";
        assert!(matches!(parse_germ(offcurve), Err(AlgresError::InvalidGerm(_))));
        assert!(parse_germ("germ X\nfoo 1\n").is_err());
    }

    #[test]
    fn ideal_membership() {
        let g = GermDefinition::builtin("W8").unwrap();
        let v = &g.variables;
        assert!(g.ideal_contains(&parse_polynomial("x3*(x1^2 + x3^3) - 2*x1*(x2^2 + x1*x3)", v).unwrap()));
        assert!(!g.ideal_contains(&parse_polynomial("x1^2", v).unwrap()));
        assert!(g.ideal_contains(&Polynomial::zero(3)));
    }
}
