//! Normal-form classification driven by ordered guard rules.
//!
//! Each rule names a pivot, the coordinates to kill by unipotent steps
//! `exp(tau * M_X)` of positive-degree fields, and whether the pivot sign
//! survives the weighted scaling.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{index_of_isotropy, orbit_tangent_space, ActionMatrix};
use crate::error::AlgresError;
use crate::germ::{RestrictionClass, RestrictionSpace};
use crate::linalg::{rank, SparseVec};
use crate::qpoly::{Order, Rational};

pub const W8_RULES: &str = include_str!("../../data/w8.rules");
pub const W9_RULES: &str = include_str!("../../data/w9.rules");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GuardAtom {
    Zero(usize),
    /// The product of these coordinates is nonzero.
    Nonzero(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guard {
    /// Matches only the zero class.
    Zero,
    All(Vec<GuardAtom>),
}

impl Guard {
    pub fn matches(&self, c: &[Rational]) -> bool {
        match self {
            Guard::Zero => c.iter().all(|x| x.is_zero()),
            Guard::All(atoms) => atoms.iter().all(|a| match a {
                GuardAtom::Zero(i) => c[*i].is_zero(),
                GuardAtom::Nonzero(ix) => ix.iter().all(|i| !c[*i].is_zero()),
            }),
        }
    }

    fn matches_pattern(&self, nonzero: &[bool]) -> bool {
        match self {
            Guard::Zero => nonzero.iter().all(|x| !x),
            Guard::All(atoms) => atoms.iter().all(|a| match a {
                GuardAtom::Zero(i) => !nonzero[*i],
                GuardAtom::Nonzero(ix) => ix.iter().all(|i| nonzero[*i]),
            }),
        }
    }

    pub fn zero_indices(&self) -> Vec<usize> {
        match self {
            Guard::Zero => Vec::new(),
            Guard::All(atoms) => atoms
                .iter()
                .filter_map(|a| match a {
                    GuardAtom::Zero(i) => Some(*i),
                    _ => None,
                })
                .collect(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        match self {
            Guard::Zero => None,
            Guard::All(atoms) => atoms
                .iter()
                .flat_map(|a| match a {
                    GuardAtom::Zero(i) => vec![*i],
                    GuardAtom::Nonzero(ix) => ix.clone(),
                })
                .max(),
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Zero => write!(f, "zero"),
            Guard::All(atoms) => {
                let parts: Vec<String> = atoms
                    .iter()
                    .map(|a| match a {
                        GuardAtom::Zero(i) => format!("c{}=0", i + 1),
                        GuardAtom::Nonzero(ix) => {
                            let p: Vec<String> = ix.iter().map(|i| format!("c{}", i + 1)).collect();
                            format!("{}!=0", p.join("*"))
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join("&"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub guard: Guard,
    pub class_label: String,
    /// 0-based; `None` for the zero class.
    pub pivot: Option<usize>,
    pub eliminate: Vec<usize>,
    pub sign_sensitive: bool,
}

impl Rule {
    pub fn codimension(&self, dim: usize) -> usize {
        match &self.guard {
            Guard::Zero => dim,
            g => g.zero_indices().len(),
        }
    }

    /// Indices that survive as moduli.
    pub fn retained(&self, dim: usize) -> Vec<usize> {
        let Some(p) = self.pivot else { return Vec::new() };
        let zeros = self.guard.zero_indices();
        (0..dim).filter(|i| *i != p && !self.eliminate.contains(i) && !zeros.contains(i)).collect()
    }

    /// The normal form with symbolic moduli in basis order, e.g.
    /// `+-theta2 + c1*theta3`; moduli the guard keeps nonzero are noted.
    pub fn normal_form_display(&self, labels: &[String]) -> String {
        let Some(p) = self.pivot else { return "0".into() };
        let kept = self.retained(labels.len());
        let name = |k: usize| if kept.len() == 1 { "c".to_string() } else { format!("c{}", k + 1) };
        let mut terms = Vec::new();
        let mut notes = Vec::new();
        for j in 0..labels.len() {
            if j == p {
                terms.push(format!("{}{}", if self.sign_sensitive { "+-" } else { "" }, labels[p]));
            } else if let Some(k) = kept.iter().position(|&i| i == j) {
                terms.push(format!("{}*{}", name(k), labels[j]));
                let forced = matches!(&self.guard, Guard::All(atoms)
                    if atoms.iter().any(|a| matches!(a, GuardAtom::Nonzero(ix) if ix.contains(&j))));
                if forced {
                    notes.push(format!("{} != 0", name(k)));
                }
            }
        }
        let mut out = terms.join(" + ");
        if !notes.is_empty() {
            out.push_str(&format!(" ({})", notes.join(", ")));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRuleset {
    pub name: String,
    pub rules: Vec<Rule>,
    /// False for the generic cascade derived for user germs.
    pub verified: bool,
}

impl ClassificationRuleset {
    /// Check that every zero/nonzero pattern of `dim` coordinates matches
    /// exactly one rule, and that indices are in range.
    pub fn check_partition(&self, dim: usize) -> Result<(), AlgresError> {
        for r in &self.rules {
            let bad = r.guard.max_index().is_some_and(|i| i >= dim)
                || r.pivot.is_some_and(|p| p >= dim)
                || r.eliminate.iter().any(|&k| k >= dim);
            if bad {
                return Err(AlgresError::Ruleset(format!("rule {} refers past coordinate {dim}", r.class_label)));
            }
        }
        if dim > 16 {
            return Ok(());
        }
        for mask in 0u32..(1 << dim) {
            let pattern: Vec<bool> = (0..dim).map(|i| mask & (1 << i) != 0).collect();
            let hits: Vec<&str> = self
                .rules
                .iter()
                .filter(|r| r.guard.matches_pattern(&pattern))
                .map(|r| r.class_label.as_str())
                .collect();
            if hits.len() != 1 {
                return Err(AlgresError::Ruleset(format!(
                    "support pattern {pattern:?} matches {} rules {hits:?}",
                    hits.len()
                )));
            }
        }
        Ok(())
    }
}

fn parse_indices(s: &str, line: usize) -> Result<Vec<usize>, AlgresError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let i: usize = t.trim().parse().map_err(|_| AlgresError::parse(line, 1, format!("bad index '{t}'")))?;
            if i == 0 {
                return Err(AlgresError::parse(line, 1, "indices are 1-based"));
            }
            Ok(i - 1)
        })
        .collect()
}

fn parse_coord(s: &str, line: usize) -> Result<usize, AlgresError> {
    let t = s.trim();
    let n = t.strip_prefix('c').ok_or_else(|| AlgresError::parse(line, 1, format!("expected c<i>, got '{t}'")))?;
    Ok(parse_indices(n, line)?[0])
}

fn parse_guard(s: &str, line: usize) -> Result<Guard, AlgresError> {
    if s == "zero" {
        return Ok(Guard::Zero);
    }
    let mut atoms = Vec::new();
    for part in s.split('&') {
        if let Some(lhs) = part.strip_suffix("!=0") {
            let ix = lhs.split('*').map(|c| parse_coord(c, line)).collect::<Result<Vec<_>, _>>()?;
            atoms.push(GuardAtom::Nonzero(ix));
        } else if let Some(lhs) = part.strip_suffix("=0") {
            atoms.push(GuardAtom::Zero(parse_coord(lhs, line)?));
        } else {
            return Err(AlgresError::parse(line, 1, format!("bad guard atom '{part}'")));
        }
    }
    Ok(Guard::All(atoms))
}

pub fn parse_ruleset(src: &str) -> Result<ClassificationRuleset, AlgresError> {
    let mut name = String::from("custom");
    let mut rules = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        match words.next() {
            Some("ruleset") => name = words.collect::<Vec<_>>().join(" "),
            Some("rule") => {
                let (mut guard, mut class, mut pivot, mut elim, mut sign) = (None, None, None, Vec::new(), false);
                for kv in words {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| AlgresError::parse(line, 1, format!("expected key=value, got '{kv}'")))?;
                    match k {
                        "guard" => guard = Some(parse_guard(v, line)?),
                        "class" => class = Some(v.to_string()),
                        "pivot" => pivot = Some(parse_indices(v, line)?[0]),
                        "eliminate" => elim = parse_indices(v, line)?,
                        "sign_sensitive" => {
                            sign = v.parse().map_err(|_| AlgresError::parse(line, 1, format!("bad flag '{v}'")))?
                        }
                        _ => return Err(AlgresError::parse(line, 1, format!("unknown rule key '{k}'"))),
                    }
                }
                let guard = guard.ok_or_else(|| AlgresError::parse(line, 1, "rule without guard"))?;
                let class_label = class.ok_or_else(|| AlgresError::parse(line, 1, "rule without class"))?;
                if pivot.is_none() && guard != Guard::Zero {
                    return Err(AlgresError::parse(line, 1, "only the zero rule may omit the pivot"));
                }
                let mut eliminate = elim;
                eliminate.sort_unstable();
                rules.push(Rule { guard, class_label, pivot, eliminate, sign_sensitive: sign });
            }
            Some(other) => return Err(AlgresError::parse(line, 1, format!("unknown key '{other}'"))),
            None => {}
        }
    }
    Ok(ClassificationRuleset { name, rules, verified: true })
}

pub fn builtin_ruleset(name: &str) -> Option<ClassificationRuleset> {
    let src = match name {
        "W8" => W8_RULES,
        "W9" => W9_RULES,
        _ => return None,
    };
    Some(parse_ruleset(src).expect("built-in rulesets parse"))
}

/// First-nonzero cascade. Each pivot eliminates every later coordinate
/// reached from it by some positive-degree action.
pub fn generic_ruleset(space: &RestrictionSpace, actions: &[ActionMatrix]) -> ClassificationRuleset {
    let n = space.dim();
    let name = space.germ.name.clone();
    let mut rules = Vec::new();
    for i in 0..n {
        let mut atoms: Vec<GuardAtom> = (0..i).map(GuardAtom::Zero).collect();
        atoms.push(GuardAtom::Nonzero(vec![i]));
        let eliminate = (i + 1..n)
            .filter(|&k| actions.iter().any(|m| m.is_nilpotent_by_degree() && !m.entries[k][i].is_zero()))
            .collect();
        rules.push(Rule {
            guard: Guard::All(atoms),
            class_label: format!("{name}^{i}"),
            pivot: Some(i),
            eliminate,
            sign_sensitive: space.basis[i].delta.is_multiple_of(2),
        });
    }
    rules.push(Rule {
        guard: Guard::Zero,
        class_label: format!("{name}^{n}"),
        pivot: None,
        eliminate: Vec::new(),
        sign_sensitive: false,
    });
    ClassificationRuleset { name, rules, verified: false }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    NotApplicable,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::NotApplicable => "n/a",
        })
    }
}

/// A modulus `coefficient * base^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct Modulus {
    pub index: usize,
    pub label: String,
    pub coefficient: Rational,
    pub base: Rational,
    pub exponent: Rational,
    /// Exact value when the root is rational.
    pub exact: Option<Rational>,
}

impl Modulus {
    pub fn decimal(&self) -> f64 {
        if let Some(e) = &self.exact {
            return e.to_f64().unwrap_or(f64::NAN);
        }
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        let b = self.base.to_f64().unwrap_or(f64::NAN);
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        c * b.powf(e)
    }

    pub fn symbolic(&self) -> String {
        if self.exponent.is_zero() || self.base.is_one() {
            return self.coefficient.to_string();
        }
        format!("{}*({})^({})", self.coefficient, self.base, self.exponent)
    }
}

/// Rational `x^e` for positive `x` when it is rational.
fn rational_power(x: &Rational, e: &Rational) -> Option<Rational> {
    let b = e.denom().to_u32()?;
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(b);
        (r.pow(b) == *n).then_some(r)
    };
    let base = Rational::new(root(x.numer())?, root(x.denom())?);
    let a = e.numer().abs().to_u32()?;
    let mut out = Rational::one();
    for _ in 0..a {
        out *= &base;
    }
    Some(if e.is_negative() { Rational::one() / out } else { out })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub target: usize,
    pub field: String,
    pub tau: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormReport {
    pub class_label: String,
    pub sign: Sign,
    pub pivot: Option<usize>,
    pub moduli: Vec<Modulus>,
    pub codimension: usize,
    pub symplectic_multiplicity: usize,
    pub index_of_isotropy: Order,
    /// Coordinates after elimination, before scaling.
    pub residual_coords: Vec<Rational>,
    /// Normal-form coordinates; `None` where a modulus is irrational.
    pub normal_form: Vec<Option<Rational>>,
    pub trace: Vec<TraceStep>,
    pub ruleset_verified: bool,
}

impl NormalFormReport {
    pub fn exact_normal_form(&self) -> Option<RestrictionClass> {
        let coords: Option<Vec<Rational>> = self.normal_form.iter().cloned().collect();
        coords.map(|coords| RestrictionClass { coords })
    }
}

/// Terms of `exp(tau*M) c` grouped by power of tau.
fn exp_terms(m: &ActionMatrix, c: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = vec![c.to_vec()];
    for k in 1..=c.len() + 1 {
        let next: Vec<Rational> = m.apply(out.last().unwrap()).into_iter().map(|x| x / Rational::from_integer(k.into())).collect();
        if next.iter().all(|x| x.is_zero()) {
            break;
        }
        out.push(next);
    }
    out
}

pub fn classify(
    space: &RestrictionSpace,
    actions: &[ActionMatrix],
    rules: &ClassificationRuleset,
    a: &RestrictionClass,
) -> Result<NormalFormReport, AlgresError> {
    let n = space.dim();
    if a.len() != n {
        return Err(AlgresError::Dimension(format!("class has {} coordinates, space has {n}", a.len())));
    }
    let rule = rules
        .rules
        .iter()
        .find(|r| r.guard.matches(&a.coords))
        .ok_or_else(|| AlgresError::Ruleset("no guard matches".into()))?;
    let mut c = a.coords.clone();
    let mut trace = Vec::new();
    for &k in &rule.eliminate {
        if c[k].is_zero() {
            continue;
        }
        let mut done = false;
        for m in actions.iter().filter(|m| m.is_nilpotent_by_degree()) {
            let terms = exp_terms(m, &c);
            if terms.len() < 2 || terms[1][k].is_zero() {
                continue;
            }
            if terms[2..].iter().any(|v| !v[k].is_zero()) {
                continue;
            }
            if terms[1..].iter().any(|v| v[..k].iter().any(|x| !x.is_zero())) {
                continue;
            }
            let tau = -&c[k] / &terms[1][k];
            let mut next = vec![Rational::zero(); n];
            let mut pow = Rational::one();
            for v in &terms {
                for (x, y) in next.iter_mut().zip(v) {
                    *x += &pow * y;
                }
                pow *= &tau;
            }
            debug_assert!(next[k].is_zero());
            c = next;
            trace.push(TraceStep { target: k, field: m.label.clone(), tau });
            done = true;
            break;
        }
        if !done {
            return Err(AlgresError::Ruleset(format!(
                "no elimination witness for {} in class {}",
                space.basis[k].label, rule.class_label
            )));
        }
    }
    if !rule.guard.matches(&c) {
        return Err(AlgresError::Invariant(format!("elimination left the guard of {}", rule.class_label)));
    }
    let residual = RestrictionClass { coords: c.clone() };
    let (_, trank) = orbit_tangent_space(&residual, actions);
    let mu = n - trank;
    let ind = index_of_isotropy(space, &residual)?;
    let codimension = rule.codimension(n);

    let (sign, moduli, normal_form) = match rule.pivot {
        None => (Sign::NotApplicable, Vec::new(), vec![Some(Rational::zero()); n]),
        Some(s) => {
            let ds = space.basis[s].delta as i64;
            let even = ds % 2 == 0;
            if even != rule.sign_sensitive {
                return Err(AlgresError::Ruleset(format!(
                    "class {}: pivot degree {ds} disagrees with sign_sensitive={}",
                    rule.class_label, rule.sign_sensitive
                )));
            }
            let cs = c[s].clone();
            let neg = cs.is_negative();
            let base = cs.abs();
            let sign = if even {
                if neg {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            } else {
                Sign::NotApplicable
            };
            let mut nf = vec![Some(Rational::zero()); n];
            nf[s] = Some(if even && neg { -Rational::one() } else { Rational::one() });
            let mut moduli = Vec::new();
            for j in rule.retained(n) {
                let dj = space.basis[j].delta as i64;
                let mut coefficient = c[j].clone();
                if !even && neg && dj % 2 != 0 {
                    coefficient = -coefficient;
                }
                let exponent = Rational::new((-dj).into(), ds.into());
                let exact = if coefficient.is_zero() {
                    Some(Rational::zero())
                } else {
                    rational_power(&base, &exponent).map(|p| &coefficient * p)
                };
                nf[j] = exact.clone();
                moduli.push(Modulus {
                    index: j,
                    label: space.basis[j].label.clone(),
                    coefficient,
                    base: base.clone(),
                    exponent,
                    exact,
                });
            }
            (sign, moduli, nf)
        }
    };
    Ok(NormalFormReport {
        class_label: rule.class_label.clone(),
        sign,
        pivot: rule.pivot,
        moduli,
        codimension,
        symplectic_multiplicity: mu,
        index_of_isotropy: ind,
        residual_coords: c,
        normal_form,
        trace,
        ruleset_verified: rules.verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliCertificate {
    pub tangent_rank: usize,
    pub moduli: Vec<usize>,
    pub joint_rank: usize,
}

/// Check that the moduli directions are jointly independent of the
/// tangent space to the orbit at the residual point.
pub fn moduli_certificate(
    report: &NormalFormReport,
    actions: &[ActionMatrix],
) -> Result<ModuliCertificate, AlgresError> {
    let n = report.residual_coords.len();
    let a = RestrictionClass { coords: report.residual_coords.clone() };
    let (mut vecs, trank) = orbit_tangent_space(&a, actions);
    let moduli: Vec<usize> = report.moduli.iter().map(|m| m.index).collect();
    for &j in &moduli {
        let mut e = SparseVec::new();
        e.insert(j, Rational::one());
        vecs.push(e);
    }
    let joint = rank(&vecs, n);
    if joint != trank + moduli.len() {
        return Err(AlgresError::Invariant(format!(
            "class {}: moduli directions {:?} meet the orbit tangent space (rank {trank} -> {joint})",
            report.class_label,
            moduli.iter().map(|j| j + 1).collect::<Vec<_>>()
        )));
    }
    Ok(ModuliCertificate { tangent_rank: trank, moduli, joint_rank: joint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, ratio};

    #[test]
    fn builtin_rulesets_partition() {
        builtin_ruleset("W8").unwrap().check_partition(8).unwrap();
        builtin_ruleset("W9").unwrap().check_partition(9).unwrap();
    }

    #[test]
    fn overlapping_guards_are_rejected() {
        let r = parse_ruleset("rule guard=c1!=0 class=A pivot=1\nrule guard=c2!=0 class=B pivot=2\nrule guard=zero class=Z\n")
            .unwrap();
        assert!(r.check_partition(2).is_err());
    }

    #[test]
    fn guard_display_roundtrip() {
        let r = builtin_ruleset("W8").unwrap();
        for rule in &r.rules {
            let s = rule.guard.to_string();
            assert_eq!(parse_guard(&s, 1).unwrap(), rule.guard);
        }
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_power(&rat(8), &ratio(-2, 3)), Some(ratio(1, 4)));
        assert_eq!(rational_power(&rat(2), &ratio(1, 2)), None);
        assert_eq!(rational_power(&ratio(4, 9), &ratio(3, 2)), Some(ratio(8, 27)));
    }
}
