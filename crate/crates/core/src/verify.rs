//! Checks of a germ against its reference tables plus seeded property
//! checks. Every failure is collected, nothing panics.

use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtin::{class_realizations, ClassSample};
use crate::error::AlgresError;
use crate::exterior::{
    euler_field, exterior_derivative, lie_derivative, pullback_to_branch, wedge, DiffForm,
    VectorField,
};
use crate::germ::{
    dx_tuples, restriction_basis, restriction_basis_with_cap, zero_restriction_subspace, GermDefinition, RestrictionClass, RestrictionSpace,
};
use crate::golden::{parse_order, GoldenTables, RelationDegree};
use crate::invariants::{
    geometric_class, lagrangian_tangency_search, multigerm_tangency, AlphaRoute, GeometricLabel, TangentFrame,
    DEFAULT_DEGREE_CAP,
};
use crate::parse::{parse_form, parse_polynomial};
use crate::qpoly::{monomial_basis, rat, Monomial, Order, Polynomial, Rational};
use crate::restriction::{
    action_matrices, builtin_ruleset, classify, generic_ruleset, hamiltonian_field, moduli_certificate,
    ActionMatrix, ClassificationRuleset, Sign, TangentFieldFamily,
};

pub const SUITES: [&str; 7] = ["basis", "relations", "actions", "classification", "tangency", "geometry", "properties"];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub degree_cap: u32,
    pub seed: u64,
    /// Random instances per property.
    pub instances: usize,
    /// Overrides the stabilization search cap.
    pub cutoff: Option<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { degree_cap: DEFAULT_DEGREE_CAP, seed: 0, instances: 200, cutoff: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub germ: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// `Skip` only if every check of the suite was skipped.
    pub fn suite_status(&self, suite: &str) -> Status {
        let cs: Vec<_> = self.checks.iter().filter(|c| c.suite == suite).collect();
        if cs.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if cs.iter().any(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Skip
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

struct Ledger {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Ledger {
    fn new(suite: &'static str) -> Self {
        Ledger { suite, checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check { suite: self.suite, name: name.into(), status, detail: detail.into() });
    }

    fn ok(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(name, if ok { Status::Pass } else { Status::Fail }, detail);
    }

    /// Record the outcome of a fallible check.
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String), AlgresError>) {
        match f() {
            Ok((ok, d)) => self.ok(name, ok, d),
            Err(e) => self.push(name, Status::Fail, e.to_string()),
        }
    }
}

/// Shared data built once per germ; a failure here fails the suites that
/// need it.
struct Context {
    germ: GermDefinition,
    golden: Option<GoldenTables>,
    closed: Result<RestrictionSpace, String>,
    actions: Result<Vec<ActionMatrix>, String>,
}

impl Context {
    fn new(germ: &GermDefinition, cfg: &VerifyConfig) -> (Self, Option<String>) {
        let (golden, gerr) = match GoldenTables::for_germ(&germ.name) {
            None => (None, None),
            Some(Ok(g)) => (Some(g), None),
            Some(Err(e)) => (None, Some(e.to_string())),
        };
        let closed = basis(germ, true, cfg).map_err(|e| e.to_string());
        let actions = match &closed {
            Ok(s) => TangentFieldFamily::for_space(s)
                .and_then(|fam| action_matrices(s, &fam))
                .map_err(|e| e.to_string()),
            Err(e) => Err(e.clone()),
        };
        (Context { germ: germ.clone(), golden, closed, actions }, gerr)
    }

    fn ruleset(&self, space: &RestrictionSpace, actions: &[ActionMatrix]) -> ClassificationRuleset {
        builtin_ruleset(&self.germ.name).unwrap_or_else(|| generic_ruleset(space, actions))
    }
}

fn basis(g: &GermDefinition, closed: bool, cfg: &VerifyConfig) -> Result<RestrictionSpace, AlgresError> {
    match cfg.cutoff {
        Some(cap) => restriction_basis_with_cap(g, 2, closed, cap),
        None => restriction_basis(g, 2, closed),
    }
}

fn orders_match(got: Order, maxed: bool, want: Order) -> bool {
    match want {
        Order::Infinite => got.is_infinite() || maxed,
        Order::Finite(_) => got == want && !maxed,
    }
}

fn fmt_degrees(d: &[u32]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn basis_suite(cx: &Context, cfg: &VerifyConfig, out: &mut Ledger) {
    let Some(gold) = &cx.golden else {
        out.push("reference tables", Status::Skip, "no reference tables for this germ");
        if let Err(e) = &cx.closed {
            out.push("closed basis", Status::Fail, e.clone());
        }
        return;
    };
    // Unpinned computation: dimensions and degrees come from the germ alone.
    let mut bare = cx.germ.clone();
    bare.closed_reps.clear();
    bare.all_reps.clear();
    for closed in [true, false] {
        let key = if closed { "closed" } else { "all" };
        let rows = gold.basis_rows(closed);
        let want: Vec<u32> = rows.iter().map(|r| r.delta).collect();
        out.run(format!("dimension certificate ({key} forms)"), || {
            let s = basis(&bare, closed, cfg)?;
            let got = s.degrees();
            Ok((
                got == want,
                format!(
                    "dim {} degrees ({}) vs reference dim {} ({}); stable above {}",
                    got.len(),
                    fmt_degrees(&got),
                    want.len(),
                    fmt_degrees(&want),
                    s.stabilization.cutoff
                ),
            ))
        });
        out.run(format!("representatives ({key} forms)"), || {
            let s = basis(&cx.germ, closed, cfg)?;
            let mut bad = Vec::new();
            if s.dim() != rows.len() {
                bad.push(format!("dim {} vs {}", s.dim(), rows.len()));
            }
            for (b, r) in s.basis.iter().zip(&rows) {
                let f = parse_form(&r.representative, &cx.germ.variables)?;
                if b.label != r.label || b.form != f || b.delta != r.delta {
                    bad.push(format!("{}: got {} at {}", r.label, b.label, b.delta));
                }
            }
            Ok((bad.is_empty(), if bad.is_empty() { format!("{} rows", rows.len()) } else { bad.join("; ") }))
        });
    }
}

fn relations_suite(cx: &Context, cfg: &VerifyConfig, out: &mut Ledger) {
    let Some(gold) = &cx.golden else {
        out.push("reference tables", Status::Skip, "no reference tables for this germ");
        return;
    };
    let space = match basis(&cx.germ, false, cfg) {
        Ok(s) => s,
        Err(e) => return out.push("all-forms space", Status::Fail, e.to_string()),
    };
    let blanket = |delta: u32| -> (bool, String) {
        let z = zero_restriction_subspace(&cx.germ, 2, delta);
        (z.rank() == z.index.len(), format!("rank {} of {} monomial 2-forms", z.rank(), z.index.len()))
    };
    for (k, row) in gold.relations.iter().enumerate() {
        let name = format!("row {} (delta {})", k + 1, row.delta);
        out.run(name, || match row.degree()? {
            RelationDegree::Exact(d) if row.is_blanket() => Ok(blanket(d)),
            RelationDegree::Above(n) => {
                if n != space.cutoff() {
                    return Ok((false, format!("reference stabilizes above {n}, computed above {}", space.cutoff())));
                }
                for d in n + 1..=2 * n {
                    let (ok, detail) = blanket(d);
                    if !ok {
                        return Ok((false, format!("delta {d}: {detail}")));
                    }
                }
                Ok((true, format!("every degree {}..={} vanishes, run certificate above", n + 1, 2 * n)))
            }
            RelationDegree::Exact(d) => {
                let f = parse_form(&row.relation, &cx.germ.variables)?;
                if f.homogeneous_degree(space.weights()) != Some(d) {
                    return Ok((false, format!("relation is not homogeneous of degree {d}")));
                }
                Ok((space.is_zero_class(&f)?, row.relation.clone()))
            }
        });
    }
}

fn actions_suite(cx: &Context, out: &mut Ledger) {
    let Some(gold) = &cx.golden else {
        out.push("reference tables", Status::Skip, "no reference tables for this germ");
        return;
    };
    let acts = match &cx.actions {
        Ok(a) => a,
        Err(e) => return out.push("action matrices", Status::Fail, e.clone()),
    };
    out.ok(
        "generator count",
        acts.len() == gold.actions.len(),
        format!("{} fields vs {} reference rows", acts.len(), gold.actions.len()),
    );
    for row in &gold.actions {
        out.run(format!("{} = ({})E", row.field, row.multiplier), || {
            let Some(m) = acts.iter().find(|m| m.label == row.field) else {
                return Ok((false, "field missing from the family".into()));
            };
            let want_mult = parse_polynomial(&row.multiplier, &cx.germ.variables)?;
            let mult_ok = cx.germ.fields.iter().any(|(l, p)| *l == row.field && *p == want_mult);
            let n = m.dim();
            let mut bad = Vec::new();
            if !mult_ok {
                bad.push("multiplier differs".to_string());
            }
            if row.cells.len() != n {
                bad.push(format!("{} cells for {n} basis elements", row.cells.len()));
            }
            for (j, cell) in row.cells.iter().enumerate().take(n) {
                for i in 0..n {
                    let want = match cell {
                        Some((c, t)) if *t == i => c.clone(),
                        _ => Rational::zero(),
                    };
                    if m.entries[i][j] != want {
                        bad.push(format!("theta{} -> theta{}: {} vs {}", j + 1, i + 1, m.entries[i][j], want));
                    }
                }
            }
            Ok((bad.is_empty(), if bad.is_empty() { format!("{n} columns") } else { bad.join("; ") }))
        });
    }
}

/// `exp(tau M) c` for a nilpotent `M`.
fn flow(m: &ActionMatrix, tau: &Rational, c: &[Rational]) -> Vec<Rational> {
    let mut out = c.to_vec();
    let mut term = c.to_vec();
    for k in 1..=c.len() + 1 {
        term = m.apply(&term).into_iter().map(|x| x * tau / rat(k as i64)).collect();
        if term.iter().all(|x| x.is_zero()) {
            break;
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
    }
    out
}

/// Move a class along its orbit: unipotent flows of the positive-degree
/// fields, then the weighted scaling by 2.
fn disguise(space: &RestrictionSpace, acts: &[ActionMatrix], a: &RestrictionClass) -> RestrictionClass {
    let mut c = a.coords.clone();
    for (k, m) in acts.iter().filter(|m| m.is_nilpotent_by_degree()).enumerate() {
        let tau = Rational::new(((k % 5) as i64 - 2).into(), ((k % 3) as i64 + 1).into());
        c = flow(m, &tau, &c);
    }
    for (x, b) in c.iter_mut().zip(&space.basis) {
        *x *= Rational::from_integer(num_bigint::BigInt::from(2).pow(b.delta));
    }
    RestrictionClass { coords: c }
}

fn classification_suite(cx: &Context, out: &mut Ledger) {
    let Some(gold) = &cx.golden else {
        out.push("reference tables", Status::Skip, "no reference tables for this germ");
        return;
    };
    let (space, acts) = match (&cx.closed, &cx.actions) {
        (Ok(s), Ok(a)) => (s, a),
        (Err(e), _) | (_, Err(e)) => return out.push("setup", Status::Fail, e.clone()),
    };
    let rules = cx.ruleset(space, acts);
    out.run("ruleset partition", || {
        rules.check_partition(space.dim())?;
        Ok((rules.rules.len() == gold.classification.len(), format!("{} rules", rules.rules.len())))
    });
    let samples = [
        ClassSample::new(1, Rational::new(3.into(), 2.into()), rat(-2)),
        ClassSample::new(-1, Rational::new(1.into(), 3.into()), rat(5)),
    ];
    let reals: Vec<_> = match samples.iter().map(|s| class_realizations(space, s)).collect::<Result<Vec<_>, _>>() {
        Ok(r) => r,
        Err(e) => return out.push("representatives", Status::Fail, e.to_string()),
    };
    for (k, row) in gold.classification.iter().enumerate() {
        out.run(row.class.clone(), || {
            let want_ind = parse_order(&row.ind)?;
            let mut bad = Vec::new();
            let mut signs = Vec::new();
            for set in &reals {
                let Some(r) = set.get(k) else { return Ok((false, "no representative".into())) };
                if r.label != row.class {
                    bad.push(format!("representative is {}", r.label));
                }
                let rep = classify(space, acts, &rules, &disguise(space, acts, &r.class))?;
                if rep.class_label != row.class {
                    bad.push(format!("classified as {}", rep.class_label));
                }
                if rep.codimension != row.cod {
                    bad.push(format!("cod {} vs {}", rep.codimension, row.cod));
                }
                if rep.symplectic_multiplicity != row.mu {
                    bad.push(format!("mu {} vs {}", rep.symplectic_multiplicity, row.mu));
                }
                if rep.index_of_isotropy != want_ind {
                    bad.push(format!("ind {} vs {}", rep.index_of_isotropy, want_ind));
                }
                match rep.exact_normal_form() {
                    Some(nf) if nf == r.class => {}
                    _ => bad.push("normal form of the moved class differs from the representative".into()),
                }
                if let Some(nf) = rep.exact_normal_form() {
                    let again = classify(space, acts, &rules, &nf)?;
                    if again.class_label != rep.class_label || again.exact_normal_form() != Some(nf) {
                        bad.push("classify is not idempotent".into());
                    }
                }
                if let Err(e) = moduli_certificate(&rep, acts) {
                    bad.push(e.to_string());
                }
                signs.push(rep.sign);
            }
            if reals[0][k].sign_sensitive {
                if signs != [Sign::Plus, Sign::Minus] {
                    bad.push(format!("signs {signs:?} do not separate +/-"));
                }
            } else if signs.iter().any(|s| *s != Sign::NotApplicable) {
                bad.push(format!("unexpected sign {signs:?}"));
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    format!("cod {} mu {} ind {}", row.cod, row.mu, want_ind)
                } else {
                    bad.join("; ")
                },
            ))
        });
    }
}

fn tangency_suite(cx: &Context, cfg: &VerifyConfig, out: &mut Ledger) {
    let Some(gold) = &cx.golden else {
        out.push("reference tables", Status::Skip, "no reference tables for this germ");
        return;
    };
    let space = match &cx.closed {
        Ok(s) => s,
        Err(e) => return out.push("setup", Status::Fail, e.clone()),
    };
    let reals = match class_realizations(space, &ClassSample::new(1, Rational::new(3.into(), 2.into()), rat(-2))) {
        Ok(r) => r,
        Err(e) => return out.push("representatives", Status::Fail, e.to_string()),
    };
    let route = (cx.germ.branches.len() == 1).then(|| AlphaRoute::new(space, false));
    for (row, r) in gold.invariants.iter().zip(&reals) {
        if let Some(route) = &route {
            out.run(format!("{} L_N single route", row.class), || {
                let got = route.as_ref().map_err(|e| AlgresError::Invariant(e.to_string()))?.order(&r.class)?;
                Ok((got == row.ln, format!("{got} vs {}", row.ln)))
            });
        }
        let columns: Vec<(&str, &[_], Order)> = std::iter::once(("L_N", &r.chart[..], row.ln))
            .chain(row.l2.map(|l2| ("L2", &r.chart[1..], l2)))
            .collect();
        for (col, bs, want) in columns {
            out.run(format!("{} {col} search", row.class), || {
                let res = lagrangian_tangency_search(bs, cfg.degree_cap)?;
                let mut bad = Vec::new();
                if !orders_match(res.outcome.order, res.outcome.maxed, want) {
                    bad.push(format!("{} vs {want}", res.outcome));
                }
                if multigerm_tangency(bs, &res.witness)? != res.outcome.order {
                    bad.push("witness does not realize the order".into());
                }
                if !res.witness.poisson_check(2 * cfg.degree_cap) {
                    bad.push("witness fails the Poisson check".into());
                }
                Ok((bad.is_empty(), if bad.is_empty() { format!("{}", res.outcome) } else { bad.join("; ") }))
            });
        }
    }
}

fn geometry_suite(cx: &Context, cfg: &VerifyConfig, out: &mut Ledger) {
    let Some(gold) = &cx.golden else {
        out.push("reference tables", Status::Skip, "no reference tables for this germ");
        return;
    };
    let space = match &cx.closed {
        Ok(s) => s,
        Err(e) => return out.push("setup", Status::Fail, e.clone()),
    };
    let reals = match class_realizations(space, &ClassSample::new(1, Rational::new(3.into(), 2.into()), rat(-2))) {
        Ok(r) => r,
        Err(e) => return out.push("representatives", Status::Fail, e.to_string()),
    };
    let dim = cx.germ.symplectic_dim;
    let frame = TangentFrame::coordinate(dim);
    out.run("derived frame", || {
        let d = TangentFrame::derive(&cx.germ, dim)?;
        Ok((d == frame, "derived from the branches".into()))
    });
    for (row, r) in gold.geometry.iter().zip(&reals) {
        out.run(row.class.clone(), || {
            let want = GeometricLabel::parse(&row.condition)
                .ok_or_else(|| AlgresError::parse(1, 1, format!("unknown condition '{}'", row.condition)))?;
            let rep = geometric_class(space, &r.omega, &frame, Some(&r.chart), cfg.degree_cap)?;
            let mut bad = Vec::new();
            if rep.label != want {
                bad.push(format!("{} vs {}", rep.label, want));
            }
            if let Some(ln) = row.ln_order()? {
                match &rep.ln {
                    Some(o) if orders_match(o.order, o.maxed, ln) => {}
                    other => bad.push(format!("L_N {:?} vs {ln}", other.as_ref().map(|o| o.to_string()))),
                }
            }
            let detail = match &rep.ln {
                Some(o) => format!("{}, L_N {o}", rep.label),
                None => rep.label.to_string(),
            };
            Ok((bad.is_empty(), if bad.is_empty() { detail } else { bad.join("; ") }))
        });
    }
}

struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn rational(&mut self) -> Rational {
        let n: i64 = self.rng.gen_range(-6..=6);
        let d: i64 = self.rng.gen_range(1..=3);
        Rational::new(n.into(), d.into())
    }

    fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    fn monomial(&mut self, n: usize, max_deg: u32) -> Monomial {
        let mut e = vec![0; n];
        for _ in 0..self.rng.gen_range(0..=max_deg) {
            e[self.rng.gen_range(0..n)] += 1;
        }
        Monomial(e)
    }

    fn poly(&mut self, n: usize, max_deg: u32) -> Polynomial {
        let mut p = Polynomial::zero(n);
        for _ in 0..self.rng.gen_range(1..=4) {
            let m = self.monomial(n, max_deg);
            p.add_term(m, &self.rational());
        }
        p
    }

    fn form(&mut self, n: usize, degree: usize, max_deg: u32) -> DiffForm {
        let mut f = DiffForm::zero(n, degree);
        let tuples = dx_tuples(n, degree);
        for _ in 0..self.rng.gen_range(1..=3) {
            let idx = tuples.choose(&mut self.rng).unwrap().clone();
            f.add_term(idx, &self.poly(n, max_deg));
        }
        f
    }

    fn field(&mut self, n: usize, max_deg: u32) -> VectorField {
        VectorField::new((0..n).map(|_| self.poly(n, max_deg)).collect())
    }

    /// A random element of `A^p_0`: `sum g_i beta_i + d(g_i gamma_i)`.
    fn vanishing_form(&mut self, g: &GermDefinition, p: usize) -> DiffForm {
        let n = g.dim();
        let mut f = DiffForm::zero(n, p);
        for gen in &g.generators {
            f = f.add(&self.form(n, p, 2).mul_poly(gen));
            let gamma = if p == 1 {
                DiffForm::function(self.poly(n, 2))
            } else {
                self.form(n, p - 1, 2)
            };
            f = f.add(&exterior_derivative(&gamma.mul_poly(gen)).expect("degree below cap"));
        }
        f
    }
}

/// `L_X` from the coordinate formula, independent of the Cartan formula.
fn lie_by_coordinates(x: &VectorField, a: &DiffForm) -> Result<DiffForm, AlgresError> {
    let n = a.dim();
    let mut out = DiffForm::zero(n, a.degree());
    for (idx, f) in a.terms() {
        out = out.add(&DiffForm::monomial_form(n, x.apply(f), idx));
        for k in 0..idx.len() {
            let mut acc = DiffForm::function(f.clone()).with_dim(n);
            for (pos, &i) in idx.iter().enumerate() {
                let factor = if pos == k {
                    exterior_derivative(&DiffForm::function(x.components[i].clone()).with_dim(n))?
                } else {
                    DiffForm::dx(n, i)
                };
                acc = wedge(&acc, &factor)?;
            }
            out = out.add(&acc);
        }
    }
    Ok(out)
}

fn property_suite(cx: &Context, cfg: &VerifyConfig, out: &mut Ledger) {
    let g = &cx.germ;
    let n = g.dim();
    let count = cfg.instances;
    let mut s = Sampler { rng: ChaCha8Rng::seed_from_u64(cfg.seed) };

    let run = |out: &mut Ledger, name: &str, s: &mut Sampler, f: &mut dyn FnMut(&mut Sampler) -> Result<bool, AlgresError>| {
        let mut failed = None;
        for i in 0..count {
            match f(s) {
                Ok(true) => {}
                Ok(false) => {
                    failed = Some(format!("instance {i} failed"));
                    break;
                }
                Err(e) => {
                    failed = Some(format!("instance {i}: {e}"));
                    break;
                }
            }
        }
        match failed {
            None => out.push(name, Status::Pass, format!("{count} instances, seed {}", cfg.seed)),
            Some(d) => out.push(name, Status::Fail, d),
        }
    };

    run(out, "d o d = 0", &mut s, &mut |s| {
        let p = s.rng.gen_range(0..=1);
        let a = if p == 0 { DiffForm::function(s.poly(n, 4)).with_dim(n) } else { s.form(n, 1, 4) };
        Ok(exterior_derivative(&exterior_derivative(&a)?)?.is_zero())
    });

    run(out, "Cartan identity", &mut s, &mut |s| {
        let x = s.field(n, 2);
        let p = s.rng.gen_range(1..=2);
        let a = s.form(n, p, 3);
        let l = lie_derivative(&x, &a)?;
        let commutes = exterior_derivative(&l)? == lie_derivative(&x, &exterior_derivative(&a)?)?;
        Ok(l == lie_by_coordinates(&x, &a)? && commutes)
    });

    let (space, acts) = match (&cx.closed, &cx.actions) {
        (Ok(sp), Ok(a)) => (sp, a),
        (Err(e), _) | (_, Err(e)) => return out.push("restriction space", Status::Fail, e.clone()),
    };
    let e = euler_field(&g.weights);
    let degs = space.degrees();
    let spread = degs.last().copied().unwrap_or(0) - degs.first().copied().unwrap_or(0);

    run(out, "graded action law", &mut s, &mut |s| {
        let d = s.rng.gen_range(0..=spread);
        let Some(m) = monomial_basis(d, &g.weights).choose(&mut s.rng).cloned() else { return Ok(true) };
        let j = s.rng.gen_range(0..space.dim());
        let x = e.scale_by(&Polynomial::monomial(m));
        let c = space.reduce_to_coordinates(&lie_derivative(&x, &space.basis[j].form)?)?;
        Ok(c.coords.iter().enumerate().all(|(i, v)| v.is_zero() || degs[i] == degs[j] + d))
    });
    out.ok(
        "graded action law (family)",
        acts.iter().all(|m| {
            m.qdeg.is_some_and(|d| {
                (0..m.dim()).all(|i| (0..m.dim()).all(|j| m.entries[i][j].is_zero() || degs[i] == degs[j] + d))
            })
        }),
        format!("{} action matrices", acts.len()),
    );

    match basis(g, false, cfg) {
        Ok(all) => run(out, "A0 module closedness", &mut s, &mut |s| {
            let z = s.vanishing_form(g, 2);
            let f = s.poly(n, 3);
            let x = e.scale_by(&s.poly(n, 2));
            let beta = s.form(n, 1, 2);
            let z1 = s.vanishing_form(g, 1);
            Ok(all.is_zero_class(&z)?
                && all.is_zero_class(&z.mul_poly(&f))?
                && all.is_zero_class(&lie_derivative(&x, &z)?)?
                && all.is_zero_class(&wedge(&z1, &beta)?)?)
        }),
        Err(err) => out.push("A0 module closedness", Status::Fail, err.to_string()),
    }

    match hamiltonian_field(g) {
        Ok(h) => run(out, "Hamiltonian action is trivial", &mut s, &mut |s| {
            let j = s.rng.gen_range(0..space.dim());
            let c = s.nonzero_rational();
            let l = lie_derivative(&h, &space.basis[j].form.scale(&c))?;
            Ok(space.reduce_to_coordinates(&l)?.is_zero())
        }),
        Err(err) => out.push("Hamiltonian action is trivial", Status::Skip, err.to_string()),
    }

    run(out, "pullback to branches vanishes", &mut s, &mut |s| {
        let a = s.form(n, 2, 4);
        let z1 = s.vanishing_form(g, 1);
        let mut ok = true;
        for b in &g.branches {
            ok &= pullback_to_branch(&a, b)?.is_zero() && pullback_to_branch(&z1, b)?.is_zero();
        }
        Ok(ok)
    });

    if g.branches.len() == 1 {
        match AlphaRoute::new(space, false) {
            Ok(route) => run(out, "Lt infinite iff zero class", &mut s, &mut |s| {
                let mut c = RestrictionClass::zero(space.dim());
                let mode = s.rng.gen_range(0..4);
                if mode > 0 {
                    for k in 0..space.dim() {
                        if s.rng.gen_bool(if mode == 1 { 0.2 } else { 0.5 }) {
                            c.coords[k] = s.rational();
                        }
                    }
                }
                let o = route.order(&c)?;
                Ok(o.is_infinite() == c.is_zero())
            }),
            Err(err) => out.push("Lt infinite iff zero class", Status::Fail, err.to_string()),
        }
    } else {
        out.push("Lt infinite iff zero class", Status::Skip, "single-branch statement; germ has several branches");
    }
}

/// Run every suite on a germ; suites without reference tables are skipped.
pub fn verify_germ(germ: &GermDefinition, cfg: &VerifyConfig) -> VerifyReport {
    run_suites(germ, cfg, &SUITES)
}

/// Run the named suites, in the fixed suite order.
pub fn run_suites(germ: &GermDefinition, cfg: &VerifyConfig, suites: &[&str]) -> VerifyReport {
    let (cx, gerr) = Context::new(germ, cfg);
    let mut checks = Vec::new();
    if let Some(e) = gerr {
        checks.push(Check { suite: "basis", name: "reference tables".into(), status: Status::Fail, detail: e });
    }
    for suite in SUITES.into_iter().filter(|s| suites.contains(s)) {
        let mut l = Ledger::new(suite);
        match suite {
            "basis" => basis_suite(&cx, cfg, &mut l),
            "relations" => relations_suite(&cx, cfg, &mut l),
            "actions" => actions_suite(&cx, &mut l),
            "classification" => classification_suite(&cx, &mut l),
            "tangency" => tangency_suite(&cx, cfg, &mut l),
            "geometry" => geometry_suite(&cx, cfg, &mut l),
            _ => property_suite(&cx, cfg, &mut l),
        }
        checks.extend(l.checks);
    }
    VerifyReport { germ: germ.name.clone(), checks }
}
