mod table;

use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use algres::builtin::{class_realizations, ClassSample};
use algres::germ::{restriction_basis, restriction_basis_with_cap, GermDefinition, RestrictionClass, RestrictionSpace};
use algres::invariants::{
    geometric_class, lagrangian_tangency_search, AlphaRoute, TangencyOutcome, TangentFrame, DEFAULT_DEGREE_CAP,
};
use algres::parse::{parse_field, parse_form};
use algres::qpoly::{ratio, Rational};
use algres::restriction::{
    action_matrices, action_matrix, builtin_ruleset, classify, generic_ruleset, index_of_isotropy, parse_ruleset,
    ActionMatrix, ClassificationRuleset, GuardAtom, Guard, NormalFormReport, TangentField, TangentFieldFamily,
};
use algres::verify::{run_suites, verify_germ, Status, VerifyConfig, VerifyReport};
use algres::AlgresError;
use clap::{Parser, Subcommand};
use num_traits::Zero;

use table::{Cell, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "algres", version, about = "Algebraic restrictions of closed 2-forms to quasi-homogeneous curve germs")]
struct Cli {
    /// Built-in germ name (W8, W9) or path to a germ definition file.
    #[arg(long, global = true, default_value = "W8")]
    germ: String,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Largest quasi-degree searched for stabilization.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    cutoff: Option<u32>,
    /// Degree cap of the generating-function search.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP, value_parser = clap::value_parser!(u32).range(1..))]
    degree_cap: u32,
    /// Seed for the sampled property checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis of the restriction space with quasi-degrees.
    Basis {
        /// All 2-forms instead of closed ones.
        #[arg(long)]
        all_forms: bool,
    },
    /// Infinitesimal actions of the tangent fields on the basis.
    Actions {
        /// Compare with the reference table and fail on any difference.
        #[arg(long)]
        verify_paper: bool,
        /// A single field, e.g. "x1*x3*E" or "(X1, X2, X3)".
        #[arg(long)]
        field: Option<String>,
    },
    /// Normal form of a class.
    Classify {
        /// Comma-separated coordinates over the closed basis.
        #[arg(long, conflicts_with_all = ["form", "table"])]
        coords: Option<String>,
        /// A closed 2-form in the germ variables.
        #[arg(long, conflicts_with = "table")]
        form: Option<String>,
        /// One representative per normal form.
        #[arg(long)]
        table: bool,
        /// Classification ruleset file.
        #[arg(long)]
        rules: Option<String>,
    },
    /// Index of isotropy and Lagrangian tangency orders per class.
    Invariants {
        /// Only this class, e.g. 3, 2a or W9^3.
        #[arg(long)]
        class: Option<String>,
        /// Print the Lagrangian found by the search.
        #[arg(long)]
        witness: bool,
    },
    /// Geometric conditions of the symplectic realizations.
    Geometry,
    /// Run every check against the reference tables.
    Verify {
        /// Random instances per property.
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
}

enum Failure {
    Error(AlgresError),
    /// Verification ran and found differences; already reported.
    Mismatch,
}

impl From<AlgresError> for Failure {
    fn from(e: AlgresError) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(e.into())
    }
}

fn exit_code(e: &AlgresError) -> u8 {
    match e {
        AlgresError::Parse { .. } | AlgresError::InvalidGerm(_) => 2,
        AlgresError::Mismatch(_) => 3,
        AlgresError::Stabilization { .. } => 4,
        _ => 1,
    }
}

fn load_germ(src: &str) -> Result<GermDefinition, AlgresError> {
    if !Path::new(src).exists() {
        if let Some(g) = GermDefinition::builtin(src) {
            return Ok(g);
        }
    }
    let text = std::fs::read_to_string(src)?;
    GermDefinition::from_source(&text)
}

struct Env {
    cli: Cli,
    germ: GermDefinition,
}

impl Env {
    fn space(&self, closed: bool) -> Result<RestrictionSpace, AlgresError> {
        match self.cli.cutoff {
            Some(cap) => restriction_basis_with_cap(&self.germ, 2, closed, cap),
            None => restriction_basis(&self.germ, 2, closed),
        }
    }

    fn emit(&self, t: &Table) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        t.write(self.cli.format, &mut out)?;
        out.flush()
    }

    fn verify_config(&self, instances: usize) -> VerifyConfig {
        VerifyConfig { degree_cap: self.cli.degree_cap, seed: self.cli.seed, instances, cutoff: self.cli.cutoff }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let germ = match load_germ(&cli.germ) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let env = Env { cli, germ };
    let res = match &env.cli.command {
        Command::Basis { all_forms } => cmd_basis(&env, *all_forms),
        Command::Actions { verify_paper, field } => cmd_actions(&env, *verify_paper, field.as_deref()),
        Command::Classify { coords, form, table, rules } => {
            cmd_classify(&env, coords.as_deref(), form.as_deref(), *table, rules.as_deref())
        }
        Command::Invariants { class, witness } => cmd_invariants(&env, class.as_deref(), *witness),
        Command::Geometry => cmd_geometry(&env),
        Command::Verify { instances } => cmd_verify(&env, *instances),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(3),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cmd_basis(env: &Env, all_forms: bool) -> Result<(), Failure> {
    let s = env.space(!all_forms)?;
    let g = &env.germ;
    let mut t = Table::new(&["label", "representative", "delta"]);
    for b in &s.basis {
        t.push(vec![b.label.clone().into(), b.form.display_with(&g.variables, Some(&g.weights)).into(), b.delta.into()]);
    }
    let dims: Vec<String> = s
        .piece_dims()
        .into_iter()
        .filter(|(_, d)| *d > 0)
        .map(|(delta, d)| format!("{delta}:{d}"))
        .collect();
    let st = &s.stabilization;
    t.notes.push(format!("dimension {}; nonzero pieces {}", s.dim(), dims.join(" ")));
    t.notes.push(format!(
        "stable: pieces {}..={} vanish, run >= max weight {} above max weight sum {} (cap {})",
        st.run_start,
        st.cutoff,
        s.weights().max(),
        st.max_weight_sum,
        st.cap
    ));
    env.emit(&t)?;
    Ok(())
}

fn column_entry(m: &ActionMatrix, j: usize, labels: &[String]) -> String {
    let terms: Vec<String> = (0..m.dim())
        .filter(|&i| !m.entries[i][j].is_zero())
        .map(|i| format!("{} {}", m.entries[i][j], labels[i]))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn report_checks(env: &Env, report: &VerifyReport, summary: bool) -> Result<(), Failure> {
    let mut t = Table::new(&["suite", "check", "status", "detail"]);
    for c in &report.checks {
        t.push(vec![c.suite.into(), c.name.clone().into(), c.status.to_string().into(), c.detail.clone().into()]);
    }
    if summary {
        for suite in algres::verify::SUITES {
            t.notes.push(format!("{}: {}", suite, report.suite_status(suite)));
        }
    }
    env.emit(&t)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_actions(env: &Env, verify_paper: bool, field: Option<&str>) -> Result<(), Failure> {
    let s = env.space(true)?;
    let g = &env.germ;
    let labels = s.labels();
    let mut headers = vec!["field", "multiplier"];
    headers.extend(labels.iter().map(|l| l.as_str()));
    let mut t = Table::new(&headers);
    let rows: Vec<(String, String, ActionMatrix)> = match field {
        Some(src) => {
            let x = TangentField::new(g, src, parse_field(src, &g.variables, &g.weights)?)?;
            let m = action_matrix(&s, &x)?;
            vec![(src.to_string(), src.to_string(), m)]
        }
        None => {
            let fam = TangentFieldFamily::for_space(&s)?;
            let acts = action_matrices(&s, &fam)?;
            let mults: Vec<String> = if g.fields.is_empty() {
                fam.fields.iter().map(|_| String::new()).collect()
            } else {
                g.fields.iter().map(|(_, m)| m.display_with(&g.variables, Some(&g.weights))).collect()
            };
            acts.into_iter().zip(mults).map(|(m, mult)| (m.label.clone(), mult, m)).collect()
        }
    };
    for (label, mult, m) in &rows {
        let mut r: Vec<Cell> = vec![label.clone().into(), mult.clone().into()];
        r.extend((0..m.dim()).map(|j| Cell::from(column_entry(m, j, &labels))));
        t.push(r);
    }
    if !verify_paper {
        env.emit(&t)?;
        return Ok(());
    }
    let report = run_suites(g, &env.verify_config(0), &["actions"]);
    if report.suite_status("actions") == Status::Skip {
        return Err(AlgresError::Mismatch(format!("no reference action table for germ {}", g.name)).into());
    }
    env.emit(&t)?;
    report_checks(env, &report, false)
}

fn ruleset(env: &Env, s: &RestrictionSpace, acts: &[ActionMatrix], path: Option<&str>) -> Result<ClassificationRuleset, AlgresError> {
    let r = match path {
        Some(p) => parse_ruleset(&std::fs::read_to_string(p)?)?,
        None => builtin_ruleset(&env.germ.name).unwrap_or_else(|| generic_ruleset(s, acts)),
    };
    r.check_partition(s.dim())?;
    Ok(r)
}

fn parse_coords(src: &str) -> Result<Vec<Rational>, AlgresError> {
    src.split(',')
        .enumerate()
        .map(|(k, x)| {
            x.trim()
                .parse::<Rational>()
                .map_err(|_| AlgresError::parse(1, k + 1, format!("bad coordinate '{}'", x.trim())))
        })
        .collect()
}

fn combination(coords: &[Option<Rational>], labels: &[String], report: &NormalFormReport) -> String {
    let mut terms = Vec::new();
    for (j, c) in coords.iter().enumerate() {
        let coef = match c {
            Some(c) if c.is_zero() => continue,
            Some(c) => c.to_string(),
            None => report.moduli.iter().find(|m| m.index == j).map(|m| m.symbolic()).unwrap_or_default(),
        };
        terms.push(match coef.as_str() {
            "1" => labels[j].clone(),
            "-1" => format!("-{}", labels[j]),
            _ if coef.contains(['/', '*', '^']) => format!("({coef})*{}", labels[j]),
            _ => format!("{coef}*{}", labels[j]),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

const REPORT_HEADERS: [&str; 11] =
    ["class", "sign", "moduli", "moduli_decimal", "cod", "mu", "ind", "normal_form", "trace", "ruleset", "input"];

fn report_row(r: &NormalFormReport, labels: &[String], input: String) -> Vec<Cell> {
    let moduli: Vec<String> = r.moduli.iter().map(|m| m.exact.as_ref().map(|e| e.to_string()).unwrap_or(m.symbolic())).collect();
    let decimals: Vec<String> = r.moduli.iter().map(|m| format!("{:.6}", m.decimal())).collect();
    let trace: Vec<String> =
        r.trace.iter().map(|s| format!("{}:{}*{}", labels[s.target], s.tau, s.field)).collect();
    vec![
        r.class_label.clone().into(),
        r.sign.to_string().into(),
        format!("({})", moduli.join(", ")).into(),
        format!("({})", decimals.join(", ")).into(),
        r.codimension.into(),
        r.symplectic_multiplicity.into(),
        r.index_of_isotropy.into(),
        combination(&r.normal_form, labels, r).into(),
        trace.join(" ").into(),
        if r.ruleset_verified { "verified" } else { "unverified" }.into(),
        input.into(),
    ]
}

/// Pivot 1, guard-forced coordinates 1 and sample values on the moduli.
fn rule_representative(rule: &algres::restriction::Rule, n: usize) -> RestrictionClass {
    let mut c = RestrictionClass::zero(n);
    if let Guard::All(atoms) = &rule.guard {
        for a in atoms {
            if let GuardAtom::Nonzero(ix) = a {
                for &i in ix {
                    c.coords[i] = ratio(1, 1);
                }
            }
        }
    }
    let samples = [ratio(3, 2), ratio(-2, 1), ratio(5, 7)];
    for (k, j) in rule.retained(n).into_iter().enumerate() {
        if c.coords[j].is_zero() {
            c.coords[j] = samples[k % samples.len()].clone();
        }
    }
    if let Some(p) = rule.pivot {
        c.coords[p] = ratio(1, 1);
    }
    c
}

fn cmd_classify(
    env: &Env,
    coords: Option<&str>,
    form: Option<&str>,
    table: bool,
    rules: Option<&str>,
) -> Result<(), Failure> {
    let s = env.space(true)?;
    let fam = TangentFieldFamily::for_space(&s)?;
    let acts = action_matrices(&s, &fam)?;
    let rules = ruleset(env, &s, &acts, rules)?;
    let labels = s.labels();
    let n = s.dim();
    if table {
        let mut t = Table::new(&["class", "normal_form", "cod", "mu", "ind"]);
        for rule in &rules.rules {
            let r = classify(&s, &acts, &rules, &rule_representative(rule, n))?;
            t.push(vec![
                r.class_label.clone().into(),
                rule.normal_form_display(&labels).into(),
                r.codimension.into(),
                r.symplectic_multiplicity.into(),
                r.index_of_isotropy.into(),
            ]);
        }
        env.emit(&t)?;
        return Ok(());
    }
    let (a, input) = match (coords, form) {
        (Some(src), _) => {
            let c = parse_coords(src)?;
            if c.len() != n {
                return Err(AlgresError::Dimension(format!("{} coordinates for a {n}-dimensional space", c.len())).into());
            }
            (RestrictionClass { coords: c }, src.to_string())
        }
        (None, Some(src)) => {
            let f = parse_form(src, &env.germ.variables)?;
            if f.degree() != 2 {
                return Err(AlgresError::Degree(format!("expected a 2-form, got a {}-form", f.degree())).into());
            }
            (s.reduce_to_coordinates(&f)?, src.to_string())
        }
        (None, None) => {
            return Err(AlgresError::parse(1, 1, "classify needs --coords, --form or --table").into());
        }
    };
    let r = classify(&s, &acts, &rules, &a)?;
    let mut t = Table::new(&REPORT_HEADERS);
    t.push(report_row(&r, &labels, input));
    if !r.ruleset_verified {
        t.notes.push("ruleset unverified: generic first-nonzero cascade".into());
    }
    env.emit(&t)?;
    Ok(())
}

fn class_matches(label: &str, filter: &str) -> bool {
    let f = filter.trim();
    label == f || label.split_once('^').is_some_and(|(_, k)| k == f)
}

fn sample() -> ClassSample {
    ClassSample::new(1, ratio(3, 2), ratio(-2, 1))
}

fn outcome_status(o: &TangencyOutcome) -> &'static str {
    if o.maxed {
        "search, lower bound at cap"
    } else {
        "search, exact"
    }
}

fn cmd_invariants(env: &Env, class: Option<&str>, witness: bool) -> Result<(), Failure> {
    let s = env.space(true)?;
    let g = &env.germ;
    let reals = class_realizations(&s, &sample())?;
    let multi = g.branches.len() > 1;
    let mut headers = vec!["class", "ind", "L_N"];
    if multi {
        headers.push("L2");
    }
    headers.push("method");
    if witness {
        headers.push("witness");
    }
    let route = if multi { None } else { Some(AlphaRoute::new(&s, false)?) };
    let mut t = Table::new(&headers);
    let mut matched = false;
    for r in reals.iter().filter(|r| class.is_none_or(|f| class_matches(&r.label, f))) {
        matched = true;
        let mut row: Vec<Cell> = vec![r.label.clone().into(), index_of_isotropy(&s, &r.class)?.into()];
        let mut wit = String::new();
        match &route {
            Some(route) => {
                row.push(route.order(&r.class)?.into());
                row.push("alpha, exact".into());
                if witness {
                    let res = lagrangian_tangency_search(&r.chart, env.cli.degree_cap)?;
                    wit = res.witness.display();
                }
            }
            None => {
                let ln = lagrangian_tangency_search(&r.chart, env.cli.degree_cap)?;
                let l2 = lagrangian_tangency_search(&r.chart[1..], env.cli.degree_cap)?;
                let status = if ln.outcome.maxed || l2.outcome.maxed {
                    outcome_status(&TangencyOutcome { order: ln.outcome.order, maxed: true })
                } else {
                    outcome_status(&ln.outcome)
                };
                row.push(Cell::Outcome(ln.outcome.clone()));
                row.push(Cell::Outcome(l2.outcome.clone()));
                row.push(status.into());
                wit = ln.witness.display();
            }
        }
        if witness {
            row.push(wit.into());
        }
        t.push(row);
    }
    if !matched {
        return Err(AlgresError::Mismatch(format!("no class matches '{}'", class.unwrap_or(""))).into());
    }
    env.emit(&t)?;
    Ok(())
}

fn cmd_geometry(env: &Env) -> Result<(), Failure> {
    let s = env.space(true)?;
    let g = &env.germ;
    let reals = class_realizations(&s, &sample())?;
    let frame = if g.is_builtin_name() {
        TangentFrame::coordinate(g.symplectic_dim)
    } else {
        TangentFrame::derive(g, g.symplectic_dim)?
    };
    let mut t = Table::new(&["class", "condition", "L_N"]);
    for r in &reals {
        let rep = geometric_class(&s, &r.omega, &frame, Some(&r.chart), env.cli.degree_cap)?;
        let ln = rep.ln.map(Cell::Outcome).unwrap_or(Cell::Text(String::new()));
        t.push(vec![r.label.clone().into(), rep.label.as_str().into(), ln]);
    }
    env.emit(&t)?;
    Ok(())
}

fn cmd_verify(env: &Env, instances: usize) -> Result<(), Failure> {
    report_checks(env, &verify_germ(&env.germ, &env.verify_config(instances)), true)
}
