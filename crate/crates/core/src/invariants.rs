//! Lagrangian tangency orders and the geometric conditions on `omega(0)`.
//!
//! Symplectic charts use coordinates `(p1, q1, ..., pn, qn)` with the
//! standard form `sum dp_i ^ dq_i`; variable `2i` is `p_{i+1}`, `2i+1` is
//! `q_{i+1}`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::AlgresError;
use crate::exterior::{exterior_derivative, DiffForm};
use crate::germ::{GermDefinition, RestrictionClass, RestrictionSpace};
use crate::linalg::{rank, sparse_from_dense, Echelon, SparseVec};
use crate::qpoly::{monomial_basis, BranchParam, Monomial, Order, Polynomial, Rational, Series1D, WeightSystem};

pub const DEFAULT_DEGREE_CAP: u32 = 20;
const POISSON_JET: u32 = 24;

pub fn chart_variables(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("{}{}", if i % 2 == 0 { "p" } else { "q" }, i / 2 + 1)).collect()
}

/// `{f, g} = sum_i f_{p_i} g_{q_i} - f_{q_i} g_{p_i}`.
pub fn poisson_bracket(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(f.nvars());
    for i in 0..f.nvars() / 2 {
        let (p, q) = (2 * i, 2 * i + 1);
        out = &out + &(&f.derivative(p) * &g.derivative(q));
        out = &out - &(&f.derivative(q) * &g.derivative(p));
    }
    out
}

/// `p(images)`, truncated to total degree `jet`.
fn substitute(p: &Polynomial, images: &[Polynomial], jet: u32) -> Polynomial {
    let n = images.first().map(|q| q.nvars()).unwrap_or(0);
    let mut out = Polynomial::zero(n);
    for (m, c) in p.terms() {
        let mut t = Polynomial::constant(n, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                t = (&t * &images[i]).truncate_total(jet);
            }
        }
        out = &out + &t;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldEquations {
    pub h: Vec<Polynomial>,
    pub lagrangian: bool,
}

impl SubmanifoldEquations {
    pub fn new(h: Vec<Polynomial>, lagrangian: bool) -> Result<Self, AlgresError> {
        let Some(first) = h.first() else {
            return Err(AlgresError::Dimension("no equations".into()));
        };
        let dim = first.nvars();
        if h.iter().any(|p| p.nvars() != dim) {
            return Err(AlgresError::Dimension("equations live on different charts".into()));
        }
        let grads: Vec<SparseVec> = h
            .iter()
            .map(|p| {
                let row: Vec<Rational> = (0..dim).map(|i| p.coeff(&Monomial::var(dim, i))).collect();
                sparse_from_dense(&row)
            })
            .collect();
        if rank(&grads, dim) != h.len() {
            return Err(AlgresError::InvalidGerm("differentials of H are dependent at 0".into()));
        }
        let s = SubmanifoldEquations { h, lagrangian };
        if lagrangian && !s.poisson_check(POISSON_JET) {
            return Err(AlgresError::Invariant("Poisson brackets do not vanish on {H=0}".into()));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.h[0].nvars()
    }

    /// Graph form: each `H_a` has a linear term in a variable that appears
    /// in no other term of any equation. Returns `z_a -> z_a - H_a / coef`.
    fn graph_substitution(&self) -> Option<Vec<Polynomial>> {
        let dim = self.dim();
        let mut images: Vec<Polynomial> = (0..dim).map(|i| Polynomial::var(dim, i)).collect();
        for (a, ha) in self.h.iter().enumerate() {
            let z = (0..dim).find(|&z| {
                let lin = Monomial::var(dim, z);
                !ha.coeff(&lin).is_zero()
                    && self.h.iter().enumerate().all(|(b, hb)| {
                        hb.terms().all(|(m, _)| m.exponents()[z] == 0 || (b == a && *m == lin))
                    })
            })?;
            let c = ha.coeff(&Monomial::var(dim, z));
            images[z] = &Polynomial::var(dim, z) - &ha.scale(&(Rational::one() / c));
        }
        Some(images)
    }

    /// Pairwise brackets vanish on `{H = 0}` up to total degree `jet`.
    pub fn poisson_check(&self, jet: u32) -> bool {
        let images = self.graph_substitution();
        for i in 0..self.h.len() {
            for j in i + 1..self.h.len() {
                let b = poisson_bracket(&self.h[i], &self.h[j]);
                let r = match &images {
                    Some(im) => substitute(&b, im, jet),
                    None => b.truncate_total(jet),
                };
                if !r.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn display(&self) -> String {
        let names = chart_variables(self.dim());
        self.h
            .iter()
            .map(|p| format!("{} = 0", p.display_with(&names, None)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn tangency_order(b: &BranchParam, s: &SubmanifoldEquations) -> Result<Order, AlgresError> {
    if b.dim() != s.dim() {
        return Err(AlgresError::Dimension(format!("branch in {} dims, equations in {}", b.dim(), s.dim())));
    }
    let mut best = Order::Infinite;
    for h in &s.h {
        best = best.min(h.compose(&b.components, None)?.vanishing_order());
    }
    Ok(best)
}

pub fn multigerm_tangency(bs: &[BranchParam], s: &SubmanifoldEquations) -> Result<Order, AlgresError> {
    if bs.is_empty() {
        return Err(AlgresError::Dimension("no branches".into()));
    }
    let mut best = Order::Infinite;
    for b in bs {
        best = best.min(tangency_order(b, s)?);
    }
    Ok(best)
}

/// Affine system `A x = b`, grown one equation at a time.
#[derive(Clone)]
struct AffineSystem {
    ech: Echelon,
    unknowns: usize,
    feasible: bool,
}

impl AffineSystem {
    fn new(unknowns: usize) -> Self {
        AffineSystem { ech: Echelon::new(unknowns), unknowns, feasible: true }
    }

    fn add(&mut self, mut row: SparseVec, rhs: &Rational) {
        if !rhs.is_zero() {
            row.insert(self.unknowns, rhs.clone());
        }
        if row.is_empty() || !self.feasible {
            return;
        }
        if self.ech.insert(&row).is_none() && !self.ech.reduce(&row).is_empty() {
            self.feasible = false;
        }
    }

    /// A solution with all free unknowns set to zero.
    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.unknowns];
        for row in self.ech.reduced_basis() {
            let p = *row.keys().next().unwrap();
            if let Some(b) = row.get(&self.unknowns) {
                x[p] = b.clone();
            }
        }
        x
    }
}

/// Precomputed linear data of the 1-form route: unknowns are monomial
/// 1-forms `m dx_j` of quasi-degree up to the cutoff.
pub struct AlphaRoute {
    unknowns: usize,
    /// Row `i`: coordinate `i` of `[d alpha]`.
    class_rows: Vec<SparseVec>,
    /// Level `e`: the `t^e` coefficients of every `dx_j` coefficient on every branch.
    levels: Vec<Vec<SparseVec>>,
}

impl AlphaRoute {
    /// One branch only unless `multi_branch` is set.
    pub fn new(space: &RestrictionSpace, multi_branch: bool) -> Result<Self, AlgresError> {
        let germ = &space.germ;
        if !space.closed_only || space.form_degree != 2 {
            return Err(AlgresError::Unsupported("needs the closed 2-form space".into()));
        }
        if germ.branches.len() != 1 && !multi_branch {
            return Err(AlgresError::Unsupported(
                "single-germ route needs one branch; use the generating-function search".into(),
            ));
        }
        let n = germ.dim();
        let w = &germ.weights;
        let mut units: Vec<(usize, Monomial)> = Vec::new();
        for delta in w.min()..=space.cutoff() {
            for j in 0..n {
                if delta >= w.weights()[j] {
                    for m in monomial_basis(delta - w.weights()[j], w) {
                        units.push((j, m));
                    }
                }
            }
        }
        let nu = units.len();
        let mut class_rows = vec![SparseVec::new(); space.dim()];
        for (u, (j, m)) in units.iter().enumerate() {
            let alpha = DiffForm::monomial_form(n, Polynomial::monomial(m.clone()), &[*j]);
            let c = space.reduce_to_coordinates(&exterior_derivative(&alpha)?)?;
            for (i, x) in c.coords.into_iter().enumerate() {
                if !x.is_zero() {
                    class_rows[i].insert(u, x);
                }
            }
        }
        let mut series: Vec<Vec<Series1D>> = Vec::new();
        let mut max_t = 0;
        for b in &germ.branches {
            let s: Vec<Series1D> = units
                .iter()
                .map(|(_, m)| Polynomial::monomial(m.clone()).compose(&b.components, None))
                .collect::<Result<_, _>>()?;
            max_t = max_t.max(s.iter().filter_map(|x| x.degree()).max().unwrap_or(0));
            series.push(s);
        }
        let levels = (0..=max_t)
            .map(|e| {
                let mut rows = Vec::new();
                for s in &series {
                    for j in 0..n {
                        let row: SparseVec = (0..nu)
                            .filter(|&u| units[u].0 == j)
                            .filter_map(|u| {
                                let c = s[u].coeff(e);
                                (!c.is_zero()).then_some((u, c))
                            })
                            .collect();
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
                rows
            })
            .collect();
        Ok(AlphaRoute { unknowns: nu, class_rows, levels })
    }

    /// Largest `k` such that some `alpha` with `[d alpha] = a` has all
    /// coefficients vanishing to order `k` on the branches.
    pub fn order(&self, a: &RestrictionClass) -> Result<Order, AlgresError> {
        if a.len() != self.class_rows.len() {
            return Err(AlgresError::Dimension(format!("class has {} coordinates", a.len())));
        }
        let mut sys = AffineSystem::new(self.unknowns);
        for (row, target) in self.class_rows.iter().zip(&a.coords) {
            sys.add(row.clone(), target);
        }
        if !sys.feasible {
            return Err(AlgresError::Invariant("class is not the class of an exact form".into()));
        }
        for (k, rows) in self.levels.iter().enumerate() {
            for row in rows {
                sys.add(row.clone(), &Rational::zero());
            }
            if !sys.feasible {
                return Ok(Order::Finite(k as u32));
            }
        }
        Ok(Order::Infinite)
    }
}

pub fn lagrangian_tangency_alpha(
    space: &RestrictionSpace,
    a: &RestrictionClass,
    multi_branch: bool,
) -> Result<Order, AlgresError> {
    AlphaRoute::new(space, multi_branch)?.order(a)
}

pub fn lagrangian_tangency_single(space: &RestrictionSpace, a: &RestrictionClass) -> Result<Order, AlgresError> {
    lagrangian_tangency_alpha(space, a, false)
}

/// Graph-type Lagrangians for one choice of base coordinates: pair `i`
/// uses `p_i` as base when `p_base[i]`, else `q_i`. With generating
/// function `S(base)`: `p_i = S_{q_i}` on q-base pairs, `q_i = -S_{p_i}`
/// on p-base pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingFunctionFamily {
    pub p_base: Vec<bool>,
    pub degree_cap: u32,
}

impl GeneratingFunctionFamily {
    pub fn all_splits(n: usize, degree_cap: u32) -> Vec<Self> {
        (0u32..(1 << n))
            .map(|mask| GeneratingFunctionFamily {
                p_base: (0..n).map(|i| mask & (1 << i) != 0).collect(),
                degree_cap,
            })
            .collect()
    }

    pub fn base_index(&self, i: usize) -> usize {
        if self.p_base[i] {
            2 * i
        } else {
            2 * i + 1
        }
    }

    pub fn fiber_index(&self, i: usize) -> usize {
        self.base_index(i) ^ 1
    }

    /// Monomials of `S` in the base variables, degrees `2..=D`.
    pub fn monomials(&self) -> Vec<Monomial> {
        let w = WeightSystem::new(vec![1; self.p_base.len()]).unwrap();
        (2..=self.degree_cap).flat_map(|d| monomial_basis(d, &w)).collect()
    }

    /// `H_i` for the generating function with the given coefficients.
    pub fn equations(&self, coeffs: &[Rational]) -> Vec<Polynomial> {
        let n = self.p_base.len();
        let dim = 2 * n;
        let embed = |m: &Monomial| {
            let mut e = vec![0; dim];
            for i in 0..n {
                e[self.base_index(i)] = m.exponents()[i];
            }
            Monomial(e)
        };
        let mut s = Polynomial::zero(dim);
        for (m, c) in self.monomials().iter().zip(coeffs) {
            s.add_term(embed(m), c);
        }
        (0..n)
            .map(|i| {
                let ds = s.derivative(self.base_index(i));
                let z = Polynomial::var(dim, self.fiber_index(i));
                if self.p_base[i] {
                    &z + &ds
                } else {
                    &z - &ds
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyOutcome {
    pub order: Order,
    /// The order is only a lower bound: the degree cap was reached.
    pub maxed: bool,
}

impl fmt::Display for TangencyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.maxed {
            write!(f, ">={}", self.order)
        } else {
            write!(f, "{}", self.order)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: TangencyOutcome,
    pub family: GeneratingFunctionFamily,
    pub witness: SubmanifoldEquations,
    /// Orders below this are decided exactly by the degree cap.
    pub bound: Order,
}

struct Product {
    memo: HashMap<Vec<u32>, Series1D>,
    base: Vec<Series1D>,
}

impl Product {
    fn get(&mut self, e: &[u32]) -> Series1D {
        if let Some(s) = self.memo.get(e) {
            return s.clone();
        }
        let s = match e.iter().position(|&x| x > 0) {
            None => Series1D::one(),
            Some(i) => {
                let mut f = e.to_vec();
                f[i] -= 1;
                let rest = self.get(&f);
                rest.mul_trunc(&self.base[i], None)
            }
        };
        self.memo.insert(e.to_vec(), s.clone());
        s
    }
}

/// Best tangency of the branches (min over them) to a Lagrangian of one
/// generating-function family.
pub fn search_split(bs: &[BranchParam], fam: &GeneratingFunctionFamily) -> Result<SearchResult, AlgresError> {
    let n = fam.p_base.len();
    if bs.is_empty() {
        return Err(AlgresError::Dimension("no branches".into()));
    }
    if bs.iter().any(|b| b.dim() != 2 * n) {
        return Err(AlgresError::Dimension(format!("branches must live in a {}-dimensional chart", 2 * n)));
    }
    let monos = fam.monomials();
    let nu = monos.len();
    // per branch, per pair: column series and the fiber series
    let mut cols: Vec<Vec<Vec<(usize, Series1D)>>> = Vec::new();
    let mut fibers: Vec<Vec<Series1D>> = Vec::new();
    let mut max_t = 0u32;
    let mut o_min = Order::Infinite;
    for b in bs {
        let base: Vec<Series1D> = (0..n).map(|i| b.components[fam.base_index(i)].clone()).collect();
        for s in &base {
            o_min = o_min.min(s.vanishing_order());
        }
        let mut prod = Product { memo: HashMap::new(), base };
        let mut per_pair = Vec::new();
        for i in 0..n {
            let sign = if fam.p_base[i] { Rational::one() } else { -Rational::one() };
            let mut v = Vec::new();
            for (u, m) in monos.iter().enumerate() {
                let e = m.exponents()[i];
                if e == 0 {
                    continue;
                }
                let mut f = m.exponents().to_vec();
                f[i] -= 1;
                let s = prod.get(&f).scale(&(&sign * Rational::from_integer(e.into())));
                if !s.is_zero() {
                    max_t = max_t.max(s.degree().unwrap());
                    v.push((u, s));
                }
            }
            per_pair.push(v);
        }
        let fib: Vec<Series1D> = (0..n).map(|i| b.components[fam.fiber_index(i)].clone()).collect();
        for s in &fib {
            max_t = max_t.max(s.degree().unwrap_or(0));
        }
        cols.push(per_pair);
        fibers.push(fib);
    }
    let bound = match o_min {
        Order::Finite(o) => Order::Finite(fam.degree_cap.saturating_mul(o)),
        Order::Infinite => Order::Infinite,
    };
    let add_level = |sys: &mut AffineSystem, e: u32| {
        for (bi, per_pair) in cols.iter().enumerate() {
            for (i, v) in per_pair.iter().enumerate() {
                let row: SparseVec = v
                    .iter()
                    .filter_map(|(u, s)| {
                        let c = s.coeff(e);
                        (!c.is_zero()).then_some((*u, c))
                    })
                    .collect();
                // z + sum s_u col_u = 0
                sys.add(row, &-fibers[bi][i].coeff(e));
            }
        }
    };
    let mut sys = AffineSystem::new(nu);
    let mut k = 0u32;
    let mut last_ok = sys.clone();
    let outcome = loop {
        if Order::Finite(k) >= bound || k > max_t {
            // everything below the bound holds; test the full identity
            let mut full = sys.clone();
            for e in k..=max_t {
                add_level(&mut full, e);
            }
            if full.feasible {
                last_ok = full;
                break TangencyOutcome { order: Order::Infinite, maxed: false };
            }
            break TangencyOutcome { order: Order::Finite(k), maxed: true };
        }
        add_level(&mut sys, k);
        if !sys.feasible {
            break TangencyOutcome { order: Order::Finite(k), maxed: false };
        }
        last_ok = sys.clone();
        k += 1;
    };
    let witness = SubmanifoldEquations::new(fam.equations(&last_ok.solution()), true)?;
    Ok(SearchResult { outcome, family: fam.clone(), witness, bound })
}

/// Maximize over all base splits. Ties keep the first split found.
pub fn lagrangian_tangency_search(bs: &[BranchParam], degree_cap: u32) -> Result<SearchResult, AlgresError> {
    let dim = bs.first().map(|b| b.dim()).ok_or_else(|| AlgresError::Dimension("no branches".into()))?;
    if dim % 2 != 0 {
        return Err(AlgresError::Dimension("symplectic chart must be even-dimensional".into()));
    }
    if degree_cap == 0 {
        return Err(AlgresError::Invariant("degree cap must be positive".into()));
    }
    let mut best: Option<SearchResult> = None;
    for fam in GeneratingFunctionFamily::all_splits(dim / 2, degree_cap) {
        let r = search_split(bs, &fam)?;
        let better = match &best {
            None => true,
            Some(b) => {
                r.outcome.order > b.outcome.order || (r.outcome.order == b.outcome.order && b.outcome.maxed && !r.outcome.maxed)
            }
        };
        if better {
            let done = r.outcome.order.is_infinite();
            best = Some(r);
            if done {
                break;
            }
        }
    }
    Ok(best.unwrap())
}

/// Subspaces of the tangent space at 0, as spanning vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFrame {
    pub w: Vec<Vec<Rational>>,
    pub l: Vec<Rational>,
    pub v: Vec<Vec<Rational>>,
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); dim];
    e[i] = Rational::one();
    e
}

/// Scale so the first nonzero entry is 1.
fn normalized(mut v: Vec<Rational>) -> Vec<Rational> {
    if let Some(c) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x /= &c;
        }
    }
    v
}

fn span_rank(vs: &[Vec<Rational>]) -> usize {
    let dim = vs.first().map(|v| v.len()).unwrap_or(0);
    rank(&vs.iter().map(|v| sparse_from_dense(v)).collect::<Vec<_>>(), dim)
}

impl TangentFrame {
    /// `W = span(d1, d2, d3)`, `l = span(d3)`, `V = span(d2, d3)`.
    pub fn coordinate(dim: usize) -> Self {
        TangentFrame { w: (0..3).map(|i| unit(dim, i)).collect(), l: unit(dim, 2), v: vec![unit(dim, 1), unit(dim, 2)] }
    }

    /// Frame from the branches: `l` from the leading terms, `V` from the two
    /// lowest-order independent directions of the most singular branch, `W`
    /// from the germ chart.
    pub fn derive(germ: &GermDefinition, dim: usize) -> Result<Self, AlgresError> {
        let n = germ.dim();
        if dim < n {
            return Err(AlgresError::Dimension(format!("chart of dimension {dim} cannot hold the germ")));
        }
        let leading = |b: &BranchParam, e: u32| -> Vec<Rational> {
            let mut v: Vec<Rational> = b.components.iter().map(|c| c.coeff(e)).collect();
            v.resize(dim, Rational::zero());
            normalized(v)
        };
        let order_of = |b: &BranchParam| {
            b.components.iter().map(|c| c.vanishing_order()).min().unwrap_or(Order::Infinite)
        };
        let mut l: Option<Vec<Rational>> = None;
        for b in &germ.branches {
            let Order::Finite(o) = order_of(b) else { continue };
            let v = leading(b, o);
            match &l {
                None => l = Some(v),
                Some(l0) if span_rank(&[l0.clone(), v.clone()]) != 1 => {
                    return Err(AlgresError::InvalidGerm("branches have different tangent lines".into()));
                }
                _ => {}
            }
        }
        let l = l.ok_or_else(|| AlgresError::InvalidGerm("branch vanishes identically".into()))?;
        let singular = germ
            .branches
            .iter()
            .max_by_key(|b| match order_of(b) {
                Order::Finite(o) => o,
                Order::Infinite => 0,
            })
            .unwrap();
        let mut v = vec![l.clone()];
        let top = singular.components.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
        for e in 1..=top {
            let d = leading(singular, e);
            if d.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut trial = v.clone();
            trial.push(d.clone());
            if span_rank(&trial) == trial.len() {
                v.push(d);
                break;
            }
        }
        if v.len() < 2 {
            return Err(AlgresError::InvalidGerm("branches span only a line".into()));
        }
        v.swap(0, 1);
        Ok(TangentFrame { w: (0..n).map(|i| unit(dim, i)).collect(), l, v })
    }

    pub fn check_nested(&self) -> Result<(), AlgresError> {
        let mut lv = self.v.clone();
        lv.push(self.l.clone());
        if span_rank(&lv) != span_rank(&self.v) {
            return Err(AlgresError::Invariant("l is not contained in V".into()));
        }
        let mut vw = self.w.clone();
        vw.extend(self.v.iter().cloned());
        if span_rank(&vw) != span_rank(&self.w) {
            return Err(AlgresError::Invariant("V is not contained in W".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometricLabel {
    RestrictedToVNonzero,
    KernelNotTangent,
    KernelTangent,
    VanishesOnW,
    LagrangianContained,
}

impl GeometricLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GeometricLabel::RestrictedToVNonzero => "omega|V != 0",
            GeometricLabel::KernelNotTangent => "omega|V = 0, ker omega != l",
            GeometricLabel::KernelTangent => "omega|V = 0, ker omega = l",
            GeometricLabel::VanishesOnW => "omega|W = 0",
            GeometricLabel::LagrangianContained => "contained in a smooth Lagrangian",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            GeometricLabel::RestrictedToVNonzero,
            GeometricLabel::KernelNotTangent,
            GeometricLabel::KernelTangent,
            GeometricLabel::VanishesOnW,
            GeometricLabel::LagrangianContained,
        ]
        .into_iter()
        .find(|l| l.as_str() == s)
    }
}

impl fmt::Display for GeometricLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct GeometricReport {
    pub label: GeometricLabel,
    pub class: RestrictionClass,
    /// L_N, filled in the `omega|W = 0` regime when a route is available.
    pub ln: Option<TangencyOutcome>,
}

fn bilinear(m: &[Vec<Rational>], u: &[Rational], v: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() {
                s += ui * &m[i][j] * vj;
            }
        }
    }
    s
}

/// Classify `(N, omega)` by `omega(0)` on the frame. `chart` gives the
/// branches in Darboux coordinates for the search route on multi-branch
/// germs.
pub fn geometric_class(
    space: &RestrictionSpace,
    omega: &DiffForm,
    frame: &TangentFrame,
    chart: Option<&[BranchParam]>,
    degree_cap: u32,
) -> Result<GeometricReport, AlgresError> {
    frame.check_nested()?;
    let germ = &space.germ;
    let dim = omega.dim();
    if omega.degree() != 2 || dim < germ.dim() || frame.l.len() != dim {
        return Err(AlgresError::Dimension("omega must be a 2-form on the frame's chart".into()));
    }
    let m = omega.constant_matrix();
    let mrows: Vec<SparseVec> = m.iter().map(|r| sparse_from_dense(r)).collect();
    if rank(&mrows, dim) != dim {
        return Err(AlgresError::Invariant("omega(0) is degenerate".into()));
    }
    let class = space.reduce_to_coordinates(&omega.restrict_to_first(germ.dim()))?;
    let on_v = bilinear(&m, &frame.v[0], &frame.v[1]);
    let w_zero = frame.w.iter().all(|a| frame.w.iter().all(|b| bilinear(&m, a, b).is_zero()));
    let l_in_kernel = frame.w.iter().all(|b| bilinear(&m, &frame.l, b).is_zero());
    let label = if !on_v.is_zero() {
        GeometricLabel::RestrictedToVNonzero
    } else if !w_zero {
        if l_in_kernel {
            GeometricLabel::KernelTangent
        } else {
            GeometricLabel::KernelNotTangent
        }
    } else if class.is_zero() {
        GeometricLabel::LagrangianContained
    } else {
        GeometricLabel::VanishesOnW
    };
    let ln = if label == GeometricLabel::VanishesOnW {
        if germ.branches.len() == 1 {
            Some(TangencyOutcome { order: lagrangian_tangency_single(space, &class)?, maxed: false })
        } else if let Some(bs) = chart {
            Some(lagrangian_tangency_search(bs, degree_cap)?.outcome)
        } else {
            None
        }
    } else {
        None
    };
    Ok(GeometricReport { label, class, ln })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series_tuple;
    use crate::qpoly::rat;

    fn branch(src: &str) -> BranchParam {
        BranchParam::new("C", parse_series_tuple(src, "t").unwrap()).unwrap()
    }

    #[test]
    fn straight_line_is_lagrangian_at_degree_one() {
        let r = lagrangian_tangency_search(&[branch("(t, 0, 0, 0)")], 1).unwrap();
        assert_eq!(r.outcome.order, Order::Infinite);
        assert!(!r.outcome.maxed);
    }

    #[test]
    fn tangency_order_takes_minimum() {
        let b = branch("(t^5, -t^4, -t^3, 0)");
        let x = |i| Polynomial::var(4, i);
        let s = SubmanifoldEquations::new(vec![x(0), x(2)], false).unwrap();
        assert_eq!(tangency_order(&b, &s).unwrap(), Order::Finite(3));
    }

    #[test]
    fn dependent_equations_rejected() {
        let x = |i| Polynomial::var(4, i);
        assert!(SubmanifoldEquations::new(vec![x(0), x(0).scale(&rat(2))], false).is_err());
    }

    #[test]
    fn non_lagrangian_rejected_by_poisson_check() {
        let x = |i| Polynomial::var(4, i);
        // p1 = 0, q1 = 0 is symplectic, not Lagrangian
        assert!(SubmanifoldEquations::new(vec![x(0), x(1)], true).is_err());
        assert!(SubmanifoldEquations::new(vec![x(0), x(2)], true).is_ok());
    }
}
