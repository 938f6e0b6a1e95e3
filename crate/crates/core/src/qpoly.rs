//! Exact multivariate polynomials over Q with a quasi-homogeneous grading,
//! plus univariate series used for compositions along curve parameterizations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgresError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Vanishing order; `Infinite` for the zero function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn min(self, other: Order) -> Order {
        match (self, other) {
            (Order::Infinite, o) | (o, Order::Infinite) => o,
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.min(b)),
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Order::Infinite, Order::Infinite) => Equal,
            (Order::Infinite, _) => Greater,
            (_, Order::Infinite) => Less,
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<u32>,
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self, AlgresError> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(AlgresError::InvalidGerm(format!(
                "weights must be positive, got {weights:?}"
            )));
        }
        Ok(WeightSystem { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn min(&self) -> u32 {
        *self.weights.iter().min().unwrap()
    }

    pub fn max(&self) -> u32 {
        *self.weights.iter().max().unwrap()
    }

    pub fn sum(&self) -> u32 {
        self.weights.iter().sum()
    }

    /// Largest sum of `p` distinct weights.
    pub fn max_sum_of(&self, p: usize) -> u32 {
        let mut w = self.weights.clone();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w.iter().take(p).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

pub fn quasi_degree(m: &Monomial, w: &WeightSystem) -> Result<u32, AlgresError> {
    if m.dim() != w.dim() {
        return Err(AlgresError::Dimension(format!(
            "monomial has {} exponents, weight system has {}",
            m.dim(),
            w.dim()
        )));
    }
    Ok(m.0.iter().zip(w.weights()).map(|(e, w)| e * w).sum())
}

/// All monomials of quasi-degree `delta`, in canonical (lexicographic) order.
pub fn monomial_basis(delta: u32, w: &WeightSystem) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, w: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        for e in 0..=left / w[i] {
            cur.push(e);
            rec(i + 1, left - e * w[i], w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, delta, w.weights(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Sparse polynomial in `nvars` variables. Terms are kept in lexicographic
/// exponent order; `sorted_terms` gives the graded canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(nvars, Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.dim(), nvars, "monomial dimension mismatch");
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        let n = m.dim();
        Self::term(n, m, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), &(v * c));
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (k, v) in &self.terms {
            out.terms.insert(k.mul(m), v.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, v) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, &(v * rat(e as i64)));
        }
        out
    }

    /// Quasi-degree if all monomials share one; `None` for zero or mixed.
    pub fn homogeneous_degree(&self, w: &WeightSystem) -> Option<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = quasi_degree(m, w).ok()?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Split into quasi-homogeneous pieces keyed by quasi-degree.
    pub fn graded_pieces(&self, w: &WeightSystem) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, v) in &self.terms {
            let d = quasi_degree(m, w).expect("dimension checked by caller");
            out.entry(d)
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .terms
                .insert(m.clone(), v.clone());
        }
        out
    }

    /// Terms in canonical order: by quasi-degree, then lexicographic exponents.
    pub fn sorted_terms(&self, w: &WeightSystem) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| {
            let da = quasi_degree(a, w).unwrap_or(0);
            let db = quasi_degree(b, w).unwrap_or(0);
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        v
    }

    /// Lowest total (ordinary) degree among the terms.
    pub fn ordinary_order(&self) -> Order {
        self.terms
            .keys()
            .map(|m| Order::Finite(m.total_degree()))
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// Compose with one series per variable, keeping only t-exponents below `trunc`.
    pub fn compose(&self, comps: &[Series1D], trunc: Option<u32>) -> Result<Series1D, AlgresError> {
        if comps.len() != self.nvars {
            return Err(AlgresError::Dimension(format!(
                "polynomial in {} variables composed with {} components",
                self.nvars,
                comps.len()
            )));
        }
        let mut cache: Vec<Vec<Series1D>> = vec![vec![Series1D::one()]; self.nvars];
        let mut out = Series1D::zero();
        for (m, c) in &self.terms {
            let mut acc = Series1D::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul_trunc(&comps[i], trunc);
                    cache[i].push(next);
                }
                if e > 0 {
                    acc = acc.mul_trunc(&cache[i][e as usize], trunc);
                }
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Keep only terms of total degree below `k`.
    pub fn truncate_total(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.total_degree() < k {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String], w: Option<&WeightSystem>) -> String {
        let terms = match w {
            Some(w) => self.sorted_terms(w),
            None => self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect(),
        };
        format_terms(terms.iter().map(|(m, c)| (monomial_string(m, names), c.clone())))
    }
}

pub(crate) fn monomial_string(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// Render `c*body` terms with signs; an empty body denotes a constant.
pub(crate) fn format_terms(terms: impl Iterator<Item = (String, Rational)>) -> String {
    let mut out = String::new();
    for (body, c) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if body.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{a}*{body}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names, None))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

/// Exact finite power series in one variable `t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Series1D {
    coeffs: BTreeMap<u32, Rational>,
}

impl Series1D {
    pub fn zero() -> Self {
        Series1D::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: u32, c: Rational) -> Self {
        let mut s = Series1D::zero();
        if !c.is_zero() {
            s.coeffs.insert(e, c);
        }
        s
    }

    pub fn from_coeffs(pairs: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut s = Series1D::zero();
        for (e, c) in pairs {
            s.add_term(e, &c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: u32) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&u32, &Rational)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn add_assign(&mut self, other: &Series1D) {
        for (e, c) in &other.coeffs {
            self.add_term(*e, c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Series1D {
        Series1D::from_coeffs(self.coeffs.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn mul_trunc(&self, other: &Series1D, trunc: Option<u32>) -> Series1D {
        let mut out = Series1D::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if trunc.is_some_and(|k| e >= k) {
                    break;
                }
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }

    pub fn derivative(&self) -> Series1D {
        Series1D::from_coeffs(
            self.coeffs
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c * rat(*e as i64))),
        )
    }

    pub fn vanishing_order(&self) -> Order {
        match self.coeffs.keys().next() {
            Some(&e) => Order::Finite(e),
            None => Order::Infinite,
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        format_terms(self.coeffs.iter().map(|(e, c)| {
            let body = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            (body, c.clone())
        }))
    }
}

impl Mul for &Series1D {
    type Output = Series1D;
    fn mul(self, rhs: &Series1D) -> Series1D {
        self.mul_trunc(rhs, None)
    }
}

impl fmt::Display for Series1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

pub fn vanishing_order(s: &Series1D) -> Order {
    s.vanishing_order()
}

/// Branch parameterization: one polynomial in `t` per ambient variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchParam {
    pub label: String,
    pub components: Vec<Series1D>,
}

impl BranchParam {
    pub fn new(label: impl Into<String>, components: Vec<Series1D>) -> Result<Self, AlgresError> {
        let label = label.into();
        if components.iter().any(|c| !c.coeff(0).is_zero()) {
            return Err(AlgresError::InvalidGerm(format!(
                "branch {label} does not pass through the origin"
            )));
        }
        Ok(BranchParam { label, components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

pub fn substitute_branch(p: &Polynomial, b: &BranchParam) -> Result<Series1D, AlgresError> {
    p.compose(&b.components, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w8() -> WeightSystem {
        WeightSystem::new(vec![6, 5, 4]).unwrap()
    }

    fn brute_basis(delta: u32, w: &[u32]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let bound = delta / w.iter().min().unwrap() + 1;
        for a in 0..bound {
            for b in 0..bound {
                for c in 0..bound {
                    if a * w[0] + b * w[1] + c * w[2] == delta {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn quasi_degree_examples() {
        assert_eq!(quasi_degree(&Monomial(vec![0, 0, 3]), &w8()).unwrap(), 12);
        assert_eq!(quasi_degree(&Monomial(vec![0, 0, 0]), &w8()).unwrap(), 0);
        let w9 = WeightSystem::new(vec![5, 4, 3]).unwrap();
        let m = Monomial(vec![0, 2, 1]);
        let by_hand: u32 = 4 + 4 + 3;
        assert_eq!(quasi_degree(&m, &w9).unwrap(), by_hand);
        assert!(quasi_degree(&Monomial(vec![1, 1]), &w9).is_err());
    }

    #[test]
    fn basis_matches_enumeration() {
        let b = monomial_basis(10, &w8());
        assert_eq!(b, vec![Monomial(vec![0, 2, 0]), Monomial(vec![1, 0, 1])]);
        assert_eq!(monomial_basis(0, &w8()), vec![Monomial(vec![0, 0, 0])]);
        assert!(monomial_basis(1, &w8()).is_empty());
        for delta in 0..40 {
            for w in [[6, 5, 4], [5, 4, 3], [1, 1, 1], [2, 3, 7]] {
                let ws = WeightSystem::new(w.to_vec()).unwrap();
                let got: Vec<Vec<u32>> = monomial_basis(delta, &ws).into_iter().map(|m| m.0).collect();
                assert_eq!(got, brute_basis(delta, &w), "delta {delta} weights {w:?}");
            }
        }
    }

    #[test]
    fn branch_substitution() {
        let n = 3;
        let x = |i| Polynomial::var(n, i);
        let g2 = &x(1).pow(2) + &(&x(0) * &x(2));
        let b = BranchParam::new(
            "C",
            vec![
                Series1D::monomial(6, rat(1)),
                Series1D::monomial(5, rat(1)),
                Series1D::monomial(4, rat(-1)),
            ],
        )
        .unwrap();
        assert!(substitute_branch(&g2, &b).unwrap().is_zero());
        assert_eq!(substitute_branch(&x(1), &b).unwrap(), Series1D::monomial(5, rat(1)));
        let g1 = &x(0).pow(2) + &(&x(1) * &x(2).pow(2));
        let c2 = BranchParam::new(
            "C2",
            vec![
                Series1D::monomial(5, rat(1)),
                Series1D::monomial(4, rat(-1)),
                Series1D::monomial(3, rat(-1)),
            ],
        )
        .unwrap();
        assert!(substitute_branch(&g1, &c2).unwrap().is_zero());
    }

    #[test]
    fn vanishing_orders() {
        assert_eq!(Series1D::monomial(5, rat(1)).vanishing_order(), Order::Finite(5));
        assert_eq!(Series1D::zero().vanishing_order(), Order::Infinite);
        assert_eq!(Series1D::monomial(18, ratio(-4, 3)).vanishing_order(), Order::Finite(18));
    }

    #[test]
    fn order_comparisons() {
        assert!(Order::Infinite > Order::Finite(1000));
        assert_eq!(Order::Finite(3).min(Order::Infinite), Order::Finite(3));
    }

    #[test]
    fn display_canonical() {
        let n = 3;
        let p = &Polynomial::var(n, 0).pow(2) + &Polynomial::var(n, 2).pow(3);
        let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        assert_eq!(p.display_with(&names, Some(&w8())), "x3^3 + x1^2");
        let q = Polynomial::term(n, Monomial(vec![0, 1, 0]), ratio(-1, 2));
        assert_eq!(q.display_with(&names, Some(&w8())), "-1/2*x2");
    }
}
