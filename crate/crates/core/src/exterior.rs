//! Differential forms of degree at most 3 with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::AlgresError;
use crate::qpoly::{
    format_terms, monomial_string, quasi_degree, rat, BranchParam, Monomial, Order, Polynomial,
    Rational, Series1D, WeightSystem,
};

pub const MAX_FORM_DEGREE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Polynomial>,
}

/// Sort an index list, returning the permutation sign, or None on a repeat.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl DiffForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        DiffForm { dim, degree, terms: BTreeMap::new() }
    }

    pub fn function(p: Polynomial) -> Self {
        let mut f = DiffForm::zero(p.nvars(), 0);
        f.add_term(vec![], &p);
        f
    }

    pub fn dx(dim: usize, i: usize) -> Self {
        let mut f = DiffForm::zero(dim, 1);
        f.add_term(vec![i], &Polynomial::one(dim));
        f
    }

    /// `coeff * dx_{idx[0]} ∧ dx_{idx[1]} ∧ ...`, with any index order.
    pub fn monomial_form(dim: usize, coeff: Polynomial, idx: &[usize]) -> Self {
        let mut f = DiffForm::zero(dim, idx.len());
        if let Some((sorted, sign)) = sort_with_sign(idx) {
            f.add_term(sorted, &coeff.scale(&rat(sign)));
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> Polynomial {
        self.terms.get(idx).cloned().unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    /// Polynomial of a 0-form.
    pub fn as_function(&self) -> Polynomial {
        self.coeff(&[])
    }

    pub fn add_term(&mut self, idx: Vec<usize>, p: &Polynomial) {
        assert_eq!(idx.len(), self.degree);
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(idx.clone()).or_insert_with(|| Polynomial::zero(self.dim));
        e.add_scaled(p, &Rational::one());
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn add_scaled(&mut self, other: &DiffForm, c: &Rational) {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        for (idx, p) in &other.terms {
            self.add_term(idx.clone(), &p.scale(c));
        }
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> DiffForm {
        let mut out = DiffForm::zero(self.dim, self.degree);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), &p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, f: &Polynomial) -> DiffForm {
        let mut out = DiffForm::zero(self.dim, self.degree);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), &(p * f));
        }
        out
    }

    /// Re-embed into a chart of dimension `dim` (extra variables unused).
    pub fn with_dim(&self, dim: usize) -> DiffForm {
        assert!(dim >= self.dim);
        let mut out = DiffForm::zero(dim, self.degree);
        for (idx, p) in &self.terms {
            let mut q = Polynomial::zero(dim);
            for (m, c) in p.terms() {
                let mut e = m.0.clone();
                e.resize(dim, 0);
                q.add_term(Monomial(e), c);
            }
            out.add_term(idx.clone(), &q);
        }
        out
    }

    /// Restrict to the first `dim` coordinates: drop terms with higher
    /// differentials and set the higher variables to zero.
    pub fn restrict_to_first(&self, dim: usize) -> DiffForm {
        let mut out = DiffForm::zero(dim, self.degree);
        for (idx, p) in &self.terms {
            if idx.iter().any(|&i| i >= dim) {
                continue;
            }
            let mut q = Polynomial::zero(dim);
            for (m, c) in p.terms() {
                if m.0[dim..].iter().any(|&e| e > 0) {
                    continue;
                }
                q.add_term(Monomial(m.0[..dim].to_vec()), c);
            }
            out.add_term(idx.clone(), &q);
        }
        out
    }

    /// Quasi-degree of a homogeneous form: coefficient degree plus the
    /// weights of the differentials. `None` for zero or mixed forms.
    pub fn homogeneous_degree(&self, w: &WeightSystem) -> Option<u32> {
        let mut deg = None;
        for (idx, p) in &self.terms {
            let dw: u32 = idx.iter().map(|&i| w.weights()[i]).sum();
            for (m, _) in p.terms() {
                let d = quasi_degree(m, w).ok()? + dw;
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn graded_pieces(&self, w: &WeightSystem) -> BTreeMap<u32, DiffForm> {
        let mut out: BTreeMap<u32, DiffForm> = BTreeMap::new();
        for (idx, p) in &self.terms {
            let dw: u32 = idx.iter().map(|&i| w.weights()[i]).sum();
            for (d, piece) in p.graded_pieces(w) {
                out.entry(d + dw)
                    .or_insert_with(|| DiffForm::zero(self.dim, self.degree))
                    .add_term(idx.clone(), &piece);
            }
        }
        out
    }

    /// Value of the constant part as an antisymmetric matrix (2-forms only).
    pub fn constant_matrix(&self) -> Vec<Vec<Rational>> {
        assert_eq!(self.degree, 2);
        let mut m = vec![vec![Rational::zero(); self.dim]; self.dim];
        for (idx, p) in &self.terms {
            let c = p.constant_term();
            m[idx[0]][idx[1]] = c.clone();
            m[idx[1]][idx[0]] = -c;
        }
        m
    }

    pub fn display_with(&self, names: &[String], w: Option<&WeightSystem>) -> String {
        let mut items: Vec<(Option<u32>, usize, Vec<usize>, Monomial, Rational)> = Vec::new();
        for (k, (idx, p)) in self.terms.iter().enumerate() {
            for (m, c) in p.terms() {
                let d = w.map(|w| {
                    quasi_degree(m, w).unwrap() + idx.iter().map(|&i| w.weights()[i]).sum::<u32>()
                });
                items.push((d, k, idx.clone(), m.clone(), c.clone()));
            }
        }
        items.sort_by(|a, b| a.0.cmp(&b.0).then(b.2.cmp(&a.2)).then(a.3.cmp(&b.3)));
        format_terms(items.into_iter().map(|(_, _, idx, m, c)| {
            let mut parts = Vec::new();
            let ms = monomial_string(&m, names);
            if !ms.is_empty() {
                parts.push(ms);
            }
            let dxs: Vec<String> = idx.iter().map(|&i| format!("d{}", names[i])).collect();
            if !dxs.is_empty() {
                parts.push(dxs.join("^"));
            }
            (parts.join("*"), c)
        }))
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names, None))
    }
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> Result<DiffForm, AlgresError> {
    if a.dim != b.dim {
        return Err(AlgresError::Dimension(format!("wedge of forms on R^{} and R^{}", a.dim, b.dim)));
    }
    let deg = a.degree + b.degree;
    if deg > MAX_FORM_DEGREE {
        return Err(AlgresError::Degree(format!("wedge would have degree {deg}")));
    }
    let mut out = DiffForm::zero(a.dim, deg);
    for (ia, pa) in &a.terms {
        for (ib, pb) in &b.terms {
            let mut idx = ia.clone();
            idx.extend_from_slice(ib);
            if let Some((sorted, sign)) = sort_with_sign(&idx) {
                out.add_term(sorted, &(pa * pb).scale(&rat(sign)));
            }
        }
    }
    Ok(out)
}

pub fn exterior_derivative(a: &DiffForm) -> Result<DiffForm, AlgresError> {
    if a.degree >= MAX_FORM_DEGREE {
        return Err(AlgresError::Degree(format!("d of a {}-form", a.degree)));
    }
    let mut out = DiffForm::zero(a.dim, a.degree + 1);
    for (idx, p) in &a.terms {
        for j in 0..a.dim {
            let dp = p.derivative(j);
            if dp.is_zero() {
                continue;
            }
            let mut full = vec![j];
            full.extend_from_slice(idx);
            if let Some((sorted, sign)) = sort_with_sign(&full) {
                out.add_term(sorted, &dp.scale(&rat(sign)));
            }
        }
    }
    Ok(out)
}

/// Polynomial vector field `sum X_i d/dx_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub components: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        VectorField { components }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { components: vec![Polynomial::zero(dim); dim] }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn scale_by(&self, f: &Polynomial) -> VectorField {
        VectorField { components: self.components.iter().map(|c| c * f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.nvars());
        for (i, c) in self.components.iter().enumerate() {
            out = &out + &(c * &f.derivative(i));
        }
        out
    }
}

pub fn euler_field(w: &WeightSystem) -> VectorField {
    let n = w.dim();
    VectorField {
        components: (0..n)
            .map(|i| Polynomial::var(n, i).scale(&rat(w.weights()[i] as i64)))
            .collect(),
    }
}

pub fn interior_product(x: &VectorField, a: &DiffForm) -> Result<DiffForm, AlgresError> {
    if a.degree == 0 {
        return Err(AlgresError::Degree("interior product of a 0-form".into()));
    }
    if x.dim() != a.dim {
        return Err(AlgresError::Dimension(format!(
            "field on R^{} contracted with form on R^{}",
            x.dim(),
            a.dim
        )));
    }
    let mut out = DiffForm::zero(a.dim, a.degree - 1);
    for (idx, p) in &a.terms {
        for (pos, &i) in idx.iter().enumerate() {
            let mut rest = idx.clone();
            rest.remove(pos);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            out.add_term(rest, &(p * &x.components[i]).scale(&rat(sign)));
        }
    }
    Ok(out)
}

/// Cartan formula `L_X a = d(i_X a) + i_X(da)`.
pub fn lie_derivative(x: &VectorField, a: &DiffForm) -> Result<DiffForm, AlgresError> {
    let mut out = DiffForm::zero(a.dim, a.degree);
    if a.degree > 0 {
        out = out.add(&exterior_derivative(&interior_product(x, a)?)?);
    }
    if a.degree < MAX_FORM_DEGREE {
        out = out.add(&interior_product(x, &exterior_derivative(a)?)?);
    }
    Ok(out)
}

/// Minimum vanishing order of the coefficients along the branch.
pub fn coefficient_orders_on_branch(a: &DiffForm, b: &BranchParam) -> Result<Order, AlgresError> {
    let mut best = Order::Infinite;
    for p in a.terms.values() {
        best = best.min(p.compose(&b.components, None)?.vanishing_order());
    }
    Ok(best)
}

/// Pullback to a curve: the dt-coefficient for 1-forms, the dt^dt
/// coefficient (antisymmetrized) for 2-forms, the function for 0-forms.
pub fn pullback_to_branch(a: &DiffForm, b: &BranchParam) -> Result<Series1D, AlgresError> {
    let comps = &b.components;
    let derivs: Vec<Series1D> = comps.iter().map(|c| c.derivative()).collect();
    let mut out = Series1D::zero();
    for (idx, p) in &a.terms {
        let f = p.compose(comps, None)?;
        let mut acc = Series1D::zero();
        match idx.len() {
            0 => acc = f,
            1 => acc = &f * &derivs[idx[0]],
            2 => {
                let s = &derivs[idx[0]] * &derivs[idx[1]];
                let mut t = (&derivs[idx[1]] * &derivs[idx[0]]).scale(&-Rational::one());
                t.add_assign(&s);
                acc = &f * &t;
            }
            _ => {}
        }
        out.add_assign(&acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    fn dx(i: usize) -> DiffForm {
        DiffForm::dx(3, i)
    }

    fn w8() -> WeightSystem {
        WeightSystem::new(vec![6, 5, 4]).unwrap()
    }

    fn w9() -> WeightSystem {
        WeightSystem::new(vec![5, 4, 3]).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let t2 = wedge(&dx(0), &dx(2)).unwrap();
        assert_eq!(t2, DiffForm::monomial_form(3, Polynomial::one(3), &[0, 2]));
        assert!(wedge(&dx(0), &dx(0)).unwrap().is_zero());
        let a = wedge(&dx(0).mul_poly(&x(2)), &dx(1)).unwrap();
        assert_eq!(a, DiffForm::monomial_form(3, x(2), &[0, 1]));
        let t3 = wedge(&dx(1), &dx(0)).unwrap();
        assert_eq!(t3.coeff(&[0, 1]), Polynomial::constant(3, rat(-1)));
        let three = wedge(&t2, &dx(1)).unwrap();
        assert!(wedge(&three, &dx(1)).is_err());
    }

    #[test]
    fn derivative_of_generators() {
        let g2 = &x(1).pow(2) + &(&x(0) * &x(2));
        let dg2 = exterior_derivative(&DiffForm::function(g2)).unwrap();
        assert_eq!(dg2.coeff(&[1]), x(1).scale(&rat(2)));
        assert_eq!(dg2.coeff(&[0]), x(2));
        assert_eq!(dg2.coeff(&[2]), x(0));
        let g1 = &x(0).pow(2) + &x(2).pow(3);
        let dg1 = exterior_derivative(&DiffForm::function(g1)).unwrap();
        assert_eq!(dg1.coeff(&[0]), x(0).scale(&rat(2)));
        assert_eq!(dg1.coeff(&[2]), x(2).pow(2).scale(&rat(3)));
        let c = DiffForm::monomial_form(3, Polynomial::constant(3, rat(7)), &[0, 1]);
        assert!(exterior_derivative(&c).unwrap().is_zero());
    }

    #[test]
    fn interior_examples() {
        let e8 = euler_field(&w8());
        let t2 = DiffForm::monomial_form(3, Polynomial::one(3), &[0, 2]);
        let got = interior_product(&e8, &t2).unwrap();
        let want = dx(2).mul_poly(&x(0).scale(&rat(6))).sub(&dx(0).mul_poly(&x(2).scale(&rat(4))));
        assert_eq!(got, want);
        let e9 = euler_field(&w9());
        let t1 = DiffForm::monomial_form(3, Polynomial::one(3), &[1, 2]);
        let got = interior_product(&e9, &t1).unwrap();
        let want = dx(2).mul_poly(&x(1).scale(&rat(4))).sub(&dx(1).mul_poly(&x(2).scale(&rat(3))));
        assert_eq!(got, want);
        let f = VectorField::new(vec![x(1), x(0), Polynomial::zero(3)]);
        assert_eq!(interior_product(&f, &dx(1)).unwrap().as_function(), x(0));
        assert!(interior_product(&f, &DiffForm::function(x(0))).is_err());
    }

    #[test]
    fn euler_scales_by_degree() {
        let t1 = DiffForm::monomial_form(3, Polynomial::one(3), &[1, 2]);
        let l8 = lie_derivative(&euler_field(&w8()), &t1).unwrap();
        assert_eq!(l8, t1.scale(&rat(9)));
        let l9 = lie_derivative(&euler_field(&w9()), &t1).unwrap();
        assert_eq!(l9, t1.scale(&rat(7)));
        assert!(lie_derivative(&VectorField::zero(3), &t1).unwrap().is_zero());
        let ones = euler_field(&WeightSystem::new(vec![1, 1, 1]).unwrap());
        assert_eq!(ones.components[1], x(1));
    }

    #[test]
    fn orders_on_branch() {
        let b = BranchParam::new(
            "C",
            vec![
                Series1D::monomial(6, rat(1)),
                Series1D::monomial(5, rat(1)),
                Series1D::monomial(4, rat(-1)),
            ],
        )
        .unwrap();
        let a = dx(2).mul_poly(&x(1).pow(3).scale(&crate::qpoly::ratio(1, 3)));
        assert_eq!(coefficient_orders_on_branch(&a, &b).unwrap(), Order::Finite(15));
        assert_eq!(coefficient_orders_on_branch(&dx(2).mul_poly(&x(1)), &b).unwrap(), Order::Finite(5));
        assert_eq!(coefficient_orders_on_branch(&DiffForm::zero(3, 1), &b).unwrap(), Order::Infinite);
    }

    #[test]
    fn form_degrees() {
        let t4 = DiffForm::monomial_form(3, x(2), &[1, 2]);
        assert_eq!(t4.homogeneous_degree(&w8()), Some(13));
        assert_eq!(t4.homogeneous_degree(&w9()), Some(10));
        assert_eq!(t4.add(&DiffForm::monomial_form(3, Polynomial::one(3), &[1, 2])).homogeneous_degree(&w8()), None);
    }
}
