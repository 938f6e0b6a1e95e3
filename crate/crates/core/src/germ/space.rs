//! Graded computation of restriction spaces `[Λ^p]_N` and `[Z^p]_N`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::GermDefinition;
use crate::error::AlgresError;
use crate::exterior::{exterior_derivative, DiffForm};
use crate::linalg::{Echelon, SparseVec};
use crate::qpoly::{monomial_basis, Monomial, Polynomial, Rational, WeightSystem};

/// Increasing index tuples of length `p` in descending lexicographic order.
pub fn dx_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

fn tuple_weight(w: &WeightSystem, idx: &[usize]) -> u32 {
    idx.iter().map(|&i| w.weights()[i]).sum()
}

/// Monomial p-forms of quasi-degree `delta`, in canonical order.
pub fn monomial_forms(w: &WeightSystem, p: usize, delta: u32) -> Vec<(Vec<usize>, Monomial)> {
    let mut out = Vec::new();
    for idx in dx_tuples(w.dim(), p) {
        let tw = tuple_weight(w, &idx);
        if tw > delta {
            continue;
        }
        for m in monomial_basis(delta - tw, w) {
            out.push((idx.clone(), m));
        }
    }
    out
}

/// Coordinates of homogeneous forms over a list of monomial forms.
#[derive(Clone, Debug)]
pub struct FormIndex {
    pub forms: Vec<(Vec<usize>, Monomial)>,
    lookup: HashMap<(Vec<usize>, Monomial), usize>,
}

impl FormIndex {
    pub fn new(forms: Vec<(Vec<usize>, Monomial)>) -> Self {
        let lookup = forms.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        FormIndex { forms, lookup }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn position(&self, idx: &[usize], m: &Monomial) -> Option<usize> {
        self.lookup.get(&(idx.to_vec(), m.clone())).copied()
    }

    /// Vector of a form all of whose terms lie in this index.
    pub fn vector(&self, f: &DiffForm) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (idx, p) in f.terms() {
            for (m, c) in p.terms() {
                v.insert(self.position(idx, m)?, c.clone());
            }
        }
        Some(v)
    }

    pub fn form(&self, v: &SparseVec, dim: usize, degree: usize) -> DiffForm {
        let mut f = DiffForm::zero(dim, degree);
        for (i, c) in v {
            if *i < self.len() {
                let (idx, m) = &self.forms[*i];
                f.add_term(idx.clone(), &Polynomial::term(dim, m.clone(), c.clone()));
            }
        }
        f
    }
}

/// Reduced row basis of the graded piece `(A^p_0)_delta`.
#[derive(Clone, Debug)]
pub struct ZeroSubspace {
    pub delta: u32,
    pub index: FormIndex,
    pub rows: Vec<SparseVec>,
}

impl ZeroSubspace {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, f: &DiffForm) -> bool {
        let Some(v) = self.index.vector(f) else { return false };
        let mut e = Echelon::new(self.index.len());
        for r in &self.rows {
            e.insert(r);
        }
        e.contains(&v)
    }
}

fn generator_multiples(g: &GermDefinition, p: usize, delta: u32) -> Vec<DiffForm> {
    let w = &g.weights;
    let n = g.dim();
    let mut out = Vec::new();
    for (gen, dg) in g.generators.iter().zip(g.generator_degrees()) {
        for idx in dx_tuples(n, p) {
            let tw = tuple_weight(w, &idx);
            if dg + tw > delta {
                continue;
            }
            for m in monomial_basis(delta - dg - tw, w) {
                out.push(DiffForm::monomial_form(n, gen.mul_monomial(&m), &idx));
            }
        }
        if p == 0 {
            continue;
        }
        for idx in dx_tuples(n, p - 1) {
            let tw = tuple_weight(w, &idx);
            if dg + tw > delta {
                continue;
            }
            for m in monomial_basis(delta - dg - tw, w) {
                let beta = DiffForm::monomial_form(n, gen.mul_monomial(&m), &idx);
                out.push(exterior_derivative(&beta).expect("degree below cap"));
            }
        }
    }
    out
}

pub fn zero_restriction_subspace(g: &GermDefinition, p: usize, delta: u32) -> ZeroSubspace {
    let index = FormIndex::new(monomial_forms(&g.weights, p, delta));
    let mut e = Echelon::new(index.len());
    for f in generator_multiples(g, p, delta) {
        e.insert(&index.vector(&f).expect("graded generator multiple"));
    }
    ZeroSubspace { delta, index, rows: e.reduced_basis() }
}

/// Exact forms `d(m dx_J)` of quasi-degree `delta`, in canonical order.
pub(crate) fn closed_candidates(g: &GermDefinition, p: usize, delta: u32) -> Vec<DiffForm> {
    let n = g.dim();
    let mut out = Vec::new();
    for (idx, m) in monomial_forms(&g.weights, p - 1, delta) {
        let f = exterior_derivative(&DiffForm::monomial_form(n, Polynomial::monomial(m), &idx)).unwrap();
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub delta: u32,
    pub zero: ZeroSubspace,
    /// dim of the quotient of all p-forms
    pub all_dim: usize,
    /// dim of the quotient of closed p-forms
    pub closed_dim: usize,
    /// first global basis index of this piece
    pub basis_offset: usize,
    pub basis_len: usize,
    reducer: Echelon,
}

impl GradedPiece {
    pub fn index(&self) -> &FormIndex {
        &self.zero.index
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub label: String,
    pub form: DiffForm,
    pub delta: u32,
}

/// Why every piece above `cutoff` vanishes: all pieces in
/// `run_start..=cutoff` are zero, the run is at least `max(w)` long and
/// starts above the largest sum of `p` weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub max_weight_sum: u32,
    pub run_start: u32,
    pub cutoff: u32,
    pub cap: u32,
}

#[derive(Clone, Debug)]
pub struct RestrictionSpace {
    pub germ: GermDefinition,
    pub form_degree: usize,
    pub closed_only: bool,
    pub pieces: BTreeMap<u32, GradedPiece>,
    pub basis: Vec<BasisElement>,
    pub stabilization: Stabilization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionClass {
    pub coords: Vec<Rational>,
}

impl RestrictionClass {
    pub fn zero(n: usize) -> Self {
        RestrictionClass { coords: vec![Rational::zero(); n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = Self::zero(n);
        c.coords[i] = Rational::one();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

pub fn restriction_basis(g: &GermDefinition, p: usize, closed_only: bool) -> Result<RestrictionSpace, AlgresError> {
    restriction_basis_with_cap(g, p, closed_only, 10 * g.weights.sum())
}

pub fn restriction_basis_with_cap(
    g: &GermDefinition,
    p: usize,
    closed_only: bool,
    cap: u32,
) -> Result<RestrictionSpace, AlgresError> {
    if !(1..=2).contains(&p) {
        return Err(AlgresError::Degree(format!("restriction spaces for p = {p} are not supported")));
    }
    let w = &g.weights;
    let n = g.dim();
    let max_sum = w.max_sum_of(p);
    let run_needed = w.max();
    let reps = if p == 2 {
        if closed_only {
            &g.closed_reps
        } else {
            &g.all_reps
        }
    } else {
        &Vec::new()
    };
    let mut pinned: BTreeMap<u32, Vec<(String, DiffForm)>> = BTreeMap::new();
    for (label, f) in reps {
        let d = f.homogeneous_degree(w).ok_or_else(|| {
            AlgresError::InvalidGerm(format!("representative {label} is not quasi-homogeneous"))
        })?;
        if closed_only && !exterior_derivative(f)?.is_zero() {
            return Err(AlgresError::InvalidGerm(format!("representative {label} is not closed")));
        }
        pinned.entry(d).or_default().push((label.clone(), f.clone()));
    }

    let mut pieces = BTreeMap::new();
    let mut basis: Vec<(Option<String>, DiffForm, u32)> = Vec::new();
    let mut run = 0u32;
    let mut stab = None;
    for delta in 0..=cap {
        let zero = zero_restriction_subspace(g, p, delta);
        let size = zero.index.len();
        let all_dim = size - zero.rank();
        let mut reducer = Echelon::new(size);
        for r in &zero.rows {
            reducer.insert(r);
        }
        let closed_dim = if size == 0 {
            0
        } else {
            let mut e2 = reducer.clone();
            for f in closed_candidates(g, p, delta) {
                e2.insert(&zero.index.vector(&f).unwrap());
            }
            e2.rank() - reducer.rank()
        };
        let want = if closed_only { closed_dim } else { all_dim };
        let offset = basis.len();
        let mut chosen = 0usize;
        let accept = |f: &DiffForm, reducer: &mut Echelon, chosen: &mut usize| -> bool {
            let mut v = zero.index.vector(f).unwrap();
            v.insert(size + *chosen, Rational::one());
            if reducer.insert(&v).is_some() {
                *chosen += 1;
                true
            } else {
                false
            }
        };
        for (label, f) in pinned.remove(&delta).unwrap_or_default() {
            if chosen >= want || !accept(&f, &mut reducer, &mut chosen) {
                return Err(AlgresError::InvalidGerm(format!(
                    "pinned representative {label} is dependent modulo the zero-restriction subspace"
                )));
            }
            basis.push((Some(label), f, delta));
        }
        let candidates: Vec<DiffForm> = if chosen < want {
            if closed_only {
                closed_candidates(g, p, delta)
            } else {
                zero.index
                    .forms
                    .iter()
                    .map(|(idx, m)| DiffForm::monomial_form(n, Polynomial::monomial(m.clone()), idx))
                    .collect()
            }
        } else {
            Vec::new()
        };
        for f in candidates {
            if chosen >= want {
                break;
            }
            if accept(&f, &mut reducer, &mut chosen) {
                basis.push((None, f, delta));
            }
        }
        debug_assert_eq!(chosen, want);
        if size > 0 {
            pieces.insert(
                delta,
                GradedPiece { delta, zero, all_dim, closed_dim, basis_offset: offset, basis_len: chosen, reducer },
            );
        }
        if all_dim == 0 {
            run += 1;
        } else {
            run = 0;
        }
        if run >= run_needed && delta + 1 - run_needed > max_sum {
            stab = Some(Stabilization { max_weight_sum: max_sum, run_start: delta + 1 - run, cutoff: delta, cap });
            break;
        }
    }
    let stabilization = stab.ok_or(AlgresError::Stabilization { cap })?;
    if let Some((label, _)) = pinned.values().flatten().next() {
        return Err(AlgresError::InvalidGerm(format!("pinned representative {label} has a zero class")));
    }
    let prefix = if closed_only { "theta" } else { "alpha" };
    let basis = basis
        .into_iter()
        .enumerate()
        .map(|(i, (label, form, delta))| BasisElement {
            label: label.unwrap_or_else(|| format!("{prefix}{}", i + 1)),
            form,
            delta,
        })
        .collect();
    Ok(RestrictionSpace { germ: g.clone(), form_degree: p, closed_only, pieces, basis, stabilization })
}

impl RestrictionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.basis.iter().map(|b| b.delta).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.label.clone()).collect()
    }

    pub fn cutoff(&self) -> u32 {
        self.stabilization.cutoff
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.germ.weights
    }

    /// Quotient dimension per quasi-degree for this variant.
    pub fn piece_dims(&self) -> BTreeMap<u32, usize> {
        self.pieces
            .iter()
            .map(|(d, p)| (*d, if self.closed_only { p.closed_dim } else { p.all_dim }))
            .collect()
    }

    pub fn reduce_to_coordinates(&self, a: &DiffForm) -> Result<RestrictionClass, AlgresError> {
        if a.degree() != self.form_degree {
            return Err(AlgresError::Degree(format!(
                "expected a {}-form, got a {}-form",
                self.form_degree,
                a.degree()
            )));
        }
        if a.dim() != self.germ.dim() {
            return Err(AlgresError::Dimension(format!(
                "form on R^{} for a germ in R^{}",
                a.dim(),
                self.germ.dim()
            )));
        }
        if self.closed_only && !exterior_derivative(a)?.is_zero() {
            return Err(AlgresError::NotClosed(a.display_with(&self.germ.variables, Some(self.weights()))));
        }
        let mut coords = vec![Rational::zero(); self.dim()];
        for (d, piece_form) in a.graded_pieces(self.weights()) {
            if d > self.cutoff() {
                continue;
            }
            let piece = self.pieces.get(&d).ok_or(AlgresError::NotInSpan(d))?;
            let size = piece.index().len();
            let v = piece.index().vector(&piece_form).ok_or(AlgresError::NotInSpan(d))?;
            let r = piece.reducer.reduce(&v);
            if r.range(..size).next().is_some() {
                return Err(AlgresError::NotInSpan(d));
            }
            for (i, c) in r.range(size..) {
                coords[piece.basis_offset + i - size] = -c.clone();
            }
        }
        Ok(RestrictionClass { coords })
    }

    /// True iff the form lies in `A^p_0` (its class is zero).
    pub fn is_zero_class(&self, a: &DiffForm) -> Result<bool, AlgresError> {
        for (d, piece_form) in a.graded_pieces(self.weights()) {
            if d > self.cutoff() {
                continue;
            }
            let Some(piece) = self.pieces.get(&d) else { return Ok(false) };
            let Some(v) = piece.index().vector(&piece_form) else { return Ok(false) };
            let mut e = Echelon::new(piece.index().len());
            for r in &piece.zero.rows {
                e.insert(r);
            }
            if !e.contains(&v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The form `sum c_i theta_i`.
    pub fn class_form(&self, c: &RestrictionClass) -> DiffForm {
        let mut f = DiffForm::zero(self.germ.dim(), self.form_degree);
        for (b, x) in self.basis.iter().zip(&c.coords) {
            f.add_scaled(&b.form, x);
        }
        f
    }

    /// Basis indices of quasi-degree `delta`.
    pub fn indices_of_degree(&self, delta: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].delta == delta).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_order() {
        assert_eq!(dx_tuples(3, 2), vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        assert_eq!(dx_tuples(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn w8_dimensions() {
        let g = GermDefinition::builtin("W8").unwrap();
        let all = restriction_basis(&g, 2, false).unwrap();
        assert_eq!(all.dim(), 9);
        let closed = restriction_basis(&g, 2, true).unwrap();
        assert_eq!(closed.degrees(), vec![9, 10, 11, 13, 14, 15, 17, 19]);
        assert_eq!(closed.stabilization.cutoff, 25);
        assert_eq!(closed.stabilization.run_start, 20);
    }

    #[test]
    fn w9_dimensions() {
        let g = GermDefinition::builtin("W9").unwrap();
        assert_eq!(restriction_basis(&g, 2, false).unwrap().dim(), 10);
        let closed = restriction_basis(&g, 2, true).unwrap();
        assert_eq!(closed.degrees(), vec![7, 8, 9, 10, 11, 12, 13, 14, 16]);
        assert_eq!(closed.stabilization.cutoff, 21);
    }
}
