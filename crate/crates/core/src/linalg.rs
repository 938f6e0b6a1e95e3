//! Exact linear algebra over Q on sparse rows.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::qpoly::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, c) in v {
        if *i < n {
            out[*i] = c.clone();
        }
    }
    out
}

/// v += c * w
pub fn axpy(v: &mut SparseVec, c: &Rational, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (i, x) in w {
        let e = v.entry(*i).or_insert_with(Rational::zero);
        *e += c * x;
        if e.is_zero() {
            v.remove(i);
        }
    }
}

/// Incrementally built row echelon form.
///
/// Columns at or beyond `main_cols` are passengers: they are carried along by
/// every row operation but never chosen as pivots. They hold tags and
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct Echelon {
    main_cols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(main_cols: usize) -> Self {
        Echelon { main_cols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn main_cols(&self) -> usize {
        self.main_cols
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    fn leading_main(&self, v: &SparseVec) -> Option<usize> {
        v.keys().next().copied().filter(|&i| i < self.main_cols)
    }

    /// Reduce `v` against the stored rows; returns the remainder.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..self.main_cols).find(|(i, _)| self.rows.contains_key(i));
            let Some((&p, c)) = next else { break };
            let c = -c.clone();
            axpy(&mut v, &c, &self.rows[&p]);
            cursor = p + 1;
        }
        v
    }

    /// True iff the main part of `v` lies in the row space.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.leading_main(&self.reduce(v)).is_none()
    }

    /// Insert a row; returns the pivot column if it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let r = self.reduce(v);
        let p = self.leading_main(&r)?;
        let inv = Rational::one() / &r[&p];
        let r: SparseVec = r.into_iter().map(|(i, c)| (i, c * &inv)).collect();
        self.rows.insert(p, r);
        Some(p)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// Basis of the row space, fully reduced (each pivot column is a unit column).
    pub fn reduced_basis(&self) -> Vec<SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            for (&q, other) in out.iter() {
                if let Some(c) = r.get(&q).cloned() {
                    axpy(&mut r, &-c, other);
                }
            }
            out.insert(p, r);
        }
        out.into_values().collect()
    }
}

pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solve `sum_j x_j * cols[j] = target` exactly; returns one solution or None.
pub fn solve_columns(cols: &[SparseVec], target: &SparseVec, nrows: usize) -> Option<Vec<Rational>> {
    // Rows of the transposed system carry the unknown index as a tag.
    let mut e = Echelon::new(nrows);
    for (j, c) in cols.iter().enumerate() {
        let mut row = c.clone();
        row.insert(nrows + j, Rational::one());
        e.insert(&row);
    }
    let r = e.reduce(target);
    if r.range(..nrows).next().is_some() {
        return None;
    }
    let mut x = vec![Rational::zero(); cols.len()];
    for (i, c) in r.range(nrows..) {
        x[i - nrows] = -c.clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, ratio};

    fn sv(v: &[i64]) -> SparseVec {
        sparse_from_dense(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[sv(&[1, 2, 3]), sv(&[2, 4, 6]), sv(&[0, 1, 1])], 3), 2);
        assert_eq!(rank(&[], 3), 0);
        assert_eq!(rank(&[sv(&[1, 0]), sv(&[0, 1]), sv(&[1, 1])], 2), 2);
    }

    #[test]
    fn passenger_columns_track_combinations() {
        let mut e = Echelon::new(2);
        let mut a = sv(&[1, 1]);
        a.insert(2, rat(1));
        let mut b = sv(&[1, -1]);
        b.insert(3, rat(1));
        e.insert(&a);
        e.insert(&b);
        // (3,1) = 2*(1,1) + 1*(1,-1)
        let r = e.reduce(&sv(&[3, 1]));
        assert!(r.range(..2).next().is_none());
        assert_eq!(r.get(&2).cloned().unwrap(), rat(-2));
        assert_eq!(r.get(&3).cloned().unwrap(), rat(-1));
    }

    #[test]
    fn solve_columns_finds_solution() {
        let cols = vec![sv(&[2, 0, 1]), sv(&[0, 3, 1])];
        let x = solve_columns(&cols, &sv(&[1, 1, 0]), 3);
        assert!(x.is_none());
        let mut t = sv(&[1, 1, 0]);
        t.insert(2, ratio(5, 6));
        let x = solve_columns(&cols, &t, 3).unwrap();
        assert_eq!(x, vec![ratio(1, 2), ratio(1, 3)]);
    }

    #[test]
    fn reduced_basis_is_unit_on_pivots() {
        let mut e = Echelon::new(3);
        e.insert(&sv(&[1, 2, 3]));
        e.insert(&sv(&[0, 1, 4]));
        let b = e.reduced_basis();
        assert_eq!(b[0].get(&1), None);
        assert_eq!(b[0][&0], rat(1));
    }
}
