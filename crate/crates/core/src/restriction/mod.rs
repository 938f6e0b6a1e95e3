//! Infinitesimal actions of tangent fields on restriction classes and the
//! orbit invariants built from them.

mod classify;

pub use classify::{
    builtin_ruleset, classify, generic_ruleset, moduli_certificate, parse_ruleset, ClassificationRuleset,
    Guard, GuardAtom, ModuliCertificate, Modulus, NormalFormReport, Rule, Sign, TraceStep,
};

use num_traits::Zero;

use crate::error::AlgresError;
use crate::exterior::{euler_field, lie_derivative, DiffForm, VectorField};
use crate::germ::{GermDefinition, RestrictionClass, RestrictionSpace};
use crate::linalg::{rank, solve_columns, sparse_from_dense, SparseVec};
use crate::qpoly::{monomial_basis, Order, Polynomial, Rational};

#[derive(Clone, Debug)]
pub struct TangentField {
    pub label: String,
    pub field: VectorField,
    /// Quasi-degree of the field; `None` if it is not quasi-homogeneous.
    pub qdeg: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct TangentFieldFamily {
    pub fields: Vec<TangentField>,
}

/// Quasi-degree of a field: component `i` of degree `d + w_i` for all `i`.
pub fn field_degree(germ: &GermDefinition, x: &VectorField) -> Option<u32> {
    let w = germ.weights.weights();
    let mut deg: Option<i64> = None;
    for (i, c) in x.components.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = c.homogeneous_degree(&germ.weights)? as i64 - w[i] as i64;
        match deg {
            None => deg = Some(d),
            Some(d0) if d0 != d => return None,
            _ => {}
        }
    }
    deg.and_then(|d| u32::try_from(d).ok())
}

/// Check that `X(g_i)` lies in the ideal for every generator.
pub fn check_tangent(germ: &GermDefinition, label: &str, x: &VectorField) -> Result<(), AlgresError> {
    if x.dim() != germ.dim() {
        return Err(AlgresError::Dimension(format!("field {label} has {} components", x.dim())));
    }
    for g in &germ.generators {
        let xg = x.apply(g);
        if !germ.ideal_contains(&xg) {
            return Err(AlgresError::NotTangent {
                label: label.to_string(),
                detail: format!(
                    "X({}) = {} is not in the ideal",
                    g.display_with(&germ.variables, Some(&germ.weights)),
                    xg.display_with(&germ.variables, Some(&germ.weights))
                ),
            });
        }
    }
    Ok(())
}

impl TangentField {
    pub fn new(germ: &GermDefinition, label: &str, field: VectorField) -> Result<Self, AlgresError> {
        check_tangent(germ, label, &field)?;
        let qdeg = field_degree(germ, &field);
        Ok(TangentField { label: label.to_string(), field, qdeg })
    }
}

impl TangentFieldFamily {
    /// The germ's listed fields, or all monomial multiples of `E` up to the
    /// spread of basis degrees when none are listed.
    pub fn for_space(space: &RestrictionSpace) -> Result<Self, AlgresError> {
        let germ = &space.germ;
        let e = euler_field(&germ.weights);
        let mut fields = Vec::new();
        if !germ.fields.is_empty() {
            for (label, m) in &germ.fields {
                fields.push(TangentField::new(germ, label, e.scale_by(m))?);
            }
        } else {
            let degs = space.degrees();
            let spread = match (degs.first(), degs.last()) {
                (Some(a), Some(b)) => b - a,
                _ => 0,
            };
            let mut k = 0;
            for d in 0..=spread {
                for m in monomial_basis(d, &germ.weights) {
                    let f = e.scale_by(&Polynomial::monomial(m));
                    fields.push(TangentField::new(germ, &format!("X{k}"), f)?);
                    k += 1;
                }
            }
        }
        Ok(TangentFieldFamily { fields })
    }

    pub fn labels(&self) -> Vec<String> {
        self.fields.iter().map(|f| f.label.clone()).collect()
    }
}

/// Entry `(i, j)` is the coefficient of `theta_i` in `L_X theta_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionMatrix {
    pub label: String,
    pub qdeg: Option<u32>,
    pub entries: Vec<Vec<Rational>>,
}

impl ActionMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, a: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(a).fold(Rational::zero(), |acc, (m, x)| acc + m * x))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|c| c.is_zero())
    }

    pub fn is_nilpotent_by_degree(&self) -> bool {
        self.qdeg.is_some_and(|d| d > 0)
    }
}

pub fn action_matrix(space: &RestrictionSpace, x: &TangentField) -> Result<ActionMatrix, AlgresError> {
    check_tangent(&space.germ, &x.label, &x.field)?;
    let n = space.dim();
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for (j, b) in space.basis.iter().enumerate() {
        let l = lie_derivative(&x.field, &b.form)?;
        let c = space.reduce_to_coordinates(&l)?;
        for (i, v) in c.coords.into_iter().enumerate() {
            entries[i][j] = v;
        }
    }
    Ok(ActionMatrix { label: x.label.clone(), qdeg: x.qdeg, entries })
}

pub fn action_matrices(space: &RestrictionSpace, fam: &TangentFieldFamily) -> Result<Vec<ActionMatrix>, AlgresError> {
    fam.fields.iter().map(|f| action_matrix(space, f)).collect()
}

/// Spanning vectors `M_X a` of the tangent space to the orbit, with its rank.
pub fn orbit_tangent_space(a: &RestrictionClass, actions: &[ActionMatrix]) -> (Vec<SparseVec>, usize) {
    let vecs: Vec<SparseVec> = actions.iter().map(|m| sparse_from_dense(&m.apply(&a.coords))).collect();
    let r = rank(&vecs, a.len());
    (vecs, r)
}

pub fn symplectic_multiplicity(a: &RestrictionClass, actions: &[ActionMatrix]) -> usize {
    a.len() - orbit_tangent_space(a, actions).1
}

/// The Hamiltonian-type field `grad g1 × grad g2` of a complete
/// intersection in three variables.
pub fn hamiltonian_field(germ: &GermDefinition) -> Result<VectorField, AlgresError> {
    if germ.dim() != 3 || germ.generators.len() != 2 {
        return Err(AlgresError::Unsupported("Hamiltonian field needs two equations in three variables".into()));
    }
    let g = &germ.generators;
    let a: Vec<Polynomial> = (0..3).map(|i| g[0].derivative(i)).collect();
    let b: Vec<Polynomial> = (0..3).map(|i| g[1].derivative(i)).collect();
    let cross = |i: usize, j: usize| &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
    Ok(VectorField::new(vec![cross(1, 2), cross(2, 0), cross(0, 1)]))
}

/// Largest `k` such that the class has a closed representative whose
/// coefficients all vanish to ordinary order `k` at the origin; computed
/// piecewise on graded cosets and minimized over pieces.
pub fn index_of_isotropy(space: &RestrictionSpace, a: &RestrictionClass) -> Result<Order, AlgresError> {
    if !space.closed_only || space.form_degree != 2 {
        return Err(AlgresError::Unsupported("index of isotropy needs the closed 2-form space".into()));
    }
    let germ = &space.germ;
    let n = germ.dim();
    let mut best = Order::Infinite;
    let mut by_degree: std::collections::BTreeMap<u32, DiffForm> = std::collections::BTreeMap::new();
    for (i, c) in a.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let b = &space.basis[i];
        let e = by_degree.entry(b.delta).or_insert_with(|| DiffForm::zero(n, 2));
        e.add_scaled(&b.form, c);
    }
    for (delta, target) in by_degree {
        let piece = &space.pieces[&delta];
        let index = piece.index();
        let size = index.len();
        let order_of = |i: usize| index.forms[i].1.total_degree();
        let max_order = (0..size).map(order_of).max().unwrap_or(0);
        let exact: Vec<SparseVec> = crate::germ::closed_candidates(germ, 2, delta)
            .iter()
            .map(|f| index.vector(f).unwrap())
            .collect();
        let target_v = index.vector(&target).unwrap();
        let mut k = 0u32;
        loop {
            let next = k + 1;
            let low: Vec<usize> = (0..size).filter(|&i| order_of(i) < next).collect();
            let embed_low = |v: &SparseVec| -> SparseVec {
                let mut out = v.clone();
                for (pos, &i) in low.iter().enumerate() {
                    if let Some(c) = v.get(&i) {
                        out.insert(size + pos, c.clone());
                    }
                }
                out
            };
            let mut cols: Vec<SparseVec> = exact.iter().map(embed_low).collect();
            for r in &piece.zero.rows {
                cols.push(r.iter().map(|(i, c)| (*i, -c.clone())).collect());
            }
            if solve_columns(&cols, &target_v, size + low.len()).is_none() {
                break;
            }
            k = next;
            if k > max_order {
                return Err(AlgresError::Invariant(format!(
                    "nonzero piece at quasi-degree {delta} has a representative vanishing identically"
                )));
            }
        }
        best = best.min(Order::Finite(k));
    }
    Ok(best)
}
