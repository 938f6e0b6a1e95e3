//! Exact algebraic restrictions of closed 2-forms to quasi-homogeneous
//! curve germs, with classification and symplectic invariants.

pub mod builtin;
pub mod error;
pub mod exterior;
pub mod germ;
pub mod golden;
pub mod invariants;
pub mod linalg;
pub mod parse;
pub mod qpoly;
pub mod restriction;
pub mod verify;

pub use error::AlgresError;
