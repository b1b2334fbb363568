//! Partial-transpose separability witnesses and the CFRD Bell inequality on
//! exactly represented multimode bosonic states.
//!
//! States are finite superpositions of Fock kets ([`fock::SparseState`]);
//! operators are normally ordered polynomials ([`algebra::OperatorPoly`]).
//! Averages over a partially transposed state are evaluated by relabelling
//! operator words ([`pt`]), and every verdict can be checked against an
//! explicit density-matrix oracle ([`oracle`]).

pub mod algebra;
pub mod error;
pub mod exec;
pub mod fock;
pub mod oracle;
pub mod pt;
pub mod states;
pub mod witness;

pub use algebra::{BosonMonomial, ModePowers, OperatorPoly, ProductOperator};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fock::{FockKet, Moments, SparseState, MAX_OCC};
pub use pt::{pt_expectation, pt_map, pt_variance, ModeSet};
pub use witness::{Partition, WitnessReport, ZSpec};

pub use num_complex::Complex64;
