//! Symbolic algebra of multimode boson operators in canonical normal order.

mod monomial;
pub mod named;
mod poly;
mod product;

pub use monomial::{reorder_single, BosonMonomial, ModePowers};
pub use named::{build_named, NamedOperator, NamedParams};
pub use poly::{commutator, dagger, normal_order_product, OperatorPoly, COEFF_PRUNE, SYMBOLIC_TOL};
pub(crate) use poly::require_hermitian;
pub use product::{ProductOperator, SingleModePoly, MAX_EXPANDED_TERMS};
pub(crate) use product::ladder_factor;
