//! Exact computations with modules over monomial algebras and their
//! tensor products with path algebras of acyclic quivers.

pub mod exactla;
pub mod quiver;
pub mod rep;
pub mod bqa;
pub mod layered;
pub mod harness;
