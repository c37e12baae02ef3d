//! Small numerical utilities: quadrature rules, special functions,
//! dense linear algebra helpers and stable exponential forms.

mod bessel;
mod expstable;
mod gamma;
mod linalg;
mod quadrature;

pub use bessel::bessel_j0;
pub use expstable::TimeIntegrals;
pub use gamma::gamma;
pub use linalg::{solve5, symmetric_eigen};
pub use quadrature::gauss_legendre;
