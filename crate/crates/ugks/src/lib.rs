//! A discrete-velocity kinetic gas solver built on the unified
//! gas-kinetic scheme, with a collision treatment that blends an explicit
//! fast-spectral Boltzmann operator with an implicit Shakhov relaxation
//! model. Covers homogeneous relaxation, the Sod tube and normal shock
//! structures in one space dimension with a full 3-D velocity space.

pub mod collision;
pub mod flux;
pub mod io;
pub mod hybrid;
pub mod error;
pub mod kinetic;
pub mod solver;
pub mod util;

pub use error::{Error, Result};
