//! Velocity-space discretization, moment evaluation and equilibrium
//! distributions.
//!
//! Everything is nondimensional: velocities in units of the most probable
//! speed at the reference temperature, densities in units of the reference
//! density, lengths in reference mean free paths. The specific gas
//! constant is then 1/2, so lambda = 1/(2 R T) = 1/T.

mod equilibrium;
mod grid;
mod macrostate;
mod relax_init;

pub use equilibrium::{distance_to_equilibrium, maxwellian, shakhov_equilibrium};
pub use grid::{build_grid, Distribution, VelocityGrid};
pub use macrostate::{moments, GasProperties, MacroState};
pub use relax_init::{init_relaxation, RelaxationFamily};

pub(crate) use equilibrium::shakhov_correction;
pub(crate) use macrostate::psi as psi_at;

/// Nondimensional specific gas constant implied by the velocity unit
/// sqrt(2 R T_ref).
pub const R_GAS: f64 = 0.5;

/// Ratio of specific heats for a monatomic gas.
pub const GAMMA: f64 = 5.0 / 3.0;
