//! 1-D spatial mesh, time stepping, boundaries, and the experiment
//! drivers.

mod boundary;
mod mesh;
mod relaxation;
mod shock;
mod sod;
mod stepper;

pub use boundary::BoundarySpec;
pub use mesh::{cfl_timesteps, Mesh1D};
pub use relaxation::{run_relaxation, RelaxationResult, RelaxationSetup};
pub use shock::{
    rankine_hugoniot, run_shock_structure, shock_upstream, ShockResult, ShockSetup,
};
pub use sod::{run_sod, CflSpeed, SodResult, SodSetup};
pub use stepper::{
    substep_boltzmann, CollisionTreatment, CriticalTimeMode, SimulationState, Solver,
    SpectralSettings, StepReport,
};
