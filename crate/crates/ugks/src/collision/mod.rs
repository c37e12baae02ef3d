//! Cross-section models, viscosity laws, and the fast spectral
//! evaluation of the full Boltzmann collision operator.

pub mod fft3;
mod kernel;
mod model;
mod operator;

pub use kernel::{build_kernel, SpectralKernel};
pub use model::{lj, lj_viscosity_si, CollisionModel, CrossSection};
pub use operator::{
    boltzmann_q, collision_frequency, conserve_fix, direct_q_oracle, CollisionEval,
};

