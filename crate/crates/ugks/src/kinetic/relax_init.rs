//! Initial distributions for the homogeneous relaxation experiments.

use std::sync::Arc;

use super::grid::{Distribution, VelocityGrid};
use super::macrostate::GasProperties;
use crate::error::{Error, Result};

/// The three non-equilibrium initial families, each normalized to unit
/// density. Temperatures are per velocity axis (nondimensional, T/T_ref).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxationFamily {
    /// Product of per-axis Maxwellians with different temperatures.
    Anisotropic,
    /// Two half-normal lobes along x (discontinuous at u = 0); the v axis
    /// carries the second temperature, w the third.
    DoubleHalfNormal,
    /// Half-Maxwellian lobes with amplitudes adjusted to remove the jump
    /// at u = 0 while keeping unit mass.
    TailoredHalfMaxwellian,
}

impl RelaxationFamily {
    pub fn name(&self) -> &'static str {
        match self {
            RelaxationFamily::Anisotropic => "anisotropic",
            RelaxationFamily::DoubleHalfNormal => "double_half_normal",
            RelaxationFamily::TailoredHalfMaxwellian => "tailored_half_maxwellian",
        }
    }
}

/// Sample the chosen family on the lattice and verify that the grid holds
/// its mass to within `deficit_tol` of the prescribed unit density.
pub fn init_relaxation(
    family: RelaxationFamily,
    temps: [f64; 3],
    grid: &Arc<VelocityGrid>,
    gas: &GasProperties,
    deficit_tol: f64,
) -> Result<Distribution> {
    for t in temps {
        if !(t > 0.0) {
            return Err(Error::Config(format!(
                "relaxation temperatures must be positive, got {temps:?}"
            )));
        }
    }
    let b = [gas.beta(temps[0]), gas.beta(temps[1]), gas.beta(temps[2])];
    let rt_pi = std::f64::consts::PI.sqrt();
    let gauss = |beta: f64, u: f64| beta / rt_pi * (-beta * beta * u * u).exp();

    let f = match family {
        RelaxationFamily::Anisotropic => {
            grid.sample(|u| gauss(b[0], u[0]) * gauss(b[1], u[1]) * gauss(b[2], u[2]))
        }
        RelaxationFamily::DoubleHalfNormal => grid.sample(|u| {
            let x = if u[0] < 0.0 {
                gauss(b[0], u[0])
            } else {
                gauss(b[1], u[0])
            };
            x * gauss(b[1], u[1]) * gauss(b[2], u[2])
        }),
        RelaxationFamily::TailoredHalfMaxwellian => {
            // Shared amplitude 2/sqrt(pi) b1 b2/(b1+b2): continuous at
            // u = 0 and still unit mass.
            let amp = 2.0 / rt_pi * b[0] * b[1] / (b[0] + b[1]);
            grid.sample(|u| {
                let beta_x = if u[0] < 0.0 { b[0] } else { b[1] };
                let x = amp * (-beta_x * beta_x * u[0] * u[0]).exp();
                x * gauss(b[1], u[1]) * gauss(b[2], u[2])
            })
        }
    };

    let deficit = (1.0 - f.mass()).abs();
    if deficit > deficit_tol {
        return Err(Error::Resolution {
            context: format!("{} initial data with temps {temps:?}", family.name()),
            deficit,
            tolerance: deficit_tol,
        });
    }
    Ok(f)
}
