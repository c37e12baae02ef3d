//! Homogeneous (0-D) relaxation driver: evolve one distribution under a
//! chosen collision treatment and record x-axis slices and moments at
//! configured multiples of the relaxation time.

use std::sync::Arc;

use super::stepper::{substep_boltzmann, CollisionTreatment, SpectralSettings};
use crate::collision::{build_kernel, conserve_fix, CollisionModel};
use crate::error::{Error, Result};
use crate::hybrid::{beta, cell_collision_update, critical_time, split_weights};
use crate::kinetic::{
    init_relaxation, moments, Distribution, GasProperties, MacroState, RelaxationFamily,
    VelocityGrid,
};

/// Setup for one relaxation run.
#[derive(Debug, Clone)]
pub struct RelaxationSetup {
    pub family: RelaxationFamily,
    /// Per-axis temperatures in units of the reference temperature.
    pub temps: [f64; 3],
    pub treatment: CollisionTreatment,
    pub model: CollisionModel,
    pub gas: GasProperties,
    pub spectral: SpectralSettings,
    /// Record slices at these multiples of tau_r (sorted ascending).
    pub output_times: Vec<f64>,
    /// Nominal step as a fraction of tau_r.
    pub dt_fraction: f64,
    /// Largest acceptable initial mass deficit on the grid.
    pub deficit_tolerance: f64,
}

/// Slices and moment history of a relaxation run.
pub struct RelaxationResult {
    /// Shakhov relaxation time of the (conserved) state.
    pub tau_r: f64,
    /// Absolute output times (multiples of tau_r from the setup).
    pub times: Vec<f64>,
    /// f(u, 0, 0) slice at each output time.
    pub slices: Vec<Vec<(f64, f64)>>,
    /// Moments at each output time.
    pub moments: Vec<MacroState>,
    /// Worst relative drift of (rho, rho U, rho E) over the run.
    pub conservation_drift: f64,
    /// Full distribution at the final output time.
    pub final_distribution: Distribution,
}

/// Run the homogeneous relaxation problem.
pub fn run_relaxation(grid: &Arc<VelocityGrid>, setup: &RelaxationSetup) -> Result<RelaxationResult> {
    if setup.output_times.windows(2).any(|w| w[1] <= w[0])
        || setup.output_times.first().map(|t| *t <= 0.0).unwrap_or(true)
    {
        return Err(Error::Config(
            "relaxation output times must be positive and ascending".into(),
        ));
    }
    if !(setup.dt_fraction > 0.0) {
        return Err(Error::Config("relaxation dt fraction must be positive".into()));
    }
    let mut f = init_relaxation(
        setup.family,
        setup.temps,
        grid,
        &setup.gas,
        setup.deficit_tolerance,
    )?;
    let state0 = moments(&f)?;
    let tau_r = setup.model.relaxation_time(&state0);
    let kernel = match setup.treatment {
        CollisionTreatment::Hybrid | CollisionTreatment::Boltzmann => Some(build_kernel(
            &setup.model,
            grid,
            setup.spectral.modes,
            setup.spectral.sphere,
        )?),
        CollisionTreatment::Shakhov => None,
        CollisionTreatment::Collisionless => {
            return Err(Error::Config(
                "collisionless relaxation does not evolve; pick a collision treatment".into(),
            ))
        }
    };

    let w0 = state0.conservative();
    let scale = w0[0].abs().max(w0[4].abs());
    let dt_nominal = setup.dt_fraction * tau_r;
    let mut time = 0.0;
    let mut drift = 0.0f64;
    let mut times = Vec::new();
    let mut slices = Vec::new();
    let mut momhist = Vec::new();

    for &target_tau in &setup.output_times {
        let target = target_tau * tau_r;
        while time < target - 1e-13 * tau_r {
            let dt = dt_nominal.min(target - time);
            let state = moments(&f)?;
            match setup.treatment {
                CollisionTreatment::Shakhov => {
                    let weights = split_weights(dt, 0.0, 1.0, 0.0);
                    let tau_new = setup.model.relaxation_time(&state);
                    f = cell_collision_update(&f, None, &state, &weights, None, tau_new, &setup.gas)?;
                }
                CollisionTreatment::Hybrid => {
                    let kernel = kernel.as_ref().unwrap();
                    let t_c = critical_time(&f, tau_r)?;
                    let tau_new = setup.model.relaxation_time(&state);
                    if dt < t_c {
                        let eval = kernel.collide(&f)?;
                        let (q, _) = conserve_fix(&eval.rate)?;
                        let b = beta(dt, eval.sup_nu.max(0.0));
                        let weights = split_weights(dt, t_c, b, eval.sup_nu);
                        f = cell_collision_update(
                            &f,
                            None,
                            &state,
                            &weights,
                            Some(&q),
                            tau_new,
                            &setup.gas,
                        )?;
                    } else {
                        let weights = split_weights(dt, t_c, 1.0, 0.0);
                        f = cell_collision_update(&f, None, &state, &weights, None, tau_new, &setup.gas)?;
                    }
                }
                CollisionTreatment::Boltzmann => {
                    substep_boltzmann(&mut f, kernel.as_ref().unwrap(), dt)?;
                }
                CollisionTreatment::Collisionless => unreachable!(),
            }
            time += dt;
            let wnow = moments(&f)?.conservative();
            for a in 0..5 {
                drift = drift.max((wnow[a] - w0[a]).abs() / scale);
            }
        }
        times.push(time);
        slices.push(f.center_slice_x());
        momhist.push(moments(&f)?);
    }

    Ok(RelaxationResult {
        tau_r,
        times,
        slices,
        moments: momhist,
        conservation_drift: drift,
        final_distribution: f,
    })
}
