//! Normal shock structure: Rankine-Hugoniot setup and the steady-state
//! driver with local time stepping on a stretched mesh.

use std::sync::Arc;

use super::boundary::BoundarySpec;
use super::mesh::{cfl_timesteps, Mesh1D};
use super::stepper::{
    CollisionTreatment, CriticalTimeMode, SimulationState, Solver, SpectralSettings,
};
use crate::collision::CollisionModel;
use crate::error::{Error, Result};
use crate::kinetic::{GasProperties, MacroState, VelocityGrid, GAMMA};

/// Downstream state of a steady normal shock from the jump relations
/// (gamma = 5/3). Both states are expressed in the shock frame with the
/// upstream moving at Mach `mach` towards positive x.
pub fn rankine_hugoniot(mach: f64, upstream: &MacroState) -> Result<MacroState> {
    if !(mach > 1.0) {
        return Err(Error::Config(format!(
            "shock Mach number must exceed 1, got {mach}"
        )));
    }
    let g = GAMMA;
    let m2 = mach * mach;
    let rho_ratio = (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
    let p_ratio = (2.0 * g * m2 - (g - 1.0)) / (g + 1.0);
    let rho2 = upstream.rho * rho_ratio;
    let t2 = upstream.temp * p_ratio / rho_ratio;
    let u1 = mach * upstream.sound_speed();
    let u2 = u1 / rho_ratio;
    MacroState::new(rho2, [u2, 0.0, 0.0], t2)
}

/// Upstream state at rest-frame reference conditions, moving at Mach
/// `mach` in the shock frame.
pub fn shock_upstream(mach: f64) -> MacroState {
    let base = MacroState::new(1.0, [0.0; 3], 1.0).unwrap();
    let u1 = mach * base.sound_speed();
    MacroState::new(1.0, [u1, 0.0, 0.0], 1.0).unwrap()
}

/// Setup for a steady shock-structure run.
#[derive(Debug, Clone)]
pub struct ShockSetup {
    pub mach: f64,
    pub domain: (f64, f64),
    /// Uniform fine zone (upstream-weighted) and its spacing.
    pub fine_zone: (f64, f64),
    pub fine_dx: f64,
    pub stretch_ratio: f64,
    pub cfl: f64,
    /// Use per-cell local steps (steady-state acceleration) or the global
    /// minimum.
    pub local_time_step: bool,
    pub treatment: CollisionTreatment,
    pub t_c_mode: CriticalTimeMode,
    pub model: CollisionModel,
    pub gas: GasProperties,
    pub spectral: SpectralSettings,
    /// Stop when max_j |rho^{n+1} - rho^n| / dt_j falls below this.
    pub residual_target: f64,
    pub max_steps: usize,
    /// Half-width of the initial smooth blend between the two states.
    pub init_thickness: f64,
}

/// Converged shock profiles.
pub struct ShockResult {
    /// Cell centers, shifted so the normalized density crosses 1/2 at 0.
    pub x: Vec<f64>,
    pub states: Vec<MacroState>,
    /// (rho - rho1)/(rho2 - rho1) per cell.
    pub density_normalized: Vec<f64>,
    /// (T - T1)/(T2 - T1) per cell.
    pub temperature_normalized: Vec<f64>,
    /// x-position of the transition between Boltzmann-active and pure
    /// Shakhov cells at the final step (shifted coordinates).
    pub switch_location: Option<f64>,
    pub upstream: MacroState,
    pub downstream: MacroState,
    pub steps: usize,
    pub residual_history: Vec<f64>,
    /// Which cells used the Boltzmann operator at the final step.
    pub boltzmann_active: Vec<bool>,
    /// Kinetic fluxes (mass, momentum, energy) at the first and last cell.
    pub boundary_fluxes: ([f64; 3], [f64; 3]),
    pub final_state: SimulationState,
    pub mesh: Mesh1D,
}

/// Iterate to the steady shock structure.
pub fn run_shock_structure(grid: &Arc<VelocityGrid>, setup: &ShockSetup) -> Result<ShockResult> {
    let upstream = shock_upstream(setup.mach);
    let downstream = rankine_hugoniot(setup.mach, &upstream)?;
    let mesh = Mesh1D::stretched(
        setup.domain,
        setup.fine_zone,
        setup.fine_dx,
        setup.stretch_ratio,
    )?;
    // Smooth initial blend centered at x = 0.
    let blend = |x: f64| 0.5 * (1.0 + (x / setup.init_thickness).tanh());
    let states: Vec<MacroState> = mesh
        .centers()
        .iter()
        .map(|&x| {
            let s = blend(x);
            MacroState::new(
                upstream.rho * (1.0 - s) + downstream.rho * s,
                [
                    upstream.velocity[0] * (1.0 - s) + downstream.velocity[0] * s,
                    0.0,
                    0.0,
                ],
                upstream.temp * (1.0 - s) + downstream.temp * s,
            )
            .unwrap()
        })
        .collect();
    let solver = Solver::new(
        Arc::clone(grid),
        setup.gas,
        setup.model,
        mesh,
        BoundarySpec::Fixed {
            left: upstream,
            right: downstream,
        },
        setup.treatment,
        setup.t_c_mode,
        setup.spectral,
    )?;
    let mut state = SimulationState::from_states(grid, &states);

    let u_max = grid.max_speed_x();
    let dts = cfl_timesteps(&solver.mesh, u_max, setup.cfl)?;
    let dts = if setup.local_time_step {
        dts
    } else {
        let dt = dts.iter().cloned().fold(f64::INFINITY, f64::min);
        vec![dt; solver.mesh.len()]
    };

    let mut residual_history = Vec::new();
    let mut last_report = None;
    let mut converged = false;
    for _ in 0..setup.max_steps {
        let rho_old: Vec<f64> = state.macros.iter().map(|m| m.rho).collect();
        let report = solver.step(&mut state, &dts)?;
        let residual = state
            .macros
            .iter()
            .zip(&rho_old)
            .zip(&dts)
            .map(|((m, r0), dt)| (m.rho - r0).abs() / dt)
            .fold(0.0, f64::max);
        if state.step_count % 25 == 0 || residual < setup.residual_target {
            residual_history.push(residual);
        }
        last_report = Some(report);
        if residual < setup.residual_target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: state.step_count,
            last_residual: *residual_history.last().unwrap_or(&f64::NAN),
            history: residual_history,
        });
    }

    // Normalize and pin the density midpoint at x = 0.
    let drho = downstream.rho - upstream.rho;
    let density_normalized: Vec<f64> = state
        .macros
        .iter()
        .map(|m| (m.rho - upstream.rho) / drho)
        .collect();
    let temperature_normalized: Vec<f64> = state
        .macros
        .iter()
        .map(|m| (m.temp - upstream.temp) / (downstream.temp - upstream.temp))
        .collect();
    let centers = solver.mesh.centers();
    let mut origin = 0.0;
    for j in 1..centers.len() {
        let (a, b) = (density_normalized[j - 1], density_normalized[j]);
        if a < 0.5 && b >= 0.5 {
            origin = centers[j - 1] + (0.5 - a) / (b - a) * (centers[j] - centers[j - 1]);
            break;
        }
    }
    let x: Vec<f64> = centers.iter().map(|c| c - origin).collect();

    let report = last_report.unwrap();
    let mut switch_location = None;
    for j in 1..report.boltzmann_active.len() {
        if report.boltzmann_active[j - 1] != report.boltzmann_active[j] {
            switch_location = Some(0.5 * (x[j - 1] + x[j]));
        }
    }

    // Kinetic conserved fluxes at the domain ends.
    let flux_at = |f: &crate::kinetic::Distribution| -> [f64; 3] {
        let w = grid.weight();
        let mut out = [0.0f64; 3];
        grid.for_each_node(|idx, u| {
            let fv = f.values()[idx];
            out[0] += u[0] * fv;
            out[1] += u[0] * u[0] * fv;
            out[2] += 0.5 * u[0] * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) * fv;
        });
        for o in &mut out {
            *o *= w;
        }
        out
    };
    let boundary_fluxes = (
        flux_at(&state.cells[0]),
        flux_at(&state.cells[state.cells.len() - 1]),
    );

    Ok(ShockResult {
        x,
        states: state.macros.clone(),
        density_normalized,
        temperature_normalized,
        switch_location,
        upstream,
        downstream,
        steps: state.step_count,
        residual_history,
        boltzmann_active: report.boltzmann_active,
        boundary_fluxes,
        final_state: state,
        mesh: solver.mesh.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mach3_density_ratio_is_three() {
        let up = shock_upstream(3.0);
        let down = rankine_hugoniot(3.0, &up).unwrap();
        assert!((down.rho / up.rho - 3.0).abs() < 1e-14);
    }

    #[test]
    fn near_sonic_ratios_approach_unity() {
        let up = shock_upstream(1.0 + 1e-9);
        let down = rankine_hugoniot(1.0 + 1e-9, &up).unwrap();
        assert!((down.rho / up.rho - 1.0).abs() < 1e-8);
        assert!((down.temp / up.temp - 1.0).abs() < 1e-8);
    }

    #[test]
    fn jump_fluxes_balance() {
        for mach in [1.2, 2.0, 3.0, 6.0] {
            let up = shock_upstream(mach);
            let down = rankine_hugoniot(mach, &up).unwrap();
            let flux = |s: &MacroState| {
                let u = s.velocity[0];
                [
                    s.rho * u,
                    s.rho * u * u + s.pressure,
                    (s.energy + s.pressure) * u,
                ]
            };
            let f1 = flux(&up);
            let f2 = flux(&down);
            for a in 0..3 {
                assert!(
                    (f1[a] - f2[a]).abs() < 1e-12 * f1[a].abs().max(1.0),
                    "M {mach} flux {a}: {} vs {}",
                    f1[a],
                    f2[a]
                );
            }
        }
    }

    #[test]
    fn subsonic_mach_rejected() {
        let up = shock_upstream(2.0);
        assert!(rankine_hugoniot(0.9, &up).is_err());
        assert!(rankine_hugoniot(1.0, &up).is_err());
    }
}
