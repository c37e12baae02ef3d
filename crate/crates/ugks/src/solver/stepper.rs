//! One time step of the unified scheme: reconstruct, flux, macroscopic
//! update, then the per-cell hybrid collision update.

use std::sync::Arc;

use rayon::prelude::*;

use super::boundary::BoundarySpec;
use super::mesh::Mesh1D;
use crate::collision::{build_kernel, conserve_fix, CollisionModel, SpectralKernel};
use crate::error::{Error, Result};
use crate::flux::{macro_slopes, reconstruct_slopes, InterfaceContext, InterfaceFlux};
use crate::hybrid::{beta, cell_collision_update, critical_time, split_weights};
use crate::kinetic::{moments, Distribution, GasProperties, MacroState, VelocityGrid};

/// In-cell collision treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionTreatment {
    /// Explicit Boltzmann blended with implicit Shakhov by the switching
    /// rules.
    Hybrid,
    /// Implicit Shakhov only.
    Shakhov,
    /// Explicit Boltzmann only, sub-stepped to satisfy dt sup_nu <= 0.9.
    Boltzmann,
    /// Pure transport (1/tau_r = 0, no collisions).
    Collisionless,
}

/// Source of the critical time t_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalTimeMode {
    /// t_c = min(4, D(f, M)) tau_r, re-evaluated per cell per step.
    Adaptive,
    /// t_c pinned to a fixed multiple of the local tau_r.
    FixedMultiple(f64),
}

/// Spectral discretization parameters for the collision kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralSettings {
    pub modes: usize,
    /// (polar, azimuth) counts of the half-sphere product quadrature.
    pub sphere: (usize, usize),
}

/// Mutable per-run data.
pub struct SimulationState {
    pub cells: Vec<Distribution>,
    pub macros: Vec<MacroState>,
    pub step_count: usize,
    pub time: f64,
}

impl SimulationState {
    /// Initialize from per-cell equilibrium states.
    pub fn from_states(grid: &Arc<VelocityGrid>, states: &[MacroState]) -> Self {
        let cells: Vec<Distribution> = states
            .iter()
            .map(|s| crate::kinetic::maxwellian(grid, s))
            .collect();
        let macros = cells.iter().map(|f| moments(f).unwrap()).collect();
        Self {
            cells,
            macros,
            step_count: 0,
            time: 0.0,
        }
    }
}

/// What each cell did during a step.
pub struct StepReport {
    /// True where the explicit Boltzmann operator participated (A > 0).
    pub boltzmann_active: Vec<bool>,
    /// Per-cell dt/tau (equilibrium mean free time) diagnostic.
    pub dt_over_tau: Vec<f64>,
}

/// The 1-D unified solver: immutable configuration plus the collision
/// kernel shared by all cells.
pub struct Solver {
    pub grid: Arc<VelocityGrid>,
    pub gas: GasProperties,
    pub model: CollisionModel,
    pub mesh: Mesh1D,
    pub boundary: BoundarySpec,
    pub treatment: CollisionTreatment,
    pub t_c_mode: CriticalTimeMode,
    kernel: Option<SpectralKernel>,
}

impl Solver {
    /// Build a solver; the spectral kernel is constructed when the
    /// treatment involves the Boltzmann operator.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        grid: Arc<VelocityGrid>,
        gas: GasProperties,
        model: CollisionModel,
        mesh: Mesh1D,
        boundary: BoundarySpec,
        treatment: CollisionTreatment,
        t_c_mode: CriticalTimeMode,
        spectral: SpectralSettings,
    ) -> Result<Self> {
        gas.validate()?;
        model.validate()?;
        let kernel = match treatment {
            CollisionTreatment::Hybrid | CollisionTreatment::Boltzmann => {
                Some(build_kernel(&model, &grid, spectral.modes, spectral.sphere)?)
            }
            _ => None,
        };
        Ok(Self {
            grid,
            gas,
            model,
            mesh,
            boundary,
            treatment,
            t_c_mode,
            kernel,
        })
    }

    pub fn kernel(&self) -> Option<&SpectralKernel> {
        self.kernel.as_ref()
    }

    /// Advance the state by one step with per-cell step sizes `dts`
    /// (pass a constant vector for a global step; interfaces are then
    /// evaluated once and shared, which conserves totals exactly).
    pub fn step(&self, state: &mut SimulationState, dts: &[f64]) -> Result<StepReport> {
        let n = self.mesh.len();
        assert_eq!(state.cells.len(), n);
        assert_eq!(dts.len(), n);
        let global = dts.windows(2).all(|w| w[0] == w[1]);

        // Extended row with ghosts.
        let ghosts = self.boundary.ghosts(&self.grid, &state.cells, &state.macros);
        let (xg_l, xg_r) = self
            .boundary
            .ghost_centers(self.mesh.interfaces(), self.mesh.widths());
        let mut ext_cells: Vec<&Distribution> = Vec::with_capacity(n + 2);
        ext_cells.push(&ghosts.left);
        for c in &state.cells {
            ext_cells.push(c);
        }
        ext_cells.push(&ghosts.right);
        let mut ext_centers = Vec::with_capacity(n + 2);
        ext_centers.push(xg_l);
        ext_centers.extend_from_slice(self.mesh.centers());
        ext_centers.push(xg_r);
        let mut ext_w: Vec<[f64; 5]> = Vec::with_capacity(n + 2);
        ext_w.push(ghosts.left_w);
        for m in &state.macros {
            ext_w.push(m.conservative());
        }
        ext_w.push(ghosts.right_w);

        let slopes = reconstruct_slopes(&ext_cells, &ext_centers);
        let wslopes = macro_slopes(&ext_w, &ext_centers);

        // Interface fluxes. In local mode each interface is integrated
        // over both adjacent step lengths.
        let ifaces = self.mesh.interfaces();
        let fluxes: Vec<(InterfaceFlux, Option<InterfaceFlux>)> = (0..=n)
            .into_par_iter()
            .map(|i| -> Result<(InterfaceFlux, Option<InterfaceFlux>)> {
                let li = i; // extended index of the left cell
                let ri = i + 1;
                let x_if = ifaces[i];
                let nodes = self.grid.len();
                let mut fl = vec![0.0; nodes];
                let mut fr = vec![0.0; nodes];
                let dl = x_if - ext_centers[li];
                let dr = x_if - ext_centers[ri];
                let (cl, cr) = (ext_cells[li].values(), ext_cells[ri].values());
                let (sl, sr) = (&slopes.sigma[li], &slopes.sigma[ri]);
                for k in 0..nodes {
                    fl[k] = cl[k] + sl[k] * dl;
                    fr[k] = cr[k] + sr[k] * dr;
                }
                let ctx = InterfaceContext::new(
                    &self.grid,
                    &fl,
                    &fr,
                    sl,
                    sr,
                    &wslopes[li],
                    &wslopes[ri],
                    &self.gas,
                )
                .map_err(|e| Error::Degenerate(format!("interface {i}: {e}")))?;
                let inv_tau = match self.treatment {
                    CollisionTreatment::Collisionless => 0.0,
                    _ => 1.0 / self.model.relaxation_time(&ctx.state),
                };
                let dt_left = if i == 0 { dts[0] } else { dts[i - 1] };
                let dt_right = if i == n { dts[n - 1] } else { dts[i] };
                let main = ctx.integrate(dt_left, inv_tau)?;
                let second = if global || dt_left == dt_right {
                    None
                } else {
                    Some(ctx.integrate(dt_right, inv_tau)?)
                };
                Ok((main, second))
            })
            .collect::<Result<Vec<_>>>()?;

        // Per-cell macroscopic update and collision branch.
        let widths = self.mesh.widths();
        let taus: Vec<f64> = state
            .macros
            .iter()
            .map(|m| self.model.mean_free_time(m))
            .collect();
        let results: Vec<(Distribution, MacroState, bool)> = state
            .cells
            .par_iter()
            .enumerate()
            .map(|(j, f_n)| -> Result<(Distribution, MacroState, bool)> {
                let dt = dts[j];
                // The left interface of cell j was integrated with dt_left
                // = dts of the cell to its left; pick the copy integrated
                // over this cell's own dt.
                let left_flux: &InterfaceFlux = {
                    let (main, second) = &fluxes[j];
                    if j == 0 || dts[j - 1] == dt {
                        main
                    } else {
                        second.as_ref().unwrap()
                    }
                };
                let right_flux: &InterfaceFlux = &fluxes[j + 1].0;

                let dx = widths[j];
                let mut inc = Distribution::zeros(&self.grid);
                {
                    let vals = inc.values_mut();
                    for k in 0..vals.len() {
                        vals[k] = (left_flux.micro[k] - right_flux.micro[k]) / dx;
                    }
                }
                let w_old = state.macros[j].conservative();
                let mut w_new = [0.0f64; 5];
                for a in 0..5 {
                    w_new[a] =
                        w_old[a] + (left_flux.macro_flux[a] - right_flux.macro_flux[a]) / dx;
                }
                let state_new = MacroState::from_conservative(&w_new)
                    .map_err(|e| Error::Degenerate(format!("cell {j}: {e}")))?;

                let (f_next, used_boltzmann) = match self.treatment {
                    CollisionTreatment::Collisionless => {
                        let mut out = f_n.clone();
                        for (v, d) in out.values_mut().iter_mut().zip(inc.values()) {
                            *v += d;
                        }
                        (out, false)
                    }
                    CollisionTreatment::Shakhov => {
                        let tau_new = self.model.relaxation_time(&state_new);
                        let weights = split_weights(dt, 0.0, 1.0, 0.0);
                        let f = cell_collision_update(
                            f_n,
                            Some(&inc),
                            &state_new,
                            &weights,
                            None,
                            tau_new,
                            &self.gas,
                        )
                        .map_err(|e| Error::Degenerate(format!("cell {j}: {e}")))?;
                        (f, false)
                    }
                    CollisionTreatment::Hybrid => {
                        let tau_r_old = self.model.relaxation_time(&state.macros[j]);
                        let t_c = match self.t_c_mode {
                            CriticalTimeMode::Adaptive => critical_time(f_n, tau_r_old)
                                .map_err(|e| Error::Degenerate(format!("cell {j}: {e}")))?,
                            CriticalTimeMode::FixedMultiple(m) => m * tau_r_old,
                        };
                        let tau_new = self.model.relaxation_time(&state_new);
                        let (weights, q) = if dt < t_c {
                            let kernel = self.kernel.as_ref().expect("hybrid needs a kernel");
                            let eval = kernel
                                .collide(f_n)
                                .map_err(|e| Error::Numeric(format!("cell {j}: {e}")))?;
                            let (q, _) = conserve_fix(&eval.rate)
                                .map_err(|e| Error::Degenerate(format!("cell {j}: {e}")))?;
                            let b = beta(dt, eval.sup_nu.max(0.0));
                            (split_weights(dt, t_c, b, eval.sup_nu), Some(q))
                        } else {
                            (split_weights(dt, t_c, 1.0, 0.0), None)
                        };
                        let active = weights.a > 0.0;
                        let f = cell_collision_update(
                            f_n,
                            Some(&inc),
                            &state_new,
                            &weights,
                            q.as_ref(),
                            tau_new,
                            &self.gas,
                        )
                        .map_err(|e| Error::Degenerate(format!("cell {j}: {e}")))?;
                        (f, active)
                    }
                    CollisionTreatment::Boltzmann => {
                        let kernel = self.kernel.as_ref().expect("boltzmann needs a kernel");
                        let mut f = f_n.clone();
                        for (v, d) in f.values_mut().iter_mut().zip(inc.values()) {
                            *v += d;
                        }
                        substep_boltzmann(&mut f, kernel, dt)
                            .map_err(|e| Error::Numeric(format!("cell {j}: {e}")))?;
                        (f, true)
                    }
                };
                let new_macro = moments(&f_next)
                    .map_err(|e| Error::Degenerate(format!("cell {j}: {e}")))?;
                Ok((f_next, new_macro, used_boltzmann))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut boltzmann_active = Vec::with_capacity(n);
        let mut dt_over_tau = Vec::with_capacity(n);
        for (j, (f, m, used)) in results.into_iter().enumerate() {
            state.cells[j] = f;
            state.macros[j] = m;
            boltzmann_active.push(used);
            dt_over_tau.push(dts[j] / taus[j]);
        }
        state.step_count += 1;
        state.time += dts.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(StepReport {
            boltzmann_active,
            dt_over_tau,
        })
    }
}

/// Explicit Boltzmann relaxation of one cell over `dt`, subdivided so
/// every sub-step satisfies dt sup_nu <= 0.9.
pub fn substep_boltzmann(
    f: &mut Distribution,
    kernel: &SpectralKernel,
    dt: f64,
) -> Result<()> {
    let mut remaining = dt;
    let mut guard = 0;
    while remaining > 0.0 {
        let eval = kernel.collide(f)?;
        let (q, _) = conserve_fix(&eval.rate)?;
        let cap = if eval.sup_nu > 0.0 {
            0.9 / eval.sup_nu
        } else {
            remaining
        };
        let sub = remaining.min(cap);
        for (v, r) in f.values_mut().iter_mut().zip(q.values()) {
            *v += sub * r;
        }
        remaining -= sub;
        guard += 1;
        if guard > 100_000 {
            return Err(Error::NonConvergence {
                iterations: guard,
                last_residual: remaining,
                history: vec![],
            });
        }
    }
    Ok(())
}
