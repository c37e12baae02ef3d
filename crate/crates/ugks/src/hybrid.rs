//! Switching logic between the explicit Boltzmann and implicit Shakhov
//! collision treatments, and the per-cell collision update.
//!
//! The update solves
//!   f^{n+1} = [f^n + flux + A Q^n + (B/tau) Mtilde^{n+1}] / (1 + B/tau)
//! in closed form: the modified equilibrium at the new time level depends
//! on f^{n+1} only through macroscopic quantities that are already known
//! (the conservatively updated state, plus the Shakhov-relaxed heat flux).

use std::sync::Arc;

use crate::collision::conserve_fix;
use crate::error::{Error, Result};
use crate::kinetic::{
    distance_to_equilibrium, psi_at, shakhov_correction, Distribution, GasProperties,
    MacroState, VelocityGrid,
};
use crate::util::solve5;

/// Per-cell explicit/implicit split of one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitWeights {
    /// Explicit Boltzmann weight (time units). Zero when dt >= t_c.
    pub a: f64,
    /// Implicit Shakhov weight; a + b = dt exactly.
    pub b: f64,
    /// Transition parameter in (0, 1].
    pub beta: f64,
    /// Critical time used for the branch decision.
    pub t_c: f64,
    /// Supremum of the collision frequency over the velocity lattice
    /// (zero when the Boltzmann branch was not evaluated).
    pub sup_nu: f64,
}

/// Critical time t_c = min(4, D(f, M)) tau_r below which the full
/// Boltzmann operator participates in the update.
pub fn critical_time(f: &Distribution, tau_r: f64) -> Result<f64> {
    let d = distance_to_equilibrium(f)?;
    Ok(d.min(4.0) * tau_r)
}

/// Transition parameter: 1 while the explicit Boltzmann step is stable
/// (dt sup_nu <= 1), decaying exponentially beyond; continuous at the
/// join.
pub fn beta(dt: f64, sup_nu: f64) -> f64 {
    debug_assert!(dt > 0.0 && sup_nu >= 0.0);
    if dt * sup_nu < 1.0 {
        1.0
    } else {
        (1.0 - dt * sup_nu).exp()
    }
}

/// The (A, B) split: (beta dt, (1 - beta) dt) in the kinetic branch,
/// (0, dt) once the step exceeds the critical time.
pub fn split_weights(dt: f64, t_c: f64, beta: f64, sup_nu: f64) -> SplitWeights {
    if dt < t_c {
        let a = beta * dt;
        SplitWeights {
            a,
            b: dt - a,
            beta,
            t_c,
            sup_nu,
        }
    } else {
        SplitWeights {
            a: 0.0,
            b: dt,
            beta,
            t_c,
            sup_nu,
        }
    }
}

/// Shakhov equilibrium whose discrete conservative moments match the
/// target state exactly.
///
/// The analytic Maxwellian's grid moments differ from the continuum ones
/// by the quadrature error, which would leak conserved quantities through
/// the implicit step on hot or tight grids. A Newton adjustment of
/// (rho, U, lambda) pins the five discrete moments; the heat-flux
/// correction, whose moments vanish only in the continuum, is projected
/// onto the discretely conservative complement.
pub fn discrete_shakhov_equilibrium(
    grid: &Arc<VelocityGrid>,
    target: &MacroState,
    heat_flux: [f64; 3],
    gas: &GasProperties,
) -> Result<Distribution> {
    let want = target.conservative();
    let scale = [
        target.rho,
        target.rho * (2.0 * crate::kinetic::R_GAS * target.temp).sqrt(),
        target.rho * (2.0 * crate::kinetic::R_GAS * target.temp).sqrt(),
        target.rho * (2.0 * crate::kinetic::R_GAS * target.temp).sqrt(),
        target.energy,
    ];
    let w = grid.weight();

    let mut rho = target.rho;
    let mut vel = target.velocity;
    let mut lam = target.lambda;
    let mut m = Distribution::zeros(grid);
    for iter in 0..25 {
        let amp = rho * (lam / std::f64::consts::PI).powf(1.5);
        let mut mom = [0.0f64; 5];
        let mut jac = [[0.0f64; 5]; 5];
        {
            let vals = m.values_mut();
            grid.for_each_node(|idx, u| {
                let c = [u[0] - vel[0], u[1] - vel[1], u[2] - vel[2]];
                let c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
                let mv = amp * (-lam * c2).exp();
                vals[idx] = mv;
                let p = psi_at(u);
                // dM/d(rho, Ux, Uy, Uz, lambda) over M
                let d = [
                    1.0 / rho,
                    2.0 * lam * c[0],
                    2.0 * lam * c[1],
                    2.0 * lam * c[2],
                    1.5 / lam - c2,
                ];
                for a in 0..5 {
                    mom[a] += p[a] * mv;
                    for b in 0..5 {
                        jac[a][b] += p[a] * d[b] * mv;
                    }
                }
            });
        }
        let mut res = [0.0f64; 5];
        let mut worst = 0.0f64;
        for a in 0..5 {
            res[a] = w * mom[a] - want[a];
            worst = worst.max((res[a] / scale[a]).abs());
        }
        if worst < 1e-13 {
            break;
        }
        if iter == 24 {
            return Err(Error::Degenerate(format!(
                "discrete equilibrium failed to converge (residual {worst:.3e})"
            )));
        }
        for row in &mut jac {
            for e in row.iter_mut() {
                *e *= w;
            }
        }
        let (step, cond) = solve5(&jac, &res).ok_or_else(|| {
            Error::Degenerate("singular Jacobian in discrete equilibrium".into())
        })?;
        if cond > 1e14 {
            return Err(Error::Degenerate(format!(
                "ill-conditioned discrete equilibrium solve (pivot ratio {cond:.3e})"
            )));
        }
        rho -= step[0];
        vel[0] -= step[1];
        vel[1] -= step[2];
        vel[2] -= step[3];
        lam -= step[4];
        if !(rho > 0.0) || !(lam > 0.0) {
            return Err(Error::Degenerate(format!(
                "discrete equilibrium left the admissible set (rho {rho}, lambda {lam})"
            )));
        }
    }

    if heat_flux.iter().all(|q| *q == 0.0) || gas.prandtl == 1.0 {
        return Ok(m);
    }
    let mut shakhov_state = *target;
    shakhov_state.heat_flux = heat_flux;
    let g1 = shakhov_correction(grid, &shakhov_state, gas);
    // remove the quadrature-level conservative content of g1
    let (g1, _) = conserve_fix(&g1)?;
    for (mv, gv) in m.values_mut().iter_mut().zip(g1.values()) {
        *mv += gv;
    }
    Ok(m)
}

/// One cell's collision update, Boltzmann-explicit plus Shakhov-implicit.
///
/// `w_new` is the already flux-updated conservative state; `q_n` must be
/// supplied (conservation-fixed) exactly when the explicit weight is
/// positive. `flux_increment` is the per-node time-integrated net flux
/// divided by the cell volume, absent for homogeneous problems.
pub fn cell_collision_update(
    f_n: &Distribution,
    flux_increment: Option<&Distribution>,
    w_new: &MacroState,
    weights: &SplitWeights,
    q_n: Option<&Distribution>,
    tau_r_new: f64,
    gas: &GasProperties,
) -> Result<Distribution> {
    if !(tau_r_new > 0.0) || !tau_r_new.is_finite() {
        return Err(Error::Config(format!(
            "relaxation time must be positive and finite, got {tau_r_new}"
        )));
    }
    if weights.a > 0.0 && q_n.is_none() {
        return Err(Error::Config(
            "explicit collision weight is positive but no Boltzmann rate was supplied".into(),
        ));
    }

    let grid = f_n.grid();
    // Intermediate state f* = f^n + flux + A Q^n.
    let mut star = f_n.clone();
    if let Some(inc) = flux_increment {
        for (s, d) in star.values_mut().iter_mut().zip(inc.values()) {
            *s += d;
        }
    }
    if weights.a > 0.0 {
        let q = q_n.unwrap();
        for (s, d) in star.values_mut().iter_mut().zip(q.values()) {
            *s += weights.a * d;
        }
    }

    // Heat flux of f* about the updated bulk velocity, then the
    // Shakhov-relaxed closed form for q^{n+1}.
    let w = grid.weight();
    let mut q_star = [0.0f64; 3];
    grid.for_each_node(|idx, u| {
        let c = [
            u[0] - w_new.velocity[0],
            u[1] - w_new.velocity[1],
            u[2] - w_new.velocity[2],
        ];
        let c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
        let fv = star.values()[idx];
        q_star[0] += 0.5 * c2 * c[0] * fv;
        q_star[1] += 0.5 * c2 * c[1] * fv;
        q_star[2] += 0.5 * c2 * c[2] * fv;
    });
    let relax = 1.0 + weights.b * gas.prandtl / tau_r_new;
    let q_new = [
        w * q_star[0] / relax,
        w * q_star[1] / relax,
        w * q_star[2] / relax,
    ];

    let m_tilde = discrete_shakhov_equilibrium(grid, w_new, q_new, gas)?;
    let ratio = weights.b / tau_r_new;
    let denom = 1.0 + ratio;
    let mut out = star;
    for (v, mv) in out.values_mut().iter_mut().zip(m_tilde.values()) {
        *v = (*v + ratio * mv) / denom;
        if !v.is_finite() {
            return Err(Error::Numeric("collision update produced non-finite f".into()));
        }
    }
    Ok(out)
}
