//! Closed-form time integrals of the interface evolution solution.
//!
//! Every time dependence in the interface distribution is polynomial or
//! exponential in t/tau, so the flux integrals over one step have closed
//! forms. The small-x branches keep the collisionless limit exact: with
//! 1/tau = 0 the coefficients in front of the equilibrium terms cancel
//! bitwise against each other.

/// The five integrals over `[0, dt]` used by the interface flux:
///
/// - `w_eq`      = int (1 - e^{-t/tau}) dt
/// - `w_t`       = int t dt
/// - `w_eq_tau`  = tau * w_eq
/// - `w_decay_t` = int t e^{-t/tau} dt
/// - `w_decay`   = int e^{-t/tau} dt
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeIntegrals {
    pub w_eq: f64,
    pub w_t: f64,
    pub w_eq_tau: f64,
    pub w_decay_t: f64,
    pub w_decay: f64,
}

impl TimeIntegrals {
    /// Integrals for a step of length `dt` with relaxation rate `inv_tau`
    /// (pass 0 for the collisionless case).
    pub fn new(dt: f64, inv_tau: f64) -> Self {
        debug_assert!(dt > 0.0 && inv_tau >= 0.0);
        let x = dt * inv_tau;
        let half_dt2 = 0.5 * dt * dt;
        if x == 0.0 {
            return Self {
                w_eq: 0.0,
                w_t: half_dt2,
                w_eq_tau: half_dt2,
                w_decay_t: half_dt2,
                w_decay: dt,
            };
        }
        if x < 1e-3 {
            // Series in x; relative truncation error below 1e-15 here.
            let x2 = x * x;
            let x3 = x2 * x;
            return Self {
                w_eq: dt * (0.5 * x - x2 / 6.0 + x3 / 24.0),
                w_t: half_dt2,
                w_eq_tau: dt * dt * (0.5 - x / 6.0 + x2 / 24.0 - x3 / 120.0),
                w_decay_t: dt * dt * (0.5 - x / 3.0 + x2 / 8.0 - x3 / 30.0),
                w_decay: dt * (1.0 - 0.5 * x + x2 / 6.0 - x3 / 24.0),
            };
        }
        let em = (-x).exp_m1(); // e^{-x} - 1
        let one_minus_e = -em;
        let e = 1.0 + em;
        let tau = 1.0 / inv_tau;
        Self {
            w_eq: dt - tau * one_minus_e,
            w_t: half_dt2,
            w_eq_tau: tau * (dt - tau * one_minus_e),
            w_decay_t: tau * (tau * one_minus_e - dt * e),
            w_decay: tau * one_minus_e,
        }
    }
}
