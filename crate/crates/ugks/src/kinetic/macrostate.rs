//! Conservative and primitive moments of a distribution.

use serde::{Deserialize, Serialize};

use super::grid::Distribution;
use super::R_GAS;
use crate::error::{Error, Result};

/// Gas parameters in nondimensional form. The defaults encode the unit
/// system: unit molecular mass, R = 1/2 (so the most probable speed at
/// T = 1 is 1), k = m R, and the monatomic Prandtl number 2/3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasProperties {
    pub mass: f64,
    pub r_gas: f64,
    pub boltzmann: f64,
    pub prandtl: f64,
}

impl Default for GasProperties {
    fn default() -> Self {
        Self {
            mass: 1.0,
            r_gas: R_GAS,
            boltzmann: R_GAS,
            prandtl: 2.0 / 3.0,
        }
    }
}

impl GasProperties {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mass", self.mass),
            ("r_gas", self.r_gas),
            ("boltzmann", self.boltzmann),
            ("prandtl", self.prandtl),
        ] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("gas.{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// beta_i = sqrt(m / 2 k T_i), the inverse thermal width.
    pub fn beta(&self, temp: f64) -> f64 {
        (self.mass / (2.0 * self.boltzmann * temp)).sqrt()
    }
}

/// Macroscopic state: density, bulk velocity, temperature, and the derived
/// and higher moments used by the flux and collision models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroState {
    pub rho: f64,
    pub velocity: [f64; 3],
    pub temp: f64,
    /// Pressure rho R T.
    pub pressure: f64,
    /// lambda = 1/(2 R T).
    pub lambda: f64,
    /// Total energy density rho E = rho |U|^2 / 2 + (3/2) rho R T.
    pub energy: f64,
    /// Heat flux vector.
    pub heat_flux: [f64; 3],
    /// Deviatoric stress (pressure deviator), [xx, yy, zz, xy, xz, yz].
    pub stress: [f64; 6],
}

impl MacroState {
    /// Equilibrium state from primitive variables; zero heat flux and stress.
    pub fn new(rho: f64, velocity: [f64; 3], temp: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Degenerate(format!("non-positive density {rho}")));
        }
        if !(temp > 0.0) || !temp.is_finite() {
            return Err(Error::Degenerate(format!("non-positive temperature {temp}")));
        }
        let speed2 = velocity.iter().map(|u| u * u).sum::<f64>();
        Ok(Self {
            rho,
            velocity,
            temp,
            pressure: rho * R_GAS * temp,
            lambda: 1.0 / (2.0 * R_GAS * temp),
            energy: 0.5 * rho * speed2 + 1.5 * rho * R_GAS * temp,
            heat_flux: [0.0; 3],
            stress: [0.0; 6],
        })
    }

    /// Conservative 5-vector (rho, rho U, rho E).
    pub fn conservative(&self) -> [f64; 5] {
        [
            self.rho,
            self.rho * self.velocity[0],
            self.rho * self.velocity[1],
            self.rho * self.velocity[2],
            self.energy,
        ]
    }

    /// Rebuild primitives from a conservative 5-vector, keeping no
    /// knowledge of heat flux or stress.
    pub fn from_conservative(w: &[f64; 5]) -> Result<Self> {
        let rho = w[0];
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Degenerate(format!(
                "non-positive density {rho} in conservative update"
            )));
        }
        let velocity = [w[1] / rho, w[2] / rho, w[3] / rho];
        let speed2 = velocity.iter().map(|u| u * u).sum::<f64>();
        let temp = (2.0 * w[4] - rho * speed2) / (3.0 * rho * R_GAS);
        if !(temp > 0.0) || !temp.is_finite() {
            return Err(Error::Degenerate(format!(
                "non-positive temperature {temp} in conservative update"
            )));
        }
        Self::new(rho, velocity, temp)
    }

    /// Sound speed sqrt(gamma R T).
    pub fn sound_speed(&self) -> f64 {
        (super::GAMMA * R_GAS * self.temp).sqrt()
    }
}

/// Conservative moment functions psi = (1, u, |u|^2 / 2) at a velocity.
#[inline]
pub(crate) fn psi(u: [f64; 3]) -> [f64; 5] {
    [
        1.0,
        u[0],
        u[1],
        u[2],
        0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]),
    ]
}

/// Evaluate all moments of a distribution by the grid quadrature.
///
/// Fails with a degenerate-state error when the density or temperature is
/// non-positive, which signals vacuum or an unresolved grid.
pub fn moments(f: &Distribution) -> Result<MacroState> {
    let grid = f.grid();
    let w = grid.weight();
    let vals = f.values();

    let mut m0 = 0.0;
    let mut m1 = [0.0f64; 3];
    let mut m2 = 0.0;
    grid.for_each_node(|idx, u| {
        let fv = vals[idx];
        m0 += fv;
        m1[0] += u[0] * fv;
        m1[1] += u[1] * fv;
        m1[2] += u[2] * fv;
        m2 += (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) * fv;
    });
    let rho = w * m0;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Degenerate(format!("moment density {rho}")));
    }
    let velocity = [w * m1[0] / rho, w * m1[1] / rho, w * m1[2] / rho];
    let energy = 0.5 * w * m2;
    let speed2 = velocity.iter().map(|u| u * u).sum::<f64>();
    let temp = (2.0 * energy - rho * speed2) / (3.0 * rho * R_GAS);
    if !(temp > 0.0) || !temp.is_finite() {
        return Err(Error::Degenerate(format!("moment temperature {temp}")));
    }

    // Central moments for heat flux and the pressure deviator.
    let mut q = [0.0f64; 3];
    let mut pij = [0.0f64; 6];
    grid.for_each_node(|idx, u| {
        let fv = vals[idx];
        let c = [
            u[0] - velocity[0],
            u[1] - velocity[1],
            u[2] - velocity[2],
        ];
        let c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
        q[0] += 0.5 * c2 * c[0] * fv;
        q[1] += 0.5 * c2 * c[1] * fv;
        q[2] += 0.5 * c2 * c[2] * fv;
        pij[0] += c[0] * c[0] * fv;
        pij[1] += c[1] * c[1] * fv;
        pij[2] += c[2] * c[2] * fv;
        pij[3] += c[0] * c[1] * fv;
        pij[4] += c[0] * c[2] * fv;
        pij[5] += c[1] * c[2] * fv;
    });
    let pressure = rho * R_GAS * temp;
    let stress = [
        w * pij[0] - pressure,
        w * pij[1] - pressure,
        w * pij[2] - pressure,
        w * pij[3],
        w * pij[4],
        w * pij[5],
    ];
    Ok(MacroState {
        rho,
        velocity,
        temp,
        pressure,
        lambda: 1.0 / (2.0 * R_GAS * temp),
        energy,
        heat_flux: [w * q[0], w * q[1], w * q[2]],
        stress,
    })
}
