//! Ghost-cell boundary treatments for the 1-D solver.

use std::sync::Arc;

use crate::kinetic::{maxwellian, Distribution, MacroState, VelocityGrid};

/// Boundary specification; ghost states must be valid equilibria.
#[derive(Debug, Clone)]
pub enum BoundarySpec {
    /// Dirichlet ghosts pinned to fixed equilibrium states (used by the
    /// Sod tube and, with supersonic in/outflow states, the shock).
    Fixed {
        left: MacroState,
        right: MacroState,
    },
    /// Supersonic inflow on the left, zero-gradient outflow on the right.
    InflowOutflow { inflow: MacroState },
    /// Wrap-around.
    Periodic,
}

/// Materialized ghost data for one step.
pub struct GhostCells {
    pub left: Distribution,
    pub right: Distribution,
    pub left_w: [f64; 5],
    pub right_w: [f64; 5],
}

impl BoundarySpec {
    /// Build the ghost distributions for the current cell row.
    pub fn ghosts(&self, grid: &Arc<VelocityGrid>, cells: &[Distribution], macros: &[MacroState]) -> GhostCells {
        match self {
            BoundarySpec::Fixed { left, right } => GhostCells {
                left: maxwellian(grid, left),
                right: maxwellian(grid, right),
                left_w: left.conservative(),
                right_w: right.conservative(),
            },
            BoundarySpec::InflowOutflow { inflow } => GhostCells {
                left: maxwellian(grid, inflow),
                right: cells[cells.len() - 1].clone(),
                left_w: inflow.conservative(),
                right_w: macros[macros.len() - 1].conservative(),
            },
            BoundarySpec::Periodic => GhostCells {
                left: cells[cells.len() - 1].clone(),
                right: cells[0].clone(),
                left_w: macros[macros.len() - 1].conservative(),
                right_w: macros[0].conservative(),
            },
        }
    }

    /// Ghost cell center positions, mirroring the adjacent widths (or the
    /// wrapped widths for the periodic case).
    pub fn ghost_centers(&self, interfaces: &[f64], widths: &[f64]) -> (f64, f64) {
        let first = interfaces[0];
        let last = *interfaces.last().unwrap();
        match self {
            BoundarySpec::Periodic => (
                first - 0.5 * widths[widths.len() - 1],
                last + 0.5 * widths[0],
            ),
            _ => (first - 0.5 * widths[0], last + 0.5 * widths[widths.len() - 1]),
        }
    }
}
