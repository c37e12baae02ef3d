//! Uniform Cartesian velocity lattice and per-cell distribution storage.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform, cell-centered 3-D velocity lattice with equal extent and node
/// count on every axis (the spectral collision kernel requires the cube).
///
/// Nodes on axis a sit at `shift[a] - L + (i + 1/2) du`, so no node lies
/// exactly at zero velocity when the shift vanishes and the count is even.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    half_width: f64,
    points: usize,
    spacing: f64,
    shift: [f64; 3],
    axis: Vec<f64>,
}

/// Build the standard origin-centered lattice.
pub fn build_grid(half_width: f64, points_per_axis: usize) -> Result<VelocityGrid> {
    VelocityGrid::new(half_width, points_per_axis, [0.0; 3])
}

impl VelocityGrid {
    /// Lattice with an explicit center offset per axis (used by the
    /// on-lattice Galilean shift checks).
    pub fn new(half_width: f64, points_per_axis: usize, shift: [f64; 3]) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::Config(format!(
                "velocity grid half_width must be positive, got {half_width}"
            )));
        }
        if points_per_axis < 4 {
            return Err(Error::Config(format!(
                "velocity grid needs at least 4 points per axis, got {points_per_axis}"
            )));
        }
        let spacing = 2.0 * half_width / points_per_axis as f64;
        let axis = (0..points_per_axis)
            .map(|i| -half_width + (i as f64 + 0.5) * spacing)
            .collect();
        Ok(Self {
            half_width,
            points: points_per_axis,
            spacing,
            shift,
            axis,
        })
    }

    /// Same lattice translated by one spacing along x.
    pub fn shifted_by_spacing(&self) -> Self {
        let mut g = self.clone();
        g.shift[0] += self.spacing;
        g
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn shift(&self) -> [f64; 3] {
        self.shift
    }

    /// Total node count.
    pub fn len(&self) -> usize {
        self.points * self.points * self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight (midpoint rule, all nodes equal).
    pub fn weight(&self) -> f64 {
        self.spacing * self.spacing * self.spacing
    }

    /// Node coordinate along axis `a` at index `i`.
    #[inline]
    pub fn coord(&self, a: usize, i: usize) -> f64 {
        self.axis[i] + self.shift[a]
    }

    /// Flattened index of node (i, j, k).
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.points + j) * self.points + k
    }

    /// Largest |u_x| on the lattice (drives the CFL condition).
    pub fn max_speed_x(&self) -> f64 {
        let lo = (self.axis[0] + self.shift[0]).abs();
        let hi = (self.axis[self.points - 1] + self.shift[0]).abs();
        lo.max(hi)
    }

    /// Visit every node with its velocity and flat index.
    #[inline]
    pub fn for_each_node(&self, mut body: impl FnMut(usize, [f64; 3])) {
        let n = self.points;
        let mut idx = 0;
        for i in 0..n {
            let ux = self.axis[i] + self.shift[0];
            for j in 0..n {
                let uy = self.axis[j] + self.shift[1];
                for k in 0..n {
                    let uz = self.axis[k] + self.shift[2];
                    body(idx, [ux, uy, uz]);
                    idx += 1;
                }
            }
        }
    }

    /// Nodewise evaluation of a function of velocity.
    pub fn sample(self: &Arc<Self>, f: impl Fn([f64; 3]) -> f64) -> Distribution {
        let mut values = vec![0.0; self.len()];
        self.for_each_node(|idx, u| values[idx] = f(u));
        Distribution {
            grid: Arc::clone(self),
            values,
        }
    }
}

/// One cell's velocity distribution on its lattice.
#[derive(Debug, Clone)]
pub struct Distribution {
    grid: Arc<VelocityGrid>,
    values: Vec<f64>,
}

impl Distribution {
    pub fn zeros(grid: &Arc<VelocityGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<VelocityGrid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len());
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn grid(&self) -> &Arc<VelocityGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Discrete mass w * sum f.
    pub fn mass(&self) -> f64 {
        self.grid.weight() * self.values.iter().sum::<f64>()
    }

    /// Largest |f| over the lattice.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// x-axis slice through the transverse center, f(u, 0, 0).
    ///
    /// The cell-centered lattice has no node at v = w = 0; the slice is the
    /// average of the four nearest transverse nodes, second-order accurate
    /// in the spacing and symmetric for symmetric data.
    pub fn center_slice_x(&self) -> Vec<(f64, f64)> {
        let g = &self.grid;
        let n = g.points_per_axis();
        // Transverse indices bracketing zero velocity.
        let pick = |a: usize| {
            let mut best = 0usize;
            let mut best_val = f64::INFINITY;
            for i in 0..n {
                let c = g.coord(a, i).abs();
                if c < best_val {
                    best_val = c;
                    best = i;
                }
            }
            let partner = if g.coord(a, best) > 0.0 {
                best.saturating_sub(1)
            } else {
                (best + 1).min(n - 1)
            };
            (best, partner)
        };
        let (j0, j1) = pick(1);
        let (k0, k1) = pick(2);
        (0..n)
            .map(|i| {
                let s = self.values[g.index(i, j0, k0)]
                    + self.values[g.index(i, j0, k1)]
                    + self.values[g.index(i, j1, k0)]
                    + self.values[g.index(i, j1, k1)];
                (g.coord(0, i), 0.25 * s)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_and_extremes() {
        let g = build_grid(8.0, 32).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.len(), 32 * 32 * 32);
        assert!((g.coord(0, 0) + 7.75).abs() < 1e-15);
        assert!((g.coord(0, 31) - 7.75).abs() < 1e-15);
        assert!((g.max_speed_x() - 7.75).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(build_grid(0.0, 32).is_err());
        assert!(build_grid(-1.0, 32).is_err());
        assert!(build_grid(8.0, 3).is_err());
    }

    #[test]
    fn nodes_symmetric_about_origin() {
        let g = build_grid(6.0, 24).unwrap();
        for i in 0..24 {
            assert!((g.coord(0, i) + g.coord(0, 23 - i)).abs() < 1e-14);
        }
        // no node exactly at zero for the even count
        for i in 0..24 {
            assert!(g.coord(0, i).abs() > 0.1);
        }
    }

    #[test]
    fn shifted_lattice_moves_nodes() {
        let g = build_grid(6.0, 12).unwrap();
        let s = g.shifted_by_spacing();
        for i in 0..12 {
            assert!((s.coord(0, i) - g.coord(0, i) - g.spacing()).abs() < 1e-14);
            assert!((s.coord(1, i) - g.coord(1, i)).abs() < 1e-14);
        }
    }

    #[test]
    fn center_slice_is_symmetric_for_even_data() {
        let g = Arc::new(build_grid(5.0, 16).unwrap());
        let f = g.sample(|u| (-u[0] * u[0] - u[1] * u[1] - u[2] * u[2]).exp());
        let slice = f.center_slice_x();
        let n = slice.len();
        for i in 0..n {
            assert!((slice[i].1 - slice[n - 1 - i].1).abs() < 1e-15);
        }
    }
}
