//! Limited slope reconstruction on (possibly non-uniform) 1-D meshes.

use crate::kinetic::Distribution;

/// van Leer limited slope from the two one-sided divided differences:
/// (sign(s1) + sign(s2)) |s1||s2| / (|s1| + |s2|).
#[inline]
pub fn van_leer(s1: f64, s2: f64) -> f64 {
    if s1 * s2 > 0.0 {
        2.0 * s1 * s2 / (s1 + s2)
    } else {
        0.0
    }
}

/// Per-cell, per-velocity-node limited slopes for a row of cells (ghost
/// cells included by the caller). The first and last entries get zero
/// slope.
pub struct Slopes {
    /// sigma[cell][node], distribution per unit length.
    pub sigma: Vec<Vec<f64>>,
}

/// Limited slopes of the distributions at the given cell centers.
pub fn reconstruct_slopes(cells: &[&Distribution], centers: &[f64]) -> Slopes {
    assert_eq!(cells.len(), centers.len());
    assert!(cells.len() >= 3, "need at least 3 cells (with ghosts)");
    let nodes = cells[0].values().len();
    let mut sigma = vec![vec![0.0; nodes]; cells.len()];
    for j in 1..cells.len() - 1 {
        let dxm = centers[j] - centers[j - 1];
        let dxp = centers[j + 1] - centers[j];
        let fm = cells[j - 1].values();
        let f0 = cells[j].values();
        let fp = cells[j + 1].values();
        let out = &mut sigma[j];
        for k in 0..nodes {
            let s1 = (f0[k] - fm[k]) / dxm;
            let s2 = (fp[k] - f0[k]) / dxp;
            out[k] = van_leer(s1, s2);
        }
    }
    Slopes { sigma }
}

/// Limited slopes of conservative 5-vectors at the given centers; first
/// and last entries are zero.
pub fn macro_slopes(w: &[[f64; 5]], centers: &[f64]) -> Vec<[f64; 5]> {
    assert_eq!(w.len(), centers.len());
    let mut out = vec![[0.0; 5]; w.len()];
    for j in 1..w.len() - 1 {
        let dxm = centers[j] - centers[j - 1];
        let dxp = centers[j + 1] - centers[j];
        for c in 0..5 {
            let s1 = (w[j][c] - w[j - 1][c]) / dxm;
            let s2 = (w[j + 1][c] - w[j][c]) / dxp;
            out[j][c] = van_leer(s1, s2);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_slopes_pass_through() {
        assert_eq!(van_leer(0.7, 0.7), 0.7);
    }

    #[test]
    fn opposite_signs_limit_to_zero() {
        assert_eq!(van_leer(1.0, -1.0), 0.0);
        assert_eq!(van_leer(-3.0, 2.0), 0.0);
        assert_eq!(van_leer(0.0, 5.0), 0.0);
    }

    #[test]
    fn harmonic_mean_value() {
        assert!((van_leer(1.0, 3.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn bounded_by_twice_the_smaller_slope() {
        for (s1, s2) in [(0.1, 2.0), (1.0, 1.5), (-0.2, -3.0)] {
            let s = van_leer(s1, s2);
            assert!(s.abs() <= 2.0 * s1.abs().min(s2.abs()) + 1e-15);
        }
    }
}
