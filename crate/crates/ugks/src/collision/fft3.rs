//! 3-D complex FFT on the cell-centered velocity lattice.
//!
//! The transforms produce true Fourier coefficients on the centered
//! lattice: forward gives f_hat(l) = (1/N^3) sum_j f(u_j) e^{-i xi_l . u_j}
//! with xi_l = pi l / L and l the signed mode, inverse evaluates the series
//! back on the nodes. The half-cell node offset (and any lattice shift)
//! is folded into per-axis phase factors around the raw FFT.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::kinetic::VelocityGrid;

pub type C64 = Complex<f64>;

pub struct Fft3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    phase_fwd: [Vec<C64>; 3],
    phase_inv: [Vec<C64>; 3],
}

impl Fft3 {
    pub fn new(grid: &VelocityGrid) -> Self {
        let n = grid.points_per_axis();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let half = grid.half_width();
        let norm = 1.0 / n as f64;
        let mut phase_fwd: [Vec<C64>; 3] = Default::default();
        let mut phase_inv: [Vec<C64>; 3] = Default::default();
        for a in 0..3 {
            let x0 = grid.coord(a, 0); // first node coordinate on axis a
            phase_fwd[a] = (0..n)
                .map(|idx| {
                    let l = signed_mode(n, idx) as f64;
                    let xi = std::f64::consts::PI * l / half;
                    C64::from_polar(norm, -xi * x0)
                })
                .collect();
            phase_inv[a] = (0..n)
                .map(|idx| {
                    let l = signed_mode(n, idx) as f64;
                    let xi = std::f64::consts::PI * l / half;
                    C64::from_polar(1.0, xi * x0)
                })
                .collect();
        }
        Self {
            n,
            fwd,
            inv,
            phase_fwd,
            phase_inv,
        }
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Forward transform of real nodal data into centered Fourier modes.
    pub fn forward(&self, src: &[f64], dst: &mut Vec<C64>) {
        assert_eq!(src.len(), self.len());
        dst.clear();
        dst.extend(src.iter().map(|&v| C64::new(v, 0.0)));
        self.run(dst, false);
        self.apply_phase(dst, &self.phase_fwd);
    }

    /// Inverse transform; writes real parts into `dst` and returns the
    /// largest |imaginary part| seen (should be round-off for Hermitian
    /// mode data).
    pub fn inverse(&self, modes: &[C64], dst: &mut [f64], work: &mut Vec<C64>) -> f64 {
        assert_eq!(modes.len(), self.len());
        work.clear();
        work.extend_from_slice(modes);
        self.apply_phase(work, &self.phase_inv);
        self.run(work, true);
        let mut max_im = 0.0f64;
        for (d, w) in dst.iter_mut().zip(work.iter()) {
            *d = w.re;
            max_im = max_im.max(w.im.abs());
        }
        max_im
    }

    fn apply_phase(&self, data: &mut [C64], phase: &[Vec<C64>; 3]) {
        let n = self.n;
        let mut idx = 0;
        for i in 0..n {
            let pi_ = phase[0][i];
            for j in 0..n {
                let pij = pi_ * phase[1][j];
                for k in 0..n {
                    data[idx] *= pij * phase[2][k];
                    idx += 1;
                }
            }
        }
    }

    fn run(&self, data: &mut [C64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let n = self.n;
        // axis 2 is contiguous
        plan.process_with_scratch(data, &mut scratch);
        let mut tmp = vec![C64::new(0.0, 0.0); data.len()];
        // axis 1: swap j <-> k , transform, swap back
        permute_swap_jk(data, &mut tmp, n);
        plan.process_with_scratch(&mut tmp, &mut scratch);
        permute_swap_jk(&tmp, data, n);
        // axis 0: swap i <-> k
        permute_swap_ik(data, &mut tmp, n);
        plan.process_with_scratch(&mut tmp, &mut scratch);
        permute_swap_ik(&tmp, data, n);
    }
}

/// Signed mode for FFT bin `idx`: 0..n/2-1 map to themselves, the upper
/// half to negative frequencies (so the band is [-n/2, n/2)).
#[inline]
pub fn signed_mode(n: usize, idx: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// FFT bin holding signed mode `l` (inverse of `signed_mode`).
#[inline]
pub fn mode_bin(n: usize, l: i64) -> usize {
    l.rem_euclid(n as i64) as usize
}

fn permute_swap_jk(src: &[C64], dst: &mut [C64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                dst[(i * n + k) * n + j] = src[(i * n + j) * n + k];
            }
        }
    }
}

fn permute_swap_ik(src: &[C64], dst: &mut [C64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                dst[(k * n + j) * n + i] = src[(i * n + j) * n + k];
            }
        }
    }
}
