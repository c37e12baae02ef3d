//! Evaluation of the spectral collision operator: fast transform path,
//! collision frequency, conservation repair, and the naive-summation
//! reference path used to validate the transforms.

use rayon::prelude::*;
use rustfft::num_complex::Complex;

use super::fft3::{mode_bin, C64};
use super::kernel::SpectralKernel;
use crate::error::{Error, Result};
use crate::kinetic::{Distribution, VelocityGrid};
use crate::util::solve5;

/// Raw collision rate together with the frequency field it implies.
pub struct CollisionEval {
    /// Gain minus loss, before the conservation fix.
    pub rate: Distribution,
    /// Collision frequency nu(u) (the loss rate per unit f).
    pub nu: Distribution,
    /// Supremum of nu over the velocity lattice.
    pub sup_nu: f64,
}

impl SpectralKernel {
    /// Evaluate the collision rate and frequency for one distribution.
    ///
    /// Thread-safe against concurrent calls: all scratch is local to the
    /// invocation, the kernel itself is read-only.
    pub fn collide(&self, f: &Distribution) -> Result<CollisionEval> {
        if f.grid().as_ref() != self.grid.as_ref() {
            return Err(Error::Config(
                "distribution grid does not match the kernel grid".into(),
            ));
        }
        let size = self.fft.len();
        let mut fhat = Vec::with_capacity(size);
        self.fft.forward(f.values(), &mut fhat);

        // Loss side: nu = IFFT(loss * f_hat).
        let mut buf: Vec<C64> = self.loss.iter().zip(&fhat).map(|(&w, &c)| c * w).collect();
        let mut nu = vec![0.0; size];
        let mut work = Vec::with_capacity(size);
        let max_im = self.fft.inverse(&buf, &mut nu, &mut work);
        let nu_scale = nu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !nu_scale.is_finite() {
            return Err(Error::Numeric("collision frequency overflowed".into()));
        }
        if max_im > 1e-8 * nu_scale.max(1e-300) {
            return Err(Error::Numeric(format!(
                "collision frequency lost Hermitian symmetry (imag {max_im:.3e})"
            )));
        }

        // Gain side: deterministic chunked reduction over the pair tables.
        let threads = rayon::current_num_threads().max(1);
        let chunk = self.pairs.len().div_ceil(threads);
        let partials: Vec<Vec<f64>> = self
            .pairs
            .par_chunks(chunk)
            .map(|pairs| {
                let mut ga = vec![0.0; size];
                let mut gb = vec![0.0; size];
                let mut acc = vec![0.0; size];
                let mut cbuf: Vec<C64> = Vec::with_capacity(size);
                let mut cwork: Vec<C64> = Vec::with_capacity(size);
                for pt in pairs {
                    cbuf.clear();
                    cbuf.extend(pt.phi.iter().zip(&fhat).map(|(&w, &c)| c * w));
                    self.fft.inverse(&cbuf, &mut ga, &mut cwork);
                    cbuf.clear();
                    cbuf.extend(pt.psi.iter().zip(&fhat).map(|(&w, &c)| c * w));
                    self.fft.inverse(&cbuf, &mut gb, &mut cwork);
                    for ((a, b), out) in ga.iter().zip(&gb).zip(acc.iter_mut()) {
                        *out += a * b;
                    }
                }
                acc
            })
            .collect();

        let mut rate = vec![0.0; size];
        for partial in &partials {
            for (r, p) in rate.iter_mut().zip(partial) {
                *r += p;
            }
        }
        for ((r, &nuv), &fv) in rate.iter_mut().zip(&nu).zip(f.values()) {
            *r -= nuv * fv;
            if !r.is_finite() {
                return Err(Error::Numeric("collision rate overflowed".into()));
            }
        }
        buf.clear();

        let sup_nu = nu.iter().fold(f64::MIN, |m, &v| m.max(v));
        Ok(CollisionEval {
            rate: Distribution::from_values(f.grid(), rate),
            nu: Distribution::from_values(f.grid(), nu),
            sup_nu,
        })
    }
}

/// Full Boltzmann collision rate Q(f, f), gain minus loss, raw (apply
/// `conserve_fix` before using it in an update).
pub fn boltzmann_q(f: &Distribution, kernel: &SpectralKernel) -> Result<Distribution> {
    Ok(kernel.collide(f)?.rate)
}

/// Collision frequency field and its supremum over the lattice.
pub fn collision_frequency(
    f: &Distribution,
    kernel: &SpectralKernel,
) -> Result<(Distribution, f64)> {
    let eval = kernel.collide(f)?;
    Ok((eval.nu, eval.sup_nu))
}

/// Gram matrix of the conservative moment functions under the grid
/// quadrature.
pub(crate) fn psi_gram(grid: &VelocityGrid) -> [[f64; 5]; 5] {
    let mut g = [[0.0f64; 5]; 5];
    grid.for_each_node(|_, u| {
        let p = crate::kinetic::psi_at(u);
        for a in 0..5 {
            for b in a..5 {
                g[a][b] += p[a] * p[b];
            }
        }
    });
    let w = grid.weight();
    for a in 0..5 {
        for b in a..5 {
            g[a][b] *= w;
            g[b][a] = g[a][b];
        }
    }
    g
}

/// Minimal L2 correction making all five conservative moments of a rate
/// vanish exactly: five Lagrange multipliers on (1, u, |u|^2 / 2).
///
/// Returns the corrected rate and the relative correction magnitude
/// ||delta||_2 / ||rate||_2.
pub fn conserve_fix(rate: &Distribution) -> Result<(Distribution, f64)> {
    let grid = rate.grid();
    let w = grid.weight();
    let mut r = [0.0f64; 5];
    grid.for_each_node(|idx, u| {
        let p = crate::kinetic::psi_at(u);
        let v = rate.values()[idx];
        for a in 0..5 {
            r[a] += p[a] * v;
        }
    });
    for x in &mut r {
        *x *= w;
    }
    let gram = psi_gram(grid);
    let (c, cond) = solve5(&gram, &r)
        .ok_or_else(|| Error::Degenerate("singular moment matrix in conservation fix".into()))?;
    if cond > 1e12 {
        return Err(Error::Degenerate(format!(
            "ill-conditioned moment matrix in conservation fix (pivot ratio {cond:.3e})"
        )));
    }
    let mut fixed = rate.clone();
    let mut delta2 = 0.0f64;
    let mut rate2 = 0.0f64;
    grid.for_each_node(|idx, u| {
        let p = crate::kinetic::psi_at(u);
        let d = c[0] * p[0] + c[1] * p[1] + c[2] * p[2] + c[3] * p[3] + c[4] * p[4];
        let v = &mut fixed.values_mut()[idx];
        *v -= d;
        delta2 += d * d;
        rate2 += rate.values()[idx] * rate.values()[idx];
    });
    let rel = if rate2 > 0.0 {
        (delta2 / rate2).sqrt()
    } else {
        0.0
    };
    Ok((fixed, rel))
}

/// Reference evaluation of the identical discrete operator without fast
/// transforms: naive DFTs and an O(K^6) double mode loop over the same
/// kernel tables. Small mode counts only.
pub fn direct_q_oracle(f: &Distribution, kernel: &SpectralKernel) -> Result<Distribution> {
    if f.grid().as_ref() != kernel.grid.as_ref() {
        return Err(Error::Config(
            "distribution grid does not match the kernel grid".into(),
        ));
    }
    let grid = f.grid();
    let n = grid.points_per_axis();
    let size = n * n * n;
    let half = grid.half_width();
    let xi0 = std::f64::consts::PI / half;

    // Naive forward DFT on the band modes.
    let nb = kernel.band_bins.len();
    let mut fhat = vec![C64::new(0.0, 0.0); nb];
    for (bi, l) in kernel.band_modes.iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        grid.for_each_node(|idx, u| {
            let phase = -xi0 * (l[0] as f64 * u[0] + l[1] as f64 * u[1] + l[2] as f64 * u[2]);
            acc += C64::from_polar(f.values()[idx], phase);
        });
        fhat[bi] = acc / size as f64;
    }

    // Gain: accumulate mode products on the wrapped output lattice. A sum
    // mode outside the band folds back modulo N; on this node lattice the
    // fold is not free: e^{i xi_{l+N} u_j} = e^{i pi N x0 / L} e^{i xi_l u_j}
    // with x0 the first node coordinate, a constant phase per wrapped axis
    // (-1 for the centered even lattice). The fast path's pointwise
    // products carry that phase implicitly, so the reference must too.
    let wrap_phase: [C64; 3] = {
        let mut w = [C64::new(1.0, 0.0); 3];
        for (a, wa) in w.iter_mut().enumerate() {
            let x0 = grid.coord(a, 0);
            *wa = C64::from_polar(1.0, std::f64::consts::PI * n as f64 * x0 / half);
        }
        w
    };
    let qhat: Vec<C64> = {
        let mut qh = vec![C64::new(0.0, 0.0); size];
        let half_n = (n / 2) as i64;
        for (ai, la) in kernel.band_modes.iter().enumerate() {
            let abin = kernel.band_bins[ai];
            for (bi, lb) in kernel.band_modes.iter().enumerate() {
                let bbin = kernel.band_bins[bi];
                let mut d = 0.0;
                for pt in &kernel.pairs {
                    d += pt.phi[abin] * pt.psi[bbin];
                }
                let mut factor = C64::new(1.0, 0.0);
                let mut k = [0usize; 3];
                for a in 0..3 {
                    let sum = la[a] + lb[a];
                    k[a] = mode_bin(n, sum);
                    if sum >= half_n {
                        factor *= wrap_phase[a];
                    } else if sum < -half_n {
                        factor *= wrap_phase[a].conj();
                    }
                }
                qh[(k[0] * n + k[1]) * n + k[2]] += fhat[ai] * fhat[bi] * d * factor;
            }
        }
        qh
    };

    // Naive inverse DFTs for gain and frequency.
    let mut out = vec![0.0; size];
    grid.for_each_node(|idx, u| {
        let mut gain = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let q = qhat[(i * n + j) * n + k];
                    if q.re == 0.0 && q.im == 0.0 {
                        continue;
                    }
                    let l = [
                        super::fft3::signed_mode(n, i) as f64,
                        super::fft3::signed_mode(n, j) as f64,
                        super::fft3::signed_mode(n, k) as f64,
                    ];
                    let phase = xi0 * (l[0] * u[0] + l[1] * u[1] + l[2] * u[2]);
                    gain += q * Complex::from_polar(1.0, phase);
                }
            }
        }
        let mut nu = C64::new(0.0, 0.0);
        for (bi, l) in kernel.band_modes.iter().enumerate() {
            let phase = xi0 * (l[0] as f64 * u[0] + l[1] as f64 * u[1] + l[2] as f64 * u[2]);
            nu += fhat[bi] * kernel.loss[kernel.band_bins[bi]] * Complex::from_polar(1.0, phase);
        }
        out[idx] = gain.re - nu.re * f.values()[idx];
    });
    Ok(Distribution::from_values(f.grid(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::model::{CollisionModel, CrossSection};
    use crate::collision::build_kernel;
    use crate::kinetic::{build_grid, maxwellian, moments, MacroState};
    use std::sync::Arc;

    fn mixture(grid: &Arc<VelocityGrid>) -> Distribution {
        let a = maxwellian(grid, &MacroState::new(0.7, [0.4, 0.0, -0.2], 0.9).unwrap());
        let b = maxwellian(grid, &MacroState::new(0.5, [-0.6, 0.3, 0.0], 1.4).unwrap());
        let mut f = a;
        for (x, y) in f.values_mut().iter_mut().zip(b.values()) {
            *x += y;
        }
        f
    }

    #[test]
    fn fast_path_matches_direct_oracle_hs() {
        let grid = Arc::new(build_grid(6.0, 8).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 8, (4, 4)).unwrap();
        let f = mixture(&grid);
        let fast = boltzmann_q(&f, &kernel).unwrap();
        let slow = direct_q_oracle(&f, &kernel).unwrap();
        let scale = fast.max_abs();
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).abs() < 1e-12 * scale, "fast {a} vs direct {b}");
        }
    }

    #[test]
    fn raw_rate_conserves_mass_to_roundoff() {
        let grid = Arc::new(build_grid(6.0, 16).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 16, (6, 6)).unwrap();
        let f = mixture(&grid);
        let q = boltzmann_q(&f, &kernel).unwrap();
        let mass: f64 = grid.weight() * q.values().iter().sum::<f64>();
        let scale = grid.weight() * q.values().iter().map(|v| v.abs()).sum::<f64>();
        assert!(mass.abs() < 1e-13 * scale.max(1e-300), "mass leak {mass:.3e}");
    }

    #[test]
    fn conserve_fix_zeroes_all_five_moments() {
        let grid = Arc::new(build_grid(6.0, 16).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 16, (6, 6)).unwrap();
        let f = mixture(&grid);
        let q = boltzmann_q(&f, &kernel).unwrap();
        let (fixed, rel) = conserve_fix(&q).unwrap();
        let w = grid.weight();
        let mut m = [0.0f64; 5];
        grid.for_each_node(|idx, u| {
            let p = crate::kinetic::psi_at(u);
            for a in 0..5 {
                m[a] += p[a] * fixed.values()[idx];
            }
        });
        let scale: f64 = w * q.values().iter().map(|v| v.abs()).sum::<f64>();
        for a in 0..5 {
            assert!((w * m[a]).abs() < 1e-12 * scale.max(1e-300), "moment {a}: {}", w * m[a]);
        }
        assert!(rel < 1e-3, "correction too large: {rel}");
    }

    #[test]
    fn conserve_fix_identity_for_conservative_input() {
        let grid = Arc::new(build_grid(5.0, 12).unwrap());
        // Odd-in-x data orthogonal to 1 and |u|^2 but not to u_x; build a
        // rate with exactly zero moments instead: difference of two
        // Maxwellians with identical moments is zero, so use an already
        // fixed rate.
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 12, (4, 4)).unwrap();
        let f = mixture(&grid);
        let q = boltzmann_q(&f, &kernel).unwrap();
        let (fixed, _) = conserve_fix(&q).unwrap();
        let (fixed2, rel2) = conserve_fix(&fixed).unwrap();
        assert!(rel2 < 1e-12, "second fix moved the rate by {rel2}");
        let scale = fixed.max_abs();
        for (a, b) in fixed.values().iter().zip(fixed2.values()) {
            assert!((a - b).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn loss_term_equals_nu_times_f() {
        let grid = Arc::new(build_grid(6.0, 12).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 12, (4, 4)).unwrap();
        let f = mixture(&grid);
        let eval = kernel.collide(&f).unwrap();
        // Disable the gain by rebuilding it from the rate: rate + nu f = gain,
        // so gain - (rate + nu f) must vanish identically; instead check the
        // two public paths agree on the loss split.
        let (nu, sup) = collision_frequency(&f, &kernel).unwrap();
        assert_eq!(sup, eval.sup_nu);
        for (a, b) in nu.values().iter().zip(eval.nu.values()) {
            assert!((a - b).abs() <= 1e-10 * sup.abs());
        }
    }

    #[test]
    fn frequency_scales_linearly_with_f() {
        let grid = Arc::new(build_grid(6.0, 12).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 12, (4, 4)).unwrap();
        let f = mixture(&grid);
        let mut f2 = f.clone();
        for v in f2.values_mut() {
            *v *= 2.0;
        }
        let (nu1, s1) = collision_frequency(&f, &kernel).unwrap();
        let (nu2, s2) = collision_frequency(&f2, &kernel).unwrap();
        assert!((s2 - 2.0 * s1).abs() < 1e-10 * s1.abs());
        for (a, b) in nu1.values().iter().zip(nu2.values()) {
            assert!((2.0 * a - b).abs() < 1e-10 * s1);
        }
    }

    #[test]
    fn equilibrium_frequency_positive_and_monotone_in_speed() {
        let grid = Arc::new(build_grid(6.0, 16).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 16, (8, 8)).unwrap();
        let s = MacroState::new(1.0, [0.0; 3], 1.0).unwrap();
        let f = maxwellian(&grid, &s);
        let (nu, _) = collision_frequency(&f, &kernel).unwrap();
        // positive everywhere
        for &v in nu.values() {
            assert!(v > 0.0);
        }
        // monotone along the positive x axis at the transverse center
        let slice = nu.center_slice_x();
        let half: Vec<f64> = slice
            .iter()
            .filter(|(u, _)| *u > 0.0)
            .map(|(_, v)| *v)
            .collect();
        for i in 1..half.len() {
            assert!(
                half[i] >= half[i - 1] - 1e-9 * half[i - 1],
                "nu not increasing with speed at i={i}"
            );
        }
    }

    #[test]
    fn equilibrium_mean_frequency_matches_mean_free_time() {
        // <nu>_M / rho must equal 1/tau with tau from the viscosity-based
        // mean free path; this pins the kernel normalization to the
        // transport coefficients.
        let grid = Arc::new(build_grid(6.0, 24).unwrap());
        let model = CollisionModel::new(CrossSection::HardSphere, 1.0).unwrap();
        let kernel = build_kernel(&model, &grid, 24, (8, 8)).unwrap();
        let s = MacroState::new(1.0, [0.0; 3], 1.0).unwrap();
        let f = maxwellian(&grid, &s);
        let (nu, _) = collision_frequency(&f, &kernel).unwrap();
        let w = grid.weight();
        let mean: f64 = w
            * nu.values()
                .iter()
                .zip(f.values())
                .map(|(n, fv)| n * fv)
                .sum::<f64>()
            / s.rho;
        let tau = model.mean_free_time(&s);
        let got = mean * tau;
        assert!(
            (got - 1.0).abs() < 0.02,
            "<nu> tau = {got} (mean nu {mean}, 1/tau {})",
            1.0 / tau
        );
    }

    #[test]
    fn stress_relaxation_rate_matches_viscosity() {
        // Near equilibrium the stress moment of Q relaxes at p/mu = 1/tau_r
        // for both HS and VHS; a wrong kernel normalization shows up here
        // immediately.
        for cs in [
            CrossSection::HardSphere,
            CrossSection::VariableHardSphere { omega: 0.81 },
        ] {
            let grid = Arc::new(build_grid(6.0, 24).unwrap());
            let model = CollisionModel::new(cs, 1.0).unwrap();
            let kernel = build_kernel(&model, &grid, 24, (8, 8)).unwrap();
            let eps = 0.03;
            let f = grid.sample(|u| {
                let t = [1.0 + eps, 1.0 - eps, 1.0];
                let mut v = 1.0;
                for a in 0..3 {
                    let lam = 1.0 / t[a];
                    v *= (lam / std::f64::consts::PI).sqrt() * (-lam * u[a] * u[a]).exp();
                }
                v
            });
            let state = moments(&f).unwrap();
            let q = boltzmann_q(&f, &kernel).unwrap();
            let (q, _) = conserve_fix(&q).unwrap();
            // d Pi_xx / dt = <c_x^2 Q> (pressure itself is conserved)
            let w = grid.weight();
            let mut dpxx = 0.0;
            grid.for_each_node(|idx, u| {
                let cx = u[0] - state.velocity[0];
                dpxx += cx * cx * q.values()[idx];
            });
            dpxx *= w;
            let tau_r = model.relaxation_time(&state);
            let got = -dpxx * tau_r / state.stress[0];
            assert!(
                (got - 1.0).abs() < 0.05,
                "{cs:?}: stress relaxation rate off by {got}"
            );
        }
    }

    #[test]
    fn fast_path_matches_direct_oracle_vhs_and_lj_terms() {
        let grid = Arc::new(build_grid(6.0, 8).unwrap());
        let f = mixture(&grid);
        let mut models = vec![CollisionModel::new(
            CrossSection::VariableHardSphere { omega: 0.81 },
            1.0,
        )
        .unwrap()];
        for j in 0..3 {
            models.push(CollisionModel::new(CrossSection::LennardJonesTerm { index: j }, 1.0).unwrap());
        }
        for model in models {
            let kernel = build_kernel(&model, &grid, 8, (3, 4)).unwrap();
            let fast = boltzmann_q(&f, &kernel).unwrap();
            let slow = direct_q_oracle(&f, &kernel).unwrap();
            let scale = fast.max_abs().max(1e-300);
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!(
                    (a - b).abs() < 1e-12 * scale,
                    "{:?}: fast {a} vs direct {b}",
                    model.cross_section
                );
            }
        }
    }
}
