//! Bessel function J0, needed for the disc transform in the spectral
//! collision kernel.

/// Bessel function of the first kind, order zero.
///
/// Power series for |x| <= 9, Hankel asymptotic expansion beyond.
/// Absolute accuracy is better than 1e-11 over the range used by the
/// kernel builder (x up to a few hundred).
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 9.0 {
        // sum_k (-1)^k (x^2/4)^k / (k!)^2
        let q = 0.25 * ax * ax;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..40 {
            term *= -q / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        // J0(x) ~ sqrt(2/(pi x)) [P(x) cos(x - pi/4) - Q(x) sin(x - pi/4)]
        let z = 8.0 / ax;
        let z2 = z * z;
        let p = 1.0
            + z2 * (-0.1098628627e-2
                + z2 * (0.2734510407e-4 + z2 * (-0.2073370639e-5 + z2 * 0.2093887211e-6)));
        let q = z
            * (-0.1562499995e-1
                + z2 * (0.1430488765e-3
                    + z2 * (-0.6911147651e-5 + z2 * (0.7621095161e-6 - z2 * 0.934935152e-7))));
        let chi = ax - std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}
