//! 1-D spatial meshes: uniform, and geometrically stretched with a
//! uniform fine zone.

use crate::error::{Error, Result};

/// Cell-centered 1-D mesh; centers are interface midpoints by
/// construction.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    interfaces: Vec<f64>,
    centers: Vec<f64>,
    widths: Vec<f64>,
}

impl Mesh1D {
    fn from_interfaces(interfaces: Vec<f64>) -> Result<Self> {
        if interfaces.len() < 2 {
            return Err(Error::Config("mesh needs at least one cell".into()));
        }
        let mut centers = Vec::with_capacity(interfaces.len() - 1);
        let mut widths = Vec::with_capacity(interfaces.len() - 1);
        for w in interfaces.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Config(format!(
                    "mesh interfaces must be strictly increasing near x = {}",
                    w[0]
                )));
            }
            centers.push(0.5 * (w[0] + w[1]));
            widths.push(w[1] - w[0]);
        }
        Ok(Self {
            interfaces,
            centers,
            widths,
        })
    }

    pub fn uniform(a: f64, b: f64, cells: usize) -> Result<Self> {
        if cells == 0 || !(b > a) {
            return Err(Error::Config(format!(
                "uniform mesh needs a positive cell count and b > a, got [{a}, {b}] x {cells}"
            )));
        }
        let dx = (b - a) / cells as f64;
        Self::from_interfaces((0..=cells).map(|i| a + i as f64 * dx).collect())
    }

    /// Uniform spacing `fine_dx` inside `[fine.0, fine.1]`, growing
    /// geometrically by `ratio` towards both domain ends (the outermost
    /// cells are clipped to land exactly on the boundary).
    pub fn stretched(
        domain: (f64, f64),
        fine: (f64, f64),
        fine_dx: f64,
        ratio: f64,
    ) -> Result<Self> {
        let (a, b) = domain;
        let (fa, fb) = fine;
        if !(a <= fa && fa < fb && fb <= b) {
            return Err(Error::Config(format!(
                "fine zone [{fa}, {fb}] must sit inside the domain [{a}, {b}]"
            )));
        }
        if !(fine_dx > 0.0) || !(ratio >= 1.0) {
            return Err(Error::Config(format!(
                "stretched mesh needs fine_dx > 0 and ratio >= 1, got {fine_dx}, {ratio}"
            )));
        }
        let mut ifaces = Vec::new();
        // fine zone, spacing adjusted so it tiles exactly
        let n_fine = ((fb - fa) / fine_dx).round().max(1.0) as usize;
        let dxf = (fb - fa) / n_fine as f64;
        for i in 0..=n_fine {
            ifaces.push(fa + i as f64 * dxf);
        }
        // grow right
        let mut x = fb;
        let mut w = dxf;
        while x < b - 1e-12 * (b - a) {
            w *= ratio;
            x = (x + w).min(b);
            ifaces.push(x);
        }
        // grow left
        let mut x = fa;
        let mut w = dxf;
        let mut left = Vec::new();
        while x > a + 1e-12 * (b - a) {
            w *= ratio;
            x = (x - w).max(a);
            left.push(x);
        }
        left.reverse();
        left.extend(ifaces);
        Self::from_interfaces(left)
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }
}

/// Per-cell CFL time steps dt_j = cfl dx_j / u_max; take the minimum for
/// a global step.
pub fn cfl_timesteps(mesh: &Mesh1D, u_max: f64, cfl: f64) -> Result<Vec<f64>> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::Config(format!("CFL number must lie in (0, 1], got {cfl}")));
    }
    if !(u_max > 0.0) {
        return Err(Error::Config(format!("CFL speed must be positive, got {u_max}")));
    }
    Ok(mesh.widths().iter().map(|dx| cfl * dx / u_max).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh_geometry() {
        let m = Mesh1D::uniform(0.0, 1.0, 4).unwrap();
        assert_eq!(m.len(), 4);
        assert!((m.widths()[2] - 0.25).abs() < 1e-15);
        assert!((m.centers()[0] - 0.125).abs() < 1e-15);
        for j in 0..4 {
            let mid = 0.5 * (m.interfaces()[j] + m.interfaces()[j + 1]);
            assert_eq!(m.centers()[j], mid);
        }
    }

    #[test]
    fn stretched_mesh_covers_domain_and_grows() {
        let m = Mesh1D::stretched((-25.0, 25.0), (-10.0, 5.0), 0.5, 1.2).unwrap();
        assert!((m.interfaces()[0] + 25.0).abs() < 1e-12);
        assert!((m.interfaces().last().unwrap() - 25.0).abs() < 1e-12);
        for w in m.widths() {
            assert!(*w > 0.0);
        }
        // widths grow monotonically outside the fine zone on the right
        let fine_end = m.centers().iter().position(|&x| x > 5.0).unwrap();
        for j in fine_end..m.len() - 2 {
            assert!(m.widths()[j + 1] >= m.widths()[j] * 0.999);
        }
    }

    #[test]
    fn cfl_steps_scale_with_width() {
        let m = Mesh1D::stretched((0.0, 10.0), (0.0, 5.0), 0.5, 2.0).unwrap();
        let dts = cfl_timesteps(&m, 7.75, 0.5).unwrap();
        for (dt, dx) in dts.iter().zip(m.widths()) {
            assert!((dt - 0.5 * dx / 7.75).abs() < 1e-15);
        }
        // the quoted example: dx = 0.5, u_max = 7.75, cfl = 0.5
        assert!((dts[0] - 0.032258064516129031).abs() < 1e-12);
    }

    #[test]
    fn cfl_rejects_bad_inputs() {
        let m = Mesh1D::uniform(0.0, 1.0, 4).unwrap();
        assert!(cfl_timesteps(&m, 7.75, 0.0).is_err());
        assert!(cfl_timesteps(&m, 7.75, 1.5).is_err());
        assert!(cfl_timesteps(&m, 0.0, 0.5).is_err());
    }
}
