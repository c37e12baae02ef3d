//! Plain-text CSV output: fixed column order, one header line, full
//! double precision (17 significant digits, bit-exact on re-read).

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kinetic::{Distribution, MacroState};

/// One profile row; columns are fixed as
/// x, rho, velocity, temperature, pressure, heat_flux, shear_stress,
/// dt_over_tau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRecord {
    pub x: f64,
    pub rho: f64,
    pub velocity: f64,
    pub temp: f64,
    pub pressure: f64,
    pub heat_flux: f64,
    /// Normal-stress deviator Pi_xx.
    pub shear_stress: f64,
    pub dt_over_tau: f64,
}

impl ProfileRecord {
    pub fn from_state(x: f64, s: &MacroState, dt_over_tau: f64) -> Self {
        Self {
            x,
            rho: s.rho,
            velocity: s.velocity[0],
            temp: s.temp,
            pressure: s.pressure,
            heat_flux: s.heat_flux[0],
            shear_stress: s.stress[0],
            dt_over_tau,
        }
    }
}

const PROFILE_HEADER: &str =
    "x,rho,velocity,temperature,pressure,heat_flux,shear_stress,dt_over_tau";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write profile rows; an empty record list produces a header-only file.
pub fn write_profile_csv(records: &[ProfileRecord], path: &Path) -> Result<()> {
    let mut out = String::with_capacity(64 + records.len() * 200);
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for r in records {
        let cols = [
            r.x,
            r.rho,
            r.velocity,
            r.temp,
            r.pressure,
            r.heat_flux,
            r.shear_stress,
            r.dt_over_tau,
        ];
        let line: Vec<String> = cols.iter().map(|v| fmt(*v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write_file(path, &out)
}

/// Read back a profile CSV written by `write_profile_csv`.
pub fn read_profile_csv(path: &Path) -> Result<Vec<ProfileRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == PROFILE_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "unexpected profile header {other:?} in {}",
                path.display()
            )))
        }
    }
    let mut out = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| {
                c.parse::<f64>().map_err(|e| {
                    Error::Parse(format!("{}:{}: bad float '{c}': {e}", path.display(), ln + 2))
                })
            })
            .collect::<Result<_>>()?;
        if cols.len() != 8 {
            return Err(Error::Parse(format!(
                "{}:{}: expected 8 columns, got {}",
                path.display(),
                ln + 2,
                cols.len()
            )));
        }
        out.push(ProfileRecord {
            x: cols[0],
            rho: cols[1],
            velocity: cols[2],
            temp: cols[3],
            pressure: cols[4],
            heat_flux: cols[5],
            shear_stress: cols[6],
            dt_over_tau: cols[7],
        });
    }
    Ok(out)
}

/// Write an f(u, 0, 0) slice as (u, f) columns.
pub fn write_slice_csv(slice: &[(f64, f64)], path: &Path) -> Result<()> {
    let mut out = String::from("u,f\n");
    for (u, f) in slice {
        out.push_str(&fmt(*u));
        out.push(',');
        out.push_str(&fmt(*f));
        out.push('\n');
    }
    write_file(path, &out)
}

/// Read back a slice CSV.
pub fn read_slice_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut out = Vec::new();
    for line in text.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let u: f64 = it
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad slice row '{line}'")))?;
        let f: f64 = it
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad slice row '{line}'")))?;
        out.push((u, f));
    }
    Ok(out)
}

/// Opt-in flat dump of a full 3-D distribution with index columns.
pub fn write_distribution_csv(f: &Distribution, path: &Path) -> Result<()> {
    let grid = f.grid();
    let n = grid.points_per_axis();
    let mut out = String::from("i,j,k,ux,uy,uz,f\n");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = grid.index(i, j, k);
                out.push_str(&format!(
                    "{i},{j},{k},{},{},{},{}\n",
                    fmt(grid.coord(0, i)),
                    fmt(grid.coord(1, j)),
                    fmt(grid.coord(2, k)),
                    fmt(f.values()[idx])
                ));
            }
        }
    }
    write_file(path, &out)
}
