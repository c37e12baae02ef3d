//! Profile comparison against reference curves.

use super::csv::ProfileRecord;
use crate::error::{Error, Result};

/// Error norm flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// Mean absolute difference.
    L1,
    /// Largest absolute difference.
    Linf,
}

/// Profile column selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileColumn {
    Density,
    Velocity,
    Temperature,
    Pressure,
    HeatFlux,
    ShearStress,
}

fn column(r: &ProfileRecord, c: ProfileColumn) -> f64 {
    match c {
        ProfileColumn::Density => r.rho,
        ProfileColumn::Velocity => r.velocity,
        ProfileColumn::Temperature => r.temp,
        ProfileColumn::Pressure => r.pressure,
        ProfileColumn::HeatFlux => r.heat_flux,
        ProfileColumn::ShearStress => r.shear_stress,
    }
}

/// Norm of the difference between a computed profile and a reference,
/// the reference linearly interpolated onto the computed abscissas over
/// the overlapping range and the result normalized by max |reference|.
/// Row order does not matter; both sequences are sorted internally.
pub fn compare_reference(
    computed: &[ProfileRecord],
    reference: &[ProfileRecord],
    norm: Norm,
    col: ProfileColumn,
) -> Result<f64> {
    let extract = |rs: &[ProfileRecord]| {
        let mut pairs: Vec<(f64, f64)> = rs.iter().map(|r| (r.x, column(r, col))).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pairs
    };
    compare_curves(&extract(computed), &extract(reference), norm)
}

/// Same comparison for plain (x, value) curves (assumed unsorted).
pub fn compare_curves(computed: &[(f64, f64)], reference: &[(f64, f64)], norm: Norm) -> Result<f64> {
    if computed.is_empty() || reference.len() < 2 {
        return Err(Error::Config(
            "comparison needs a nonempty computed profile and at least two reference points"
                .into(),
        ));
    }
    let mut comp = computed.to_vec();
    comp.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut refc = reference.to_vec();
    refc.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let lo = refc[0].0;
    let hi = refc[refc.len() - 1].0;
    let ref_max = refc
        .iter()
        .map(|(_, v)| v.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);

    let mut count = 0usize;
    let mut acc = 0.0f64;
    let mut worst = 0.0f64;
    let mut seg = 0usize;
    for &(x, v) in &comp {
        if x < lo || x > hi {
            continue;
        }
        while seg + 2 < refc.len() && refc[seg + 1].0 < x {
            seg += 1;
        }
        let (x0, v0) = refc[seg];
        let (x1, v1) = refc[seg + 1];
        let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
        let r = v0 + t * (v1 - v0);
        let d = (v - r).abs();
        acc += d;
        worst = worst.max(d);
        count += 1;
    }
    if count == 0 {
        return Err(Error::Config(
            "computed and reference profiles do not overlap in x".into(),
        ));
    }
    Ok(match norm {
        Norm::L1 => acc / count as f64 / ref_max,
        Norm::Linf => worst / ref_max,
    })
}
