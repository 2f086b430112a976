//! Sign patterns of divided differences as numerical evidence of complete
//! monotonicity, and the HCM test through `w = v + 1/v`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiple of the noise floor beyond which a sign violation is certified.
pub const CERTIFY_FACTOR: f64 = 10.0;

/// Default `u` values of [`hcm_probe_default`].
pub const HCM_U_GRID: [f64; 3] = [0.25, 1.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub order: usize,
    /// Left end of the window of nodes.
    pub location: f64,
    /// Signed slack in units of the noise floor.
    pub margin: f64,
    /// The `u` of an HCM probe, absent for a plain CM probe.
    pub u: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmProbeReport {
    pub max_order_checked: usize,
    pub first_violation: Option<Violation>,
    pub pass: bool,
    /// Smallest signed slack over all checks, in units of the noise floor.
    pub margin: f64,
    /// Some check had the wrong sign, but only within the certification band.
    pub inconclusive: bool,
}

/// `lo, lo*ratio, ...` up to and including the last point `<= hi`.
pub fn geometric_grid(lo: f64, hi: f64, ratio: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi * (1.0 + 1e-12) {
        out.push(x);
        x *= ratio;
    }
    out
}

/// Checks `(-1)^k [x_j, ..., x_{j+k}] f >= 0` for `k = 1..=max_order`.
/// `rel_noise` is the relative error of one evaluation of `f`.
pub fn cm_probe(
    f: impl Fn(f64) -> Result<f64>,
    grid: &[f64],
    max_order: usize,
    rel_noise: f64,
) -> Result<CmProbeReport> {
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    probe_values(grid, &values, max_order, rel_noise)
}

fn probe_values(grid: &[f64], values: &[f64], max_order: usize, rel_noise: f64) -> Result<CmProbeReport> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("probe grid needs at least two increasing nodes".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation { x: grid[i] });
    }
    let rel = rel_noise.max(4.0 * f64::EPSILON);
    let mut dd = values.to_vec();
    let mut noise: Vec<f64> = values.iter().map(|v| rel * v.abs() + f64::MIN_POSITIVE).collect();
    let max_order = max_order.min(grid.len() - 1);
    let mut margin = f64::INFINITY;
    let mut first: Option<Violation> = None;
    for k in 1..=max_order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let m = dd.len() - 1;
        for j in 0..m {
            let h = grid[j + k] - grid[j];
            dd[j] = (dd[j + 1] - dd[j]) / h;
            noise[j] = (noise[j + 1] + noise[j]) / h;
            let slack = sign * dd[j] / noise[j];
            margin = margin.min(slack);
            if slack < -CERTIFY_FACTOR && first.is_none() {
                first = Some(Violation {
                    order: k,
                    location: grid[j],
                    margin: slack,
                    u: None,
                });
            }
        }
        dd.truncate(m);
        noise.truncate(m);
    }
    Ok(CmProbeReport {
        max_order_checked: max_order,
        pass: first.is_none(),
        inconclusive: first.is_none() && margin < 0.0,
        first_violation: first,
        margin,
    })
}

/// `n` points `w` equally spaced on `[2, v_max + 1/v_max]`.
pub fn hcm_w_grid(v_max: f64, n: usize) -> Vec<f64> {
    let top = v_max + 1.0 / v_max;
    (0..n).map(|j| 2.0 + (top - 2.0) * j as f64 / (n - 1) as f64).collect()
}

/// For each `u`, probes `w = v + 1/v -> f(uv) f(u/v)` on the `w` grid and
/// keeps the worst report (ties go to the smaller `u`).
pub fn hcm_probe(
    f: impl Fn(f64) -> Result<f64> + Sync,
    u_grid: &[f64],
    w_grid: &[f64],
    max_order: usize,
    rel_noise: f64,
) -> Result<CmProbeReport> {
    if w_grid.iter().any(|&w| w < 2.0) {
        return Err(Error::Domain("w = v + 1/v is at least 2".into()));
    }
    let reports = u_grid
        .par_iter()
        .map(|&u| {
            let values = w_grid
                .iter()
                .map(|&w| {
                    let v = 0.5 * (w + (w * w - 4.0).max(0.0).sqrt());
                    Ok(f(u * v)? * f(u / v)?)
                })
                .collect::<Result<Vec<f64>>>()?;
            let mut rep = probe_values(w_grid, &values, max_order, 2.0 * rel_noise)?;
            if let Some(v) = rep.first_violation.as_mut() {
                v.u = Some(u);
            }
            Ok(rep)
        })
        .collect::<Result<Vec<CmProbeReport>>>()?;
    let worst = reports
        .into_iter()
        .reduce(|best, r| if r.margin < best.margin { r } else { best })
        .ok_or_else(|| Error::Domain("hcm_probe needs at least one u".into()))?;
    Ok(worst)
}

/// [`hcm_probe`] on `u` in [`HCM_U_GRID`], 25 values of `v` in `[1, 8]` and order 6.
pub fn hcm_probe_default(f: impl Fn(f64) -> Result<f64> + Sync, rel_noise: f64) -> Result<CmProbeReport> {
    hcm_probe(f, &HCM_U_GRID, &hcm_w_grid(8.0, 25), 6, rel_noise)
}
