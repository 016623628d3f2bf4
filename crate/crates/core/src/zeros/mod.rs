//! Zeros of `L(f, z)` near the critical line and the eigenvalues
//! `E = i(2z - 1)` they define.

mod cache;
mod hardy;

pub use cache::{append_cache, read_cache, DEDUP_TOL};
pub use hardy::{bisection_zeros, hardy_z_function};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::engine::{continued_l_batch, l_value};
use crate::error::{check_finite, Result, ZhlError};
use crate::hamiltonian::Branch;
use crate::kernels::Kernel;
use crate::numerics::{c, I};

/// Acceptance threshold on `|L(f, z_n)|`.
pub const ZERO_TOL: f64 = 1e-9;
/// Newton derivative step relative to `max(|z|, 1)`.
pub const NEWTON_STEP: f64 = 1e-6;
pub const NEWTON_MAX_ITER: usize = 50;
/// Half-width of the certification box around a refined zero.
pub const CERTIFY_HALF_WIDTH: f64 = 0.05;
/// Boundary samples with `|L|` below this make a winding count unreliable.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Half-width in `t` of the neighbourhood a scan minimum is compared with.
pub const SCAN_NEIGHBOURHOOD: f64 = 1.0;
pub const SCAN_CONTRAST: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroMethod {
    #[serde(rename = "scan+newton")]
    ScanNewton,
    #[serde(rename = "bisection-oracle")]
    BisectionOracle,
}

impl fmt::Display for ZeroMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroMethod::ScanNewton => "scan+newton",
            ZeroMethod::BisectionOracle => "bisection-oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub kernel: String,
    pub z: Complex64,
    /// `|L(f, z)|` at the reported point.
    pub residual: f64,
    pub eigenvalue: Complex64,
    pub method: ZeroMethod,
    /// Winding number of `L` around the certification box.
    pub verified_count: i64,
}

impl ZeroRecord {
    pub fn new(kernel: &str, z: Complex64, residual: f64, method: ZeroMethod, verified_count: i64) -> Self {
        Self { kernel: kernel.to_string(), z, residual, eigenvalue: eigenvalue(z), method, verified_count }
    }
}

/// `E = i(2z - 1)`.
pub fn eigenvalue(z: Complex64) -> Complex64 {
    I * (2.0 * z - 1.0)
}

/// Scan line `sigma + it`, `t` from `t_min` to `t_max` in steps of `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub sigma: f64,
}

impl ScanWindow {
    pub fn new(t_min: f64, t_max: f64, step: f64, sigma: f64) -> Result<Self> {
        let w = Self { t_min, t_max, step, sigma };
        w.validate()?;
        Ok(w)
    }

    pub fn critical(t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        Self::new(t_min, t_max, step, 0.5)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.t_min, self.t_max, self.step, self.sigma].iter().all(|v| v.is_finite());
        if !finite || !(self.t_min < self.t_max) || !(self.step > 0.0) {
            return Err(ZhlError::InvalidParameter(format!("bad scan window {self:?}")));
        }
        if (self.t_max - self.t_min) / self.step > 1e7 {
            return Err(ZhlError::InvalidParameter("scan window has too many samples".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.t_max - self.t_min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.t_min + i as f64 * self.step).collect()
    }
}

fn values_at(kernel: &Kernel, zs: &[Complex64]) -> Result<Vec<Complex64>> {
    let pts: Vec<(Complex64, f64)> = zs.iter().map(|&z| (z, 1.0)).collect();
    continued_l_batch(kernel, &pts).into_iter().map(|r| r.map(|v| v.value)).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Seeds at sampled local minima of `|L(f, sigma + it)|` that are at least
/// `SCAN_CONTRAST` times below the median of their neighbourhood.
pub fn scan_critical_line(kernel: &Kernel, window: &ScanWindow) -> Result<Vec<Complex64>> {
    window.validate()?;
    let ts = window.points();
    let zs: Vec<Complex64> = ts.iter().map(|&t| c(window.sigma, t)).collect();
    let mags: Vec<f64> = values_at(kernel, &zs)?.iter().map(|v| v.norm()).collect();
    let reach = (SCAN_NEIGHBOURHOOD / window.step).ceil().max(2.0) as usize;
    let mut seeds = Vec::new();
    for i in 1..mags.len().saturating_sub(1) {
        if !(mags[i] <= mags[i - 1] && mags[i] < mags[i + 1]) {
            continue;
        }
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(mags.len() - 1);
        let around: Vec<f64> = (lo..=hi).filter(|&j| j != i).map(|j| mags[j]).collect();
        if mags[i] * SCAN_CONTRAST <= median(around) {
            seeds.push(zs[i]);
        }
    }
    Ok(seeds)
}

/// Newton's method on `L(f, z)` from `seed`, then certification by the
/// argument principle on a box of half-width `CERTIFY_HALF_WIDTH`.
pub fn refine_newton(kernel: &Kernel, seed: Complex64) -> Result<ZeroRecord> {
    check_finite(seed, "seed")?;
    let l = |z: Complex64| l_value(kernel, z).map(|r| r.value);
    let step = |z: Complex64, v: Complex64| -> Result<Complex64> {
        let h = NEWTON_STEP * z.norm().max(1.0);
        let d = (l(z + h)? - l(z - h)?) / (2.0 * h);
        if d.norm() == 0.0 {
            return Err(ZhlError::NewtonFailed { last: z, residual: v.norm() });
        }
        Ok(z - v / d)
    };
    let mut z = seed;
    let mut v = l(z)?;
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        if v.norm() < ZERO_TOL {
            converged = true;
            break;
        }
        z = step(z, v)?;
        v = l(z)?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
    }
    if !converged {
        return Err(ZhlError::NewtonFailed { last: z, residual: v.norm() });
    }
    // one more step once inside the basin
    let polished = step(z, v)?;
    let pv = l(polished)?;
    if pv.norm() <= v.norm() {
        z = polished;
        v = pv;
    }
    let count = argument_principle_count(kernel, z, CERTIFY_HALF_WIDTH)?;
    Ok(ZeroRecord::new(kernel.name(), z, v.norm(), ZeroMethod::ScanNewton, count))
}

fn boundary(center: Complex64, hw: f64, per_side: usize) -> Vec<Complex64> {
    let corners = [c(-hw, -hw), c(hw, -hw), c(hw, hw), c(-hw, hw)];
    let mut pts = Vec::with_capacity(4 * per_side);
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        for j in 0..per_side {
            pts.push(center + a + (b - a) * (j as f64 / per_side as f64));
        }
    }
    pts
}

/// Winding number of `L(f, .)` around the square of half-width `half_width`,
/// from phase increments between boundary samples. The sampling is doubled
/// until every increment is below `pi / 4`.
pub fn argument_principle_count(kernel: &Kernel, center: Complex64, half_width: f64) -> Result<i64> {
    check_finite(center, "center")?;
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(ZhlError::InvalidParameter(format!("half width {half_width} must be positive")));
    }
    let mut per_side = 16;
    loop {
        let vals = values_at(kernel, &boundary(center, half_width, per_side))?;
        let min = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if min < BOUNDARY_TOL {
            return Err(ZhlError::BoundaryTooClose(min));
        }
        let mut total = 0.0;
        let mut worst: f64 = 0.0;
        for k in 0..vals.len() {
            let d = (vals[(k + 1) % vals.len()] / vals[k]).arg();
            worst = worst.max(d.abs());
            total += d;
        }
        if worst < PI / 4.0 {
            return Ok((total / (2.0 * PI)).round() as i64);
        }
        if per_side >= 4096 {
            return Err(ZhlError::BoundaryTooClose(min));
        }
        per_side *= 2;
    }
}

/// A seed that did not become an accepted zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub seed: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSearch {
    /// Accepted zeros, sorted by `Im z` and deduplicated.
    pub records: Vec<ZeroRecord>,
    pub rejected: Vec<Rejection>,
}

/// Scan, refine every seed in parallel, and keep the certified simple
/// zeros whose height lies in the window.
pub fn find_zeros(kernel: &Kernel, window: &ScanWindow) -> Result<ZeroSearch> {
    let seeds = scan_critical_line(kernel, window)?;
    let refined: Vec<(Complex64, Result<ZeroRecord>)> =
        seeds.par_iter().map(|&s| (s, refine_newton(kernel, s))).collect();
    let mut out = ZeroSearch::default();
    for (seed, r) in refined {
        let reason = match r {
            Err(e) => Some(e.to_string()),
            Ok(rec) if rec.verified_count != 1 => Some(format!("winding number {}", rec.verified_count)),
            Ok(rec) if !(rec.z.im >= window.t_min && rec.z.im <= window.t_max) => {
                Some(format!("converged outside the window to {}", rec.z))
            }
            Ok(rec) => {
                out.records.push(rec);
                None
            }
        };
        if let Some(reason) = reason {
            out.rejected.push(Rejection { seed, reason });
        }
    }
    out.records.sort_by(|a, b| a.z.im.total_cmp(&b.z.im).then(a.z.re.total_cmp(&b.z.re)));
    out.records.dedup_by(|b, a| (a.z - b.z).norm() < DEDUP_TOL);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub z: Complex64,
    pub eigenvalue: Complex64,
    /// `|Im E|`; zero exactly when `Re z = 1/2`.
    pub reality_defect: f64,
}

pub fn spectrum(records: &[ZeroRecord]) -> Vec<SpectrumEntry> {
    records
        .iter()
        .map(|r| {
            let e = eigenvalue(r.z);
            SpectrumEntry { z: r.z, eigenvalue: e, reality_defect: e.im.abs() }
        })
        .collect()
}

/// `|Psi(f, z_n, 0)| = |C(z_n) L(f, z_n, 1)|`.
pub fn boundary_check(kernel: &Kernel, record: &ZeroRecord, branch: Branch) -> Result<f64> {
    Ok((branch.constant(record.z) * l_value(kernel, record.z)?.value).norm())
}
