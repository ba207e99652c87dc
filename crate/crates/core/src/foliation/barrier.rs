use crate::error::{Error, Result};

/// Mean curvature of the `r = const` hypersurface inside the Schwarzschild
/// horizon, `−(2/r)(2M/r − 1)^(−1/2)(1 − 3M/(2r))`, for `0 < r < 2M`.
///
/// Vanishes at the maximal slice `r = 3M/2`; positive below it and negative
/// above it.
pub fn schwarzschild_trk(r: f64, mass: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::OutOfDomain(format!("mass must be positive, got {mass}")));
    }
    if !(r > 0.0 && r < 2.0 * mass) {
        return Err(Error::OutOfDomain(format!(
            "r = {r} is outside the interior chart (0, {})",
            2.0 * mass
        )));
    }
    Ok(-(2.0 / r) * (2.0 * mass / r - 1.0).powf(-0.5) * (1.0 - 1.5 * mass / r))
}

/// Sampled `Tr K(r)` across part of the interior.
#[derive(Clone, Debug, PartialEq)]
pub struct BarrierScanResult {
    pub mass: f64,
    /// `(r, Tr K)` with `r` strictly increasing.
    pub samples: Vec<(f64, f64)>,
    /// Consecutive sample pairs `[r_i, r_{i+1}]` across which `Tr K` changes sign.
    pub zero_crossings: Vec<(f64, f64)>,
    /// `Tr K > 0` on every sample below `3M/2` and `< 0` on every sample above it.
    pub sign_pattern_ok: bool,
}

impl BarrierScanResult {
    pub fn maximal_radius(&self) -> f64 {
        1.5 * self.mass
    }
}

/// Sample `Tr K` at `n` evenly spaced radii in `[r_lo, r_hi]` and locate sign changes.
pub fn barrier_scan(mass: f64, r_lo: f64, r_hi: f64, n: usize) -> Result<BarrierScanResult> {
    if !(mass > 0.0) {
        return Err(Error::OutOfDomain(format!("mass must be positive, got {mass}")));
    }
    if !(0.0 < r_lo && r_lo < r_hi && r_hi < 2.0 * mass) {
        return Err(Error::OutOfDomain(format!(
            "need 0 < r_lo < r_hi < 2M = {}, got [{r_lo}, {r_hi}]",
            2.0 * mass
        )));
    }
    if n < 2 {
        return Err(Error::OutOfDomain(format!("need at least 2 samples, got {n}")));
    }

    let samples = (0..n)
        .map(|i| {
            let r = if i + 1 == n {
                r_hi
            } else {
                r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64
            };
            schwarzschild_trk(r, mass).map(|k| (r, k))
        })
        .collect::<Result<Vec<_>>>()?;

    let zero_crossings = samples
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum() || w[0].1 == 0.0)
        .map(|w| (w[0].0, w[1].0))
        .collect();

    let barrier = 1.5 * mass;
    let sign_pattern_ok = samples.iter().all(|&(r, k)| {
        if (r - barrier).abs() <= 1e-12 * mass {
            true
        } else if r < barrier {
            k > 0.0
        } else {
            k < 0.0
        }
    });

    Ok(BarrierScanResult {
        mass,
        samples,
        zero_crossings,
        sign_pattern_ok,
    })
}
