//! Monte Carlo estimates with standard errors.
//!
//! Trial `t` always reads stream `seed.stream_index + t`. Trials run in
//! parallel, but values are gathered in trial order and reduced sequentially,
//! so results do not depend on the thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampling::SeedSpec;
use crate::statistics::summarize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CIEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
}

impl CIEstimate {
    /// Distance to `target` in standard errors. Infinite when the error is
    /// zero and the estimate misses.
    pub fn z_score(&self, target: f64) -> f64 {
        let gap = (self.estimate - target).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.std_error
        }
    }

    pub fn within(&self, target: f64, std_errors: f64) -> bool {
        self.z_score(target) <= std_errors
    }
}

/// Values of `statistic` on streams `seed.stream_index + 0 .. n`, in trial order.
pub fn mc_samples<F>(statistic: F, n: usize, seed: SeedSpec) -> Vec<f64>
where
    F: Fn(SeedSpec) -> f64 + Sync,
{
    (0..n as u64)
        .into_par_iter()
        .map(|t| statistic(seed.offset(t)))
        .collect()
}

/// Sample mean of `n` independent trials with its standard error.
pub fn mc_mean<F>(statistic: F, n: usize, seed: SeedSpec) -> Result<CIEstimate>
where
    F: Fn(SeedSpec) -> f64 + Sync,
{
    if n < 2 {
        return Err(Error::InvalidArgument(format!("mc_mean needs n >= 2, got {n}")));
    }
    let s = summarize(&mc_samples(statistic, n, seed))?;
    Ok(CIEstimate {
        estimate: s.mean,
        std_error: s.std_error_of_mean,
        n,
    })
}

/// Unbiased sample variance of `n` independent trials with a jackknife
/// standard error.
pub fn mc_variance<F>(statistic: F, n: usize, seed: SeedSpec) -> Result<CIEstimate>
where
    F: Fn(SeedSpec) -> f64 + Sync,
{
    if n < 10 {
        return Err(Error::InvalidArgument(format!(
            "mc_variance needs n >= 10, got {n}"
        )));
    }
    jackknife_variance(&mc_samples(statistic, n, seed))
}

/// Unbiased variance of `values` and its delete-one jackknife standard error.
///
/// Leave-one-out variances come from the centered sums in O(n):
/// removing `x_i` shifts the mean by `-c_i/(n-1)` and the centered sum of
/// squares by `-c_i² n/(n-1)`, where `c_i = x_i - mean`.
pub fn jackknife_variance(values: &[f64]) -> Result<CIEstimate> {
    let n = values.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "jackknife variance needs at least 3 values, got {n}"
        )));
    }
    let summary = summarize(values)?;
    let mean = summary.mean;
    let nf = n as f64;
    let m2: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();

    let loo: Vec<f64> = values
        .iter()
        .map(|x| {
            let c = x - mean;
            (m2 - c * c * nf / (nf - 1.0)).max(0.0) / (nf - 2.0)
        })
        .collect();
    let loo_mean = loo.iter().sum::<f64>() / nf;
    let spread: f64 = loo.iter().map(|v| (v - loo_mean) * (v - loo_mean)).sum();
    Ok(CIEstimate {
        estimate: summary.variance,
        std_error: ((nf - 1.0) / nf * spread).sqrt(),
        n,
    })
}
