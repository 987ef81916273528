//! The distinguishing statistic and sample summaries.

use crate::error::{Error, Result};
use crate::matrix::{frobenius_sq, gram, Matrix};

/// `h(X) = tr((XᵀX)²)`, evaluated as `‖XᵀX‖²_F` without a second product.
pub fn stat_h(x: &Matrix) -> f64 {
    frobenius_sq(&gram(x))
}

/// Companion statistic `tr²(XᵀX) = ‖X‖⁴_F`.
pub fn stat_t(x: &Matrix) -> f64 {
    let f = frobenius_sq(x);
    f * f
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatSummary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n - 1) sample variance; 0 when `n == 1`.
    pub variance: f64,
    pub std_error_of_mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean, unbiased variance and standard error of a nonempty sample.
pub fn summarize(values: &[f64]) -> Result<StatSummary> {
    if values.is_empty() {
        return Err(Error::EmptyInput("summarize needs at least one value"));
    }
    let n = values.len();
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    // Rounding in the sum can push the mean a hair outside [min, max].
    let mean = (values.iter().sum::<f64>() / n as f64).clamp(min, max);
    let m2: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let variance = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Ok(StatSummary {
        n,
        mean,
        variance,
        std_error_of_mean: (variance / n as f64).sqrt(),
        min,
        max,
    })
}
