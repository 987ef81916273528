//! Threshold test on `h` separating `A_r` from `A_1`, and total-variation
//! bounds around it.

use std::fmt;

use rayon::prelude::*;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::moments::{
    mean_h_product, mean_h_single, variance_bound_product, variance_single_exact, BoundConstants,
};
use crate::sampling::{sample_product, sample_single, SeedSpec};
use crate::statistics::stat_h;

/// Analytic ingredients of the test for one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TestPlan {
    pub spec: ChainSpec,
    pub mu_single: f64,
    pub mu_product: f64,
    /// Midpoint of the two means.
    pub threshold: f64,
    /// Exact `Var h(A_1)`.
    pub var_single: f64,
    /// Recurrence bound on `Var h(A_r)`.
    pub var_product_bound: f64,
}

impl TestPlan {
    pub fn gap(&self) -> f64 {
        self.mu_product - self.mu_single
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Single,
    Product,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Single => "single",
            Label::Product => "product",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Plan with all recurrence constants at 1.
pub fn build_test(spec: &ChainSpec) -> Result<TestPlan> {
    build_test_with(spec, BoundConstants::default())
}

pub fn build_test_with(spec: &ChainSpec, constants: BoundConstants) -> Result<TestPlan> {
    let d1 = spec.require_product()?;
    let (p, q) = (spec.p(), spec.q());
    let mu_single = mean_h_single(p, q, d1);
    let mu_product = mean_h_product(spec);
    Ok(TestPlan {
        spec: spec.clone(),
        mu_single,
        mu_product,
        threshold: 0.5 * (mu_single + mu_product),
        var_single: variance_single_exact::<f64>(p, q) / (d1 as f64).powi(4),
        var_product_bound: variance_bound_product(spec, constants)?,
    })
}

/// `Product` iff `h_value > threshold`; a tie goes to `Single`.
pub fn classify(h_value: f64, plan: &TestPlan) -> Label {
    if h_value > plan.threshold {
        Label::Product
    } else {
        Label::Single
    }
}

/// Chebyshev bound on each hypothesis' misclassification probability:
/// `min(1, max(var_single, var_product_bound) / (gap/2)²)`, or 1 when the
/// gap is not positive.
pub fn chebyshev_error(plan: &TestPlan) -> f64 {
    let gap = plan.gap();
    if !(gap > 0.0) {
        return 1.0;
    }
    let var = plan.var_single.max(plan.var_product_bound);
    (var / (0.25 * gap * gap)).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerReport {
    pub n_trials: usize,
    pub accuracy: f64,
    /// Fraction of `A_1` draws labelled `Product`.
    pub false_positive_rate: f64,
    /// Fraction of `A_r` draws labelled `Single`.
    pub false_negative_rate: f64,
    pub chebyshev_error_bound: f64,
}

/// Per-trial `h` values for both ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSamples {
    pub single: Vec<f64>,
    pub product: Vec<f64>,
}

/// Draws `n` values of `h` from each ensemble. Trial `t` of `A_1` uses stream
/// `base + 2t` and trial `t` of `A_r` uses `base + 2t + 1`, so the two
/// ensembles never share randomness and growing `n` only appends trials.
pub fn sample_statistics(spec: &ChainSpec, n: usize, seed: SeedSpec) -> Result<EnsembleSamples> {
    spec.require_product()?;
    let draw = |t: u64| -> Result<(f64, f64)> {
        let a1 = sample_single(spec, seed.offset(2 * t))?;
        let ar = sample_product(spec, seed.offset(2 * t + 1))?;
        Ok((stat_h(&a1), stat_h(&ar)))
    };
    let pairs: Vec<(f64, f64)> = (0..n as u64).into_par_iter().map(draw).collect::<Result<_>>()?;
    let (single, product) = pairs.into_iter().unzip();
    Ok(EnsembleSamples { single, product })
}

/// Classifies both samples against `plan`.
pub fn power_from_samples(plan: &TestPlan, samples: &EnsembleSamples) -> Result<PowerReport> {
    let (ns, np) = (samples.single.len(), samples.product.len());
    if ns == 0 || np == 0 {
        return Err(Error::EmptyInput("power needs samples from both ensembles"));
    }
    let false_pos = samples
        .single
        .iter()
        .filter(|&&h| classify(h, plan) == Label::Product)
        .count();
    let false_neg = samples
        .product
        .iter()
        .filter(|&&h| classify(h, plan) == Label::Single)
        .count();
    let fpr = false_pos as f64 / ns as f64;
    let fnr = false_neg as f64 / np as f64;
    Ok(PowerReport {
        n_trials: ns.min(np),
        accuracy: 1.0 - 0.5 * (fpr + fnr),
        false_positive_rate: fpr,
        false_negative_rate: fnr,
        chebyshev_error_bound: chebyshev_error(plan),
    })
}

/// Draws `n` samples per ensemble and reports the test's empirical error rates.
pub fn empirical_power(spec: &ChainSpec, n: usize, seed: SeedSpec) -> Result<PowerReport> {
    if n < 10 {
        return Err(Error::InvalidArgument(format!(
            "empirical power needs at least 10 trials, got {n}"
        )));
    }
    let plan = build_test(spec)?;
    power_from_samples(&plan, &sample_statistics(spec, n, seed)?)
}

/// Two-sample Kolmogorov–Smirnov distance `sup_t |F̂_x(t) - F̂_y(t)|`.
///
/// Each threshold event `{h <= t}` is an event of the underlying laws, so
/// the value estimates a lower bound on their total-variation distance.
pub fn tv_lower_bound_empirical(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyInput("both samples must be nonempty"));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("samples contain NaN".into()));
    }
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);

    let (nx, ny) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut best: f64 = 0.0;
    while i < nx && j < ny {
        // Step past every copy of the smallest remaining value in both samples
        // before comparing, so ties never open a spurious gap.
        let t = xs[i].min(ys[j]);
        while i < nx && xs[i] <= t {
            i += 1;
        }
        while j < ny && ys[j] <= t {
            j += 1;
        }
        best = best.max((i as f64 / nx as f64 - j as f64 / ny as f64).abs());
    }
    Ok(best.min(1.0))
}

/// `min(1, c Σᵢ sqrt(pq/dᵢ))`.
pub fn tv_upper_bound(spec: &ChainSpec, c: f64) -> Result<f64> {
    spec.require_product()?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
    }
    let pq = (spec.p() * spec.q()) as f64;
    let sum: f64 = spec.inner().iter().map(|&d| (pq / d as f64).sqrt()).sum();
    Ok((c * sum).min(1.0))
}

/// KL bound `c pq / d` between a `p x q` block of a scaled Gaussian and of a
/// random orthogonal matrix. Requires `p, q <= d`.
pub fn kl_jiang_ma(p: usize, q: usize, d: usize, c: f64) -> Result<f64> {
    if p == 0 || q == 0 || d == 0 {
        return Err(Error::InvalidArgument("p, q, d must be positive".into()));
    }
    if p > d || q > d {
        return Err(Error::InvalidArgument(format!(
            "KL bound needs p, q <= d (p={p}, q={q}, d={d})"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
    }
    Ok(c * (p * q) as f64 / d as f64)
}

/// Pinsker: `TV <= min(1, sqrt(KL/2))`.
pub fn pinsker_tv_from_kl(kl: f64) -> Result<f64> {
    if !(kl >= 0.0) {
        return Err(Error::InvalidArgument(format!("KL must be nonnegative, got {kl}")));
    }
    Ok((kl / 2.0).sqrt().min(1.0))
}

/// One row of a dimension sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub accuracy: f64,
    pub tv_lower_empirical: f64,
    pub tv_upper: f64,
    pub chebyshev_error: f64,
    pub mean_gap: f64,
}

/// `steps` geometrically spaced integers from `d_min` to `d_max` inclusive.
pub fn geometric_dims(d_min: usize, d_max: usize, steps: usize) -> Result<Vec<usize>> {
    if d_min == 0 || d_min > d_max {
        return Err(Error::InvalidArgument(format!(
            "need 0 < d_min <= d_max, got {d_min}..{d_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("steps must be >= 2, got {steps}")));
    }
    let ratio = d_max as f64 / d_min as f64;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| match k {
            0 => d_min,
            k if k == steps - 1 => d_max,
            k => (d_min as f64 * ratio.powf(k as f64 / last)).round() as usize,
        })
        .collect())
}

/// Settings shared by every row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub trials: usize,
    pub seed: SeedSpec,
    /// Constant of the analytic TV upper bound.
    pub tv_constant: f64,
    pub constants: BoundConstants,
}

/// Runs the test at each `d`, with every inner dimension set to `d`. Every row
/// reuses the same seed, so rows differ only through `d`.
pub fn sweep(config: &SweepConfig, dims: &[usize]) -> Result<Vec<SweepRow>> {
    if config.r < 2 {
        return Err(Error::InvalidArgument("sweep needs r >= 2".into()));
    }
    if config.trials < 10 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 10 trials, got {}",
            config.trials
        )));
    }
    dims.iter()
        .map(|&d| {
            let spec = ChainSpec::uniform(config.p, config.q, config.r, d)?;
            let plan = build_test_with(&spec, config.constants)?;
            let samples = sample_statistics(&spec, config.trials, config.seed)?;
            let power = power_from_samples(&plan, &samples)?;
            Ok(SweepRow {
                d,
                accuracy: power.accuracy,
                tv_lower_empirical: tv_lower_bound_empirical(&samples.single, &samples.product)?,
                tv_upper: tv_upper_bound(&spec, config.tv_constant)?,
                chebyshev_error: power.chebyshev_error_bound,
                mean_gap: plan.gap(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(threshold: f64) -> TestPlan {
        TestPlan {
            spec: ChainSpec::new(2, 2, vec![4]).unwrap(),
            mu_single: threshold - 1.0,
            mu_product: threshold + 1.0,
            threshold,
            var_single: 0.0,
            var_product_bound: 0.0,
        }
    }

    #[test]
    fn plan_for_two_by_two() {
        let p = build_test(&ChainSpec::new(2, 2, vec![4]).unwrap()).unwrap();
        assert_eq!(p.mu_single, 1.25);
        assert_eq!(p.mu_product, 1.9375);
        assert_eq!(p.threshold, 1.59375);
        assert_eq!(p.var_single, 976.0 / 256.0);
        assert!(p.mu_single < p.threshold && p.threshold < p.mu_product);
    }

    #[test]
    fn threshold_between_means_for_any_d() {
        for d in [1, 2, 3, 10, 1000, 100_000] {
            let p = build_test(&ChainSpec::new(2, 2, vec![d]).unwrap()).unwrap();
            assert!(p.mu_single < p.threshold && p.threshold < p.mu_product, "d={d}");
        }
    }

    #[test]
    fn scalar_chain_gap_is_growth_factor_only() {
        // p = q = 1: no rectangle term, gap = 3 (d+2)/d / d² - 3 / d².
        let d = 5.0;
        let p = build_test(&ChainSpec::new(1, 1, vec![5]).unwrap()).unwrap();
        let expected = 3.0 * (d + 2.0) / d / (d * d) - 3.0 / (d * d);
        assert!((p.gap() - expected).abs() < 1e-15);
        assert!(p.gap() > 0.0);
    }

    #[test]
    fn classify_examples() {
        let pl = plan(2.0);
        assert_eq!(classify(3.0, &pl), Label::Product);
        assert_eq!(classify(1.0, &pl), Label::Single);
        assert_eq!(classify(2.0, &pl), Label::Single);
    }

    #[test]
    fn chebyshev_examples() {
        let mut pl = plan(2.0);
        assert_eq!(chebyshev_error(&pl), 0.0);
        // gap = 2, (gap/2)² = 1.
        pl.var_single = 1.0;
        assert_eq!(chebyshev_error(&pl), 1.0);
        pl.var_single = 0.25;
        pl.var_product_bound = 0.5;
        assert_eq!(chebyshev_error(&pl), 0.5);
        pl.mu_product = pl.mu_single;
        assert_eq!(chebyshev_error(&pl), 1.0);
    }

    #[test]
    fn chebyshev_at_distinguishable_point() {
        let pl = build_test(&ChainSpec::new(32, 32, vec![64]).unwrap()).unwrap();
        let gap = pl.gap();
        assert!((gap - 4.262).abs() < 1e-3, "gap {gap}");
        // With the exact single-Gaussian variance alone the bound is informative.
        assert!(pl.var_single / (0.25 * gap * gap) < 1.0);
        let bound = chebyshev_error(&pl);
        assert!(bound.is_finite() && bound <= 1.0);
    }

    #[test]
    fn power_is_deterministic() {
        let spec = ChainSpec::new(4, 4, vec![6]).unwrap();
        let seed = SeedSpec::new(12, 0);
        assert_eq!(
            empirical_power(&spec, 50, seed).unwrap(),
            empirical_power(&spec, 50, seed).unwrap()
        );
        assert!(empirical_power(&spec, 9, seed).is_err());
    }

    #[test]
    fn accuracy_identity() {
        let spec = ChainSpec::new(3, 3, vec![5]).unwrap();
        let r = empirical_power(&spec, 60, SeedSpec::new(1, 0)).unwrap();
        let expected = 1.0 - (r.false_positive_rate + r.false_negative_rate) / 2.0;
        assert_eq!(r.accuracy, expected);
        assert!((0.0..=1.0).contains(&r.accuracy));
    }

    #[test]
    fn ks_examples() {
        let xs = [3.0, 1.0, 2.0, 2.0];
        let ys = [2.0, 1.0, 2.0, 3.0];
        assert_eq!(tv_lower_bound_empirical(&xs, &ys).unwrap(), 0.0);
        assert_eq!(tv_lower_bound_empirical(&[1.0, 2.0], &[3.0, 4.0, 5.0]).unwrap(), 1.0);
        assert_eq!(tv_lower_bound_empirical(&[1.0, 2.0], &[1.5]).unwrap(), 0.5);
        assert!(tv_lower_bound_empirical(&[], &[1.0]).is_err());
        assert!(tv_lower_bound_empirical(&[1.0], &[]).is_err());
        assert!(tv_lower_bound_empirical(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        let s = ChainSpec::new(1, 1, vec![4]).unwrap();
        assert_eq!(tv_upper_bound(&s, 1.0).unwrap(), 0.5);
        let s = ChainSpec::new(1, 1, vec![100, 100]).unwrap();
        assert!((tv_upper_bound(&s, 1.0).unwrap() - 0.2).abs() < 1e-15);
        let s = ChainSpec::new(4, 4, vec![4]).unwrap();
        assert_eq!(tv_upper_bound(&s, 1.0).unwrap(), 1.0);
        assert!(tv_upper_bound(&s, 0.0).is_err());
    }

    #[test]
    fn kl_and_pinsker() {
        assert!((kl_jiang_ma(2, 3, 600, 1.0).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(kl_jiang_ma(1, 1, 1, 1.0).unwrap(), 1.0);
        assert_eq!(kl_jiang_ma(3, 4, 12, 1.0).unwrap(), 1.0);
        assert!(kl_jiang_ma(5, 2, 4, 1.0).is_err());
        assert!(kl_jiang_ma(2, 5, 4, 1.0).is_err());

        assert_eq!(pinsker_tv_from_kl(0.0).unwrap(), 0.0);
        assert_eq!(pinsker_tv_from_kl(2.0).unwrap(), 1.0);
        assert_eq!(pinsker_tv_from_kl(0.5).unwrap(), 0.5);
        assert_eq!(pinsker_tv_from_kl(50.0).unwrap(), 1.0);
        assert!(pinsker_tv_from_kl(-0.1).is_err());
    }

    #[test]
    fn geometric_spacing() {
        assert_eq!(
            geometric_dims(16, 4096, 9).unwrap(),
            vec![16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
        );
        assert_eq!(geometric_dims(10, 1000, 2).unwrap(), vec![10, 1000]);
        assert!(geometric_dims(10, 5, 3).is_err());
        assert!(geometric_dims(10, 50, 1).is_err());
    }
}
