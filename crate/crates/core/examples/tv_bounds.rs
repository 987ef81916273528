//! Total-variation bounds: the empirical Kolmogorov–Smirnov lower bound,
//! the analytic upper bound and the Pinsker route from a KL bound.
//!
//! ```text
//! cargo run --release --example tv_bounds
//! ```

use gmprod::distinguisher::{
    kl_jiang_ma, pinsker_tv_from_kl, sample_statistics, tv_lower_bound_empirical, tv_upper_bound,
};
use gmprod::sampling::gaussian_matrix;
use gmprod::{ChainSpec, Result, SeedSpec};

fn main() -> Result<()> {
    // Calibration: N(0,1) against N(1,1) has TV 2Φ(1/2) - 1 ≈ 0.3829.
    let n = 100_000;
    let xs = gaussian_matrix(1, n, SeedSpec::new(1, 0)).into_vec();
    let ys: Vec<f64> = gaussian_matrix(1, n, SeedSpec::new(1, 1))
        .into_vec()
        .into_iter()
        .map(|g| g + 1.0)
        .collect();
    println!("KS on shifted normals: {:.4} (exact TV 0.3829)", tv_lower_bound_empirical(&xs, &ys)?);

    println!();
    println!("{:>6} {:>10} {:>10} {:>12}", "d", "KS of h", "TV upper", "Pinsker(KL)");
    for d in [16, 64, 256, 1024] {
        let spec = ChainSpec::new(4, 4, vec![d])?;
        let samples = sample_statistics(&spec, 4_000, SeedSpec::new(3, 0))?;
        let ks = tv_lower_bound_empirical(&samples.single, &samples.product)?;
        let upper = tv_upper_bound(&spec, 1.0)?;
        let pinsker = pinsker_tv_from_kl(kl_jiang_ma(4, 4, d, 1.0)?)?;
        println!("{d:>6} {ks:>10.4} {upper:>10.4} {pinsker:>12.4}");
    }
    Ok(())
}
