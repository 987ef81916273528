//! Accuracy of the test as the inner dimension grows past `pq`.
//!
//! ```text
//! cargo run --release --example phase_sweep
//! ```

use gmprod::distinguisher::{geometric_dims, sweep, SweepConfig};
use gmprod::moments::BoundConstants;
use gmprod::{Result, SeedSpec};

fn main() -> Result<()> {
    let config = SweepConfig {
        p: 8,
        q: 8,
        r: 2,
        trials: 400,
        seed: SeedSpec::new(2024, 0),
        tv_constant: 1.0,
        constants: BoundConstants::default(),
    };
    let dims = geometric_dims(8, 2048, 9)?;
    println!("p = q = {}, pq = {}", config.p, config.p * config.q);
    println!("{:>6} {:>9} {:>10} {:>10} {:>12}", "d", "accuracy", "KS", "TV upper", "mean gap");
    for row in sweep(&config, &dims)? {
        let bar = "#".repeat(((row.accuracy - 0.5).max(0.0) * 80.0).round() as usize);
        println!(
            "{:>6} {:>9.4} {:>10.4} {:>10.4} {:>12.4e} {bar}",
            row.d, row.accuracy, row.tv_lower_empirical, row.tv_upper, row.mean_gap
        );
    }
    Ok(())
}
