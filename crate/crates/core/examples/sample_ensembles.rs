//! Draws from the single-Gaussian and product ensembles and compares
//! empirical moments of `h` with the exact means.
//!
//! ```text
//! cargo run --release --example sample_ensembles
//! ```

use gmprod::moments::{mean_h_product, mean_h_single};
use gmprod::oracle::mc_mean;
use gmprod::sampling::{sample_product, sample_single};
use gmprod::statistics::stat_h;
use gmprod::{ChainSpec, Result, SeedSpec};

fn main() -> Result<()> {
    let spec = ChainSpec::new(3, 4, vec![8, 8])?;
    let seed = SeedSpec::new(7, 0);

    let a1 = sample_single(&spec, seed)?;
    let ar = sample_product(&spec, seed)?;
    println!("chain {spec}");
    println!("one draw of A_1: {:?}", a1.shape());
    println!("one draw of A_r: {:?}", ar.shape());
    println!("h(A_1) = {:.4}, h(A_r) = {:.4}", stat_h(&a1), stat_h(&ar));

    let n = 50_000;
    let single = mc_mean(|s| stat_h(&sample_single(&spec, s).unwrap()), n, seed)?;
    let product = mc_mean(|s| stat_h(&sample_product(&spec, s).unwrap()), n, seed.offset(n as u64))?;
    println!();
    println!("{:<10} {:>12} {:>12} {:>8}", "ensemble", "exact", "simulated", "z");
    let exact_single = mean_h_single(spec.p(), spec.q(), spec.inner()[0]);
    let exact_product = mean_h_product(&spec);
    for (name, exact, est) in [("single", exact_single, single), ("product", exact_product, product)] {
        println!(
            "{name:<10} {exact:>12.5} {:>12.5} {:>8.2}",
            est.estimate,
            est.z_score(exact)
        );
    }
    Ok(())
}
