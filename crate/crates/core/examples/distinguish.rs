//! The threshold test on `h`: build a plan, classify fresh draws, measure power.
//!
//! ```text
//! cargo run --release --example distinguish
//! ```

use gmprod::distinguisher::{build_test, chebyshev_error, classify, empirical_power, Label};
use gmprod::sampling::{sample_product, sample_single};
use gmprod::statistics::stat_h;
use gmprod::{ChainSpec, Result, SeedSpec};

fn main() -> Result<()> {
    let spec = ChainSpec::new(32, 32, vec![64])?;
    let plan = build_test(&spec)?;
    println!("chain {spec}");
    println!("  E h(A_1)  = {:.4}", plan.mu_single);
    println!("  E h(A_2)  = {:.4}", plan.mu_product);
    println!("  threshold = {:.4}", plan.threshold);
    println!("  Chebyshev error bound = {:.4}", chebyshev_error(&plan));

    let seed = SeedSpec::new(99, 0);
    let mut correct = 0;
    for t in 0..10u64 {
        let (truth, x) = if t % 2 == 0 {
            (Label::Single, sample_single(&spec, seed.offset(t))?)
        } else {
            (Label::Product, sample_product(&spec, seed.offset(t))?)
        };
        let guess = classify(stat_h(&x), &plan);
        correct += usize::from(guess == truth);
        println!("  draw {t}: truth {truth:<7} h = {:>8.4} -> {guess}", stat_h(&x));
    }
    println!("  {correct}/10 correct");

    let report = empirical_power(&spec, 1_000, seed)?;
    println!(
        "1000 trials per ensemble: accuracy {:.3} (false positive {:.3}, false negative {:.3})",
        report.accuracy, report.false_positive_rate, report.false_negative_rate
    );
    Ok(())
}
