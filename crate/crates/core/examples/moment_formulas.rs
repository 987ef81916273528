//! Exact moment bookkeeping: the layer recursion against its closed form,
//! exact and asymptotic means, and the variance-bound recurrence.
//!
//! ```text
//! cargo run --release --example moment_formulas
//! ```

use num_bigint::BigInt;

use gmprod::moments::{
    closed_form_moments, iterated_moments, mean_h_asymptotic, mean_h_product,
    mean_h_product_exact, mean_h_single, variance_bound_product, variance_single_exact,
    BoundConstants,
};
use gmprod::{ChainSpec, Result};

fn main() -> Result<()> {
    let inner = [4, 10, 4];
    let iterated = iterated_moments::<BigInt>(&inner);
    let closed = closed_form_moments::<BigInt>(&inner);
    println!("S-moments for inner dims {inner:?}");
    for (k, (a, b)) in iterated.as_array().iter().zip(closed.as_array()).enumerate() {
        println!("  s{} = {a} (closed form {b})", k + 1);
    }
    assert_eq!(iterated, closed);

    println!();
    println!("{:>4} {:>14} {:>14} {:>14} {:>12}", "d", "E h(A_1)", "E h(A_2)", "asymptotic", "exact");
    for d in [4, 16, 64, 256] {
        let spec = ChainSpec::new(4, 4, vec![d])?;
        println!(
            "{d:>4} {:>14.6} {:>14.6} {:>14.6} {:>12}",
            mean_h_single(4, 4, d),
            mean_h_product(&spec),
            mean_h_asymptotic(&spec)?,
            mean_h_product_exact(&spec).to_string()
        );
    }

    println!();
    println!("Var h(G) for a 4 x 4 Gaussian: {}", variance_single_exact::<BigInt>(4, 4));
    for r in 2..=5 {
        let spec = ChainSpec::uniform(4, 4, r, 32)?;
        let bound = variance_bound_product(&spec, BoundConstants::default())?;
        println!("variance bound, r = {r}, d = 32: {bound:.6}");
    }
    Ok(())
}
