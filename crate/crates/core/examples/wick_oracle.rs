//! Brute-force Wick enumeration as an independent check of the closed forms.
//! Small shapes only; the enumeration size grows very quickly.
//!
//! ```text
//! cargo run --release --example wick_oracle
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use gmprod::moments::{mean_h_product_exact, variance_single_exact};
use gmprod::oracle::{wick_exact_mean_h, wick_exact_var_h_single, WickBudget};
use gmprod::{ChainSpec, Error, Result};

fn main() -> Result<()> {
    let budget = WickBudget::default();
    for (p, q, inner) in [(1, 1, vec![]), (2, 2, vec![2]), (2, 3, vec![3]), (3, 3, vec![2])] {
        let wick = wick_exact_mean_h(p, q, &inner, budget)?;
        let closed = mean_h_product_exact(&ChainSpec::new(p, q, inner.clone())?);
        let mark = if wick == closed { "ok" } else { "MISMATCH" };
        println!("E h, p={p} q={q} inner={inner:?}: wick {wick}, closed form {closed} [{mark}]");
    }

    for (p, q) in [(1, 1), (1, 2), (2, 2)] {
        let wick = wick_exact_var_h_single(p, q, budget)?;
        let exact = BigRational::from_integer(variance_single_exact::<BigInt>(p, q));
        println!("Var h, p={p} q={q}: wick {wick}, formula {exact}");
    }

    // The enumeration refuses work it cannot finish.
    let tiny = WickBudget { max_monomials: 1_000 };
    match wick_exact_mean_h(3, 3, &[3], tiny) {
        Err(Error::BudgetExceeded { needed, budget }) => {
            println!("p=q=d=3 needs {needed} monomials, budget {budget}: refused");
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
