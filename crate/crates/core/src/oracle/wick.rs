//! Exact expectations of `h` by brute-force Wick expansion.
//!
//! `h(A) = Σ_{i,j,k,l} A_{ki} A_{kj} A_{li} A_{lj}`, and each entry of a product
//! `A = G_1 ... G_r` is a sum over index paths through the inner dimensions.
//! Expanding everything yields monomials in the independent Gaussian entries;
//! each monomial's expectation is `Π (e-1)!!` over its entry exponents `e`, or
//! zero if any exponent is odd. All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Cap on the number of monomials an exact enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WickBudget {
    pub max_monomials: u64,
}

impl Default for WickBudget {
    fn default() -> Self {
        Self {
            max_monomials: 10_000_000,
        }
    }
}

/// `E g^e` for a standard normal: `(e-1)!!` for even `e`, else 0.
fn gaussian_moment(e: u32) -> u128 {
    if e % 2 == 1 {
        return 0;
    }
    (1..e).step_by(2).map(u128::from).product()
}

/// Layout of the Gaussian entries of a chain `d_0 x d_1, d_1 x d_2, ...`.
struct Chain {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    n_entries: usize,
}

impl Chain {
    fn new(dims: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len() - 1);
        let mut total = 0;
        for w in dims.windows(2) {
            offsets.push(total);
            total += w[0] * w[1];
        }
        Self {
            dims,
            offsets,
            n_entries: total,
        }
    }

    fn factors(&self) -> usize {
        self.dims.len() - 1
    }

    #[inline]
    fn entry(&self, factor: usize, row: usize, col: usize) -> usize {
        self.offsets[factor] + row * self.dims[factor + 1] + col
    }

    /// Number of index paths through the inner dimensions for one entry of A.
    fn paths(&self) -> u128 {
        self.dims[1..self.dims.len() - 1].iter().map(|&d| d as u128).product()
    }
}

fn monomial_count(chain: &Chain, power: u32) -> Option<u128> {
    let (p, q) = (chain.dims[0] as u128, *chain.dims.last().unwrap() as u128);
    let index_terms = (p * p).checked_mul(q * q)?.checked_pow(power)?;
    let path_terms = chain.paths().checked_pow(4 * power)?;
    index_terms.checked_mul(path_terms)
}

/// `E[h(G_1 ... G_r)^power]` for the unnormalized chain, by full expansion.
fn expect_h_power(dims: Vec<usize>, power: u32, budget: WickBudget) -> Result<BigInt> {
    let chain = Chain::new(dims);
    let needed = monomial_count(&chain, power).unwrap_or(u128::MAX);
    if needed > u128::from(budget.max_monomials) {
        return Err(Error::BudgetExceeded {
            needed,
            budget: budget.max_monomials,
        });
    }

    let (p, q) = (chain.dims[0], *chain.dims.last().unwrap());
    let slots = 4 * power as usize;
    let hops = chain.factors() - 1;

    // (row, col) of A for every slot, one (i, j, k, l) tuple per copy of h.
    let mut cells = vec![(0usize, 0usize); slots];
    let mut h_index = vec![0usize; 4 * power as usize];
    let h_radix: Vec<usize> = (0..power).flat_map(|_| [q, q, p, p]).collect();

    let inner_radix: Vec<usize> = (0..slots)
        .flat_map(|_| chain.dims[1..chain.dims.len() - 1].iter().copied())
        .collect();
    let mut path = vec![0usize; slots * hops];

    let mut exponents = vec![0u32; chain.n_entries];
    let mut touched = Vec::with_capacity(slots * chain.factors());
    let mut total: u128 = 0;

    loop {
        for c in 0..power as usize {
            let (i, j, k, l) = (
                h_index[4 * c],
                h_index[4 * c + 1],
                h_index[4 * c + 2],
                h_index[4 * c + 3],
            );
            cells[4 * c] = (k, i);
            cells[4 * c + 1] = (k, j);
            cells[4 * c + 2] = (l, i);
            cells[4 * c + 3] = (l, j);
        }

        path.iter_mut().for_each(|x| *x = 0);
        loop {
            touched.clear();
            for (s, &(row, col)) in cells.iter().enumerate() {
                let hop = &path[s * hops..(s + 1) * hops];
                let mut from = row;
                for (f, &to) in hop.iter().enumerate() {
                    touched.push(chain.entry(f, from, to));
                    from = to;
                }
                touched.push(chain.entry(hops, from, col));
            }
            for &e in &touched {
                exponents[e] += 1;
            }
            let mut value: u128 = 1;
            for &e in &touched {
                let k = exponents[e];
                if k != 0 {
                    value *= gaussian_moment(k);
                    exponents[e] = 0;
                }
            }
            total += value;

            if !advance(&mut path, &inner_radix) {
                break;
            }
        }

        if !advance(&mut h_index, &h_radix) {
            break;
        }
    }
    Ok(BigInt::from(total))
}

/// Odometer increment; returns false after the last combination.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix).rev() {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

fn check_supported(inner: &[usize]) -> Result<()> {
    if inner.len() > 1 {
        return Err(Error::OracleUnsupported(format!(
            "r = {} factors; exact enumeration covers r <= 2",
            inner.len() + 1
        )));
    }
    if inner.contains(&0) {
        return Err(Error::InvalidArgument("inner dimensions must be positive".into()));
    }
    Ok(())
}

/// Exact `E h(A)` for `r = inner.len() + 1 <= 2`.
///
/// With one inner dimension `d`, `A = G_1 G_2 / d` (the normalized product);
/// with none, `A` is an unnormalized `p x q` Gaussian matrix.
pub fn wick_exact_mean_h(
    p: usize,
    q: usize,
    inner: &[usize],
    budget: WickBudget,
) -> Result<BigRational> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument("p and q must be positive".into()));
    }
    check_supported(inner)?;
    let mut dims = vec![p];
    dims.extend_from_slice(inner);
    dims.push(q);
    let raw = expect_h_power(dims, 1, budget)?;
    let norm: BigInt = match inner.first() {
        None => BigInt::from(1),
        Some(&d) => BigInt::from(d).pow(4),
    };
    Ok(BigRational::new(raw, norm))
}

/// Exact `Var h(G)` for an unnormalized `p x q` Gaussian matrix.
pub fn wick_exact_var_h_single(p: usize, q: usize, budget: WickBudget) -> Result<BigRational> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument("p and q must be positive".into()));
    }
    let second = expect_h_power(vec![p, q], 2, budget)?;
    let first = expect_h_power(vec![p, q], 1, budget)?;
    Ok(BigRational::from_integer(second - first.clone() * first))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(
            (0..=8).map(gaussian_moment).collect::<Vec<_>>(),
            vec![1, 0, 1, 0, 3, 0, 15, 0, 105]
        );
    }

    #[test]
    fn scalar_cases() {
        let b = WickBudget::default();
        assert_eq!(wick_exact_mean_h(1, 1, &[], b).unwrap(), int(3));
        assert_eq!(wick_exact_mean_h(1, 1, &[1], b).unwrap(), int(9));
        assert_eq!(wick_exact_var_h_single(1, 1, b).unwrap(), int(96));
    }

    #[test]
    fn two_by_two_cases() {
        let b = WickBudget::default();
        assert_eq!(wick_exact_mean_h(2, 2, &[], b).unwrap(), int(20));
        assert_eq!(
            wick_exact_mean_h(2, 2, &[2], b).unwrap(),
            BigRational::new(BigInt::from(21), BigInt::from(2))
        );
        assert_eq!(
            wick_exact_mean_h(2, 2, &[4], b).unwrap(),
            BigRational::new(BigInt::from(31), BigInt::from(16))
        );
        assert_eq!(wick_exact_var_h_single(2, 2, b).unwrap(), int(976));
        assert_eq!(wick_exact_var_h_single(2, 1, b).unwrap(), int(320));
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = WickBudget { max_monomials: 10 };
        assert!(matches!(
            wick_exact_mean_h(2, 2, &[2], tiny),
            Err(Error::BudgetExceeded { needed: 256, budget: 10 })
        ));
        assert!(matches!(
            wick_exact_mean_h(12, 12, &[12], WickBudget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn three_factors_unsupported() {
        assert!(matches!(
            wick_exact_mean_h(3, 3, &[3, 3], WickBudget::default()),
            Err(Error::OracleUnsupported(_))
        ));
    }

    #[test]
    fn odometer_visits_every_combination() {
        let radix = [2, 3, 1];
        let mut digits = [0, 0, 0];
        let mut seen = 1;
        while advance(&mut digits, &radix) {
            seen += 1;
        }
        assert_eq!(seen, 6);
        assert_eq!(digits, [0, 0, 0]);
    }
}
