//! Reproducible draws from the two ensembles under test.
//!
//! Every draw is keyed by a [`SeedSpec`]. The generator is ChaCha8 seeded from
//! `master_seed` with its 64-bit stream id set to `stream_index`, so distinct
//! trials read disjoint keystreams and any trial can be replayed alone.
//! Standard normals come from the ziggurat sampler in `rand_distr`
//! (`StandardNormal`). Both choices are pinned through `Cargo.lock`; a given
//! release reproduces its outputs bit for bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::chain::ChainSpec;
use crate::error::Result;
use crate::matrix::{matmul, Matrix};

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// The stream `offset` positions after this one.
    pub const fn offset(self, offset: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            stream_index: self.stream_index.wrapping_add(offset),
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

fn fill_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    Matrix::from_parts(rows, cols, data)
}

/// `rows x cols` matrix of i.i.d. standard normals, filled row-major.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: SeedSpec) -> Matrix {
    assert!(rows > 0 && cols > 0, "dimensions must be positive");
    fill_gaussian(rows, cols, &mut seed.rng())
}

/// `A_1 = G / sqrt(d_1)` with `G` a `p x q` standard Gaussian matrix.
pub fn sample_single(spec: &ChainSpec, seed: SeedSpec) -> Result<Matrix> {
    let d1 = spec.require_product()?;
    let mut g = gaussian_matrix(spec.p(), spec.q(), seed);
    g.scale_in_place(1.0 / (d1 as f64).sqrt());
    Ok(g)
}

/// `A_r = W_1 W_2 ... W_r` with `W_i = G_i / sqrt(d_i)` for `i < r` and
/// `W_r = G_r / sqrt(d_1)`.
///
/// Factors are drawn from one stream in order `G_1, ..., G_r`, each row-major.
/// The last normalizer is `1/sqrt(d_1)` even when a relaxed spec has
/// `d_{r-1} != d_1`.
pub fn sample_product(spec: &ChainSpec, seed: SeedSpec) -> Result<Matrix> {
    let d1 = spec.require_product()?;
    let dims = spec.dims();
    let mut rng = seed.rng();

    let mut acc = fill_gaussian(dims[0], dims[1], &mut rng);
    for w in dims[1..].windows(2) {
        let g = fill_gaussian(w[0], w[1], &mut rng);
        acc = matmul(&acc, &g)?;
    }

    // One combined scale: 1 / sqrt(d_1 * d_2 * ... * d_{r-1} * d_1).
    let norm: f64 = spec.inner().iter().map(|&d| d as f64).product::<f64>() * d1 as f64;
    acc.scale_in_place(1.0 / norm.sqrt());
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_matrix_is_deterministic() {
        let s = SeedSpec::new(7, 3);
        assert_eq!(gaussian_matrix(4, 5, s), gaussian_matrix(4, 5, s));
        assert_ne!(gaussian_matrix(4, 5, s), gaussian_matrix(4, 5, s.offset(1)));
        assert_ne!(
            gaussian_matrix(4, 5, s),
            gaussian_matrix(4, 5, SeedSpec::new(8, 3))
        );
    }

    #[test]
    fn gaussian_matrix_moments() {
        let g = gaussian_matrix(1000, 1000, SeedSpec::new(11, 0));
        let n = g.as_slice().len() as f64;
        let mean = g.as_slice().iter().sum::<f64>() / n;
        let var = g.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn shapes() {
        let spec = ChainSpec::new(2, 2, vec![4]).unwrap();
        assert_eq!(sample_single(&spec, SeedSpec::new(1, 0)).unwrap().shape(), (2, 2));
        let spec = ChainSpec::new(2, 3, vec![5, 5]).unwrap();
        assert_eq!(sample_product(&spec, SeedSpec::new(1, 0)).unwrap().shape(), (2, 3));
    }

    #[test]
    fn single_factor_rejected() {
        let spec = ChainSpec::new(2, 3, vec![]).unwrap();
        assert!(sample_single(&spec, SeedSpec::new(1, 0)).is_err());
        assert!(sample_product(&spec, SeedSpec::new(1, 0)).is_err());
    }

    #[test]
    fn scalar_product_is_product_of_two_normals() {
        let spec = ChainSpec::new(1, 1, vec![1]).unwrap();
        let seed = SeedSpec::new(99, 4);
        let mut rng = seed.rng();
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        let a = sample_product(&spec, seed).unwrap();
        assert_eq!(a.get(0, 0), g1 * g2);
    }

    #[test]
    fn single_second_moment_matches_inverse_d1() {
        let spec = ChainSpec::new(2, 2, vec![4]).unwrap();
        let n = 100_000u64;
        let xs: Vec<f64> = (0..n)
            .map(|t| sample_single(&spec, SeedSpec::new(5, t)).unwrap().get(0, 1).powi(2))
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn relaxed_chain_keeps_d1_normalizer() {
        use crate::chain::Validation;
        // d_{r-1} = 3 differs from d_1 = 1; the last factor is still scaled by 1/sqrt(d_1).
        let spec = ChainSpec::with_validation(1, 1, vec![1, 3], Validation::Relaxed).unwrap();
        let seed = SeedSpec::new(3, 0);
        let mut rng = seed.rng();
        let g1: f64 = rng.sample(StandardNormal);
        let g2 = fill_gaussian(1, 3, &mut rng);
        let g3 = fill_gaussian(3, 1, &mut rng);
        let raw: f64 = (0..3).map(|k| g2.get(0, k) * g3.get(k, 0)).sum::<f64>() * g1;
        let expected = raw / (1.0f64 * 3.0 * 1.0).sqrt();
        let got = sample_product(&spec, seed).unwrap().get(0, 0);
        assert!((got - expected).abs() <= 1e-14 * expected.abs().max(1.0));
    }
}
