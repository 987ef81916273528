//! Products of independent Gaussian matrices and when they can be told apart
//! from a single Gaussian matrix.
//!
//! For dimensions `p = d_0, d_1, ..., d_{r-1}, q = d_r` the crate compares
//!
//! * `A_r = (G_1/√d_1)(G_2/√d_2)···(G_{r-1}/√d_{r-1})(G_r/√d_1)` and
//! * `A_1 = G/√d_1` with `G` a `p x q` standard Gaussian matrix
//!
//! through the statistic `h(X) = tr((XᵀX)²)`. It provides samplers for both
//! ensembles ([`sampling`]), exact and asymptotic moments of `h`
//! ([`moments`]), independent checks of those moments by Wick enumeration
//! and Monte Carlo ([`oracle`]), and the threshold test with total-variation
//! bounds ([`distinguisher`]). The [`cli`] module backs the `gmprod` binary.

pub mod chain;
pub mod cli;
pub mod distinguisher;
pub mod error;
pub mod matrix;
pub mod moments;
pub mod oracle;
pub mod sampling;
pub mod statistics;

pub use chain::{ChainSpec, Validation};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use sampling::SeedSpec;
