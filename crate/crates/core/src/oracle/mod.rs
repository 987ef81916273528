//! Ground truth independent of the analytic formulas: exact Wick enumeration
//! for tiny sizes and Monte Carlo estimates for everything else.

mod monte_carlo;
mod wick;

pub use monte_carlo::{jackknife_variance, mc_mean, mc_samples, mc_variance, CIEstimate};
pub use wick::{wick_exact_mean_h, wick_exact_var_h_single, WickBudget};
