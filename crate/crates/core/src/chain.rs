//! Dimension profile of a Gaussian matrix-product ensemble.

use std::fmt;

use crate::error::{Error, Result};

/// How much of the dimension contract to enforce when building a [`ChainSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    /// Positive dimensions only. Lets experiments probe `d_{r-1} != d_1`.
    Relaxed,
    /// Positive dimensions and, for `r >= 3`, last inner dimension equal to the first.
    #[default]
    Structural,
    /// Structural, plus every inner dimension at least `max(p, q)`.
    Strict,
}

/// Dimensions `p = d_0`, inner `d_1..d_{r-1}`, `q = d_r` of the product
/// `G_1 G_2 ... G_r` where `G_i` is `d_{i-1} x d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainSpec {
    p: usize,
    q: usize,
    inner: Vec<usize>,
}

impl ChainSpec {
    /// Structurally validated spec.
    pub fn new(p: usize, q: usize, inner: Vec<usize>) -> Result<Self> {
        Self::with_validation(p, q, inner, Validation::Structural)
    }

    pub fn with_validation(
        p: usize,
        q: usize,
        inner: Vec<usize>,
        validation: Validation,
    ) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidChain(format!(
                "p and q must be positive, got p={p}, q={q}"
            )));
        }
        if let Some(i) = inner.iter().position(|&d| d == 0) {
            return Err(Error::InvalidChain(format!(
                "inner dimension d_{} must be positive",
                i + 1
            )));
        }
        if validation != Validation::Relaxed && inner.len() >= 2 {
            let (first, last) = (inner[0], inner[inner.len() - 1]);
            if first != last {
                return Err(Error::InvalidChain(format!(
                    "last inner dimension ({last}) must equal the first ({first})"
                )));
            }
        }
        if validation == Validation::Strict {
            let floor = p.max(q);
            if let Some((i, &d)) = inner.iter().enumerate().find(|(_, &d)| d < floor) {
                return Err(Error::InvalidChain(format!(
                    "strict mode: d_{} = {d} is below max(p, q) = {floor}",
                    i + 1
                )));
            }
        }
        Ok(Self { p, q, inner })
    }

    /// Chain of length `r` with every inner dimension equal to `d`.
    pub fn uniform(p: usize, q: usize, r: usize, d: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidChain("r must be at least 1".into()));
        }
        Self::new(p, q, vec![d; r - 1])
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    /// Inner dimensions `d_1..d_{r-1}`.
    #[inline]
    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    /// Number of factors.
    #[inline]
    pub fn r(&self) -> usize {
        self.inner.len() + 1
    }

    /// `d_1`, the normalizing dimension. `None` for a single factor.
    pub fn d1(&self) -> Option<usize> {
        self.inner.first().copied()
    }

    pub(crate) fn require_product(&self) -> Result<usize> {
        self.d1().ok_or_else(|| {
            Error::InvalidChain("operation needs r >= 2 (no inner dimension given)".into())
        })
    }

    /// Full dimension list `d_0, ..., d_r`.
    pub fn dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.inner.len() + 2);
        dims.push(self.p);
        dims.extend_from_slice(&self.inner);
        dims.push(self.q);
        dims
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} q={} inner={:?} (r={})", self.p, self.q, self.inner, self.r())
    }
}
