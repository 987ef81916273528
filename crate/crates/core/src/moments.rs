//! Analytic moments of `h(X) = tr((XᵀX)²)` for the single Gaussian and the
//! normalized product ensemble.
//!
//! The fourth-order structure of a left/right rotation-invariant `p x q`
//! ensemble is captured by six numbers (see [`MomentVector`]). Multiplying on
//! the right by an unnormalized `d x q` Gaussian maps them linearly
//! ([`layer_update`]); iterating from the single-Gaussian base gives the
//! product ensemble, and [`closed_form_moments`] gives the same result in
//! closed form.
//!
//! Every formula is generic over [`Scalar`], so the same code runs in exact
//! integer/rational arithmetic (`BigInt`, `BigRational`) for verification and in
//! `f64` for sweeps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

/// Numeric type the moment formulas can be evaluated in.
pub trait Scalar: Clone + Num + FromPrimitive + PartialOrd {}

impl<T: Clone + Num + FromPrimitive + PartialOrd> Scalar for T {}

#[inline]
fn lit<T: Scalar>(n: u64) -> T {
    T::from_u64(n).expect("integer literal representable in scalar type")
}

#[inline]
fn dim<T: Scalar>(d: usize) -> T {
    lit(d as u64)
}

/// Six invariant fourth moments of a rotation-invariant `p x q` ensemble `A`:
///
/// | field | moment | shape |
/// |---|---|---|
/// | `s1` | `E A₁₁⁴` | diagonal |
/// | `s2` | `E A₂₁⁴` | off-diagonal |
/// | `s3` | `E A_{i1}² A_{j1}²`, `i≠j` | same column |
/// | `s4` | `E A_{1i}² A_{1j}²`, `i≠j` | same row |
/// | `s5` | `E A_{1i}² A_{2j}²`, `i≠j` | disjoint |
/// | `s6` | `E A_{ik} A_{il} A_{jk} A_{jl}` | rectangle |
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector<T = f64> {
    pub s1: T,
    pub s2: T,
    pub s3: T,
    pub s4: T,
    pub s5: T,
    pub s6: T,
}

impl<T: Scalar> MomentVector<T> {
    pub fn as_array(&self) -> [T; 6] {
        [
            self.s1.clone(),
            self.s2.clone(),
            self.s3.clone(),
            self.s4.clone(),
            self.s5.clone(),
            self.s6.clone(),
        ]
    }

    /// The three identities the layer update preserves:
    /// `s1 = 3 s4`, `s3 = 2 s6 + s5`, `s3 = s4`.
    pub fn satisfies_gaussian_identities(&self) -> bool {
        let three: T = lit(3);
        let two: T = lit(2);
        self.s1 == three * self.s4.clone()
            && self.s3 == two * self.s6.clone() + self.s5.clone()
            && self.s3 == self.s4
    }
}

/// Moments of a single unnormalized Gaussian matrix: `(3, 3, 1, 1, 1, 0)`.
pub fn base_gaussian_moments<T: Scalar>() -> MomentVector<T> {
    MomentVector {
        s1: lit(3),
        s2: lit(3),
        s3: lit(1),
        s4: lit(1),
        s5: lit(1),
        s6: lit(0),
    }
}

/// Moments of `B G` where `B` (`p x d`) has moments `t` and `G` is an
/// independent unnormalized `d x q` Gaussian matrix.
pub fn layer_update<T: Scalar>(t: &MomentVector<T>, d: usize) -> MomentVector<T> {
    let d_t: T = dim(d);
    let pairs: T = dim::<T>(d) * dim::<T>(d - 1);
    let three: T = lit(3);
    let two: T = lit(2);

    let s1 = three.clone() * d_t.clone() * t.s1.clone() + three.clone() * pairs.clone() * t.s4.clone();
    let s3 = three * d_t.clone() * t.s3.clone()
        + pairs.clone() * t.s5.clone()
        + two * pairs.clone() * t.s6.clone();
    let s4 = d_t.clone() * t.s1.clone() + pairs.clone() * t.s4.clone();
    let s5 = d_t.clone() * t.s3.clone() + pairs.clone() * t.s5.clone();
    let s6 = d_t * t.s3.clone() + pairs * t.s6.clone();
    MomentVector {
        s2: s1.clone(),
        s1,
        s3,
        s4,
        s5,
        s6,
    }
}

/// Moments of the unnormalized product `G_1 ... G_r` with the given inner
/// dimensions, by iterating [`layer_update`] from the Gaussian base.
pub fn iterated_moments<T: Scalar>(inner: &[usize]) -> MomentVector<T> {
    inner
        .iter()
        .fold(base_gaussian_moments(), |acc, &d| layer_update(&acc, d))
}

/// Closed form of [`iterated_moments`]:
/// `s3 = s4 = Π dᵢ(dᵢ+2)`, `s1 = s2 = 3 s4`,
/// `s6 = Σⱼ (Π_{i<j} dᵢ(dᵢ+2)) dⱼ (Π_{i>j} dᵢ(dᵢ-1))`, `s5 = s3 - 2 s6`.
pub fn closed_form_moments<T: Scalar>(inner: &[usize]) -> MomentVector<T> {
    let grow = |d: usize| dim::<T>(d) * dim::<T>(d + 2);
    let shrink = |d: usize| dim::<T>(d) * dim::<T>(d - 1);

    let s4 = inner.iter().fold(T::one(), |acc, &d| acc * grow(d));
    let s6 = (0..inner.len()).fold(T::zero(), |acc, j| {
        let before = inner[..j].iter().fold(T::one(), |a, &d| a * grow(d));
        let after = inner[j + 1..].iter().fold(T::one(), |a, &d| a * shrink(d));
        acc + before * dim(inner[j]) * after
    });
    let s1 = lit::<T>(3) * s4.clone();
    let s5 = s4.clone() - lit::<T>(2) * s6.clone();
    MomentVector {
        s2: s1.clone(),
        s1,
        s3: s4.clone(),
        s4,
        s5,
        s6,
    }
}

/// Unnormalized `E h` from a moment vector with `s1 = s2`:
/// `pq s1 + pq(p-1) s3 + pq(q-1) s4 + p(p-1)q(q-1) s6`.
pub fn mean_h_from_moments<T: Scalar>(m: &MomentVector<T>, p: usize, q: usize) -> T {
    let pq: T = dim::<T>(p) * dim::<T>(q);
    pq.clone() * m.s1.clone()
        + pq.clone() * dim::<T>(p - 1) * m.s3.clone()
        + pq.clone() * dim::<T>(q - 1) * m.s4.clone()
        + pq * dim::<T>(p - 1) * dim::<T>(q - 1) * m.s6.clone()
}

/// Chain normalizer `d_1² d_2² ... d_{r-1}² d_1²` of the fourth moment; 1 for `r = 1`.
fn chain_normalizer<T: Scalar>(spec: &ChainSpec) -> T {
    match spec.d1() {
        None => T::one(),
        Some(d1) => {
            let prod = spec.inner().iter().fold(T::one(), |a, &d| a * dim::<T>(d) * dim::<T>(d));
            prod * dim::<T>(d1) * dim::<T>(d1)
        }
    }
}

/// Exact `E h(A_r)` as a rational. For `r = 1` there is no normalizing
/// dimension and the unnormalized single-Gaussian value `pq(p+q+1)` is returned.
pub fn mean_h_product_exact(spec: &ChainSpec) -> BigRational {
    let (p, q) = (spec.p(), spec.q());
    let s = closed_form_moments::<BigInt>(spec.inner());
    let pq = BigInt::from(p) * BigInt::from(q);
    let numer = pq.clone() * BigInt::from(p + q + 1) * s.s3
        + pq * BigInt::from(p - 1) * BigInt::from(q - 1) * s.s6;
    BigRational::new(numer, chain_normalizer::<BigInt>(spec))
}

/// `E h(A_r)` in double precision.
///
/// Evaluated as ratios (`dᵢ(dᵢ+2)/dᵢ² = 1 + 2/dᵢ`, and so on) so no intermediate
/// product of dimensions is formed; the result agrees with
/// [`mean_h_product_exact`] to rounding.
pub fn mean_h_product(spec: &ChainSpec) -> f64 {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let inner: Vec<f64> = spec.inner().iter().map(|&d| d as f64).collect();
    let grow = |d: f64| 1.0 + 2.0 / d;
    let shrink = |d: f64| 1.0 - 1.0 / d;

    let s3_ratio: f64 = inner.iter().map(|&d| grow(d)).product();
    let s6_ratio: f64 = (0..inner.len())
        .map(|j| {
            let before: f64 = inner[..j].iter().map(|&d| grow(d)).product();
            let after: f64 = inner[j + 1..].iter().map(|&d| shrink(d)).product();
            before * after / inner[j]
        })
        .sum();
    let d1_sq = spec.d1().map_or(1.0, |d| (d as f64) * (d as f64));
    (p * q * (p + q + 1.0) * s3_ratio + p * q * (p - 1.0) * (q - 1.0) * s6_ratio) / d1_sq
}

/// Leading-order approximation
/// `pq(p+q+1)/d₁² + pq(p-1)(q-1)/d₁² · Σⱼ 1/dⱼ`.
pub fn mean_h_asymptotic(spec: &ChainSpec) -> Result<f64> {
    let d1 = spec.require_product()? as f64;
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let harmonic: f64 = spec.inner().iter().map(|&d| 1.0 / d as f64).sum();
    Ok(p * q * (p + q + 1.0) / (d1 * d1) + p * q * (p - 1.0) * (q - 1.0) / (d1 * d1) * harmonic)
}

/// `E h(G/sqrt(d)) = pq(p+q+1)/d²` for `G` a `p x q` standard Gaussian.
pub fn mean_h_single(p: usize, q: usize, d: usize) -> f64 {
    let (p, q, d) = (p as f64, q as f64, d as f64);
    p * q * (p + q + 1.0) / (d * d)
}

pub fn mean_h_single_exact(p: usize, q: usize, d: usize) -> BigRational {
    BigRational::new(
        BigInt::from(p) * BigInt::from(q) * BigInt::from(p + q + 1),
        BigInt::from(d) * BigInt::from(d),
    )
}

/// Variance/covariance components of the squared entries of `AᵀA`:
/// `u1 = Var (AᵀA)ᵢᵢ²`, `u2 = Var (AᵀA)ᵢⱼ²`, `u3..u7` the covariances between
/// squared entries sharing a row with one diagonal entry, sharing a row with
/// none, two diagonals, one diagonal and fully disjoint off-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct UComponents<T = f64> {
    pub u1: T,
    pub u2: T,
    pub u3: T,
    pub u4: T,
    pub u5: T,
    pub u6: T,
    pub u7: T,
}

/// Components for an unnormalized `p x q` Gaussian matrix.
pub fn u_components_gaussian<T: Scalar>(p: usize) -> UComponents<T> {
    let p_t: T = dim(p);
    UComponents {
        u1: lit::<T>(8) * p_t.clone() * dim::<T>(p + 2) * dim::<T>(p + 3),
        u2: lit::<T>(2) * p_t.clone() * dim::<T>(p + 3),
        u3: lit::<T>(4) * p_t.clone() * dim::<T>(p + 2),
        u4: lit::<T>(2) * p_t,
        u5: T::zero(),
        u6: T::zero(),
        u7: T::zero(),
    }
}

/// `Var h = q u1 + q(q-1)(2u2 + 4u3 + u5) + 2q(q-1)(q-2)(2u4 + u6) + q(q-1)(q-2)(q-3) u7`.
pub fn variance_from_components<T: Scalar>(u: &UComponents<T>, q: usize) -> T {
    let q0: T = dim(q);
    let q1: T = q0.clone() * dim::<T>(q - 1);
    // Falling factorials vanish once they pass zero.
    let q2: T = if q >= 2 { q1.clone() * dim::<T>(q - 2) } else { T::zero() };
    let q3: T = if q >= 3 { q2.clone() * dim::<T>(q - 3) } else { T::zero() };
    let two: T = lit(2);
    let four: T = lit(4);

    q0 * u.u1.clone()
        + q1 * (two.clone() * u.u2.clone() + four * u.u3.clone() + u.u5.clone())
        + two.clone() * q2 * (two * u.u4.clone() + u.u6.clone())
        + q3 * u.u7.clone()
}

/// `Var tr((GᵀG)²) = 4pq(5 + 5p + 5q + 2p² + 5pq + 2q²)` for an unnormalized
/// `p x q` Gaussian. Scale by `1/d⁴` for `G/sqrt(d)`.
pub fn variance_single_exact<T: Scalar>(p: usize, q: usize) -> T {
    let (pt, qt): (T, T) = (dim(p), dim(q));
    let five: T = lit(5);
    let two: T = lit(2);
    let inner = five.clone()
        + five.clone() * pt.clone()
        + five.clone() * qt.clone()
        + two.clone() * pt.clone() * pt.clone()
        + five * pt.clone() * qt.clone()
        + two * qt.clone() * qt.clone();
    lit::<T>(4) * pt * qt * inner
}

/// Unspecified absolute constants of the variance recurrence. All default to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub kappa_p: f64,
    pub kappa_q: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            kappa_p: 1.0,
            kappa_q: 1.0,
        }
    }
}

impl BoundConstants {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("kappa_p", self.kappa_p),
            ("kappa_q", self.kappa_q),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// State of the variance-bound recurrence: `u` bounds `Var h`, `v` bounds
/// `Var tr²`, `p_term`/`q_term` are the geometric driving terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceBoundState {
    pub u: f64,
    pub v: f64,
    pub p_term: f64,
    pub q_term: f64,
    pub constants: BoundConstants,
}

impl VarianceBoundState {
    /// Single-factor state, normalized by `d_1`. `u` is the exact
    /// single-Gaussian variance rather than a loose order-of-magnitude bound.
    pub fn seed(spec: &ChainSpec, constants: BoundConstants) -> Result<Self> {
        constants.validate()?;
        let d1 = spec.require_product()? as f64;
        let (p, q) = (spec.p() as f64, spec.q() as f64);
        let d1_4 = d1.powi(4);
        let pq3 = p.powi(3) * q.powi(3) / d1_4;
        Ok(Self {
            u: variance_single_exact::<f64>(spec.p(), spec.q()) / d1_4,
            v: constants.kappa_q * pq3,
            p_term: constants.kappa_p * (p.powi(3) * q + p * q.powi(3)) / d1_4,
            q_term: constants.kappa_q * pq3,
            constants,
        })
    }

    /// One layer of inner dimension `d`.
    pub fn step(&self, d: usize) -> Self {
        let d = d as f64;
        let c = &self.constants;
        let cross = (self.u * self.v).sqrt();
        Self {
            u: c.c1 * self.p_term + 2.0 * self.u + self.v / (d * d) + 3.0 * cross / d,
            v: c.c2 * self.q_term + self.u / (d * d) + self.v + 2.0 * cross / d,
            p_term: c.c3 * self.p_term,
            q_term: c.c4 * self.q_term,
            constants: self.constants,
        }
    }
}

/// Upper bound on `Var h(A_r)`: seed at one factor, then one
/// [`VarianceBoundState::step`] per inner dimension. Returns the final `u`.
pub fn variance_bound_product(spec: &ChainSpec, constants: BoundConstants) -> Result<f64> {
    let state = VarianceBoundState::seed(spec, constants)?;
    Ok(spec.inner().iter().fold(state, |s, &d| s.step(d)).u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn v(xs: [i64; 6]) -> MomentVector<i64> {
        MomentVector {
            s1: xs[0],
            s2: xs[1],
            s3: xs[2],
            s4: xs[3],
            s5: xs[4],
            s6: xs[5],
        }
    }

    #[test]
    fn base_moments() {
        let b = base_gaussian_moments::<i64>();
        assert_eq!(b, v([3, 3, 1, 1, 1, 0]));
        assert_eq!(b.s1, 3 * b.s4);
        assert_eq!(b.s3, 2 * b.s6 + b.s5);
    }

    #[test]
    fn layer_update_at_two() {
        // Hand application at d = 2 (pairs = 2):
        // s1 = 3*2*3 + 3*2*1 = 24, s3 = 3*2*1 + 2*1 + 2*2*0 = 8,
        // s4 = 2*3 + 2*1 = 8, s5 = 2*1 + 2*1 = 4, s6 = 2*1 + 2*0 = 2.
        let s = layer_update(&base_gaussian_moments::<i64>(), 2);
        assert_eq!(s, v([24, 24, 8, 8, 4, 2]));
    }

    #[test]
    fn layer_update_single_step_closed_form() {
        for d in 1..40usize {
            let s = layer_update(&base_gaussian_moments::<i64>(), d);
            let d = d as i64;
            assert_eq!(s.s3, d * (d + 2));
            assert_eq!(s.s4, d * (d + 2));
            assert_eq!(s.s1, 3 * s.s4);
            assert_eq!(s.s6, d);
            assert_eq!(s.s5, d * d);
        }
    }

    #[test]
    fn layer_update_preserves_identities() {
        // Any vector meeting the three identities, not only the Gaussian base.
        let t = v([3 * 7, 3 * 7, 7, 7, 3, 2]);
        assert!(t.satisfies_gaussian_identities());
        for d in [1, 2, 5, 13] {
            assert!(layer_update(&t, d).satisfies_gaussian_identities());
        }
    }

    #[test]
    fn closed_form_small_cases() {
        assert_eq!(closed_form_moments::<i64>(&[]), v([3, 3, 1, 1, 1, 0]));
        let d = 9i64;
        assert_eq!(
            closed_form_moments::<i64>(&[9]),
            v([3 * d * (d + 2), 3 * d * (d + 2), d * (d + 2), d * (d + 2), d * d, d])
        );
        assert_eq!(
            closed_form_moments::<i64>(&[2, 2]),
            layer_update(&layer_update(&base_gaussian_moments(), 2), 2)
        );
    }

    #[test]
    fn mean_product_examples() {
        let spec = ChainSpec::new(2, 2, vec![4]).unwrap();
        assert_eq!(
            mean_h_product_exact(&spec),
            BigRational::new(BigInt::from(496), BigInt::from(256))
        );
        assert_eq!(mean_h_product(&spec), 1.9375);

        let spec = ChainSpec::new(1, 1, vec![1]).unwrap();
        assert_eq!(mean_h_product(&spec), 9.0);

        let spec = ChainSpec::new(2, 2, vec![]).unwrap();
        assert_eq!(mean_h_product_exact(&spec), BigRational::from_integer(20.into()));
        assert_eq!(mean_h_product(&spec), 20.0);
    }

    #[test]
    fn float_mean_matches_exact() {
        for (p, q, inner) in [
            (3, 5, vec![7]),
            (8, 8, vec![2048]),
            (16, 4, vec![9, 30, 9]),
            (32, 32, vec![64, 64]),
            (5, 2, vec![50, 3, 1, 50]),
        ] {
            let spec = ChainSpec::new(p, q, inner).unwrap();
            let exact = mean_h_product_exact(&spec).to_f64().unwrap();
            let float = mean_h_product(&spec);
            assert!((exact - float).abs() <= 1e-12 * exact, "{spec}: {exact} vs {float}");
        }
    }

    #[test]
    fn asymptotic_mean() {
        let spec = ChainSpec::new(2, 2, vec![4]).unwrap();
        assert_eq!(mean_h_asymptotic(&spec).unwrap(), 1.3125);

        let spec = ChainSpec::new(2, 2, vec![1000]).unwrap();
        let exact = mean_h_product(&spec);
        let approx = mean_h_asymptotic(&spec).unwrap();
        assert!((exact - approx).abs() / exact < 0.01);

        // (p-1)(q-1) = 0 removes the second term.
        let spec = ChainSpec::new(1, 6, vec![10]).unwrap();
        assert_eq!(mean_h_asymptotic(&spec).unwrap(), mean_h_single(1, 6, 10));

        assert!(mean_h_asymptotic(&ChainSpec::new(2, 2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn single_mean() {
        assert_eq!(mean_h_single(2, 2, 4), 1.25);
        assert_eq!(mean_h_single(1, 1, 1), 3.0);
        assert_eq!(mean_h_single(3, 2, 1), 36.0);
        assert_eq!(
            mean_h_single_exact(2, 2, 4),
            BigRational::new(BigInt::from(5), BigInt::from(4))
        );
    }

    #[test]
    fn u_components() {
        let u = u_components_gaussian::<i64>(2);
        assert_eq!(
            [u.u1, u.u2, u.u3, u.u4, u.u5, u.u6, u.u7],
            [320, 20, 32, 4, 0, 0, 0]
        );
        let u = u_components_gaussian::<i64>(1);
        assert_eq!(
            [u.u1, u.u2, u.u3, u.u4, u.u5, u.u6, u.u7],
            [96, 8, 12, 2, 0, 0, 0]
        );
    }

    #[test]
    fn variance_components_examples() {
        assert_eq!(variance_from_components(&u_components_gaussian::<i64>(2), 2), 976);
        assert_eq!(variance_from_components(&u_components_gaussian::<i64>(1), 1), 96);
        let u = UComponents {
            u1: 11i64,
            u2: 5,
            u3: 7,
            u4: 3,
            u5: 2,
            u6: 13,
            u7: 17,
        };
        assert_eq!(variance_from_components(&u, 1), 11);
    }

    #[test]
    fn variance_single_examples() {
        assert_eq!(variance_single_exact::<i64>(1, 1), 96);
        assert_eq!(variance_single_exact::<i64>(2, 2), 976);
        assert_eq!(variance_single_exact::<i64>(2, 1), 320);
        assert_eq!(variance_single_exact::<i64>(3, 5), variance_single_exact::<i64>(5, 3));
    }

    #[test]
    fn components_reproduce_variance_formula() {
        for p in 1..=20 {
            for q in 1..=20 {
                assert_eq!(
                    variance_from_components(&u_components_gaussian::<i128>(p), q),
                    variance_single_exact::<i128>(p, q),
                    "p={p} q={q}"
                );
            }
        }
    }

    #[test]
    fn variance_bound_one_step() {
        let spec = ChainSpec::new(1, 1, vec![1]).unwrap();
        let seed = VarianceBoundState::seed(&spec, BoundConstants::default()).unwrap();
        assert_eq!((seed.u, seed.v, seed.p_term, seed.q_term), (96.0, 1.0, 2.0, 1.0));
        let got = variance_bound_product(&spec, BoundConstants::default()).unwrap();
        let expected = 2.0 + 192.0 + 1.0 + 3.0 * 96f64.sqrt();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 224.394).abs() < 1e-3);
    }

    #[test]
    fn variance_bound_rejects_bad_constants() {
        let spec = ChainSpec::new(2, 2, vec![4]).unwrap();
        for bad in [0.0, -1.0, f64::NAN] {
            let k = BoundConstants {
                c3: bad,
                ..Default::default()
            };
            assert!(variance_bound_product(&spec, k).is_err());
        }
        assert!(variance_bound_product(&ChainSpec::new(2, 2, vec![]).unwrap(), Default::default())
            .is_err());
    }

    #[test]
    fn variance_bound_monotone_in_constants() {
        let spec = ChainSpec::new(4, 6, vec![8, 12, 8]).unwrap();
        let base = variance_bound_product(&spec, BoundConstants::default()).unwrap();
        let bumps: [fn(&mut BoundConstants); 6] = [
            |k| k.c1 = 2.0,
            |k| k.c2 = 2.0,
            |k| k.c3 = 2.0,
            |k| k.c4 = 2.0,
            |k| k.kappa_p = 2.0,
            |k| k.kappa_q = 2.0,
        ];
        for bump in bumps {
            let mut k = BoundConstants::default();
            bump(&mut k);
            assert!(variance_bound_product(&spec, k).unwrap() >= base);
        }
    }

    #[test]
    fn variance_bound_grows_geometrically() {
        // p = q = d = 32: the bound divided by (p³q + pq³)/d⁴ grows by at most a
        // fixed factor per extra layer.
        let scale = 2.0 * 32f64.powi(4) / 32f64.powi(4);
        let ratios: Vec<f64> = (2..=6)
            .map(|r| {
                let spec = ChainSpec::uniform(32, 32, r, 32).unwrap();
                variance_bound_product(&spec, BoundConstants::default()).unwrap() / scale
            })
            .collect();
        for w in ratios.windows(2) {
            let growth = w[1] / w[0];
            assert!(growth > 1.0 && growth < 4.0, "ratios {ratios:?}");
        }
    }

    #[test]
    fn state_never_decreases_with_unit_constants() {
        let spec = ChainSpec::new(3, 7, vec![5]).unwrap();
        let mut s = VarianceBoundState::seed(&spec, BoundConstants::default()).unwrap();
        for d in [5, 9, 100, 5] {
            let next = s.step(d);
            assert!(next.u >= s.u && next.v >= s.v);
            s = next;
        }
    }
}
