//! Scalar q-calculus at a fixed base `0 < q < 1`: q-shifted factorials,
//! q-binomial coefficients, and basic hypergeometric series.
//!
//! All functions here are pure; they share no state and are safe to call
//! concurrently from any number of threads.

use num_complex::Complex64;
use thiserror::Error;

/// Shorthand for a real number as a complex scalar.
#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Shorthand for a complex scalar.
#[inline]
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ------------------------------------------------------------------ base --

/// Fixed real base of the q-calculus, restricted to the open interval (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase(f64);

impl QBase {
    /// Accepts only `0 < q < 1`; both endpoints are rejected.
    pub fn new(q: f64) -> Result<Self, QError> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            Err(QError::InvalidBase(q))
        }
    }

    /// The base as a float.
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `q^e` for a real exponent.
    #[inline]
    pub fn powf(self, e: f64) -> f64 {
        self.0.powf(e)
    }

    /// `q^k` for an integer exponent.
    #[inline]
    pub fn powi(self, k: i32) -> f64 {
        self.0.powi(k)
    }

    /// The square `q²`, which is again a valid base.
    #[inline]
    pub fn squared(self) -> QBase {
        QBase(self.0 * self.0)
    }
}

/// Errors from the scalar q-calculus layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    /// The base was outside the open interval (0, 1).
    #[error("base must lie strictly inside (0, 1), got {0}")]
    InvalidBase(f64),
    /// A q-binomial coefficient was requested with `k > n`.
    #[error("q-binomial needs 0 <= k <= n, got n={n}, k={k}")]
    BinomialRange { n: u32, k: u32 },
    /// A lower parameter zeroes a denominator before the series terminates.
    #[error("lower parameter {param} produces a zero denominator at term {term}")]
    PoleInRange { param: Complex64, term: usize },
    /// A nonterminating series was requested outside the unit disk.
    #[error("nonterminating series with |z| = {z_abs:.6} >= 1 diverges")]
    Divergent { z_abs: f64 },
    /// The nonterminating tail never fell below the cutoff.
    #[error("series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },
}

// ------------------------------------------------ q-shifted factorials --

/// Number of factors in a q-shifted factorial: a finite count or the
/// convergent infinite product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extent {
    Finite(u32),
    Infinite,
}

impl From<u32> for Extent {
    fn from(k: u32) -> Self {
        Extent::Finite(k)
    }
}

/// Relative size at which the tail of an infinite q-product is dropped.
///
/// Once `|a| q^K < INFINITE_PRODUCT_TAIL` the remaining factors multiply to
/// `1 + O(|a| q^K / (1 - q))`, which is below double-precision resolution
/// of the partial product.
pub const INFINITE_PRODUCT_TAIL: f64 = 1e-17;

/// The q-shifted factorial `(a; q)_k = prod_{i=0}^{k-1} (1 - a q^i)`,
/// with `(a; q)_0 = 1` and the convergent infinite product for
/// [`Extent::Infinite`].
pub fn q_shifted(a: Complex64, q: QBase, k: impl Into<Extent>) -> Complex64 {
    match k.into() {
        Extent::Finite(k) => {
            let mut prod = cr(1.0);
            let mut aq = a;
            for _ in 0..k {
                prod *= cr(1.0) - aq;
                aq *= q.value();
            }
            prod
        }
        Extent::Infinite => q_shifted_inf_tail(a, q, INFINITE_PRODUCT_TAIL),
    }
}

/// Infinite q-product truncated at the first index `K` with
/// `|a| q^K < tail`; the dropped tail is bounded as documented at
/// [`INFINITE_PRODUCT_TAIL`]. The truncation depth is thereby configurable
/// through `tail`.
pub fn q_shifted_inf_tail(a: Complex64, q: QBase, tail: f64) -> Complex64 {
    let mut prod = cr(1.0);
    let mut aq = a;
    while aq.norm() >= tail {
        prod *= cr(1.0) - aq;
        aq *= q.value();
    }
    prod
}

/// Product of several q-shifted factorials with a common extent:
/// `(a_1, ..., a_r; q)_k`.
pub fn q_shifted_many(a: &[Complex64], q: QBase, k: impl Into<Extent> + Copy) -> Complex64 {
    a.iter().map(|&ai| q_shifted(ai, q, k)).fold(cr(1.0), |p, f| p * f)
}

/// The q-binomial coefficient `[n k]_q = (q^n; q^{-1})_k / (q; q)_k`,
/// positive for `0 <= k <= n`.
pub fn q_binomial(n: u32, k: u32, q: QBase) -> Result<f64, QError> {
    if k > n {
        return Err(QError::BinomialRange { n, k });
    }
    let qv = q.value();
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..k {
        num *= 1.0 - qv.powi((n - i) as i32);
        den *= 1.0 - qv.powi((i + 1) as i32);
    }
    Ok(num / den)
}

// -------------------------------------------- basic hypergeometric sums --

/// Relative tolerance when matching a parameter against `q^{-n}` to infer
/// the termination degree.
const DEGREE_MATCH_RTOL: f64 = 1e-12;
/// Tail criterion for nonterminating series: three consecutive terms below
/// this fraction of the partial sum.
const SERIES_TAIL: f64 = 1e-17;
/// Hard cap on summed terms for nonterminating series.
const MAX_TERMS: usize = 100_000;

/// If `a = q^{-n}` for a nonnegative integer `n` (within relative tolerance
/// [`DEGREE_MATCH_RTOL`]), the degree `n`; otherwise `None`.
fn power_degree(a: Complex64, q: QBase) -> Option<u32> {
    if a.re <= 0.0 || a.im.abs() > DEGREE_MATCH_RTOL * a.norm() {
        return None;
    }
    let n = (-a.re.ln() / q.value().ln()).round();
    if !(0.0..=1.0e6).contains(&n) {
        return None;
    }
    let n = n as u32;
    let target = q.powi(-(n as i32));
    if (a.re - target).abs() <= DEGREE_MATCH_RTOL * target {
        Some(n)
    } else {
        None
    }
}

/// Ratio `term_{k+1} / term_k` of the series in [`basic_hypergeometric`].
fn step_ratio(
    uppers: &[Complex64],
    lowers: &[Complex64],
    qv: f64,
    z: Complex64,
    k: usize,
) -> Result<Complex64, QError> {
    let qk = qv.powi(k as i32);
    let mut r = z;
    for &a in uppers {
        r *= cr(1.0) - a * qk;
    }
    for &b in lowers {
        let f = cr(1.0) - b * qk;
        if f.norm() < 1e-280 {
            return Err(QError::PoleInRange { param: b, term: k + 1 });
        }
        r /= f;
    }
    r /= cr(1.0 - qv.powi(k as i32 + 1));
    Ok(r)
}

/// The basic hypergeometric series with `r+1` upper parameters, `r` lower
/// parameters, base `q` and argument `z`:
///
/// ```text
/// sum_{k>=0} (a_1, ..., a_{r+1}; q)_k / (b_1, ..., b_r, q; q)_k  z^k .
/// ```
///
/// Termination: callers that know the degree pass it in `degree` (every
/// polynomial-family evaluation in this crate does); otherwise the degree
/// is inferred as the smallest `n` with an upper parameter equal to
/// `q^{-n}`. A lower parameter `q^{-N}` requires termination at degree
/// `<= N`; when `q^{-N}` occurs both above and below, the series terminates
/// at degree `N` and the matching factors cancel. Nonterminating series
/// require `|z| < 1` and are summed until three consecutive terms fall
/// below [`SERIES_TAIL`] relative to the partial sum.
pub fn basic_hypergeometric(
    uppers: &[Complex64],
    lowers: &[Complex64],
    q: QBase,
    z: Complex64,
    degree: Option<u32>,
) -> Result<Complex64, QError> {
    let detected = degree.or_else(|| uppers.iter().filter_map(|&a| power_degree(a, q)).min());
    if let Some((cap, &param)) = lowers
        .iter()
        .filter_map(|b| power_degree(*b, q).map(|n| (n, b)))
        .min_by_key(|(n, _)| *n)
    {
        match detected {
            Some(n) if n <= cap => {}
            _ => {
                return Err(QError::PoleInRange { param, term: cap as usize + 1 });
            }
        }
    }

    let qv = q.value();
    let mut sum = cr(0.0);
    let mut term = cr(1.0);
    match detected {
        Some(n) => {
            for k in 0..=n {
                sum += term;
                if k < n {
                    term *= step_ratio(uppers, lowers, qv, z, k as usize)?;
                }
            }
            Ok(sum)
        }
        None => {
            if z.norm() >= 1.0 {
                return Err(QError::Divergent { z_abs: z.norm() });
            }
            let mut below = 0usize;
            for k in 0..MAX_TERMS {
                sum += term;
                term *= step_ratio(uppers, lowers, qv, z, k)?;
                if term.norm() < SERIES_TAIL * sum.norm().max(f64::MIN_POSITIVE) {
                    below += 1;
                    if below >= 3 {
                        return Ok(sum);
                    }
                } else {
                    below = 0;
                }
            }
            Err(QError::NoConvergence { max_terms: MAX_TERMS })
        }
    }
}

// ------------------------------------------------------------------ tests --

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qb(q: f64) -> QBase {
        QBase::new(q).unwrap()
    }

    #[test]
    fn base_rejects_endpoints() {
        assert!(QBase::new(0.0).is_err());
        assert!(QBase::new(1.0).is_err());
        assert!(QBase::new(-0.3).is_err());
        assert!(QBase::new(f64::NAN).is_err());
        assert!(QBase::new(0.5).is_ok());
    }

    #[test]
    fn q_shifted_empty_product_is_one() {
        assert_eq!(q_shifted(cx(2.3, -0.4), qb(0.5), 0), cr(1.0));
    }

    #[test]
    fn q_shifted_at_one_vanishes() {
        assert_eq!(q_shifted(cr(1.0), qb(0.5), 3), cr(0.0));
    }

    #[test]
    fn q_shifted_infinite_matches_long_product() {
        let q = qb(0.5);
        let mut direct = cr(1.0);
        for i in 0..200 {
            direct *= cr(1.0 - 0.5f64.powi(i + 1));
        }
        let got = q_shifted(cr(0.5), q, Extent::Infinite);
        assert!((got - direct).norm() <= 1e-15 * direct.norm());
    }

    #[test]
    fn q_binomial_edges_and_value() {
        let q = qb(0.5);
        assert_eq!(q_binomial(7, 0, q).unwrap(), 1.0);
        let got = q_binomial(2, 1, q).unwrap();
        assert!((got - 1.5).abs() <= 1e-15);
        assert!(q_binomial(3, 4, q).is_err());
    }

    #[test]
    fn q_binomial_matches_pascal_recurrence() {
        // [n k]_q = q^k [n-1 k]_q + [n-1 k-1]_q
        let q = qb(0.37);
        for n in 1..=12u32 {
            for k in 1..n {
                let lhs = q_binomial(n, k, q).unwrap();
                let rhs = q.powi(k as i32) * q_binomial(n - 1, k, q).unwrap()
                    + q_binomial(n - 1, k - 1, q).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn series_degree_zero_upper_gives_one() {
        let q = qb(0.5);
        let got = basic_hypergeometric(&[cr(1.0), cr(0.3)], &[cr(0.7)], q, cr(0.5), None).unwrap();
        assert_eq!(got, cr(1.0));
    }

    #[test]
    fn series_two_term_hand_sum() {
        // 2phi1(q^{-1}, b; c; q, q) = 1 + (1-q^{-1})(1-b) q / ((1-c)(1-q))
        let q = qb(0.5);
        let (b, c) = (0.3, 0.7);
        let hand = 1.0 + (1.0 - 2.0) * (1.0 - b) * 0.5 / ((1.0 - c) * (1.0 - 0.5));
        let got = basic_hypergeometric(&[cr(2.0), cr(b)], &[cr(c)], q, cr(0.5), None).unwrap();
        assert!((got - cr(hand)).norm() <= 1e-15 * hand.abs());
    }

    #[test]
    fn series_explicit_degree_overrides_detection() {
        let q = qb(0.5);
        let a = q.powi(-3);
        let auto = basic_hypergeometric(&[cr(a), cr(0.2)], &[cr(0.4)], q, cr(0.5), None).unwrap();
        let forced = basic_hypergeometric(&[cr(a), cr(0.2)], &[cr(0.4)], q, cr(0.5), Some(3)).unwrap();
        assert_eq!(auto, forced);
    }

    #[test]
    fn series_balanced_truncation_convention() {
        // q^{-N} above and below: terminates at degree N, the pair cancels.
        let q = qb(0.5);
        let n = 4u32;
        let a = cr(q.powi(-(n as i32)));
        let with_pair =
            basic_hypergeometric(&[a, cr(0.3)], &[a, cr(0.2)], q, cr(0.5), Some(n)).unwrap();
        let without = basic_hypergeometric(&[cr(0.3)], &[cr(0.2)], q, cr(0.5), Some(n)).unwrap();
        assert!((with_pair - without).norm() <= 1e-14 * without.norm());
    }

    #[test]
    fn series_pole_reported() {
        // lower q^{-2} with upper terminating only at degree 5: zero denominator.
        let q = qb(0.5);
        let err = basic_hypergeometric(
            &[cr(q.powi(-5)), cr(0.3)],
            &[cr(q.powi(-2))],
            q,
            cr(0.5),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, QError::PoleInRange { .. }));
    }

    #[test]
    fn series_divergence_reported() {
        let q = qb(0.5);
        let err = basic_hypergeometric(&[cr(0.3), cr(0.2)], &[cr(0.4)], q, cr(1.5), None).unwrap_err();
        assert!(matches!(err, QError::Divergent { .. }));
    }

    #[test]
    fn nonterminating_q_binomial_theorem() {
        // 1phi0(a; -; q, z) = (az; q)_inf / (z; q)_inf
        let q = qb(0.5);
        let (a, z) = (cr(0.3), cr(0.6));
        let got = basic_hypergeometric(&[a], &[], q, z, None).unwrap();
        let want = q_shifted(a * z, q, Extent::Infinite) / q_shifted(z, q, Extent::Infinite);
        assert!((got - want).norm() <= 1e-13 * want.norm());
    }

    proptest! {
        #[test]
        fn q_shifted_splits_additively(
            re in -1.5f64..1.5, im in -1.5f64..1.5,
            n in 0u32..12, m in 0u32..12, qv in 0.1f64..0.9
        ) {
            let q = qb(qv);
            let a = cx(re, im);
            let lhs = q_shifted(a, q, n + m);
            let rhs = q_shifted(a, q, n) * q_shifted(a * q.powi(n as i32), q, m);
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            prop_assert!((lhs - rhs).norm() <= 1e-13 * scale);
        }

        #[test]
        fn q_binomial_symmetry(n in 0u32..12, qv in 0.1f64..0.9) {
            let q = qb(qv);
            for k in 0..=n {
                let lhs = q_binomial(n, k, q).unwrap();
                let rhs = q_binomial(n, n - k, q).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            }
        }
    }
}
