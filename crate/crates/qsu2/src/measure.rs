//! Orthogonality measure of the four-parameter basic hypergeometric
//! polynomial family: an absolutely continuous part supported on [-1, 1]
//! plus finitely many mass points that appear once a parameter has modulus
//! greater than one.
//!
//! The measure is normalized to total mass one, so moments against it can
//! be compared directly with states on the quantized function algebra.

use crate::qseries::{cr, q_shifted, Extent, QBase};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

/// Relative accuracy target of [`integrate`].
pub const QUAD_REL_TOL: f64 = 1e-9;
/// A residue denominator factor below this size means the parameters sit
/// numerically on top of a degeneracy of the measure.
const DEGENERATE_FACTOR_TOL: f64 = 1e-8;
/// Tolerance for cross-checks that a nominally real quantity is real.
const REAL_PART_TOL: f64 = 1e-9;
/// Matching tolerance used when pairing parameters with their conjugates.
const CONJ_MATCH_TOL: f64 = 1e-9;

/// Errors from measure construction and quadrature.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    /// The parameter multiset is outside the admissible domain.
    #[error("invalid measure parameters: {0}")]
    InvalidParams(String),
    /// The parameters are admissible but numerically degenerate.
    #[error("numerically degenerate measure parameters: {0}")]
    Degenerate(String),
    /// Panel doubling did not reach the target accuracy.
    #[error("quadrature did not converge with {panels} panels")]
    NoConvergence { panels: usize },
}

/// A single discrete mass of the measure.
#[derive(Clone, Copy, Debug)]
pub struct MassPoint {
    /// Location on the real axis (always outside (-1, 1)).
    pub x: f64,
    /// Weight with respect to the normalized measure.
    pub weight: f64,
}

/// The normalized orthogonality measure determined by a base and four
/// parameters whose multiset is closed under complex conjugation and whose
/// pairwise products all lie strictly inside the unit disk.
///
/// At most one parameter can then have modulus `>= 1`; it is necessarily
/// real and contributes the discrete [`MassPoint`]s.
#[derive(Clone, Debug)]
pub struct SpectralMeasure {
    q: QBase,
    params: [Complex64; 4],
    h0: f64,
    masses: Vec<MassPoint>,
}

impl SpectralMeasure {
    /// Validates the parameters and precomputes the normalization constant
    /// and the discrete masses.
    pub fn new(q: QBase, params: [Complex64; 4]) -> Result<Self, MeasureError> {
        for p in &params {
            if !p.re.is_finite() || !p.im.is_finite() {
                return Err(MeasureError::InvalidParams(format!("non-finite parameter {p}")));
            }
        }
        if !conjugation_closed(&params) {
            return Err(MeasureError::InvalidParams(format!(
                "parameter multiset {params:?} is not closed under conjugation"
            )));
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let prod = (params[i] * params[j]).norm();
                if prod >= 1.0 - 1e-12 {
                    return Err(MeasureError::InvalidParams(format!(
                        "pairwise product |p{i} p{j}| = {prod} must stay below one"
                    )));
                }
            }
        }

        let h0 = normalization(q, &params)?;
        let mut measure = SpectralMeasure { q, params, h0, masses: Vec::new() };
        measure.masses = measure.collect_masses()?;
        Ok(measure)
    }

    /// The base of the measure.
    pub fn q(&self) -> QBase {
        self.q
    }

    /// The four parameters.
    pub fn params(&self) -> [Complex64; 4] {
        self.params
    }

    /// Total mass of the *unnormalized* measure; the normalized density and
    /// masses exposed by this type already divide by it.
    pub fn h0(&self) -> f64 {
        self.h0
    }

    /// The discrete part of the normalized measure.
    pub fn masses(&self) -> &[MassPoint] {
        &self.masses
    }

    /// Density of the absolutely continuous part against `d(theta)` on
    /// `[0, pi]`, normalized; the argument of the integrand is `cos(theta)`.
    pub fn density(&self, theta: f64) -> f64 {
        let z = Complex64::from_polar(1.0, theta);
        let num = q_shifted(z * z, self.q, Extent::Infinite)
            * q_shifted((z * z).inv(), self.q, Extent::Infinite);
        let mut den = cr(1.0);
        for p in &self.params {
            den *= q_shifted(p * z, self.q, Extent::Infinite);
            den *= q_shifted(p / z, self.q, Extent::Infinite);
        }
        (num / den).re / (2.0 * PI * self.h0)
    }

    /// Squared norm of the degree-`n` orthogonal polynomial relative to the
    /// squared norm of the constant, in closed form.
    pub fn norm_ratio(&self, n: u32) -> Result<f64, MeasureError> {
        if n == 0 {
            return Ok(1.0);
        }
        let q = self.q;
        let [a, b, c, d] = self.params;
        let abcd = a * b * c * d;
        let d1 = cr(1.0) - abcd * q.powi(2 * n as i32 - 1);
        if d1.norm() < 1e-12 {
            return Err(MeasureError::Degenerate(
                "norm denominator vanishes at this degree".into(),
            ));
        }
        let mut num = cr(1.0) - abcd * q.powi(n as i32 - 1);
        num *= q_shifted(cr(q.value()), q, n);
        for prod in [a * b, a * c, a * d, b * c, b * d, c * d] {
            num *= q_shifted(prod, q, n);
        }
        let ratio = num / (d1 * q_shifted(abcd, q, n));
        if ratio.im.abs() > REAL_PART_TOL * ratio.norm().max(1.0) {
            return Err(MeasureError::Degenerate(format!(
                "norm ratio came out non-real: {ratio}"
            )));
        }
        Ok(ratio.re)
    }

    // ---- internals ----

    /// Denominator product of the density, evaluated at a general point `z`,
    /// optionally skipping the single factor `(1 - (p_skip / z) q^skip_k)`
    /// that vanishes at a mass-point location.
    fn denominator_skipping(
        &self,
        z: Complex64,
        skip: Option<(usize, u32)>,
    ) -> Result<Complex64, MeasureError> {
        let tail = crate::qseries::INFINITE_PRODUCT_TAIL;
        let mut prod = cr(1.0);
        for (pi, p) in self.params.iter().enumerate() {
            let mut arg = p * z;
            while arg.norm() >= tail {
                let factor = cr(1.0) - arg;
                if factor.norm() < DEGENERATE_FACTOR_TOL {
                    return Err(MeasureError::Degenerate(format!(
                        "density factor 1 - {arg} nearly vanishes"
                    )));
                }
                prod *= factor;
                arg *= self.q.value();
            }
            let mut i = 0u32;
            let mut arg = p / z;
            while arg.norm() >= tail {
                if skip != Some((pi, i)) {
                    let factor = cr(1.0) - arg;
                    if factor.norm() < DEGENERATE_FACTOR_TOL {
                        return Err(MeasureError::Degenerate(format!(
                            "density factor 1 - {arg} nearly vanishes"
                        )));
                    }
                    prod *= factor;
                }
                arg *= self.q.value();
                i += 1;
            }
        }
        Ok(prod)
    }

    /// Enumerates the mass points contributed by a parameter of modulus
    /// greater than one. The weight at `z0 = e q^k` is the residue of
    /// `w(z)/z` there; the reflected pole at `1/z0` contributes the same
    /// amount, which is already accounted for by this closed form.
    fn collect_masses(&self) -> Result<Vec<MassPoint>, MeasureError> {
        let mut masses = Vec::new();
        for (pi, p) in self.params.iter().enumerate() {
            if p.im.abs() > CONJ_MATCH_TOL * (1.0 + p.norm()) || p.re.abs() <= 1.0 {
                continue;
            }
            let e = p.re;
            let mut k = 0u32;
            loop {
                let modulus = e.abs() * self.q.powi(k as i32);
                if (modulus - 1.0).abs() < DEGENERATE_FACTOR_TOL {
                    return Err(MeasureError::Degenerate(format!(
                        "parameter {e} places a pole within {DEGENERATE_FACTOR_TOL} of the contour"
                    )));
                }
                if modulus < 1.0 {
                    break;
                }
                let z0 = cr(e * self.q.powi(k as i32));
                let num = q_shifted(z0 * z0, self.q, Extent::Infinite)
                    * q_shifted((z0 * z0).inv(), self.q, Extent::Infinite);
                let den = self.denominator_skipping(z0, Some((pi, k)))?;
                let w = num / den;
                if w.im.abs() > REAL_PART_TOL * w.norm().max(1.0) || w.re <= 0.0 {
                    return Err(MeasureError::Degenerate(format!(
                        "mass at index {k} came out non-positive: {w}"
                    )));
                }
                let x = 0.5 * (z0 + z0.inv()).re;
                masses.push(MassPoint { x, weight: w.re / self.h0 });
                k += 1;
            }
        }
        Ok(masses)
    }
}

/// Checks that the multiset of parameters equals the multiset of their
/// conjugates, which keeps the density real.
fn conjugation_closed(params: &[Complex64; 4]) -> bool {
    let mut used = [false; 4];
    for i in 0..4 {
        if used[i] {
            continue;
        }
        let target = params[i].conj();
        let tol = CONJ_MATCH_TOL * (1.0 + params[i].norm());
        let mut found = false;
        for j in i..4 {
            if !used[j] && j != i && (params[j] - target).norm() <= tol {
                used[i] = true;
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            if (params[i] - target).norm() <= tol {
                used[i] = true;
            } else {
                return false;
            }
        }
    }
    true
}

/// Total mass of the unnormalized measure, in closed form.
fn normalization(q: QBase, params: &[Complex64; 4]) -> Result<f64, MeasureError> {
    let [a, b, c, d] = *params;
    let num = q_shifted(a * b * c * d, q, Extent::Infinite);
    let mut den = q_shifted(cr(q.value()), q, Extent::Infinite);
    for prod in [a * b, a * c, a * d, b * c, b * d, c * d] {
        den *= q_shifted(prod, q, Extent::Infinite);
    }
    let h0 = num / den;
    if h0.im.abs() > REAL_PART_TOL * h0.norm().max(1.0) || h0.re <= 0.0 {
        return Err(MeasureError::Degenerate(format!(
            "normalization constant came out non-positive: {h0}"
        )));
    }
    Ok(h0.re)
}

// ------------------------------------------------------------ quadrature --

/// 32-point Gauss-Legendre rule on [-1, 1]: `(node, weight)` pairs.
pub(crate) fn gauss_legendre_32() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| legendre_nodes(32))
}

fn legendre_p_dp(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let pk = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_p_dp(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_p_dp(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Integrates `f` against the normalized measure: panels of 32-point
/// Gauss-Legendre quadrature over the continuous part, doubled from 8 up to
/// 256 panels until successive totals agree to [`QUAD_REL_TOL`] relative to
/// the integral of `|f|`, plus the exact discrete masses.
pub fn integrate<F>(f: F, measure: &SpectralMeasure) -> Result<Complex64, MeasureError>
where
    F: Fn(f64) -> Complex64,
{
    let nodes = gauss_legendre_32();
    let mut mass_sum = cr(0.0);
    let mut mass_abs = 0.0;
    for mp in measure.masses() {
        let v = f(mp.x);
        mass_sum += v * mp.weight;
        mass_abs += v.norm() * mp.weight;
    }

    let mut prev: Option<(Complex64, f64)> = None;
    let mut panels = 8usize;
    while panels <= 256 {
        let mut integral = cr(0.0);
        let mut abs_integral = 0.0;
        let width = PI / panels as f64;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            let half = 0.5 * width;
            for &(t, w) in nodes {
                let theta = mid + half * t;
                let rho = measure.density(theta) * w * half;
                let v = f(theta.cos());
                integral += v * rho;
                abs_integral += v.norm() * rho;
            }
        }
        let total = integral + mass_sum;
        let scale = (abs_integral + mass_abs).max(1e-300);
        if let Some((prev_total, _)) = prev {
            if (total - prev_total).norm() <= QUAD_REL_TOL * scale {
                return Ok(total);
            }
        }
        prev = Some((total, scale));
        panels *= 2;
    }
    Err(MeasureError::NoConvergence { panels: 256 })
}

// ------------------------------------------------------------------ tests --
