//! The basic hypergeometric orthogonal polynomial families used by the rest
//! of the crate: the four-parameter continuous family and its two-parameter
//! trigonometric specializations, the little q-Jacobi family, the finite
//! discrete families, and the Chebyshev polynomials of the second kind.
//!
//! Evaluation conventions:
//! * continuous families take the spectral variable `x = cos(theta)` (the
//!   trigonometric ones take `theta` itself in the library API);
//! * discrete families take the series argument directly (typically
//!   `q^{-x}` for an integer grid index `x`);
//! * every terminating series is summed with its degree passed explicitly,
//!   so parameter values never have to be recognized as `q^{-n}`.

use crate::measure::SpectralMeasure;
use crate::qseries::{basic_hypergeometric, cr, q_shifted, QBase, QError};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Errors from polynomial-family evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("missing parameter '{0}'")]
    MissingParam(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("no closed-form norm is provided for the {0} family")]
    UnsupportedNorm(&'static str),
    #[error(transparent)]
    Series(#[from] QError),
    #[error(transparent)]
    Measure(#[from] crate::measure::MeasureError),
}

fn guard_small(value: Complex64, what: &str) -> Result<Complex64, FamilyError> {
    if value.norm() < 1e-12 {
        Err(FamilyError::InvalidParam(format!("{what} is numerically zero")))
    } else {
        Ok(value)
    }
}

// ------------------------------------------------ four-parameter family --

/// Degree-`n` polynomial of the four-parameter continuous family at the
/// spectral point `x`, evaluated through its three-term recurrence (stable
/// for all degrees, unlike direct series summation).
///
/// The first parameter must be nonzero; the value is symmetric in all four
/// parameters.
pub fn askey_wilson(
    n: u32,
    x: Complex64,
    p: [Complex64; 4],
    q: QBase,
) -> Result<Complex64, FamilyError> {
    let [a, ..] = p;
    if a.norm() < 1e-14 {
        return Err(FamilyError::InvalidParam("first family parameter must be nonzero".into()));
    }

    // monic three-term recurrence
    let mut prev = cr(0.0);
    let mut cur = cr(1.0);
    let mut upper_prev = cr(0.0);
    for m in 0..n {
        let (um, lm) = aw_step_terms(m, p, q)?;
        let shift = (a + a.inv() - um - lm) * 0.5;
        let coupling = upper_prev * lm * 0.25;
        let next = (x - shift) * cur - coupling * prev;
        prev = cur;
        cur = next;
        upper_prev = um;
    }

    Ok(aw_leading_scale(n, p, q) * cur)
}

/// Monomial coefficients (constant term first) of the degree-`n`
/// four-parameter polynomial, from the same recurrence as [`askey_wilson`].
/// Needed when the argument is itself an algebra element rather than a
/// number.
pub fn askey_wilson_coefficients(
    n: u32,
    p: [Complex64; 4],
    q: QBase,
) -> Result<Vec<Complex64>, FamilyError> {
    let [a, ..] = p;
    if a.norm() < 1e-14 {
        return Err(FamilyError::InvalidParam("first family parameter must be nonzero".into()));
    }

    let mut prev: Vec<Complex64> = vec![];
    let mut cur: Vec<Complex64> = vec![cr(1.0)];
    let mut upper_prev = cr(0.0);
    for m in 0..n {
        let (um, lm) = aw_step_terms(m, p, q)?;
        let shift = (a + a.inv() - um - lm) * 0.5;
        let coupling = upper_prev * lm * 0.25;
        // next(x) = (x - shift) * cur(x) - coupling * prev(x)
        let mut next = vec![cr(0.0); cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= shift * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= coupling * c;
        }
        prev = cur;
        cur = next;
        upper_prev = um;
    }

    let scale = aw_leading_scale(n, p, q);
    Ok(cur.into_iter().map(|c| scale * c).collect())
}

/// Recurrence ingredients shared by the evaluator and the coefficient
/// expansion; the first component never vanishes, the second does at m=0.
fn aw_step_terms(
    m: u32,
    p: [Complex64; 4],
    q: QBase,
) -> Result<(Complex64, Complex64), FamilyError> {
    let [a, b, c, d] = p;
    let abcd = a * b * c * d;
    let (num, den) = if m == 0 {
        (
            (cr(1.0) - a * b) * (cr(1.0) - a * c) * (cr(1.0) - a * d),
            a * (cr(1.0) - abcd),
        )
    } else {
        let qm = q.powi(m as i32);
        (
            (cr(1.0) - a * b * qm)
                * (cr(1.0) - a * c * qm)
                * (cr(1.0) - a * d * qm)
                * (cr(1.0) - abcd * q.powi(m as i32 - 1)),
            a * (cr(1.0) - abcd * q.powi(2 * m as i32 - 1))
                * (cr(1.0) - abcd * q.powi(2 * m as i32)),
        )
    };
    let upper = num / guard_small(den, "recurrence denominator")?;
    let lower = if m == 0 {
        cr(0.0)
    } else {
        let qm1 = q.powi(m as i32 - 1);
        let num = a
            * (cr(1.0) - cr(q.powi(m as i32)))
            * (cr(1.0) - b * c * qm1)
            * (cr(1.0) - b * d * qm1)
            * (cr(1.0) - c * d * qm1);
        let den = (cr(1.0) - abcd * q.powi(2 * m as i32 - 2))
            * (cr(1.0) - abcd * q.powi(2 * m as i32 - 1));
        num / guard_small(den, "recurrence denominator")?
    };
    Ok((upper, lower))
}

/// Leading coefficient attached to the monic recurrence output.
fn aw_leading_scale(n: u32, p: [Complex64; 4], q: QBase) -> Complex64 {
    let [a, b, c, d] = p;
    cr(2.0f64.powi(n as i32)) * q_shifted(a * b * c * d * q.powi(n as i32 - 1), q, n)
}

/// Terminating-series form of [`askey_wilson`]; accurate only for modest
/// degrees, kept as an independent cross-check of the recurrence.
pub(crate) fn askey_wilson_series(
    n: u32,
    x: Complex64,
    p: [Complex64; 4],
    q: QBase,
) -> Result<Complex64, FamilyError> {
    let [a, b, c, d] = p;
    if a.norm() < 1e-14 {
        return Err(FamilyError::InvalidParam("first family parameter must be nonzero".into()));
    }
    let z = x + (x * x - cr(1.0)).sqrt();
    let abcd = a * b * c * d;
    let pre = a.powi(-(n as i32))
        * q_shifted(a * b, q, n)
        * q_shifted(a * c, q, n)
        * q_shifted(a * d, q, n);
    let series = basic_hypergeometric(
        &[cr(q.powi(-(n as i32))), abcd * q.powi(n as i32 - 1), a * z, a / z],
        &[a * b, a * c, a * d],
        q,
        cr(q.value()),
        Some(n),
    )?;
    Ok(pre * series)
}

/// Two-exponent reparametrization of the four-parameter family used for
/// spherical-function expansions: real exponents `alpha`, `beta` and scale
/// parameters `s`, `t`.
pub fn aw_jacobi(
    n: u32,
    x: Complex64,
    alpha: f64,
    beta: f64,
    s: f64,
    t: f64,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    if s == 0.0 || t == 0.0 {
        return Err(FamilyError::InvalidParam("scale parameters must be nonzero".into()));
    }
    askey_wilson(n, x, aw_jacobi_params(alpha, beta, s, t, q), q)
}

/// The four parameters corresponding to the reparametrization of
/// [`aw_jacobi`].
pub fn aw_jacobi_params(alpha: f64, beta: f64, s: f64, t: f64, q: QBase) -> [Complex64; 4] {
    let sq = q.powf(0.5);
    [
        cr(sq * t / s),
        cr(q.powf(0.5 + alpha) * s / t),
        cr(-sq / (s * t)),
        cr(-s * t * q.powf(0.5 + beta)),
    ]
}

// ------------------------------------------- trigonometric special cases --

/// Degree-`n` continuous q-ultraspherical polynomial at `cos(theta)` with
/// parameter `beta`, via its self-dual Fourier sum.
pub fn cont_q_ultraspherical(n: u32, theta: f64, beta: f64, q: QBase) -> Complex64 {
    let n = n as usize;
    let mut beta_shifted = Vec::with_capacity(n + 1);
    let mut q_shifted_vals = Vec::with_capacity(n + 1);
    let (mut bprod, mut qprod) = (1.0, 1.0);
    let (mut barg, mut qarg) = (beta, q.value());
    for _ in 0..=n {
        beta_shifted.push(bprod);
        q_shifted_vals.push(qprod);
        bprod *= 1.0 - barg;
        qprod *= 1.0 - qarg;
        barg *= q.value();
        qarg *= q.value();
    }
    let mut sum = cr(0.0);
    for k in 0..=n {
        let coeff = beta_shifted[k] * beta_shifted[n - k]
            / (q_shifted_vals[k] * q_shifted_vals[n - k]);
        sum += Complex64::from_polar(coeff, (n as f64 - 2.0 * k as f64) * theta);
    }
    sum
}

/// Degree-`n` continuous q-Hermite polynomial at `cos(theta)`, via the
/// three-term recurrence.
pub fn cont_q_hermite(n: u32, theta: f64, q: QBase) -> f64 {
    let x = theta.cos();
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - (1.0 - q.powi(k as i32)) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the second kind, `U_n(cos theta) =
/// sin((n+1) theta) / sin(theta)`.
pub fn chebyshev_u(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

// ------------------------------------------------------ discrete families --

/// Degree-`n` little q-Jacobi polynomial at `x` with parameters `a`, `b`.
pub fn little_q_jacobi(
    n: u32,
    x: Complex64,
    a: f64,
    b: f64,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    let series = basic_hypergeometric(
        &[cr(q.powi(-(n as i32))), cr(a * b * q.powi(n as i32 + 1))],
        &[cr(a * q.value())],
        q,
        cr(q.value()) * x,
        Some(n),
    )?;
    Ok(series)
}

/// Degree-`n` q-Hahn polynomial; `x` is the series argument (use `q^{-j}`
/// for grid index `j`), and `n <= cap_n` is required.
pub fn q_hahn(
    n: u32,
    x: Complex64,
    a: f64,
    b: f64,
    cap_n: u32,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    if n > cap_n {
        return Err(FamilyError::InvalidParam(format!(
            "degree {n} exceeds the grid size {cap_n}"
        )));
    }
    Ok(basic_hypergeometric(
        &[cr(q.powi(-(n as i32))), cr(a * b * q.powi(n as i32 + 1)), x],
        &[cr(a * q.value()), cr(q.powi(-(cap_n as i32)))],
        q,
        cr(q.value()),
        Some(n),
    )?)
}

/// Degree-`n` q-Krawtchouk polynomial; `x` is the series argument (use
/// `q^{-j}` for grid index `j`), `s > 0` the exponential parameter.
pub fn q_krawtchouk(
    n: u32,
    x: Complex64,
    s: f64,
    cap_n: u32,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    if n > cap_n {
        return Err(FamilyError::InvalidParam(format!(
            "degree {n} exceeds the grid size {cap_n}"
        )));
    }
    if s <= 0.0 {
        return Err(FamilyError::InvalidParam("exponential parameter must be positive".into()));
    }
    Ok(basic_hypergeometric(
        &[cr(q.powi(-(n as i32))), x, cr(-q.powi(n as i32 - cap_n as i32) / s)],
        &[cr(q.powi(-(cap_n as i32))), cr(0.0)],
        q,
        cr(q.value()),
        Some(n),
    )?)
}

/// Degree-`n` dual q-Krawtchouk polynomial at the *generic* spectral point
/// `lam`; the grid points are `lam = q^{-j} - q^{j - cap_n} / s`.
pub fn dual_q_krawtchouk(
    n: u32,
    lam: Complex64,
    s: f64,
    cap_n: u32,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    if n > cap_n {
        return Err(FamilyError::InvalidParam(format!(
            "degree {n} exceeds the grid size {cap_n}"
        )));
    }
    if s <= 0.0 {
        return Err(FamilyError::InvalidParam("exponential parameter must be positive".into()));
    }
    // split lam = u - q^{-cap_n} / (s u); the two roots give the same value
    let disc = (lam * lam + cr(4.0 * q.powi(-(cap_n as i32)) / s)).sqrt();
    let u = (lam + disc) * 0.5;
    let u = guard_small(u, "spectral variable root")?;
    Ok(basic_hypergeometric(
        &[cr(q.powi(-(n as i32))), u, cr(-q.powi(-(cap_n as i32)) / s) / u],
        &[cr(q.powi(-(cap_n as i32))), cr(0.0)],
        q,
        cr(q.value()),
        Some(n),
    )?)
}

/// [`dual_q_krawtchouk`] evaluated exactly at grid index `x`.
pub fn dual_q_krawtchouk_at(
    n: u32,
    x: u32,
    s: f64,
    cap_n: u32,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    if n > cap_n || x > cap_n {
        return Err(FamilyError::InvalidParam(format!(
            "degree {n} or index {x} exceeds the grid size {cap_n}"
        )));
    }
    if s <= 0.0 {
        return Err(FamilyError::InvalidParam("exponential parameter must be positive".into()));
    }
    Ok(basic_hypergeometric(
        &[
            cr(q.powi(-(n as i32))),
            cr(q.powi(-(x as i32))),
            cr(-q.powi(x as i32 - cap_n as i32) / s),
        ],
        &[cr(q.powi(-(cap_n as i32))), cr(0.0)],
        q,
        cr(q.value()),
        Some(n.min(x)),
    )?)
}

/// Two-parameter deformation of the dual q-Krawtchouk family at grid index
/// `p`: a terminating balanced series with trigonometric prefactors. For
/// `tau` large it degenerates to [`dual_q_krawtchouk_at`] with parameter
/// `q^sigma`.
#[allow(clippy::too_many_arguments)]
pub fn r_fn(
    n: u32,
    p: u32,
    sigma: f64,
    tau: f64,
    theta: f64,
    cap_n: u32,
    q: QBase,
) -> Result<Complex64, FamilyError> {
    if n > cap_n || p > cap_n {
        return Err(FamilyError::InvalidParam(format!(
            "degree {n} or index {p} exceeds the grid size {cap_n}"
        )));
    }
    let nf = n as f64;
    let z = Complex64::from_polar(1.0, theta);
    let pre = q_shifted(z * q.powf((tau - sigma) / 2.0 - nf), q, p)
        * q_shifted(-z * q.powf((tau + sigma) / 2.0 - nf), q, cap_n - p);
    let series = basic_hypergeometric(
        &[
            cr(q.powi(-(n as i32))),
            cr(q.powi(-(p as i32))),
            cr(-q.powf(tau - nf)),
            cr(-q.powf(p as f64 - cap_n as f64 - sigma)),
        ],
        &[
            cr(q.powi(-(cap_n as i32))),
            z.conj() * q.powf(1.0 + (tau - sigma) / 2.0 - nf),
            z * q.powf((tau - sigma) / 2.0 - nf),
        ],
        q,
        cr(q.value()),
        Some(n.min(p)),
    )?;
    Ok(pre * series)
}

// -------------------------------------------- discrete weights and norms --

/// Global prefactor of the q-Krawtchouk orthogonality relation.
pub(crate) fn qk_prefactor(s: f64, cap_n: u32, q: QBase) -> f64 {
    q.powi(cap_n as i32) * s / q_shifted(cr(-s), q, cap_n + 1).re
}

/// Unnormalized q-Krawtchouk weight at grid index `x`.
pub(crate) fn qk_weight(x: u32, s: f64, cap_n: u32, q: QBase) -> f64 {
    let mut w = 1.0;
    for i in 0..x {
        w *= -q.powi(cap_n as i32) * s * (1.0 - q.powi(i as i32 - cap_n as i32))
            / (1.0 - q.powi(i as i32 + 1));
    }
    w
}

/// Closed-form dual weight of the q-Krawtchouk relation at index `n` (the
/// reciprocal of the squared norm).
pub(crate) fn qk_dual_weight(n: u32, s: f64, cap_n: u32, q: QBase) -> f64 {
    let ni = n as i32;
    let capi = cap_n as i32;
    let head = (1.0 + q.powi(2 * ni - capi) / s) / (-q.powi(ni - 2 * capi) / s).powi(ni);
    let num = q_shifted(cr(-q.powi(-capi) / s), q, n).re * q_shifted(cr(q.powi(-capi)), q, n).re;
    let den = q_shifted(cr(q.value()), q, n).re * q_shifted(cr(-q.value() / s), q, n).re;
    head * num / den
}

// --------------------------------------------------------- CLI dispatch --

/// The families addressable by name from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    AskeyWilson,
    AwJacobi,
    ContQUltraspherical,
    ContQHermite,
    LittleQJacobi,
    QHahn,
    QKrawtchouk,
    DualQKrawtchouk,
    ChebyshevU,
}

impl Family {
    /// Every family, in the order used by listings.
    pub const ALL: [Family; 9] = [
        Family::AskeyWilson,
        Family::AwJacobi,
        Family::ContQUltraspherical,
        Family::ContQHermite,
        Family::LittleQJacobi,
        Family::QHahn,
        Family::QKrawtchouk,
        Family::DualQKrawtchouk,
        Family::ChebyshevU,
    ];

    /// Stable CLI name.
    pub fn name(self) -> &'static str {
        match self {
            Family::AskeyWilson => "askey-wilson",
            Family::AwJacobi => "aw-jacobi",
            Family::ContQUltraspherical => "cq-ultraspherical",
            Family::ContQHermite => "cq-hermite",
            Family::LittleQJacobi => "little-q-jacobi",
            Family::QHahn => "q-hahn",
            Family::QKrawtchouk => "q-krawtchouk",
            Family::DualQKrawtchouk => "dual-q-krawtchouk",
            Family::ChebyshevU => "chebyshev-u",
        }
    }

    /// The parameter keys required by [`eval_poly`] for this family.
    pub fn param_keys(self) -> &'static [&'static str] {
        match self {
            Family::AskeyWilson => &["q", "a", "b", "c", "d"],
            Family::AwJacobi => &["q", "alpha", "beta", "s", "t"],
            Family::ContQUltraspherical => &["q", "beta"],
            Family::ContQHermite => &["q"],
            Family::LittleQJacobi => &["q", "a", "b"],
            Family::QHahn => &["q", "a", "b", "N"],
            Family::QKrawtchouk => &["q", "s", "N"],
            Family::DualQKrawtchouk => &["q", "s", "N"],
            Family::ChebyshevU => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == normalized)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// Named parameter set, as parsed from `key=value` CLI input.
pub type ParamMap = BTreeMap<String, f64>;

fn need(map: &ParamMap, key: &'static str) -> Result<f64, FamilyError> {
    map.get(key).copied().ok_or(FamilyError::MissingParam(key))
}

fn need_base(map: &ParamMap) -> Result<QBase, FamilyError> {
    let q = need(map, "q")?;
    QBase::new(q).map_err(FamilyError::from)
}

fn need_grid_size(map: &ParamMap) -> Result<u32, FamilyError> {
    let raw = need(map, "N")?;
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-9 || !(0.0..=100_000.0).contains(&rounded) {
        return Err(FamilyError::InvalidParam(format!(
            "grid size N must be a small nonnegative integer, got {raw}"
        )));
    }
    Ok(rounded as u32)
}

fn theta_from_x(x: f64) -> Result<f64, FamilyError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(FamilyError::InvalidParam(format!(
            "trigonometric families need -1 <= x <= 1, got {x}"
        )));
    }
    Ok(x.acos())
}

/// Evaluates the degree-`n` polynomial of `family` at the real point `x`
/// with named parameters. Trigonometric families read `x` as `cos(theta)`.
pub fn eval_poly(family: Family, n: u32, x: f64, params: &ParamMap) -> Result<Complex64, FamilyError> {
    match family {
        Family::AskeyWilson => {
            let q = need_base(params)?;
            let p = [need(params, "a")?, need(params, "b")?, need(params, "c")?, need(params, "d")?]
                .map(cr);
            askey_wilson(n, cr(x), p, q)
        }
        Family::AwJacobi => {
            let q = need_base(params)?;
            aw_jacobi(
                n,
                cr(x),
                need(params, "alpha")?,
                need(params, "beta")?,
                need(params, "s")?,
                need(params, "t")?,
                q,
            )
        }
        Family::ContQUltraspherical => {
            let q = need_base(params)?;
            Ok(cont_q_ultraspherical(n, theta_from_x(x)?, need(params, "beta")?, q))
        }
        Family::ContQHermite => {
            let q = need_base(params)?;
            Ok(cr(cont_q_hermite(n, theta_from_x(x)?, q)))
        }
        Family::LittleQJacobi => {
            let q = need_base(params)?;
            little_q_jacobi(n, cr(x), need(params, "a")?, need(params, "b")?, q)
        }
        Family::QHahn => {
            let q = need_base(params)?;
            q_hahn(n, cr(x), need(params, "a")?, need(params, "b")?, need_grid_size(params)?, q)
        }
        Family::QKrawtchouk => {
            let q = need_base(params)?;
            q_krawtchouk(n, cr(x), need(params, "s")?, need_grid_size(params)?, q)
        }
        Family::DualQKrawtchouk => {
            let q = need_base(params)?;
            dual_q_krawtchouk(n, cr(x), need(params, "s")?, need_grid_size(params)?, q)
        }
        Family::ChebyshevU => Ok(cr(chebyshev_u(n, x))),
    }
}

/// Squared norm of the degree-`n` polynomial under the family's canonical
/// orthogonality weight, in closed form where one exists.
///
/// Conventions: the continuous four-parameter family (and its
/// reparametrization, and the q-Hermite case) use the *normalized* spectral
/// measure of [`SpectralMeasure`], so degree zero has norm one; the
/// q-Krawtchouk family and its dual use their discrete weights including
/// the global prefactor, so the degree-zero norms are the reciprocals of
/// the closed-form dual weights; and the Chebyshev norm is one under the
/// normalized semicircle weight.
pub fn norm_h(family: Family, n: u32, params: &ParamMap) -> Result<f64, FamilyError> {
    match family {
        Family::AskeyWilson => {
            let q = need_base(params)?;
            let p = [need(params, "a")?, need(params, "b")?, need(params, "c")?, need(params, "d")?]
                .map(cr);
            Ok(SpectralMeasure::new(q, p)?.norm_ratio(n)?)
        }
        Family::AwJacobi => {
            let q = need_base(params)?;
            let p = aw_jacobi_params(
                need(params, "alpha")?,
                need(params, "beta")?,
                need(params, "s")?,
                need(params, "t")?,
                q,
            );
            Ok(SpectralMeasure::new(q, p)?.norm_ratio(n)?)
        }
        Family::ContQHermite => {
            let q = need_base(params)?;
            Ok(q_shifted(cr(q.value()), q, n).re)
        }
        Family::QKrawtchouk => {
            let q = need_base(params)?;
            Ok(1.0 / qk_dual_weight(n, need(params, "s")?, need_grid_size(params)?, q))
        }
        Family::DualQKrawtchouk => {
            let q = need_base(params)?;
            let cap_n = need_grid_size(params)?;
            let s = need(params, "s")?;
            if n > cap_n {
                return Err(FamilyError::InvalidParam(format!(
                    "degree {n} exceeds the grid size {cap_n}"
                )));
            }
            Ok(1.0 / qk_weight(n, s, cap_n, q))
        }
        Family::ChebyshevU => Ok(1.0),
        Family::ContQUltraspherical => Err(FamilyError::UnsupportedNorm("cq-ultraspherical")),
        Family::LittleQJacobi => Err(FamilyError::UnsupportedNorm("little-q-jacobi")),
        Family::QHahn => Err(FamilyError::UnsupportedNorm("q-hahn")),
    }
}

// ------------------------------------------------------------------ tests --

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::integrate;
    use crate::qseries::cx;
    use std::f64::consts::PI;

    fn qb(q: f64) -> QBase {
        QBase::new(q).unwrap()
    }

    const REAL_SET: [f64; 4] = [0.3, -0.4, 0.55, 0.2];
    const MASS_SET: [f64; 4] = [1.6, 0.3, -0.4, 0.2];

    #[test]
    fn coefficient_expansion_matches_evaluation() {
        let q = qb(0.5);
        let sets: [[Complex64; 4]; 2] = [
            REAL_SET.map(cr),
            [cx(0.3, 0.4), cx(0.3, -0.4), cr(0.5), cr(-0.2)],
        ];
        for p in sets {
            for n in 0..=7u32 {
                let coeffs = askey_wilson_coefficients(n, p, q).unwrap();
                assert_eq!(coeffs.len(), n as usize + 1);
                for &x in &[-0.8, -0.1, 0.35, 0.9, cr(1.3).re] {
                    let direct = askey_wilson(n, cr(x), p, q).unwrap();
                    let mut horner = cr(0.0);
                    for &c in coeffs.iter().rev() {
                        horner = horner * x + c;
                    }
                    let scale = direct.norm().max(1.0);
                    assert!(
                        (direct - horner).norm() <= 1e-11 * scale,
                        "n={n} x={x}: {direct} vs {horner}"
                    );
                }
            }
        }
    }

    #[test]
    fn recurrence_matches_terminating_series() {
        // The series side loses digits to cancellation as the degree grows
        // (its terms are exponentially larger than the value), so this is a
        // coefficient sanity check, not a precision benchmark; the sharp
        // accuracy checks are the orthogonality tests below.
        let q = qb(0.5);
        let sets: [[Complex64; 4]; 2] = [
            REAL_SET.map(cr),
            [cx(0.3, 0.4), cx(0.3, -0.4), cr(0.5), cr(-0.2)],
        ];
        for p in sets {
            for n in 0..=6u32 {
                for &x in &[-0.9, -0.3, 0.0, 0.4, 0.95, 1.2] {
                    let rec = askey_wilson(n, cr(x), p, q).unwrap();
                    let ser = askey_wilson_series(n, cr(x), p, q).unwrap();
                    let scale = rec.norm().max(ser.norm()).max(1.0);
                    assert!(
                        (rec - ser).norm() <= 5e-6 * scale,
                        "n={n} x={x} rec={rec} ser={ser}"
                    );
                }
            }
        }
    }

    #[test]
    fn four_parameter_symmetry() {
        let q = qb(0.5);
        let base = REAL_SET.map(cr);
        let perms: [[usize; 4]; 5] =
            [[1, 0, 2, 3], [2, 1, 0, 3], [3, 1, 2, 0], [1, 2, 3, 0], [3, 2, 1, 0]];
        for n in [1u32, 3, 5] {
            for theta in [0.4f64, 1.3, 2.5] {
                let x = cr(theta.cos());
                let reference = askey_wilson(n, x, base, q).unwrap();
                for perm in perms {
                    let p = perm.map(|i| base[i]);
                    let v = askey_wilson(n, x, p, q).unwrap();
                    assert!(
                        (v - reference).norm() <= 1e-11 * reference.norm().max(1.0),
                        "perm {perm:?}: {v} vs {reference}"
                    );
                }
            }
        }
    }

    fn orthogonality_defect(params: [f64; 4], q: f64) {
        let q = qb(q);
        let m = SpectralMeasure::new(q, params.map(cr)).unwrap();
        let p = params.map(cr);
        for n in 0..=6u32 {
            for mm in 0..=n {
                let val = integrate(
                    |x| {
                        askey_wilson(n, cr(x), p, q).unwrap()
                            * askey_wilson(mm, cr(x), p, q).unwrap()
                    },
                    &m,
                )
                .unwrap();
                let hn = m.norm_ratio(n).unwrap();
                let hm = m.norm_ratio(mm).unwrap();
                if n == mm {
                    assert!(
                        (val.re - hn).abs() <= 1e-8 * hn && val.im.abs() <= 1e-9 * hn,
                        "diagonal n={n}: {val} vs {hn}"
                    );
                } else {
                    assert!(
                        val.norm() <= 1e-9 * (hn * hm).sqrt(),
                        "off-diagonal n={n} m={mm}: {val}"
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonality_continuous_parameters() {
        orthogonality_defect(REAL_SET, 0.5);
    }

    #[test]
    fn orthogonality_with_mass_point() {
        orthogonality_defect(MASS_SET, 0.5);
    }

    #[test]
    fn orthogonality_high_degree() {
        let q = qb(0.5);
        let m = SpectralMeasure::new(q, REAL_SET.map(cr)).unwrap();
        let p = REAL_SET.map(cr);
        let d30 = integrate(
            |x| {
                let v = askey_wilson(30, cr(x), p, q).unwrap();
                v * v
            },
            &m,
        )
        .unwrap();
        let h30 = m.norm_ratio(30).unwrap();
        assert!((d30.re - h30).abs() <= 1e-7 * h30, "degree 30 diagonal {d30} vs {h30}");
        let cross = integrate(
            |x| {
                askey_wilson(30, cr(x), p, q).unwrap() * askey_wilson(28, cr(x), p, q).unwrap()
            },
            &m,
        )
        .unwrap();
        let scale = (h30 * m.norm_ratio(28).unwrap()).sqrt();
        assert!(cross.norm() <= 1e-8 * scale, "cross {cross}");
    }

    #[test]
    fn quadratic_base_change_to_ultraspherical() {
        // the ultraspherical family in the squared base matches the
        // symmetric two-exponent family up to an explicit constant
        let q = qb(0.5);
        let q2 = q.squared();
        let alpha = 0.3;
        for n in 0..=6u32 {
            let mut constant = q_shifted(cr(q.powf(1.0 + 2.0 * alpha)), q, n).re;
            constant /= q_shifted(cr(q2.powf(1.0 + alpha)), q2, n).re
                * q_shifted(cr(q2.value()), q2, n).re;
            for theta in [0.4, 1.2, 2.3] {
                let lhs = cont_q_ultraspherical(n, theta, q.powf(1.0 + 2.0 * alpha), q2);
                let rhs = aw_jacobi(n, cr(theta.cos()), alpha, alpha, 1.0, 1.0, q).unwrap()
                    * constant;
                let scale = lhs.norm().max(rhs.norm()).max(1.0);
                assert!((lhs - rhs).norm() <= 1e-10 * scale, "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn hermite_is_ultraspherical_at_zero() {
        let q = qb(0.5);
        for n in 0..=10u32 {
            for theta in [0.3, 1.0, 2.0] {
                let h = cont_q_hermite(n, theta, q);
                let c = cont_q_ultraspherical(n, theta, 0.0, q) * q_shifted(cr(0.5), q, n);
                assert!(
                    (c - cr(h)).norm() <= 1e-12 * h.abs().max(1.0),
                    "n={n} theta={theta}: {c} vs {h}"
                );
            }
        }
    }

    #[test]
    fn hermite_orthogonality() {
        let q = qb(0.5);
        let m = SpectralMeasure::new(q, [cr(0.0); 4]).unwrap();
        for n in 0..=6u32 {
            for mm in 0..=n {
                let val = integrate(
                    |x| {
                        let theta = x.clamp(-1.0, 1.0).acos();
                        cr(cont_q_hermite(n, theta, q) * cont_q_hermite(mm, theta, q))
                    },
                    &m,
                )
                .unwrap();
                let hn = q_shifted(cr(0.5), q, n).re;
                let hm = q_shifted(cr(0.5), q, mm).re;
                if n == mm {
                    assert!((val.re - hn).abs() <= 1e-9 * hn, "diag n={n}: {val} vs {hn}");
                } else {
                    assert!(val.norm() <= 1e-9 * (hn * hm).sqrt(), "off n={n},{mm}: {val}");
                }
            }
        }
    }

    /// Gram matrix of the little q-Jacobi family under its geometric
    /// weight, with the degree-shifted reflection parameter passed in.
    fn little_q_jacobi_gram(a: f64, b: f64, q: QBase, shift: i32) -> [[f64; 5]; 5] {
        let evaluate = |n: u32, x: Complex64| -> Complex64 {
            basic_hypergeometric(
                &[cr(q.powi(-(n as i32))), cr(a * b * q.powi(n as i32 + shift))],
                &[cr(a * q.value())],
                q,
                cr(q.value()) * x,
                Some(n),
            )
            .unwrap()
        };
        let mut gram = [[0.0; 5]; 5];
        let mut weight = 1.0; // (bq;q)_x/(q;q)_x (aq)^x at x = 0
        let mut x = 0u32;
        loop {
            let point = cr(q.powi(x as i32));
            let values: Vec<f64> = (0..5).map(|n| evaluate(n, point).re).collect();
            for (n, row) in gram.iter_mut().enumerate() {
                for (m, entry) in row.iter_mut().enumerate() {
                    *entry += weight * values[n] * values[m];
                }
            }
            weight *= (1.0 - b * q.powi(x as i32 + 1)) / (1.0 - q.powi(x as i32 + 1))
                * a
                * q.value();
            x += 1;
            if weight.abs() < 1e-24 && x > 8 {
                break;
            }
        }
        gram
    }

    #[test]
    fn little_q_jacobi_orthogonality_arbitration() {
        // the degree-raised reflection parameter is orthogonal under the
        // geometric weight; the degree-lowered variant demonstrably is not
        let q = qb(0.5);
        let good = little_q_jacobi_gram(0.6, 0.3, q, 1);
        let bad = little_q_jacobi_gram(0.6, 0.3, q, -1);
        let mut worst_bad: f64 = 0.0;
        for n in 0..5 {
            for m in 0..n {
                let scale = (good[n][n] * good[m][m]).sqrt();
                assert!(
                    good[n][m].abs() <= 1e-10 * scale,
                    "defect at ({n},{m}): {} vs scale {scale}",
                    good[n][m]
                );
                worst_bad = worst_bad.max(bad[n][m].abs() / (bad[n][n] * bad[m][m]).sqrt());
            }
        }
        assert!(worst_bad > 1e-5, "the rejected variant looks orthogonal: {worst_bad}");
    }

    #[test]
    fn little_q_jacobi_public_evaluator_matches_gram_convention() {
        let q = qb(0.5);
        let v = little_q_jacobi(3, cr(q.powi(2)), 0.6, 0.3, q).unwrap();
        let direct = basic_hypergeometric(
            &[cr(q.powi(-3)), cr(0.6 * 0.3 * q.powi(4))],
            &[cr(0.6 * q.value())],
            q,
            cr(q.value() * q.powi(2)),
            Some(3),
        )
        .unwrap();
        assert!((v - direct).norm() <= 1e-15);
    }

    #[test]
    fn q_hahn_orthogonality() {
        let q = qb(0.5);
        let (a, b, cap) = (0.6, 0.3, 6u32);
        let mut gram = [[0.0f64; 7]; 7];
        for x in 0..=cap {
            let point = cr(q.powi(-(x as i32)));
            // weight (aq;q)_x (bq;q)_{cap-x} / ((q;q)_x (q;q)_{cap-x}) (aq)^{-x}
            let w = q_shifted(cr(a * q.value()), q, x).re
                * q_shifted(cr(b * q.value()), q, cap - x).re
                / (q_shifted(cr(q.value()), q, x).re * q_shifted(cr(q.value()), q, cap - x).re)
                * (a * q.value()).powi(-(x as i32));
            let vals: Vec<f64> =
                (0..=cap).map(|n| q_hahn(n, point, a, b, cap, q).unwrap().re).collect();
            for n in 0..=cap as usize {
                for m in 0..=cap as usize {
                    gram[n][m] += w * vals[n] * vals[m];
                }
            }
        }
        for n in 0..=cap as usize {
            for m in 0..n {
                let scale = (gram[n][n] * gram[m][m]).sqrt();
                assert!(gram[n][m].abs() <= 1e-9 * scale, "defect ({n},{m}): {}", gram[n][m]);
            }
        }
    }

    #[test]
    fn q_krawtchouk_orthogonality_closed_norm() {
        let q = qb(0.5);
        let (s, cap) = (q.powf(0.3), 6u32);
        let pref = qk_prefactor(s, cap, q);
        for n in 0..=cap {
            for m in 0..=n {
                let mut acc = 0.0;
                for x in 0..=cap {
                    let point = cr(q.powi(-(x as i32)));
                    acc += qk_weight(x, s, cap, q)
                        * q_krawtchouk(n, point, s, cap, q).unwrap().re
                        * q_krawtchouk(m, point, s, cap, q).unwrap().re;
                }
                acc *= pref;
                let want = if n == m { 1.0 / qk_dual_weight(n, s, cap, q) } else { 0.0 };
                let scale = (1.0 / qk_dual_weight(n, s, cap, q)
                    * (1.0 / qk_dual_weight(m, s, cap, q)))
                .sqrt();
                assert!(
                    (acc - want).abs() <= 1e-9 * scale.max(1e-12),
                    "({n},{m}): {acc} vs {want}"
                );
            }
        }
    }

    #[test]
    fn dual_q_krawtchouk_duality_and_orthogonality() {
        let q = qb(0.5);
        let (s, cap) = (q.powf(0.3), 6u32);
        // self-duality against the primal family
        for n in 0..=cap {
            for x in 0..=cap {
                let dual = dual_q_krawtchouk_at(n, x, s, cap, q).unwrap();
                let primal = q_krawtchouk(x, cr(q.powi(-(n as i32))), s, cap, q).unwrap();
                assert!((dual - primal).norm() <= 1e-12 * primal.norm().max(1.0));
                // the generic-argument path agrees at grid points
                let lam = cr(q.powi(-(x as i32)) - q.powi(x as i32 - cap as i32) / s);
                let generic = dual_q_krawtchouk(n, lam, s, cap, q).unwrap();
                assert!((generic - dual).norm() <= 1e-12 * dual.norm().max(1.0));
            }
        }
        // orthogonality with the closed-form norm
        let pref = qk_prefactor(s, cap, q);
        for n in 0..=cap {
            for m in 0..=n {
                let mut acc = 0.0;
                for x in 0..=cap {
                    acc += qk_dual_weight(x, s, cap, q)
                        * dual_q_krawtchouk_at(n, x, s, cap, q).unwrap().re
                        * dual_q_krawtchouk_at(m, x, s, cap, q).unwrap().re;
                }
                acc *= pref;
                let want = if n == m { 1.0 / qk_weight(n, s, cap, q) } else { 0.0 };
                let scale =
                    (1.0 / qk_weight(n, s, cap, q) * (1.0 / qk_weight(m, s, cap, q))).sqrt();
                assert!(
                    (acc - want).abs() <= 1e-9 * scale.max(1e-12),
                    "({n},{m}): {acc} vs {want}"
                );
            }
        }
    }

    #[test]
    fn deformed_dual_family_degenerates_at_large_second_exponent() {
        let q = qb(0.5);
        let (sigma, cap) = (0.3, 4u32);
        let s = q.powf(sigma);
        for n in 0..=cap {
            for p in 0..=cap {
                let deformed = r_fn(n, p, sigma, 140.0, 0.7, cap, q).unwrap();
                let plain = dual_q_krawtchouk_at(n, p, s, cap, q).unwrap();
                assert!(
                    (deformed - plain).norm() <= 1e-12 * plain.norm().max(1.0),
                    "n={n} p={p}: {deformed} vs {plain}"
                );
            }
        }
    }

    #[test]
    fn chebyshev_matches_sine_quotient() {
        for n in 0..=30u32 {
            for theta in [0.3f64, 0.9, 1.7, 2.6] {
                let u = chebyshev_u(n, theta.cos());
                let want = ((n as f64 + 1.0) * theta).sin() / theta.sin();
                assert!((u - want).abs() <= 1e-12 * want.abs().max(1.0), "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn high_degree_values_stay_finite() {
        let q = qb(0.5);
        let p = REAL_SET.map(cr);
        for theta in [0.2f64, 1.5, 2.9] {
            let v = askey_wilson(30, cr(theta.cos()), p, q).unwrap();
            assert!(v.re.is_finite() && v.norm() < 1e6, "runaway value {v}");
            let c = cont_q_ultraspherical(30, theta, 0.4, q);
            assert!(c.re.is_finite() && c.norm() < 1e6);
            let h = cont_q_hermite(30, theta, q);
            assert!(h.is_finite() && h.abs() < 1e6);
        }
    }

    #[test]
    fn cli_dispatch_round_trip() {
        let mut params = ParamMap::new();
        params.insert("q".into(), 0.5);
        params.insert("a".into(), 0.3);
        params.insert("b".into(), -0.4);
        params.insert("c".into(), 0.55);
        params.insert("d".into(), 0.2);
        let via_map = eval_poly(Family::AskeyWilson, 3, 0.4, &params).unwrap();
        let direct = askey_wilson(3, cr(0.4), REAL_SET.map(cr), qb(0.5)).unwrap();
        assert_eq!(via_map, direct);
        assert!(matches!(
            eval_poly(Family::AskeyWilson, 3, 0.4, &ParamMap::new()),
            Err(FamilyError::MissingParam("q"))
        ));
        assert_eq!("askey-wilson".parse::<Family>().unwrap(), Family::AskeyWilson);
        assert!("no-such-family".parse::<Family>().is_err());
        let hermite_norm = norm_h(
            Family::ContQHermite,
            3,
            &[("q".to_string(), 0.5)].into_iter().collect(),
        )
        .unwrap();
        assert!((hermite_norm - q_shifted(cr(0.5), qb(0.5), 3).re).abs() <= 1e-15);
        assert!(matches!(
            norm_h(Family::LittleQJacobi, 2, &params),
            Err(FamilyError::UnsupportedNorm(_))
        ));
    }

    #[test]
    fn normalized_semicircle_checks_out() {
        // weight 2/pi sqrt(1-x^2) integrates the second-kind family to
        // Kronecker deltas; substituting x = cos(theta) removes the
        // endpoint singularity so Gauss-Legendre panels converge fast
        let nodes = crate::measure::gauss_legendre_32();
        let mut gram = [[0.0f64; 5]; 5];
        let panels = 16;
        for p in 0..panels {
            let lo = PI * p as f64 / panels as f64;
            let hi = lo + PI / panels as f64;
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for &(t, w) in nodes {
                let theta = mid + half * t;
                let x = theta.cos();
                let rho = 2.0 / PI * theta.sin().powi(2) * w * half;
                for n in 0..5 {
                    for m in 0..5 {
                        gram[n][m] += rho * chebyshev_u(n as u32, x) * chebyshev_u(m as u32, x);
                    }
                }
            }
        }
        for n in 0..5 {
            for m in 0..5 {
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((gram[n][m] - want).abs() <= 1e-9, "({n},{m}): {}", gram[n][m]);
            }
        }
    }
}
