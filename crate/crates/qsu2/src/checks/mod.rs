//! Verification suite for the identities tying together the polynomial
//! families, the Hopf \*-algebra, its representations, and the generalized
//! matrix elements.
//!
//! Each check evaluates both sides of one identity (or one family of
//! identities) over deterministic parameter grids and records the worst
//! deviation.  [`run_suite`] executes a selection of checks, possibly in
//! parallel, and assembles a [`Report`] whose JSON form is byte-stable
//! across runs: all numeric fields are deterministic, and wall-clock data
//! is only filled in when explicitly requested.

mod catalog;

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::qseries::QBase;
use crate::uqsu2::ExtendedParameter;

/// Identifiers of every check in the suite, in canonical report order.
pub const CATALOG: [&str; 17] = [
    "addition_formula",
    "fourier_series",
    "coaction",
    "linearisation",
    "prop91_closed_form",
    "prop92_bilinear",
    "prop94_orthogonality",
    "tridiagonal",
    "monic_orthogonal",
    "lemma103_weights",
    "qhahn_connection",
    "characters",
    "ul_hermite_expansion",
    "integral_rep",
    "recurrence_consistency",
    "schur_orthogonality",
    "spherical_haar",
];

/// Default primary tolerance of a check: the threshold its headline
/// comparison is held to.  Secondary comparisons inside a check scale
/// their own documented thresholds by the same factor when the primary
/// tolerance is overridden.
pub fn primary_tolerance(id: &str) -> Option<f64> {
    Some(match id {
        "addition_formula" => 1e-8,
        "fourier_series" => 1e-9,
        "coaction" => 1e-9,
        "linearisation" => 1e-8,
        "prop91_closed_form" => 1e-10,
        "prop92_bilinear" => 1e-10,
        "prop94_orthogonality" => 1e-9,
        "tridiagonal" => 1e-12,
        "monic_orthogonal" => 1e-10,
        "lemma103_weights" => 1e-12,
        "qhahn_connection" => 1e-9,
        "characters" => 1e-9,
        "ul_hermite_expansion" => 1e-9,
        "integral_rep" => 1e-6,
        "recurrence_consistency" => 1e-9,
        "schur_orthogonality" => 1e-10,
        "spherical_haar" => 1e-6,
        _ => return None,
    })
}

/// Largest admissible `twice_lmax`: spins above 3 make the element-level
/// sweeps balloon, so they are rejected rather than attempted.
pub const TWICE_LMAX_CAP: u32 = 6;

/// Shared configuration for the verification suite.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Deformation parameter, strictly between 0 and 1.
    pub q: QBase,
    /// First real parameter of the two-parameter element families.
    pub sigma: ExtendedParameter,
    /// Second real parameter of the two-parameter element families.
    pub tau: ExtendedParameter,
    /// Auxiliary parameter used by the addition and coaction checks.
    pub mu: ExtendedParameter,
    /// Twice the largest spin swept by the representation-indexed checks.
    pub twice_lmax: u32,
    /// Angles used when identities are compared pointwise in `theta`.
    pub theta_grid: Vec<f64>,
    /// Complex points used when identities are compared along characters.
    pub lambda_grid: Vec<Complex64>,
    /// Per-check overrides of the primary tolerance, keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
}

impl CheckConfig {
    /// Configuration with the documented default grids for the given base.
    pub fn new(q: QBase) -> Self {
        let qv = q.value();
        let radius = qv.sqrt();
        let mut lambda_grid: Vec<Complex64> = (0..8)
            .map(|k| Complex64::from_polar(radius, 0.15 + std::f64::consts::PI * k as f64 / 4.0))
            .collect();
        lambda_grid.extend([0.35, 0.6, 0.85, 1.2].map(|x| Complex64::new(x, 0.0)));
        let theta_grid = (0..10).map(|k| 0.1 + 2.9 * k as f64 / 9.0).collect();
        CheckConfig {
            q,
            sigma: ExtendedParameter::Finite(0.3),
            tau: ExtendedParameter::Finite(-0.4),
            mu: ExtendedParameter::Finite(0.9),
            twice_lmax: 6,
            theta_grid,
            lambda_grid,
            tolerances: BTreeMap::new(),
        }
    }

    /// Ratio of the configured tolerance to the default one, applied to
    /// every comparison threshold inside the check.
    fn tolerance_factor(&self, id: &str) -> f64 {
        match (self.tolerances.get(id), primary_tolerance(id)) {
            (Some(t), Some(d)) => t / d,
            _ => 1.0,
        }
    }
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig::new(QBase::new(0.5).expect("0.5 is a valid base"))
    }
}

/// Errors that prevent a check from running at all (as opposed to a check
/// that runs and fails, which is reported through [`CheckResult::pass`]).
#[derive(Debug, Error)]
pub enum CheckError {
    /// The requested id is not in [`CATALOG`].
    #[error("unknown check id `{0}`")]
    UnknownId(String),
    /// The configuration asks for more work than the suite supports.
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),
}

/// One comparison family inside a check: a labelled worst deviation with
/// the threshold it was held to.
pub(crate) struct Part {
    pub label: String,
    /// Deviation measured by the part's own criterion (absolute, scaled
    /// absolute, or relative) -- the number compared against `tol`.
    pub err: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    /// Human-readable description of the worst grid point with both side
    /// values; empty when nothing was recorded.
    pub worst: String,
}

impl Part {
    pub fn pass(&self) -> bool {
        self.err <= self.tol
    }
}

/// Deterministic rendering of a complex value for notes.
pub(crate) fn fmt_c(z: Complex64) -> String {
    format!("{:.9e}{:+.9e}i", z.re, z.im)
}

enum Criterion {
    /// `|lhs-rhs| / scale` compared to the tolerance.
    ScaledAbs,
    /// `|lhs-rhs| / max(|lhs|,|rhs|)` compared to the tolerance.
    Relative,
}

/// Accumulator for one [`Part`]: feed it comparisons, keep the worst.
pub(crate) struct Probe {
    label: String,
    criterion: Criterion,
    tol: f64,
    err: f64,
    abs_err: f64,
    rel_err: f64,
    worst: String,
}

impl Probe {
    pub fn scaled(label: &str, tol: f64) -> Self {
        Probe {
            label: label.to_string(),
            criterion: Criterion::ScaledAbs,
            tol,
            err: 0.0,
            abs_err: 0.0,
            rel_err: 0.0,
            worst: String::new(),
        }
    }

    pub fn relative(label: &str, tol: f64) -> Self {
        Probe {
            label: label.to_string(),
            criterion: Criterion::Relative,
            tol,
            ..Probe::scaled(label, tol)
        }
    }

    /// Records a two-sided comparison; `at` describes the grid point and is
    /// only rendered if this becomes the worst deviation so far.
    pub fn record(&mut self, at: &dyn Fn() -> String, lhs: Complex64, rhs: Complex64, scale: f64) {
        let diff = (lhs - rhs).norm();
        let abs = diff / scale.max(1e-300);
        let denom = lhs.norm().max(rhs.norm());
        let rel = if denom > 1e-250 { diff / denom } else { 0.0 };
        let err = match self.criterion {
            Criterion::ScaledAbs => abs,
            Criterion::Relative => rel,
        };
        if err >= self.err {
            self.err = err;
            self.abs_err = abs.max(self.abs_err);
            self.rel_err = rel.max(self.rel_err);
            self.worst = format!("{}; lhs={}, rhs={}", at(), fmt_c(lhs), fmt_c(rhs));
        }
        self.abs_err = self.abs_err.max(abs);
        self.rel_err = self.rel_err.max(rel);
    }

    /// Records a one-sided deviation (a structural or sign criterion) whose
    /// magnitude is compared directly to the tolerance.
    pub fn record_value(&mut self, at: &dyn Fn() -> String, err: f64) {
        if err >= self.err {
            self.err = err;
            self.worst = at();
        }
        self.abs_err = self.abs_err.max(err);
        self.rel_err = self.rel_err.max(err);
    }

    pub fn into_part(self) -> Part {
        Part {
            label: self.label,
            err: self.err,
            abs_err: self.abs_err,
            rel_err: self.rel_err,
            tol: self.tol,
            worst: self.worst,
        }
    }
}

/// Configuration echo attached to every result.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamsEcho {
    pub q: f64,
    pub sigma: String,
    pub tau: String,
    pub mu: String,
    pub lmax: String,
}

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub id: String,
    pub params: ParamsEcho,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub pass: bool,
    pub runtime_ms: f64,
    pub notes: String,
}

/// Execution environment echoed at the top of a report.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Environment {
    pub q: f64,
    pub sigma: String,
    pub tau: String,
    pub mu: String,
    pub lmax: String,
    pub version: String,
    /// Empty unless timing collection is requested, so that default
    /// reports do not vary from run to run.
    pub timestamp: String,
}

/// Full verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub environment: Environment,
    pub results: Vec<CheckResult>,
}

impl Report {
    /// Pretty JSON with a stable key order (struct declaration order).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// Flat CSV form, one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,pass,maxAbsErr,maxRelErr,runtimeMs,notes\n");
        for r in &self.results {
            let notes = r.notes.replace('"', "\"\"");
            out.push_str(&format!(
                "{},{},{:e},{:e},{},\"{}\"\n",
                r.id, r.pass, r.max_abs_err, r.max_rel_err, r.runtime_ms, notes
            ));
        }
        out
    }

    /// True when every check in the report passed.
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

/// Renders twice a spin as the spin itself (`"3"`, `"5/2"`).
fn format_spin(twice: u32) -> String {
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{twice}/2")
    }
}

fn params_echo(cfg: &CheckConfig) -> ParamsEcho {
    ParamsEcho {
        q: cfg.q.value(),
        sigma: cfg.sigma.to_string(),
        tau: cfg.tau.to_string(),
        mu: cfg.mu.to_string(),
        lmax: format_spin(cfg.twice_lmax),
    }
}

/// Resolved values handed to the individual checks: the identities need
/// finite values of the real parameters, so infinite configuration values
/// fall back to the documented defaults, with a note recording the
/// substitution.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a CheckConfig,
    pub q: QBase,
    pub qv: f64,
    pub q2: QBase,
    pub sigma: f64,
    pub tau: f64,
    pub mu: f64,
    pub tl_max: u32,
    pub subs_note: String,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a CheckConfig) -> Self {
        let mut notes = Vec::new();
        let mut take = |name: &str, p: ExtendedParameter, default: f64| match p {
            ExtendedParameter::Finite(v) => v,
            other => {
                notes.push(format!("{name}={other} substituted with {default}"));
                default
            }
        };
        let sigma = take("sigma", cfg.sigma, 0.3);
        let tau = take("tau", cfg.tau, -0.4);
        let mu = take("mu", cfg.mu, 0.9);
        Ctx {
            cfg,
            q: cfg.q,
            qv: cfg.q.value(),
            q2: cfg.q.squared(),
            sigma,
            tau,
            mu,
            tl_max: cfg.twice_lmax,
            subs_note: notes.join("; "),
        }
    }

    /// Integer spins up to `cap` and up to the configured maximum.
    pub fn int_spins(&self, cap: u32) -> impl Iterator<Item = u32> {
        1..=cap.min(self.tl_max / 2)
    }
}

/// Runs a single check against the configuration.
pub fn run_check(cfg: &CheckConfig, id: &str, timings: bool) -> Result<CheckResult, CheckError> {
    if !CATALOG.contains(&id) {
        return Err(CheckError::UnknownId(id.to_string()));
    }
    if cfg.twice_lmax > TWICE_LMAX_CAP {
        return Err(CheckError::ResourceGuard(format!(
            "lmax {} exceeds the supported maximum {}",
            format_spin(cfg.twice_lmax),
            format_spin(TWICE_LMAX_CAP)
        )));
    }
    if cfg.theta_grid.is_empty() || cfg.lambda_grid.is_empty() {
        return Err(CheckError::ResourceGuard(
            "theta and lambda grids must be nonempty".into(),
        ));
    }
    let ctx = Ctx::new(cfg);
    let factor = cfg.tolerance_factor(id);
    let start = Instant::now();
    let parts = catalog::dispatch(&ctx, id, factor);
    let runtime_ms = if timings {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };

    let pass = parts.iter().all(Part::pass);
    let max_abs_err = parts.iter().map(|p| p.abs_err).fold(0.0, f64::max);
    let max_rel_err = parts.iter().map(|p| p.rel_err).fold(0.0, f64::max);
    let mut notes = Vec::new();
    if !ctx.subs_note.is_empty() {
        notes.push(ctx.subs_note.clone());
    }
    for p in &parts {
        if !p.pass() {
            notes.push(format!(
                "{} exceeded tolerance: err={:.3e} > tol={:.3e}; worst at {}",
                p.label, p.err, p.tol, p.worst
            ));
        }
    }
    Ok(CheckResult {
        id: id.to_string(),
        params: params_echo(cfg),
        max_abs_err,
        max_rel_err,
        pass,
        runtime_ms,
        notes: notes.join(" | "),
    })
}

/// Runs the given checks (all of [`CATALOG`] when `ids` is empty) and
/// assembles the report.  `jobs` bounds the worker threads; results keep
/// the canonical catalog order regardless of scheduling.
pub fn run_suite(
    cfg: &CheckConfig,
    ids: &[String],
    jobs: Option<usize>,
    timings: bool,
) -> Result<Report, CheckError> {
    let selected: Vec<&str> = if ids.is_empty() {
        CATALOG.to_vec()
    } else {
        let mut seen = Vec::new();
        for id in ids {
            let canon = CATALOG
                .iter()
                .find(|c| **c == id.as_str())
                .ok_or_else(|| CheckError::UnknownId(id.clone()))?;
            if !seen.contains(canon) {
                seen.push(canon);
            }
        }
        // canonical order, independent of the order requested
        CATALOG.iter().copied().filter(|c| seen.contains(c)).collect()
    };

    let run_all = || -> Result<Vec<CheckResult>, CheckError> {
        selected
            .par_iter()
            .map(|id| run_check(cfg, id, timings))
            .collect()
    };
    let results = match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CheckError::ResourceGuard(format!("thread pool: {e}")))?
            .install(run_all),
        _ => run_all(),
    }?;

    let timestamp = if timings {
        humantime_stamp()
    } else {
        String::new()
    };
    Ok(Report {
        environment: Environment {
            q: cfg.q.value(),
            sigma: cfg.sigma.to_string(),
            tau: cfg.tau.to_string(),
            mu: cfg.mu.to_string(),
            lmax: format_spin(cfg.twice_lmax),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        },
        results,
    })
}

/// RFC 3339 UTC timestamp with second precision, built from the system
/// clock without pulling in a date-time dependency.
fn humantime_stamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    // days since epoch -> civil date (Howard Hinnant's algorithm)
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let year = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { year + 1 } else { year };
    format!("{year:04}-{month:02}-{day:02}T{h:02}:{m:02}:{s:02}Z")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_have_tolerances_and_no_duplicates() {
        for id in CATALOG {
            assert!(primary_tolerance(id).is_some(), "missing tolerance for {id}");
        }
        let mut sorted: Vec<&str> = CATALOG.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), CATALOG.len());
    }

    #[test]
    fn unknown_id_and_guard_are_rejected() {
        let cfg = CheckConfig::default();
        assert!(matches!(
            run_check(&cfg, "no_such_check", false),
            Err(CheckError::UnknownId(_))
        ));
        let mut big = CheckConfig::default();
        big.twice_lmax = 8;
        assert!(matches!(
            run_check(&big, "schur_orthogonality", false),
            Err(CheckError::ResourceGuard(_))
        ));
    }

    #[test]
    fn suite_selection_keeps_canonical_order_and_dedupes() {
        let cfg = CheckConfig::default();
        let ids = vec![
            "spherical_haar".to_string(),
            "lemma103_weights".to_string(),
            "spherical_haar".to_string(),
        ];
        let report = run_suite(&cfg, &ids, Some(2), false).unwrap();
        let got: Vec<&str> = report.results.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(got, vec!["lemma103_weights", "spherical_haar"]);
    }

    #[test]
    fn reports_serialize_identically_without_timings() {
        let cfg = CheckConfig::default();
        let ids = vec!["lemma103_weights".to_string()];
        let a = run_suite(&cfg, &ids, None, false).unwrap().to_json();
        let b = run_suite(&cfg, &ids, Some(3), false).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"runtimeMs\": 0.0"));
        assert!(a.contains("\"timestamp\": \"\""));
    }
}
