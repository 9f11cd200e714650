//! Check dispatch: configuration, the named checks, and the full suite with
//! deterministic report ordering.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Monomial, Var};
use crate::identity::{
    cubic_i_sides, cubic_ii_from_limit, cubic_ii_sides, diff_fay_residual, generate_product_identity_with_limit,
    lemma22_sides, seventh_order_sides, seventh_order_tau1_reference, IdentitySides, VerifyOutcome,
};
use crate::numeric::{
    max_residual, random_point_check, sweep, theta_cubic_limit_gaps, SweepCheck, ThetaConvention, ThetaParams,
    Truncation, ZeroTestOutcome, ZeroTestable,
};
use crate::report::{IdentityReport, Status, SuiteReport};
use crate::tau::{fay_residual, staircase_tau, TauPoly};
use crate::wave::{faddeev_takhtajan, lemma23_residual, sturm_liouville_residual, Lemma23Variant};
use crate::{ComplexVal, Poly};

/// Sides longer than this many terms are reported by count only.
pub const MAX_PRINTED_TERMS: usize = 1000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("check `{check}` needs {needed} z-variables but {available} are configured")]
    TooFewVariables { check: String, needed: usize, available: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckName {
    Fay,
    DiffFay,
    Lemma22,
    CubicI,
    CubicII,
    Seventh,
    Generated,
    Lemma23,
    Sturm,
    Ft,
    ThetaFay,
    ThetaCubic,
    ThetaDegenerate,
    Sine,
}

impl CheckName {
    pub const ALL: [CheckName; 14] = [
        Self::Fay,
        Self::DiffFay,
        Self::Lemma22,
        Self::CubicI,
        Self::CubicII,
        Self::Seventh,
        Self::Generated,
        Self::Lemma23,
        Self::Sturm,
        Self::Ft,
        Self::ThetaFay,
        Self::ThetaCubic,
        Self::ThetaDegenerate,
        Self::Sine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fay => "fay",
            Self::DiffFay => "diff-fay",
            Self::Lemma22 => "lemma22",
            Self::CubicI => "cubic-i",
            Self::CubicII => "cubic-ii",
            Self::Seventh => "seventh",
            Self::Generated => "generated",
            Self::Lemma23 => "lemma23",
            Self::Sturm => "sturm",
            Self::Ft => "ft",
            Self::ThetaFay => "theta-fay",
            Self::ThetaCubic => "theta-cubic",
            Self::ThetaDegenerate => "theta-degenerate",
            Self::Sine => "sine",
        }
    }

    /// Floating-point checks do not depend on a tau function.
    pub fn sweep(self) -> Option<SweepCheck> {
        match self {
            Self::ThetaFay => Some(SweepCheck::ThetaFay),
            Self::ThetaCubic => Some(SweepCheck::ThetaCubic),
            Self::ThetaDegenerate => Some(SweepCheck::ThetaDegenerate),
            Self::Sine => Some(SweepCheck::Sine),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        self.sweep().is_none()
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::UnknownCheck(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauSelector {
    Staircase(u32),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tau: TauSelector,
    /// Indices `i` of the shift variables `z_i` (and `w_i`), in slot order.
    pub z_indices: Vec<u32>,
    /// Index of the single parameter of the one-parameter cubic identity
    /// (0 prints as bare `z`).
    pub cubic_z: u32,
    /// Order `n` of the generated identity (over `2^(n-1)` parameters).
    pub order: u32,
    pub max_order: u32,
    /// Largest staircase index in the full suite.
    pub max_k: u32,
    pub q_values: Vec<f64>,
    pub theta_points: usize,
    pub sine_points: usize,
    pub convention: ThetaConvention,
    /// Overrides every numeric tolerance when set.
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// Random-point confirmations per exact check.
    pub trials: usize,
    pub parallelism: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tau: TauSelector::Staircase(1),
            z_indices: (1..=8).collect(),
            cubic_z: 0,
            order: 3,
            max_order: crate::identity::DEFAULT_MAX_ORDER,
            max_k: 3,
            q_values: vec![0.05, 0.1, 0.3],
            theta_points: 100,
            sine_points: 1000,
            convention: ThetaConvention::Mumford,
            tolerance: None,
            seed: 20_240_901,
            trials: 20,
            parallelism: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            format: OutputFormat::Text,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| invalid(key, value, "not a list of numbers")))
        .collect()
}

fn invalid(key: &str, value: &str, reason: &str) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        let num = |reason: &str| invalid(key, value, reason);
        match key.trim().replace('-', "_").as_str() {
            "tau" => {
                let k: u32 = value.parse().map_err(|_| num("expected an integer k >= 1"))?;
                if k == 0 {
                    return Err(num("expected an integer k >= 1"));
                }
                self.tau = TauSelector::Staircase(k);
            }
            "tau_file" => self.tau = TauSelector::File(PathBuf::from(value)),
            "z" | "z_indices" => {
                let zs: Vec<u32> = parse_list(key, value)?;
                let mut sorted = zs.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if zs.is_empty() || sorted.len() != zs.len() {
                    return Err(num("expected distinct indices"));
                }
                self.z_indices = zs;
            }
            "cubic_z" => self.cubic_z = value.parse().map_err(|_| num("expected an index"))?,
            "order" => self.order = value.parse().map_err(|_| num("expected an integer"))?,
            "max_order" => self.max_order = value.parse().map_err(|_| num("expected an integer"))?,
            "max_k" => {
                self.max_k = value.parse().map_err(|_| num("expected an integer"))?;
                if self.max_k == 0 {
                    return Err(num("expected k >= 1"));
                }
            }
            "q" | "q_values" => {
                let qs: Vec<f64> = parse_list(key, value)?;
                if qs.is_empty() || qs.iter().any(|q| !(q.is_finite() && q.abs() < 1.0)) {
                    return Err(num("each nome must satisfy |q| < 1"));
                }
                self.q_values = qs;
            }
            "theta_points" | "points" => self.theta_points = value.parse().map_err(|_| num("expected a count"))?,
            "sine_points" => self.sine_points = value.parse().map_err(|_| num("expected a count"))?,
            "convention" => {
                self.convention = match value {
                    "mumford" => ThetaConvention::Mumford,
                    "jacobi" => ThetaConvention::Jacobi,
                    _ => return Err(num("expected mumford or jacobi")),
                }
            }
            "tolerance" => {
                let t: f64 = value.parse().map_err(|_| num("expected a number"))?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(num("tolerance must be positive"));
                }
                self.tolerance = Some(t);
            }
            "seed" => self.seed = value.parse().map_err(|_| num("expected an unsigned integer"))?,
            "trials" => {
                self.trials = value.parse().map_err(|_| num("expected a count"))?;
                if self.trials == 0 {
                    return Err(num("at least one trial"));
                }
            }
            "parallelism" | "threads" => {
                self.parallelism = value.parse().map_err(|_| num("expected a thread count"))?;
                if self.parallelism == 0 {
                    return Err(num("at least one thread"));
                }
            }
            "format" => {
                self.format = match value {
                    "text" => OutputFormat::Text,
                    "json" => OutputFormat::Json,
                    _ => return Err(num("expected text or json")),
                }
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| invalid(line, "", "expected `key = value`"))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Applies every `PREFIX<KEY>` pair, with the key lowercased.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, prefix: &str, vars: I) -> Result<(), ConfigError> {
        let mut pairs: Vec<(String, String)> = vars
            .into_iter()
            .filter_map(|(k, v)| k.strip_prefix(prefix).map(|rest| (rest.to_ascii_lowercase(), v)))
            .collect();
        pairs.sort();
        for (k, v) in pairs {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn load_tau(&self) -> Result<Result<TauPoly, String>, ConfigError> {
        match &self.tau {
            TauSelector::Staircase(k) => Ok(staircase_tau(*k).map_err(|e| e.to_string())),
            TauSelector::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(TauPoly::parse(&text).map_err(|e| format!("{}: {e}", path.display())))
            }
        }
    }

    fn zs(&self, check: CheckName, needed: usize) -> Result<Vec<Var>, ConfigError> {
        if self.z_indices.len() < needed {
            return Err(ConfigError::TooFewVariables {
                check: check.name().to_string(),
                needed,
                available: self.z_indices.len(),
            });
        }
        Ok(self.z_indices[..needed].iter().map(|&i| Var::z(i)).collect())
    }

    fn numeric_tolerance(&self, check: SweepCheck) -> f64 {
        self.tolerance.unwrap_or(match check {
            SweepCheck::ThetaFay => 1e-9,
            SweepCheck::ThetaCubic | SweepCheck::ThetaDegenerate => 1e-8,
            SweepCheck::Sine => 1e-11,
        })
    }

    /// Parameter slots a check consumes.
    fn variables_needed(&self, check: CheckName) -> usize {
        match check {
            CheckName::Fay | CheckName::Seventh => 4,
            CheckName::Generated => 1usize << self.order.saturating_sub(1).min(16),
            c if c.is_exact() && c != CheckName::CubicII => 2,
            _ => 0,
        }
    }
}

fn trim_sides(mut report: IdentityReport) -> IdentityReport {
    if report.lhs_terms.unwrap_or(0) + report.rhs_terms.unwrap_or(0) > MAX_PRINTED_TERMS {
        report.lhs = None;
        report.rhs = None;
    }
    report
}

fn with_sides(report: IdentityReport, sides: &IdentitySides) -> IdentityReport {
    let (l, r) = (sides.lhs_terms(), sides.rhs_terms());
    let mut report = report;
    if l + r <= MAX_PRINTED_TERMS {
        report = report.sides((&sides.lhs, l), (&sides.rhs, r));
    } else {
        report.lhs_terms = Some(l);
        report.rhs_terms = Some(r);
    }
    report
}

/// Confirms an exact verdict at random rational points; every residual
/// must vanish for a pass.
fn confirm<R: ZeroTestable>(report: IdentityReport, residuals: &[R], cfg: &RunConfig) -> IdentityReport {
    let mut report = report;
    report.seed = Some(cfg.seed);
    let mut nonzero = None;
    for (i, r) in residuals.iter().enumerate() {
        match random_point_check(r, cfg.seed, cfg.trials) {
            Ok(z) => {
                if let ZeroTestOutcome::NonZero { trial } = z.outcome {
                    nonzero = Some((i, trial));
                    break;
                }
            }
            Err(e) => return report.note(format!("random-point: {e}")),
        }
    }
    let text = match nonzero {
        None => format!("random-point: probably zero ({} trials)", cfg.trials),
        Some((0, trial)) if residuals.len() == 1 => format!("random-point: nonzero at trial {trial}"),
        Some((i, trial)) => format!("random-point: residual {} nonzero at trial {trial}", i + 1),
    };
    report = report.note(text);
    if nonzero.is_none() != (report.status == Status::Pass) {
        report = report.error("exact and random-point verdicts disagree");
    }
    report
}

fn exact_report(check: CheckName, tau: &TauPoly) -> IdentityReport {
    let report = IdentityReport::new(check.name(), tau.label());
    if tau.is_certified() {
        report
    } else {
        report.note("tau is an uncertified candidate")
    }
}

fn sides_report(check: CheckName, tau: &TauPoly, sides: &IdentitySides, cfg: &RunConfig, start: Instant) -> IdentityReport {
    let residual = sides.residual();
    let report = with_sides(exact_report(check, tau).exact(residual.term_count()), sides);
    confirm(report, &[residual], cfg).elapsed(start.elapsed())
}

fn z_params(report: IdentityReport, zs: &[Var]) -> IdentityReport {
    let names: Vec<String> = zs.iter().map(|z| z.to_string()).collect();
    report.param("vars", names.join(","))
}

fn seventh_reference_notes(report: IdentityReport, tau: &TauPoly, sides: &IdentitySides, zs: [Var; 4]) -> IdentityReport {
    if tau.poly() != &Poly::var(Var::x()) {
        return report;
    }
    let cleared = Monomial::from_powers(zs.iter().map(|&z| (z, 1)));
    let Some(lhs) = sides.lhs.div_monomial(&cleared) else {
        return report.note("tau1 reference: sides not divisible by z1*z2*z3*z4");
    };
    let verdict = |ok: bool| if ok { "match" } else { "mismatch" };
    let symmetric = lhs == seventh_order_tau1_reference(zs, false);
    let odd = lhs == seventh_order_tau1_reference(zs, true);
    report
        .note(format!("tau1 reference with z1^2*z3^2*z4^2 term: {}", verdict(symmetric)))
        .note(format!(
            "tau1 reference with z1^2*z3^3*z4^2 term: {} (that term has odd total z-degree, every other term even)",
            verdict(odd)
        ))
}

fn run_exact(check: CheckName, tau: &TauPoly, cfg: &RunConfig) -> Result<Vec<IdentityReport>, ConfigError> {
    let zs = cfg.zs(check, cfg.variables_needed(check))?;
    let t = tau.poly();
    let start = Instant::now();
    let fail = |e: &dyn fmt::Display| vec![exact_report(check, tau).error(e).elapsed(start.elapsed())];
    let reports = match check {
        CheckName::Fay => match fay_residual(t, [zs[0], zs[1], zs[2], zs[3]]) {
            Ok(r) => {
                let report = z_params(exact_report(check, tau), &zs).exact(r.term_count());
                vec![confirm(report, &[r], cfg).elapsed(start.elapsed())]
            }
            Err(e) => fail(&e),
        },
        CheckName::DiffFay => match diff_fay_residual(t, zs[0], zs[1]) {
            Ok(r) => {
                let report = z_params(exact_report(check, tau), &zs).exact(r.term_count());
                vec![confirm(report, &[r], cfg).elapsed(start.elapsed())]
            }
            Err(e) => fail(&e),
        },
        CheckName::Lemma22 => (1..=8u8)
            .map(|v| {
                let start = Instant::now();
                match lemma22_sides(t, v, zs[0], zs[1]) {
                    Ok(s) => z_params(sides_report(check, tau, &s, cfg, start), &zs).param("variant", v),
                    Err(e) => exact_report(check, tau).param("variant", v).error(e),
                }
            })
            .collect(),
        CheckName::CubicI => match cubic_i_sides(t, zs[0], zs[1]) {
            Ok(s) => vec![z_params(sides_report(check, tau, &s, cfg, start), &zs)],
            Err(e) => fail(&e),
        },
        CheckName::CubicII => {
            let z = Var::z(cfg.cubic_z);
            let aux = [Var::z(u32::MAX - 1), Var::z(u32::MAX)];
            match (cubic_ii_sides(t, z), cubic_ii_from_limit(t, aux[0], aux[1], z)) {
                (Ok(s), Ok(limit)) => {
                    let mut report = sides_report(check, tau, &s, cfg, start).param("var", z);
                    if limit == s {
                        report = report.note("limit of the two-parameter identity: match");
                    } else {
                        report = report.error("limit of the two-parameter identity: mismatch");
                    }
                    vec![report]
                }
                (Err(e), _) | (_, Err(e)) => fail(&e),
            }
        }
        CheckName::Seventh => {
            let four = [zs[0], zs[1], zs[2], zs[3]];
            match seventh_order_sides(t, four) {
                Ok(s) => {
                    let report = z_params(sides_report(check, tau, &s, cfg, start), &zs);
                    vec![seventh_reference_notes(report, tau, &s, four)]
                }
                Err(e) => fail(&e),
            }
        }
        CheckName::Generated => {
            let outcome = generate_product_identity_with_limit(cfg.order, cfg.max_order)
                .and_then(|pair| VerifyOutcome::compare(&pair, t, &zs));
            match outcome {
                Ok(out) => {
                    let report = trim_sides(out.report(tau, &zs).param("order", cfg.order));
                    vec![confirm(report, &[out.residual()], cfg).elapsed(start.elapsed())]
                }
                Err(e) => vec![exact_report(check, tau).param("order", cfg.order).error(e)],
            }
        }
        CheckName::Lemma23 => Lemma23Variant::ALL
            .into_iter()
            .map(|v| {
                let start = Instant::now();
                let base = z_params(exact_report(check, tau), &zs).param("variant", v);
                match lemma23_residual(t, v, cfg.z_indices[0], cfg.z_indices[1]) {
                    Ok(out) => {
                        let residual = out.residual();
                        let mut report = base
                            .exact(residual.term_count())
                            .sides((&out.computed, 1), (&out.expected, 1));
                        report.lhs_terms = Some(out.computed.mantissa.numerator().term_count());
                        report.rhs_terms = Some(out.expected.mantissa.numerator().term_count());
                        if !out.keys_match() {
                            report.status = Status::Fail;
                            report = report.note("exponent keys differ");
                        }
                        confirm(report, &[residual], cfg).elapsed(start.elapsed())
                    }
                    Err(e) => base.error(e),
                }
            })
            .collect(),
        CheckName::Sturm => [false, true]
            .into_iter()
            .map(|star| {
                let start = Instant::now();
                let wave = if star { "psi*" } else { "psi" };
                let base = exact_report(check, tau).param("wave", wave).param("var", Var::w(cfg.z_indices[0]));
                match sturm_liouville_residual(t, cfg.z_indices[0], star) {
                    Ok(r) => confirm(base.exact(r.term_count()), &[r], cfg).elapsed(start.elapsed()),
                    Err(e) => base.error(e),
                }
            })
            .collect(),
        CheckName::Ft => match faddeev_takhtajan(t, cfg.z_indices[0], cfg.z_indices[1]) {
            Ok(ft) => {
                let report = trim_sides(ft.report(tau, cfg.z_indices[0], cfg.z_indices[1]));
                vec![confirm(report, &ft.residuals(), cfg).elapsed(start.elapsed())]
            }
            Err(e) => fail(&e),
        },
        _ => unreachable!("numeric checks are dispatched separately"),
    };
    Ok(reports)
}

fn run_numeric(check: SweepCheck, cfg: &RunConfig) -> Vec<IdentityReport> {
    let tolerance = cfg.numeric_tolerance(check);
    let qs: Vec<f64> = if check == SweepCheck::Sine { vec![0.0] } else { cfg.q_values.clone() };
    qs.into_iter()
        .map(|q| {
            let start = Instant::now();
            let mut report = IdentityReport::new(check.name(), "-");
            report.seed = Some(cfg.seed);
            report.label = check.label().map(str::to_string);
            let params = ThetaParams::with(
                ComplexVal::new(q, 0.0),
                Truncation::Tolerance(f64::EPSILON / 4.0),
                cfg.convention,
            );
            let params = match params {
                Ok(p) => p,
                Err(e) => return report.param("q", q).error(e),
            };
            let points = if check == SweepCheck::Sine { cfg.sine_points } else { cfg.theta_points };
            let rows = sweep(check, &params, points, cfg.seed);
            let worst = max_residual(&rows);
            report = report.numeric(worst, tolerance).param("points", points);
            if check != SweepCheck::Sine {
                report = report.param("q", q).param(
                    "convention",
                    match cfg.convention {
                        ThetaConvention::Mumford => "mumford",
                        ThetaConvention::Jacobi => "jacobi",
                    },
                );
            }
            if check == SweepCheck::ThetaDegenerate {
                let gaps = [1e-1, 1e-2, 1e-3, 1e-4];
                let c = |v: f64| ComplexVal::new(v, 0.0);
                if let Ok(errs) = theta_cubic_limit_gaps(c(0.31), c(0.23), &gaps, &params) {
                    let text: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
                    report = report.note(format!("two-parameter relation / gap at gaps 1e-1..1e-4: {}", text.join(", ")));
                }
            }
            report.rows = rows;
            report.elapsed(start.elapsed())
        })
        .collect()
}

/// Runs one named check against the configured tau.
pub fn run_check(check: CheckName, cfg: &RunConfig) -> Result<Vec<IdentityReport>, ConfigError> {
    if let Some(s) = check.sweep() {
        return Ok(run_numeric(s, cfg));
    }
    match cfg.load_tau()? {
        Ok(tau) => run_check_on(check, &tau, cfg),
        Err(message) => Ok(vec![IdentityReport::new(check.name(), "-").error(message)]),
    }
}

/// Runs one exact check against an explicit tau.
pub fn run_check_on(check: CheckName, tau: &TauPoly, cfg: &RunConfig) -> Result<Vec<IdentityReport>, ConfigError> {
    match check.sweep() {
        Some(s) => Ok(run_numeric(s, cfg)),
        None => run_exact(check, tau, cfg),
    }
}

fn pool(cfg: &RunConfig) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism.max(1))
        .build()
        .expect("thread pool")
}

/// Runs `checks` on `pool`, returning reports sorted by check, tau and parameters.
pub fn run_many(checks: &[CheckName], cfg: &RunConfig) -> Result<Vec<IdentityReport>, ConfigError> {
    let batches: Vec<Result<Vec<IdentityReport>, ConfigError>> =
        pool(cfg).install(|| checks.par_iter().map(|&c| run_check(c, cfg)).collect());
    let mut out = Vec::new();
    for b in batches {
        out.extend(b?);
    }
    out.sort_by_key(|r| r.sort_key());
    Ok(out)
}

/// Every exact check on staircase taus `1..=max_k` (or on the configured
/// tau file), plus the numeric sweeps.
pub fn report_suite(cfg: &RunConfig) -> Result<SuiteReport, ConfigError> {
    let taus: Vec<Result<TauPoly, String>> = match &cfg.tau {
        TauSelector::File(_) => vec![cfg.load_tau()?],
        TauSelector::Staircase(_) => (1..=cfg.max_k)
            .map(|k| staircase_tau(k).map_err(|e| e.to_string()))
            .collect(),
    };
    let mut jobs: Vec<(CheckName, Option<usize>)> = Vec::new();
    for check in CheckName::ALL {
        if check.is_exact() {
            jobs.extend((0..taus.len()).map(|i| (check, Some(i))));
        } else {
            jobs.push((check, None));
        }
    }
    let results: Vec<Result<Vec<IdentityReport>, ConfigError>> = pool(cfg).install(|| {
        jobs.par_iter()
            .map(|&(check, tau)| match tau {
                None => run_check_on(check, &TauPoly::candidate(Poly::one()), cfg),
                Some(i) => match &taus[i] {
                    Ok(t) => run_check_on(check, t, cfg),
                    Err(message) => Ok(vec![IdentityReport::new(check.name(), "-").error(message)]),
                },
            })
            .collect()
    });
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    Ok(SuiteReport::new(cfg.seed, cfg.max_k, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_roundtrip() {
        for c in CheckName::ALL {
            assert_eq!(c.name().parse::<CheckName>().unwrap(), c);
        }
        assert!("nope".parse::<CheckName>().is_err());
    }

    #[test]
    fn config_keys() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nseed = 9\nq = 0.1, 0.2\nformat = json\nz = 3,1\n").unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.q_values, vec![0.1, 0.2]);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.z_indices, vec![3, 1]);
        assert!(cfg.set("tolerance", "0").is_err());
        assert!(cfg.set("tau", "0").is_err());
        assert!(cfg.set("q", "1.5").is_err());
        assert!(cfg.set("z", "1,1").is_err());
        assert!(matches!(cfg.set("bogus", "1"), Err(ConfigError::UnknownKey(_))));
        cfg.apply_env("TAUFORGE_", vec![("TAUFORGE_SEED".to_string(), "11".to_string()), ("HOME".into(), "/".into())])
            .unwrap();
        assert_eq!(cfg.seed, 11);
    }

    #[test]
    fn cubic_ii_report_prints_sides() {
        let cfg = RunConfig::default();
        let r = run_check(CheckName::CubicII, &cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].passed(), "{}", r[0].summary());
        assert_eq!(r[0].lhs.as_deref(), Some("4*z^3"));
    }

    #[test]
    fn too_few_variables() {
        let mut cfg = RunConfig::default();
        cfg.set("z", "1,2").unwrap();
        assert!(matches!(run_check(CheckName::Fay, &cfg), Err(ConfigError::TooFewVariables { .. })));
    }
}
