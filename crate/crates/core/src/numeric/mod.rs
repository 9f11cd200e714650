//! Floating-point checks of the trigonometric and elliptic analogues of the
//! cubic identity, the genus-one theta Fay identity, and randomized zero
//! tests of exact residuals.
//!
//! `theta11(v) = 2 sum_{n>=0} (-1)^n q^((n+1/2)^2) sin((2n+1) s v)` where the
//! argument scale `s` is `pi` ([`ThetaConvention::Mumford`], the default) or
//! `1` ([`ThetaConvention::Jacobi`]). Every identity checked here is
//! invariant under that rescaling.

mod theta;

pub use theta::{theta11, theta11_prime, ThetaConvention, ThetaParams, Truncation, MAX_THETA_TERMS};
pub use zero_test::{random_point_check, random_point_check_mod, ZeroTestOutcome, ZeroTestReport, ZeroTestable};

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::report::SweepRow;

#[derive(Debug, Error, PartialEq)]
pub enum NumericError {
    #[error("nome must satisfy |q| < 1 (got |q| = {0})")]
    NomeOutOfRange(f64),
    #[error("non-finite input")]
    NonFinite,
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("theta series did not reach tolerance within {0} terms")]
    NotConverged(usize),
    #[error("degenerate point: every term is below the underflow threshold")]
    DegeneratePoint,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("all sampled points are singular")]
    AllPointsSingular,
    #[error("coefficient not reducible modulo the prime")]
    ModularReduction,
}

/// `|sum terms| / max |term|`; the terms are signed so that they sum to zero
/// when the identity holds.
pub fn relative_residual<T: Float>(terms: &[Complex<T>]) -> Result<T, NumericError> {
    let scale = terms.iter().map(|t| t.norm()).fold(T::zero(), T::max);
    if !scale.is_finite() {
        return Err(NumericError::NonFinite);
    }
    if scale < T::min_positive_value().sqrt() {
        return Err(NumericError::DegeneratePoint);
    }
    let sum = terms.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b);
    Ok(sum.norm() / scale)
}

/// The three signed products of the genus-one Fay identity.
pub fn theta_fay_g1_terms<T: Float + FloatConst>(
    x: Complex<T>,
    z: [Complex<T>; 4],
    params: &ThetaParams<T>,
) -> Result<[Complex<T>; 3], NumericError> {
    let th = |v| theta11(v, params);
    let [z0, z1, z2, z3] = z;
    Ok([
        th(z0 - z1)? * th(z2 - z3)? * th(x + z0 + z1)? * th(x + z2 + z3)?,
        th(z0 - z2)? * th(z3 - z1)? * th(x + z0 + z2)? * th(x + z3 + z1)?,
        th(z0 - z3)? * th(z1 - z2)? * th(x + z0 + z3)? * th(x + z1 + z2)?,
    ])
}

pub fn theta_fay_g1_residual<T: Float + FloatConst>(
    x: Complex<T>,
    z: [Complex<T>; 4],
    params: &ThetaParams<T>,
) -> Result<T, NumericError> {
    relative_residual(&theta_fay_g1_terms(x, z, params)?)
}

/// Signed terms `[L1, -L2, -R1, R2]` of the cubic theta relation
/// `th(z2-z1)[L1' - L2'] = th(z1+z2)[R1' - R2']`.
pub fn theta_cubic_terms<T: Float + FloatConst>(
    x: Complex<T>,
    z1: Complex<T>,
    z2: Complex<T>,
    params: &ThetaParams<T>,
) -> Result<[Complex<T>; 4], NumericError> {
    let th = |v| theta11(v, params);
    let left = th(z2 - z1)?;
    let right = th(z1 + z2)?;
    Ok([
        left * th(x + z1 + z2)? * th(x - z1)? * th(x - z2)?,
        -left * th(x - z1 - z2)? * th(x + z1)? * th(x + z2)?,
        -right * th(x + z1 - z2)? * th(x - z1)? * th(x + z2)?,
        right * th(x - z1 + z2)? * th(x + z1)? * th(x - z2)?,
    ])
}

pub fn theta_cubic_residual<T: Float + FloatConst>(
    x: Complex<T>,
    z1: Complex<T>,
    z2: Complex<T>,
    params: &ThetaParams<T>,
) -> Result<T, NumericError> {
    relative_residual(&theta_cubic_terms(x, z1, z2, params)?)
}

/// Signed terms of the one-parameter elliptic relation
/// `th'(0)[th(x+2z) th(x-z)^2 - th(x-2z) th(x+z)^2]
///   = th(2z)[th(x-z) W(th(x), th(x+z)) + th(x+z) W(th(x), th(x-z))]`.
pub fn theta_cubic_degenerate_terms<T: Float + FloatConst>(
    x: Complex<T>,
    z: Complex<T>,
    params: &ThetaParams<T>,
) -> Result<[Complex<T>; 4], NumericError> {
    let th = |v| theta11(v, params);
    let dth = |v| theta11_prime(v, params);
    let zero = Complex::new(T::zero(), T::zero());
    let two = T::one() + T::one();
    let (t0, d0) = (th(x)?, dth(x)?);
    let wr = |v: Complex<T>| -> Result<Complex<T>, NumericError> { Ok(t0 * dth(v)? - d0 * th(v)?) };
    let (plus, minus) = (th(x + z)?, th(x - z)?);
    let slope = dth(zero)?;
    let double = th(z * two)?;
    Ok([
        slope * th(x + z * two)? * minus * minus,
        -slope * th(x - z * two)? * plus * plus,
        -double * minus * wr(x + z)?,
        -double * plus * wr(x - z)?,
    ])
}

pub fn theta_cubic_degenerate_residual<T: Float + FloatConst>(
    x: Complex<T>,
    z: Complex<T>,
    params: &ThetaParams<T>,
) -> Result<T, NumericError> {
    relative_residual(&theta_cubic_degenerate_terms(x, z, params)?)
}

/// Distance between the two-parameter relation divided by the gap `h` at
/// `(z, z + h)` and the one-parameter relation at `z`, side by side, relative
/// to the largest one-parameter term. Tends to zero linearly in `h`.
pub fn theta_cubic_limit_gaps<T: Float + FloatConst>(
    x: Complex<T>,
    z: Complex<T>,
    gaps: &[T],
    params: &ThetaParams<T>,
) -> Result<Vec<T>, NumericError> {
    let d = theta_cubic_degenerate_terms(x, z, params)?;
    let scale = d.iter().map(|t| t.norm()).fold(T::zero(), T::max);
    if scale < T::min_positive_value().sqrt() {
        return Err(NumericError::DegeneratePoint);
    }
    gaps.iter()
        .map(|&h| {
            let c = theta_cubic_terms(x, z, z + Complex::new(h, T::zero()), params)?;
            let lhs = (c[0] + c[1]) / h - (d[0] + d[1]);
            // c[2] + c[3] is minus the right side; d[2] + d[3] likewise.
            let rhs = (c[2] + c[3]) / h - (d[2] + d[3]);
            Ok(lhs.norm().max(rhs.norm()) / scale)
        })
        .collect()
}

/// `|LHS - RHS|` of the trigonometric cubic identity.
pub fn sine_cubic_residual<T: Float>(x: T, z1: T, z2: T) -> T {
    let s = |v: T| v.sin();
    let lhs = s(z2 - z1) * (s(x + z1 + z2) * s(x - z1) * s(x - z2) - s(x - z1 - z2) * s(x + z1) * s(x + z2));
    let rhs = s(z1 + z2) * (s(x + z1 - z2) * s(x - z1) * s(x + z2) - s(x - z1 + z2) * s(x + z1) * s(x - z2));
    (lhs - rhs).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepCheck {
    ThetaFay,
    ThetaCubic,
    ThetaDegenerate,
    Sine,
}

impl SweepCheck {
    pub fn name(self) -> &'static str {
        match self {
            SweepCheck::ThetaFay => "theta-fay",
            SweepCheck::ThetaCubic => "theta-cubic",
            SweepCheck::ThetaDegenerate => "theta-degenerate",
            SweepCheck::Sine => "sine",
        }
    }

    /// Report label for relations that are checked numerically only.
    pub fn label(self) -> Option<&'static str> {
        match self {
            SweepCheck::ThetaCubic | SweepCheck::ThetaDegenerate => Some("conjecture-check"),
            _ => None,
        }
    }

    /// Real coordinates per sample point.
    pub fn arity(self) -> usize {
        match self {
            SweepCheck::ThetaFay => 5,
            SweepCheck::ThetaCubic | SweepCheck::Sine => 3,
            SweepCheck::ThetaDegenerate => 2,
        }
    }

    /// Coordinates are uniform in `(-pi, pi)` for the sine identity and in
    /// `[0, 1)` for the theta relations.
    fn sample(self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let range = match self {
            SweepCheck::Sine => -std::f64::consts::PI..std::f64::consts::PI,
            _ => 0.0..1.0,
        };
        (0..self.arity()).map(|_| rng.gen_range(range.clone())).collect()
    }

    fn evaluate(self, p: &[f64], params: &ThetaParams<f64>) -> Result<f64, NumericError> {
        let c = |v: f64| Complex::new(v, 0.0);
        match self {
            SweepCheck::ThetaFay => theta_fay_g1_residual(c(p[0]), [c(p[1]), c(p[2]), c(p[3]), c(p[4])], params),
            SweepCheck::ThetaCubic => theta_cubic_residual(c(p[0]), c(p[1]), c(p[2]), params),
            SweepCheck::ThetaDegenerate => theta_cubic_degenerate_residual(c(p[0]), c(p[1]), params),
            SweepCheck::Sine => Ok(sine_cubic_residual(p[0], p[1], p[2])),
        }
    }
}

/// Evaluates `check` at `points` seeded pseudorandom points. Rows come back
/// in sampling order regardless of how the work is scheduled; a point where
/// evaluation fails yields a `NaN` residual.
pub fn sweep(check: SweepCheck, params: &ThetaParams<f64>, points: usize, seed: u64) -> Vec<SweepRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<f64>> = (0..points).map(|_| check.sample(&mut rng)).collect();
    let q = if check == SweepCheck::Sine { 0.0 } else { params.q().re };
    samples
        .into_par_iter()
        .map(|point| {
            let residual = check.evaluate(&point, params).unwrap_or(f64::NAN);
            SweepRow {
                check: check.name().to_string(),
                q,
                point,
                residual,
            }
        })
        .collect()
}

/// Largest residual, `NaN` if any residual is `NaN`.
pub fn max_residual(rows: &[SweepRow]) -> f64 {
    rows.iter().fold(0.0, |acc: f64, r| {
        if acc.is_nan() || r.residual.is_nan() {
            f64::NAN
        } else {
            acc.max(r.residual)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ComplexVal;

    fn c(re: f64) -> ComplexVal {
        ComplexVal::new(re, 0.0)
    }

    fn params(q: f64) -> ThetaParams<f64> {
        ThetaParams::new(c(q)).unwrap()
    }

    #[test]
    fn sine_identity() {
        assert_eq!(sine_cubic_residual(0.0, 0.0, 0.0), 0.0);
        assert!(sine_cubic_residual(std::f64::consts::FRAC_PI_4, 0.3, 0.7) < 1e-12);
    }

    #[test]
    fn fay_at_sample_points() {
        let p = params(0.1);
        let r = theta_fay_g1_residual(c(0.37), [c(0.11), c(0.52), c(0.83), c(0.29)], &p).unwrap();
        assert!(r < 1e-10, "{r}");
        let r = theta_fay_g1_residual(c(0.37), [c(0.4), c(0.4), c(0.83), c(0.29)], &p).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn cubic_and_degenerate() {
        let p = params(0.1);
        assert!(theta_cubic_residual(c(0.31), c(0.17), c(0.62), &p).unwrap() < 1e-9);
        assert!(theta_cubic_residual(c(0.31), c(0.4), c(0.4), &p).unwrap() < 1e-9);
        assert!(theta_cubic_degenerate_residual(c(0.31), c(0.23), &p).unwrap() < 1e-8);
        assert_eq!(theta_cubic_degenerate_residual(c(0.31), c(0.0), &p).unwrap(), 0.0);
    }

    #[test]
    fn perturbed_sign_is_detected() {
        let p = params(0.1);
        let mut terms = theta_cubic_terms(c(0.31), c(0.17), c(0.62), &p).unwrap();
        terms[1] = -terms[1];
        assert!(relative_residual(&terms).unwrap() > 1e-2);
    }

    #[test]
    fn limit_converges_linearly() {
        let p = params(0.1);
        let gaps = [1e-1, 1e-2, 1e-3, 1e-4];
        let errs = theta_cubic_limit_gaps(c(0.31), c(0.23), &gaps, &p).unwrap();
        for w in errs.windows(2) {
            assert!(w[1] < w[0] * 0.2, "{errs:?}");
        }
        assert!(errs[3] < 1e-3);
    }

    #[test]
    fn degenerate_point() {
        let p = params(0.1);
        let r = theta_fay_g1_residual(c(0.0), [c(0.0); 4], &p);
        assert_eq!(r, Err(NumericError::DegeneratePoint));
    }

    #[test]
    fn sweeps_are_seeded() {
        let p = params(0.3);
        let a = sweep(SweepCheck::ThetaFay, &p, 10, 7);
        let b = sweep(SweepCheck::ThetaFay, &p, 10, 7);
        assert_eq!(a, b);
        assert!(max_residual(&a) < 1e-9);
        assert_ne!(a, sweep(SweepCheck::ThetaFay, &p, 10, 8));
        let rows = vec![
            SweepRow { check: "x".into(), q: 0.0, point: vec![], residual: 1.0 },
            SweepRow { check: "x".into(), q: 0.0, point: vec![], residual: f64::NAN },
        ];
        assert!(max_residual(&rows).is_nan());
    }
}
