//! Polynomial KdV tau functions: staircase Schur construction, Miwa shifts,
//! the KdV reduction test and the Fay residual.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{parse_poly, univariate_gcd, AlgebraError, Monomial, Var, VarKind};
use crate::{Poly, RatFun, Rational};

#[derive(Debug, Error)]
pub enum TauError {
    #[error("staircase index must be at least 1")]
    ZeroIndex,
    #[error("shift variable {0} already occurs in the tau function")]
    ShiftCollision(Var),
    #[error("construction depends on even time t{0}")]
    EvenTimeDependence(u32),
    #[error("Fay residual is nonzero ({0} terms)")]
    FayCertificationFailed(usize),
    #[error("tau function must not depend on {0}")]
    NonOddTimeVariable(Var),
    #[error("the zero polynomial is not a tau function")]
    ZeroTau,
    #[error("malformed tau header: {0}")]
    Header(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which way a Miwa shift goes: `t + [z]` or `t - [z]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftSign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftSpec {
    pub sign: ShiftSign,
    pub var: Var,
}

impl ShiftSpec {
    pub fn plus(var: Var) -> Self {
        ShiftSpec {
            sign: ShiftSign::Plus,
            var,
        }
    }

    pub fn minus(var: Var) -> Self {
        ShiftSpec {
            sign: ShiftSign::Minus,
            var,
        }
    }

    fn multiplicity(self) -> i64 {
        match self.sign {
            ShiftSign::Plus => 1,
            ShiftSign::Minus => -1,
        }
    }
}

/// Complete homogeneous polynomials `h_0 ..= h_max` in the times
/// `t_1 ..= t_cutoff`, from `exp(sum t_k z^k) = sum h_n z^n`.
///
/// Uses `n h_n = sum_{k=1}^{n} k t_k h_{n-k}`.
pub fn complete_homogeneous(max: usize, cutoff: u32) -> Vec<Poly> {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    let mut h = Vec::with_capacity(max + 1);
    h.push(Poly::one());
    for n in 1..=max {
        let mut acc = Poly::zero();
        for k in 1..=n.min(cutoff as usize) {
            let tk = Poly::var(Var::t(k as u32)).scale(&Rational::from_integer((k as i64).into()));
            acc = &acc + &(&tk * &h[n - k]);
        }
        h.push(acc.scale(&Rational::new(1.into(), (n as i64).into())));
    }
    h
}

/// `h_n` in `t_1 ..= t_cutoff`; zero for negative `n`.
pub fn elementary_schur(n: i64, cutoff: u32) -> Poly {
    if n < 0 {
        return Poly::zero();
    }
    complete_homogeneous(n as usize, cutoff).pop().expect("h_0 exists")
}

/// Schur polynomial of a partition via the Jacobi–Trudi determinant
/// `det(h_{lambda_i - i + j})`.
pub fn jacobi_trudi(partition: &[u32]) -> Poly {
    let len = partition.len();
    if len == 0 {
        return Poly::one();
    }
    let max_index = partition[0] as usize + len - 1;
    let h = complete_homogeneous(max_index, max_index.max(1) as u32);
    let entry = |i: usize, j: usize| -> Poly {
        let n = partition[i] as i64 - i as i64 + j as i64;
        if n < 0 {
            Poly::zero()
        } else {
            h[n as usize].clone()
        }
    };
    let matrix: Vec<Vec<Poly>> = (0..len).map(|i| (0..len).map(|j| entry(i, j)).collect()).collect();
    determinant(&matrix)
}

/// Laplace expansion over column subsets, row by row.
fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let mut minors: HashMap<u32, Poly> = HashMap::new();
    minors.insert(0, Poly::one());
    for row in m {
        let mut next = HashMap::new();
        for (&mask, minor) in &minors {
            if minor.is_zero() {
                continue;
            }
            for (col, entry) in row.iter().enumerate() {
                if mask & (1 << col) != 0 || entry.is_zero() {
                    continue;
                }
                // columns already used to the right of `col` give the sign
                let inversions = (mask >> (col + 1)).count_ones();
                let mut term = entry * minor;
                if inversions % 2 == 1 {
                    term = -term;
                }
                let slot = next.entry(mask | (1 << col)).or_insert_with(Poly::zero);
                *slot = &*slot + &term;
            }
        }
        minors = next;
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(Poly::zero)
}

/// Scales `p` to coprime integer coefficients with a positive leading
/// coefficient. Returns the scaled polynomial and the factor applied.
pub fn primitive_normalize(p: &Poly) -> (Poly, Rational) {
    if p.is_zero() {
        return (Poly::zero(), Rational::one());
    }
    let mut den_lcm = num_bigint::BigInt::one();
    let mut num_gcd = num_bigint::BigInt::zero();
    for (_, c) in p.terms() {
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(c.numer());
    }
    let mut factor = Rational::new(den_lcm, num_gcd);
    if p.leading_term().expect("nonzero").1.is_negative() {
        factor = -factor;
    }
    (p.scale(&factor), factor)
}

/// A polynomial in the odd times, optionally certified as a KdV tau function.
#[derive(Clone, Debug, PartialEq)]
pub struct TauPoly {
    poly: Poly,
    staircase_index: Option<u32>,
    normalization: Rational,
    certified: bool,
}

impl TauPoly {
    /// Wraps a polynomial without any checks; used for negative controls.
    pub fn candidate(poly: Poly) -> Self {
        TauPoly {
            poly,
            staircase_index: None,
            normalization: Rational::one(),
            certified: false,
        }
    }

    /// Accepts `poly` only if it lives on odd times and its Fay residual
    /// vanishes identically.
    pub fn certify(poly: Poly) -> Result<Self, TauError> {
        if poly.is_zero() {
            return Err(TauError::ZeroTau);
        }
        if let Some(v) = poly.variables().into_iter().find(|v| v.kind() != VarKind::OddTime) {
            return Err(if v.is_even_time() {
                TauError::EvenTimeDependence(v.index())
            } else {
                TauError::NonOddTimeVariable(v)
            });
        }
        let residual = fay_residual(&poly, default_fay_vars())?;
        if !residual.is_zero() {
            return Err(TauError::FayCertificationFailed(residual.term_count()));
        }
        Ok(TauPoly {
            poly,
            staircase_index: None,
            normalization: Rational::one(),
            certified: true,
        })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn staircase_index(&self) -> Option<u32> {
        self.staircase_index
    }

    pub fn normalization(&self) -> &Rational {
        &self.normalization
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self.staircase_index {
            Some(k) => format!("staircase-{k}"),
            None => self.poly.to_string(),
        }
    }

    /// Highest odd time the polynomial depends on (1 for constants).
    pub fn max_odd_time(&self) -> u32 {
        max_time_index(&self.poly)
    }

    /// Parses the serialized form: an optional `staircase k = <k>` header
    /// line followed by the polynomial. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, TauError> {
        let mut staircase = None;
        let mut body = String::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("staircase") {
                let k = rest
                    .trim()
                    .strip_prefix('k')
                    .and_then(|r| r.trim().strip_prefix('='))
                    .and_then(|r| r.trim().parse::<u32>().ok())
                    .ok_or_else(|| TauError::Header(line.to_string()))?;
                staircase = Some(k);
                continue;
            }
            body.push_str(line);
            body.push(' ');
        }
        let poly = parse_poly(&body)?;
        let mut tau = match TauPoly::certify(poly.clone()) {
            Ok(t) => t,
            Err(TauError::FayCertificationFailed(_)) | Err(TauError::NonOddTimeVariable(_))
            | Err(TauError::EvenTimeDependence(_)) => TauPoly::candidate(poly),
            Err(e) => return Err(e),
        };
        tau.staircase_index = staircase;
        Ok(tau)
    }
}

impl fmt::Display for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.staircase_index {
            writeln!(f, "staircase k = {k}")?;
        }
        write!(f, "{}", self.poly)
    }
}

fn max_time_index(p: &Poly) -> u32 {
    p.variables()
        .into_iter()
        .filter(|v| v.is_time())
        .map(|v| v.index())
        .max()
        .unwrap_or(1)
}

/// The staircase Schur polynomial of `(k, k-1, ..., 1)`, normalized to
/// coprime integer coefficients and certified.
pub fn staircase_tau(k: u32) -> Result<TauPoly, TauError> {
    if k == 0 {
        return Err(TauError::ZeroIndex);
    }
    let partition: Vec<u32> = (1..=k).rev().collect();
    let schur = jacobi_trudi(&partition);
    if let Some(v) = schur.variables().into_iter().find(|v| v.is_even_time()) {
        return Err(TauError::EvenTimeDependence(v.index()));
    }
    let (poly, normalization) = primitive_normalize(&schur);
    let mut tau = TauPoly::certify(poly)?;
    tau.staircase_index = Some(k);
    tau.normalization = normalization;
    Ok(tau)
}

/// Images `t_k -> t_k + sum_i m_i z_i^k / k` for every time in `tau`.
fn shift_images(tau: &Poly, shifts: &[(Var, i64)]) -> BTreeMap<Var, Poly> {
    let mut images = BTreeMap::new();
    for v in tau.variables().into_iter().filter(|v| v.is_time()) {
        let k = v.index();
        let mut image = Poly::var(v);
        for &(z, m) in shifts {
            if m == 0 {
                continue;
            }
            let c = Rational::new(m.into(), (k as i64).into());
            image = &image + &Poly::term(c, Monomial::power(z, k));
        }
        images.insert(v, image);
    }
    images
}

fn check_collision(tau: &Poly, shifts: &[(Var, i64)]) -> Result<(), TauError> {
    for &(z, _) in shifts {
        if tau.contains_var(z) || z.is_time() {
            return Err(TauError::ShiftCollision(z));
        }
    }
    Ok(())
}

/// `tau(t + sum_i m_i [z_i])` for integer multiplicities `m_i`.
///
/// The shift parameters may already occur in `tau` (so that a shift can be
/// undone), but they must not be time variables.
pub fn shifted(tau: &Poly, shifts: &[(Var, i64)]) -> Result<Poly, TauError> {
    if let Some(&(z, _)) = shifts.iter().find(|(z, _)| z.is_time()) {
        return Err(TauError::ShiftCollision(z));
    }
    Ok(tau.compose(&shift_images(tau, shifts)))
}

/// `tau(t + [z])` or `tau(t - [z])`.
pub fn miwa_shift(tau: &Poly, spec: ShiftSpec) -> Result<Poly, TauError> {
    shifted(tau, &[(spec.var, spec.multiplicity())])
}

/// Memoizing source of shifted copies of one tau function.
pub struct Shifter<'a> {
    tau: &'a Poly,
    cache: HashMap<Vec<(Var, i64)>, Poly>,
}

impl<'a> Shifter<'a> {
    /// Fails if any of `shift_vars` already occurs in `tau`.
    pub fn new(tau: &'a Poly, shift_vars: &[Var]) -> Result<Self, TauError> {
        let probe: Vec<(Var, i64)> = shift_vars.iter().map(|&v| (v, 1)).collect();
        check_collision(tau, &probe)?;
        Ok(Shifter {
            tau,
            cache: HashMap::new(),
        })
    }

    pub fn tau(&self) -> &Poly {
        self.tau
    }

    /// `tau(t + sum m_i [z_i])`; repeated variables add their multiplicities.
    pub fn at(&mut self, shifts: &[(Var, i64)]) -> Poly {
        let mut key: BTreeMap<Var, i64> = BTreeMap::new();
        for &(z, m) in shifts {
            *key.entry(z).or_insert(0) += m;
        }
        let key: Vec<(Var, i64)> = key.into_iter().filter(|&(_, m)| m != 0).collect();
        if key.is_empty() {
            return self.tau.clone();
        }
        if let Some(p) = self.cache.get(&key) {
            return p.clone();
        }
        let p = self.tau.compose(&shift_images(self.tau, &key));
        self.cache.insert(key, p.clone());
        p
    }
}

/// Outcome of the KdV reduction test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KdvReport {
    /// Smallest even time index with a nonzero derivative, if any.
    pub failing_even_index: Option<u32>,
    /// Whether `p(t - [z]) = p(t + [-z])` holds.
    pub evenness_holds: bool,
}

impl KdvReport {
    pub fn passes(&self) -> bool {
        self.failing_even_index.is_none() && self.evenness_holds
    }
}

/// Checks `d p / d t_{2k} = 0` for every even time and the evenness relation
/// `p(t - [z]) = p(t + [-z])`.
pub fn is_kdv_tau(p: &Poly) -> KdvReport {
    let failing_even_index = p
        .variables()
        .into_iter()
        .filter(|v| v.is_even_time())
        .find(|&v| !p.differentiate(v).is_zero())
        .map(Var::index);
    let z = fresh_shift_var(p);
    let minus = shifted(p, &[(z, -1)]).expect("fresh variable");
    let plus = shifted(p, &[(z, 1)]).expect("fresh variable");
    let reflected = plus.substitute(z, &-Poly::var(z));
    KdvReport {
        failing_even_index,
        evenness_holds: minus == reflected,
    }
}

fn fresh_shift_var(p: &Poly) -> Var {
    let next = p
        .variables()
        .into_iter()
        .filter(|v| v.kind() == VarKind::Shift)
        .map(|v| v.index() + 1)
        .max()
        .unwrap_or(1);
    Var::z(next)
}

/// Shift variables used by default for the four-point Fay identity.
pub fn default_fay_vars() -> [Var; 4] {
    [Var::z(1), Var::z(2), Var::z(3), Var::z(4)]
}

/// Left side of the Fay identity
/// `sum_cyclic (z0-z1)(z2-z3) tau(t+[z0]+[z1]) tau(t+[z2]+[z3])`.
pub fn fay_residual(tau: &Poly, zs: [Var; 4]) -> Result<Poly, TauError> {
    let [z0, z1, z2, z3] = zs;
    for i in 0..4 {
        for j in i + 1..4 {
            if zs[i] == zs[j] {
                return Err(TauError::ShiftCollision(zs[i]));
            }
        }
    }
    let mut sh = Shifter::new(tau, &zs)?;
    let diff = |a: Var, b: Var| &Poly::var(a) - &Poly::var(b);
    let mut total = Poly::zero();
    for (a, b, c, d) in [(z0, z1, z2, z3), (z0, z2, z3, z1), (z0, z3, z1, z2)] {
        let weight = &diff(a, b) * &diff(c, d);
        let pair = &sh.at(&[(a, 1), (b, 1)]) * &sh.at(&[(c, 1), (d, 1)]);
        total = &total + &(&weight * &pair);
    }
    Ok(total)
}

/// Result of probing a one-parameter family `tau_a` with the Fay identity.
#[derive(Clone, Debug)]
pub struct FayParameterAnalysis {
    pub residual: Poly,
    /// Monic gcd (in the parameter) of all coefficients of the residual; its
    /// roots are exactly the parameter values for which Fay holds.
    pub gcd: Poly,
    /// The single root when `gcd` is linear.
    pub root: Option<Rational>,
}

/// Finds the parameter values for which a family of candidates satisfies the
/// Fay identity.
pub fn fay_parameter_analysis(family: &Poly, param: Var) -> Result<FayParameterAnalysis, TauError> {
    let residual = fay_residual(family, default_fay_vars())?;
    let mut by_rest: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in residual.terms() {
        let (e, rest) = m.split_off(param);
        let slot = by_rest.entry(rest).or_insert_with(Poly::zero);
        *slot = &*slot + &Poly::term(c.clone(), Monomial::power(param, e));
    }
    let gcd = by_rest
        .values()
        .fold(Poly::zero(), |g, c| univariate_gcd(&g, c, param));
    let root = (gcd.degree_in(param) == 1).then(|| {
        let c0 = gcd.coeff(&Monomial::one());
        let c1 = gcd.coeff(&Monomial::var(param));
        -c0 / c1
    });
    Ok(FayParameterAnalysis {
        residual,
        gcd,
        root,
    })
}

/// The potential `u = 2 d^2/dx^2 ln tau = 2 (tau'' tau - tau'^2) / tau^2`.
pub fn u_potential(tau: &Poly) -> Result<RatFun, TauError> {
    if tau.is_zero() {
        return Err(TauError::ZeroTau);
    }
    let x = Var::x();
    let d1 = tau.differentiate(x);
    let d2 = d1.differentiate(x);
    let num = (&(&d2 * tau) - &(&d1 * &d1)).scale(&Rational::from_integer(2.into()));
    Ok(RatFun::new(num, tau.pow(2))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn complete_homogeneous_low_orders() {
        assert_eq!(elementary_schur(0, 3), Poly::one());
        assert_eq!(elementary_schur(1, 3), p("t1"));
        assert_eq!(elementary_schur(3, 3), p("1/6*t1^3 + t1*t2 + t3"));
        assert!(elementary_schur(-1, 3).is_zero());
    }

    #[test]
    fn small_staircase_taus() {
        assert_eq!(staircase_tau(1).unwrap().poly(), &p("t1"));
        let tau3 = staircase_tau(2).unwrap();
        assert_eq!(tau3.poly().to_string(), "t1^3 - 3*t3");
        assert_eq!(tau3.normalization(), &Rational::from_integer(3.into()));
        assert!(tau3.is_certified());
        assert!(matches!(staircase_tau(0), Err(TauError::ZeroIndex)));
    }

    #[test]
    fn staircase_weights() {
        for k in 1..=4u32 {
            let tau = staircase_tau(k).unwrap();
            let w = |v: Var| v.index() as i64;
            assert!(tau.poly().is_weighted_homogeneous(w));
            assert_eq!(tau.poly().weighted_degree(w), Some((k * (k + 1) / 2) as i64));
            assert!(tau.poly().variables().iter().all(|v| v.kind() == VarKind::OddTime));
        }
    }

    #[test]
    fn shifts() {
        let z = Var::z(0);
        assert_eq!(miwa_shift(&p("t1"), ShiftSpec::plus(z)).unwrap(), p("t1 + z"));
        assert_eq!(
            miwa_shift(&p("t1^3 - 3*t3"), ShiftSpec::plus(z)).unwrap(),
            p("t1^3 - 3*t3 + 3*t1^2*z + 3*t1*z^2")
        );
        let tau = staircase_tau(3).unwrap();
        let there = miwa_shift(tau.poly(), ShiftSpec::plus(z)).unwrap();
        let back = miwa_shift(&there, ShiftSpec::minus(z)).unwrap();
        assert_eq!(&back, tau.poly());
        assert!(matches!(
            miwa_shift(&p("t1"), ShiftSpec::plus(Var::t(3))),
            Err(TauError::ShiftCollision(_))
        ));
        assert!(matches!(
            Shifter::new(&p("t1 + z"), &[z]),
            Err(TauError::ShiftCollision(_))
        ));
    }

    #[test]
    fn kdv_reduction() {
        assert!(is_kdv_tau(&p("t1^3 - 3*t3")).passes());
        let r = is_kdv_tau(&p("t2"));
        assert_eq!(r.failing_even_index, Some(2));
        assert!(!r.passes());
        let h = complete_homogeneous(3, 3);
        let candidate = &(&h[2] * &h[1]) - &h[3];
        assert!(is_kdv_tau(&candidate).passes());
        assert_eq!(candidate, p("1/3*t1^3 - t3"));
    }

    #[test]
    fn fay_on_simple_inputs() {
        let zs = default_fay_vars();
        assert!(fay_residual(&Poly::one(), zs).unwrap().is_zero());
        assert!(fay_residual(&p("t1"), zs).unwrap().is_zero());
        assert!(fay_residual(&p("t1^3 - 3*t3"), zs).unwrap().is_zero());
        assert!(!fay_residual(&p("t1^3 - 2*t3"), zs).unwrap().is_zero());
    }

    #[test]
    fn fay_iff_parameter_three() {
        let a = Var::param(0);
        let analysis = fay_parameter_analysis(&p("t1^3 - a*t3"), a).unwrap();
        assert!(!analysis.residual.is_zero());
        assert_eq!(analysis.root, Some(Rational::from_integer(3.into())));
        assert_eq!(analysis.gcd, p("a - 3"));
    }

    #[test]
    fn potentials() {
        assert!(u_potential(&Poly::one()).unwrap().is_zero());
        assert_eq!(
            u_potential(&p("t1")).unwrap(),
            RatFun::new(p("-2"), p("t1^2")).unwrap()
        );
        assert_eq!(
            u_potential(&p("t1^3 - 3*t3")).unwrap(),
            RatFun::new(p("-6*t1^4 - 36*t1*t3"), p("(t1^3 - 3*t3)^2")).unwrap()
        );
        assert!(u_potential(&Poly::zero()).is_err());
    }

    #[test]
    fn serialization() {
        let tau = staircase_tau(2).unwrap();
        let text = tau.to_string();
        assert_eq!(text, "staircase k = 2\nt1^3 - 3*t3");
        let back = TauPoly::parse(&text).unwrap();
        assert_eq!(back.poly(), tau.poly());
        assert_eq!(back.staircase_index(), Some(2));
        let bad = TauPoly::parse("t1^3 - 2*t3\n").unwrap();
        assert!(!bad.is_certified());
        assert!(TauPoly::parse("staircase k = x\nt1").is_err());
    }
}
