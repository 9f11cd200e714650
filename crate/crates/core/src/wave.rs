//! Wave functions `psi = exp(E(z)) tau(t - [1/z]) / tau(t)` and
//! `psi* = exp(-E(z)) tau(t + [1/z]) / tau(t)` with `E(z) = sum_k t_{2k+1} z^{2k+1}`.
//!
//! The exponential is never expanded: an [`ExpTauFunction`] is a formal
//! exponent key times a rational mantissa in the times and `w_i = 1/z_i`.
//! The x-derivative of the key `sum e_i E(z_i)` is `sum e_i z_i = sum e_i / w_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::algebra::{AlgebraError, Var};
use crate::report::IdentityReport;
use crate::tau::{u_potential, Shifter, TauError, TauPoly};
use crate::{Poly, RatFun, Rational};

#[derive(Debug, Error)]
pub enum WaveError {
    #[error("invalid variant `{0}` (expected i, ii, iii or iv)")]
    InvalidVariant(String),
    #[error("degenerate spectral pair: the two spectral parameters coincide")]
    DegenerateSpectralPair,
    #[error("tau must be nonzero")]
    ZeroTau,
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Formal exponent `sum_i e_i E(z_i)`, with `E` truncated at `t_support`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExpKey {
    exponents: BTreeMap<u32, i64>,
    support: u32,
}

impl ExpKey {
    pub fn zero() -> Self {
        ExpKey::default()
    }

    pub fn single(index: u32, e: i64, support: u32) -> Self {
        let mut exponents = BTreeMap::new();
        if e != 0 {
            exponents.insert(index, e);
        }
        ExpKey { exponents, support }
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, index: u32) -> i64 {
        self.exponents.get(&index).copied().unwrap_or(0)
    }

    /// Largest odd time kept in `E`.
    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn add(&self, other: &ExpKey) -> ExpKey {
        let mut exponents = self.exponents.clone();
        for (&i, &e) in &other.exponents {
            let slot = exponents.entry(i).or_insert(0);
            *slot += e;
            if *slot == 0 {
                exponents.remove(&i);
            }
        }
        ExpKey {
            exponents,
            support: self.support.max(other.support),
        }
    }

    pub fn neg(&self) -> ExpKey {
        ExpKey {
            exponents: self.exponents.iter().map(|(&i, &e)| (i, -e)).collect(),
            support: self.support,
        }
    }

    /// `sum_i e_i sum_{j odd <= support} t_j z_i^j` as a polynomial.
    pub fn expanded(&self) -> Poly {
        let mut acc = Poly::zero();
        for (&i, &e) in &self.exponents {
            for j in (1..=self.support.max(1)).step_by(2) {
                let term = &Poly::var(Var::t(j)) * &Poly::var(Var::z(i)).pow(j);
                acc = &acc + &term.scale(&Rational::from_integer(e.into()));
            }
        }
        acc
    }

    /// `d/dx` of the exponent: `sum_i e_i / w_i`.
    pub fn x_derivative(&self) -> RatFun {
        self.exponents.iter().fold(RatFun::zero(), |acc, (&i, &e)| {
            &acc + &RatFun::inverse_var(Var::w(i)).scale(&Rational::from_integer(e.into()))
        })
    }
}

impl fmt::Display for ExpKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|(i, e)| format!("{i}:{e}")).collect();
        write!(f, "exp[{}]", parts.join(","))
    }
}

/// `exp(key) * mantissa`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTauFunction {
    pub key: ExpKey,
    pub mantissa: RatFun,
}

impl ExpTauFunction {
    pub fn mul(&self, other: &Self) -> Self {
        ExpTauFunction {
            key: self.key.add(&other.key),
            mantissa: &self.mantissa * &other.mantissa,
        }
    }

    pub fn derivative_x(&self) -> Self {
        let m = &self.mantissa.differentiate(Var::x()) + &(&self.key.x_derivative() * &self.mantissa);
        ExpTauFunction {
            key: self.key.clone(),
            mantissa: m,
        }
    }

    pub fn scale(&self, c: &RatFun) -> Self {
        ExpTauFunction {
            key: self.key.clone(),
            mantissa: c * &self.mantissa,
        }
    }
}

impl fmt::Display for ExpTauFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * ({})/({})",
            self.key,
            self.mantissa.numerator(),
            self.mantissa.denominator()
        )
    }
}

fn support_of(tau: &Poly) -> u32 {
    tau.variables()
        .into_iter()
        .filter(|v| v.is_time())
        .map(|v| v.index())
        .max()
        .unwrap_or(1)
}

/// `psi(t, z_i)` (`star = false`) or `psi*(t, z_i)` (`star = true`).
pub fn make_wave(tau: &Poly, i: u32, star: bool) -> Result<ExpTauFunction, WaveError> {
    if tau.is_zero() {
        return Err(WaveError::ZeroTau);
    }
    let w = Var::w(i);
    let mut sh = Shifter::new(tau, &[w])?;
    let (e, shift) = if star { (-1, 1) } else { (1, -1) };
    Ok(ExpTauFunction {
        key: ExpKey::single(i, e, support_of(tau)),
        mantissa: RatFun::new(sh.at(&[(w, shift)]), tau.clone())?,
    })
}

/// `W(e^A a, e^B b) = e^(A+B) [W(a, b) + (B' - A') a b]`.
pub fn wave_wronskian(a: &ExpTauFunction, b: &ExpTauFunction) -> ExpTauFunction {
    let x = Var::x();
    let drift = &b.key.x_derivative() - &a.key.x_derivative();
    let mantissa = &a.mantissa.wronskian(&b.mantissa, x) + &(&drift * &(&a.mantissa * &b.mantissa));
    ExpTauFunction {
        key: a.key.add(&b.key),
        mantissa,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lemma23Variant {
    /// `W(psi_1, psi_2)`
    I,
    /// `W(psi*_1, psi*_2)`
    II,
    /// `W(psi_1, psi*_2)`
    III,
    /// `W(psi*_1, psi_2)`
    IV,
}

impl Lemma23Variant {
    pub const ALL: [Lemma23Variant; 4] = [Self::I, Self::II, Self::III, Self::IV];

    /// Whether the first and second arguments are starred.
    pub fn stars(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::II => (true, true),
            Self::III => (false, true),
            Self::IV => (true, false),
        }
    }

    /// Coefficients `(c1, c2)` of the prefactor `c1 z1 + c2 z2` in the closed
    /// form, for `W(f, g) = f g' - f' g`.
    fn prefactor(self) -> (i64, i64) {
        match self {
            Self::I => (-1, 1),
            Self::II => (1, -1),
            Self::III => (-1, -1),
            Self::IV => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::I => "i",
            Self::II => "ii",
            Self::III => "iii",
            Self::IV => "iv",
        }
    }
}

impl fmt::Display for Lemma23Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma23Variant {
    type Err = WaveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Self::I),
            "ii" | "2" => Ok(Self::II),
            "iii" | "3" => Ok(Self::III),
            "iv" | "4" => Ok(Self::IV),
            _ => Err(WaveError::InvalidVariant(s.to_string())),
        }
    }
}

/// Closed form of the two-wave Wronskian:
/// `(c1 z_a + c2 z_b) exp(e_a E(z_a) + e_b E(z_b)) tau(t + s_a [w_a] + s_b [w_b]) / tau(t)`
/// where `e = +1, s = -1` for `psi` and `e = -1, s = +1` for `psi*`.
pub fn lemma23_closed_form(tau: &Poly, variant: Lemma23Variant, a: u32, b: u32) -> Result<ExpTauFunction, WaveError> {
    if a == b {
        return Err(WaveError::DegenerateSpectralPair);
    }
    let (wa, wb) = (Var::w(a), Var::w(b));
    let mut sh = Shifter::new(tau, &[wa, wb])?;
    let (star_a, star_b) = variant.stars();
    let sign = |star: bool| if star { 1 } else { -1 };
    let support = support_of(tau);
    let key = ExpKey::single(a, -sign(star_a), support).add(&ExpKey::single(b, -sign(star_b), support));
    let (c1, c2) = variant.prefactor();
    let prefactor = &RatFun::inverse_var(wa).scale(&Rational::from_integer(c1.into()))
        + &RatFun::inverse_var(wb).scale(&Rational::from_integer(c2.into()));
    let shifted = sh.at(&[(wa, sign(star_a)), (wb, sign(star_b))]);
    Ok(ExpTauFunction {
        key,
        mantissa: &prefactor * &RatFun::new(shifted, tau.clone())?,
    })
}

/// The closed form with the opposite overall sign, which is what holds
/// under the convention `W(f, g) = f' g - f g'`.
pub fn lemma23_opposite_convention(tau: &Poly, variant: Lemma23Variant, a: u32, b: u32) -> Result<ExpTauFunction, WaveError> {
    let f = lemma23_closed_form(tau, variant, a, b)?;
    Ok(ExpTauFunction {
        key: f.key,
        mantissa: -&f.mantissa,
    })
}

/// Wronskian of the two wave functions selected by `variant`.
pub fn lemma23_wronskian(tau: &Poly, variant: Lemma23Variant, a: u32, b: u32) -> Result<ExpTauFunction, WaveError> {
    if a == b {
        return Err(WaveError::DegenerateSpectralPair);
    }
    let (star_a, star_b) = variant.stars();
    Ok(wave_wronskian(&make_wave(tau, a, star_a)?, &make_wave(tau, b, star_b)?))
}

/// Computed Wronskian against its closed form.
#[derive(Clone, Debug)]
pub struct Lemma23Outcome {
    pub computed: ExpTauFunction,
    pub expected: ExpTauFunction,
}

impl Lemma23Outcome {
    pub fn keys_match(&self) -> bool {
        self.computed.key == self.expected.key
    }

    pub fn mantissas_match(&self) -> bool {
        self.computed.mantissa == self.expected.mantissa
    }

    pub fn passes(&self) -> bool {
        self.keys_match() && self.mantissas_match()
    }

    /// Numerator of the mantissa difference; zero iff the mantissas agree.
    pub fn residual(&self) -> Poly {
        (&self.computed.mantissa - &self.expected.mantissa).numerator().clone()
    }
}

pub fn lemma23_residual(tau: &Poly, variant: Lemma23Variant, a: u32, b: u32) -> Result<Lemma23Outcome, WaveError> {
    Ok(Lemma23Outcome {
        computed: lemma23_wronskian(tau, variant, a, b)?,
        expected: lemma23_closed_form(tau, variant, a, b)?,
    })
}

/// Numerator of `m'' + (2 sigma / w) m' + u m` for the mantissa `m` of
/// `psi` (`sigma = +1`) or `psi*` (`sigma = -1`); this is
/// `e^(-sigma E) (d^2/dx^2 + u - z^2) e^(sigma E) m`.
pub fn sturm_liouville_residual(tau: &Poly, i: u32, star: bool) -> Result<Poly, WaveError> {
    let wave = make_wave(tau, i, star)?;
    let x = Var::x();
    let m = &wave.mantissa;
    let d1 = m.differentiate(x);
    let d2 = d1.differentiate(x);
    let sigma = if star { -2 } else { 2 };
    let drift = RatFun::inverse_var(Var::w(i)).scale(&Rational::from_integer(sigma.into()));
    let u = u_potential(tau)?;
    let total = &(&d2 + &(&drift * &d1)) + &(&u * m);
    Ok(total.numerator().clone())
}

/// The three squared-solution Wronskians and their closed form, all with
/// zero exponent key.
#[derive(Clone, Debug)]
pub struct FaddeevTakhtajan {
    /// `W(psi_1 psi*_1, psi_2 psi*_2)`
    pub w: RatFun,
    /// `-(z1^2 - z2^2)^-1 d/dx [W(psi_1, psi_2) W(psi*_1, psi*_2)]`
    pub w1: RatFun,
    /// `-(z1^2 - z2^2)^-1 d/dx [W(psi_1, psi*_2) W(psi*_1, psi_2)]`
    pub w2: RatFun,
    /// `(z2 - z1) tau^-3 [tau(-1-2) tau(+1) tau(+2) - tau(+1+2) tau(-1) tau(-2)]`
    pub closed: RatFun,
}

impl FaddeevTakhtajan {
    pub fn all_equal(&self) -> bool {
        self.w == self.w1 && self.w == self.w2
    }

    pub fn matches_closed_form(&self) -> bool {
        self.w == self.closed
    }
}

fn zero_key(f: &ExpTauFunction) -> RatFun {
    assert!(f.key.is_zero(), "squared-solution products carry no exponential");
    f.mantissa.clone()
}

pub fn faddeev_takhtajan(tau: &Poly, a: u32, b: u32) -> Result<FaddeevTakhtajan, WaveError> {
    if a == b {
        return Err(WaveError::DegenerateSpectralPair);
    }
    let psi1 = make_wave(tau, a, false)?;
    let psi1s = make_wave(tau, a, true)?;
    let psi2 = make_wave(tau, b, false)?;
    let psi2s = make_wave(tau, b, true)?;
    let w = zero_key(&wave_wronskian(&psi1.mul(&psi1s), &psi2.mul(&psi2s)));

    // -(z1^2 - z2^2)^-1 = w1^2 w2^2 / (w1^2 - w2^2)
    let (wa, wb) = (Poly::var(Var::w(a)), Poly::var(Var::w(b)));
    let spectral = RatFun::new(&wa.pow(2) * &wb.pow(2), &wa.pow(2) - &wb.pow(2))?;
    let squared = |f: &ExpTauFunction, g: &ExpTauFunction, h: &ExpTauFunction, k: &ExpTauFunction| {
        let product = wave_wronskian(f, g).mul(&wave_wronskian(h, k));
        zero_key(&product.derivative_x().scale(&spectral))
    };
    let w1 = squared(&psi1, &psi2, &psi1s, &psi2s);
    let w2 = squared(&psi1, &psi2s, &psi1s, &psi2);

    let (va, vb) = (Var::w(a), Var::w(b));
    let mut sh = Shifter::new(tau, &[va, vb])?;
    let bracket = &(&(&sh.at(&[(va, -1), (vb, -1)]) * &sh.at(&[(va, 1)])) * &sh.at(&[(vb, 1)]))
        - &(&(&sh.at(&[(va, 1), (vb, 1)]) * &sh.at(&[(va, -1)])) * &sh.at(&[(vb, -1)]));
    let z_diff = &RatFun::inverse_var(vb) - &RatFun::inverse_var(va);
    let closed = &z_diff * &RatFun::new(bracket, tau.pow(3))?;
    Ok(FaddeevTakhtajan { w, w1, w2, closed })
}

impl FaddeevTakhtajan {
    /// `W - W1`, `W - W2` and `W - closed`.
    pub fn residuals(&self) -> [RatFun; 3] {
        [&self.w - &self.w1, &self.w - &self.w2, &self.w - &self.closed]
    }

    /// Report form: passes iff the three quantities coincide and equal the
    /// closed form.
    pub fn report(&self, tau: &TauPoly, a: u32, b: u32) -> IdentityReport {
        let [r1, r2, r3] = self.residuals().map(|r| r.numerator().term_count());
        IdentityReport::new("ft", tau.label())
            .param("z1", Var::z(a))
            .param("z2", Var::z(b))
            .exact(r1 + r2 + r3)
            .sides(
                (&self.w, self.w.numerator().term_count()),
                (&self.w1, self.w1.numerator().term_count()),
            )
            .note(format!("W - W1 residual terms: {r1}"))
            .note(format!("W - W2 residual terms: {r2}"))
            .note(format!("W - closed form residual terms: {r3}"))
    }
}

pub fn faddeev_takhtajan_check(tau: &TauPoly, a: u32, b: u32) -> Result<IdentityReport, WaveError> {
    let start = Instant::now();
    let ft = faddeev_takhtajan(tau.poly(), a, b)?;
    Ok(ft.report(tau, a, b).elapsed(start.elapsed()))
}
