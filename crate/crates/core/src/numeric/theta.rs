use num_complex::Complex;
use num_traits::{Float, FloatConst};

use super::NumericError;

/// Hard cap on series length.
pub const MAX_THETA_TERMS: usize = 10_000;

/// Scale `s` of the argument in `sin((2n+1) s v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ThetaConvention {
    /// `s = pi`: period 1 in `v`.
    #[default]
    Mumford,
    /// `s = 1`: period `pi` in `v`.
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation<T> {
    /// Exactly this many terms.
    Terms(usize),
    /// Sum until the tail bound falls below this fraction of `2 |q|^(1/4)`.
    Tolerance(T),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParams<T> {
    q: Complex<T>,
    truncation: Truncation<T>,
    convention: ThetaConvention,
}

impl<T: Float + FloatConst> ThetaParams<T> {
    /// Nome `q` with a tail tolerance of a quarter ulp and the default convention.
    pub fn new(q: Complex<T>) -> Result<Self, NumericError> {
        let quarter = T::from(0.25).expect("float constant");
        Self::with(q, Truncation::Tolerance(T::epsilon() * quarter), ThetaConvention::default())
    }

    pub fn with(q: Complex<T>, truncation: Truncation<T>, convention: ThetaConvention) -> Result<Self, NumericError> {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(NumericError::NonFinite);
        }
        let modulus = q.norm();
        if modulus >= T::one() {
            return Err(NumericError::NomeOutOfRange(modulus.to_f64().unwrap_or(f64::INFINITY)));
        }
        match truncation {
            Truncation::Terms(0) => return Err(NumericError::InvalidTruncation("zero terms".into())),
            Truncation::Tolerance(t) if !(t > T::zero() && t.is_finite()) => {
                return Err(NumericError::InvalidTruncation("tolerance must be positive".into()))
            }
            _ => {}
        }
        Ok(ThetaParams { q, truncation, convention })
    }

    pub fn q(&self) -> Complex<T> {
        self.q
    }

    pub fn truncation(&self) -> Truncation<T> {
        self.truncation
    }

    pub fn convention(&self) -> ThetaConvention {
        self.convention
    }

    pub fn with_convention(mut self, convention: ThetaConvention) -> Self {
        self.convention = convention;
        self
    }

    fn scale(&self) -> T {
        match self.convention {
            ThetaConvention::Mumford => T::PI(),
            ThetaConvention::Jacobi => T::one(),
        }
    }
}

fn series<T: Float + FloatConst>(v: Complex<T>, params: &ThetaParams<T>, derivative: bool) -> Result<Complex<T>, NumericError> {
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(NumericError::NonFinite);
    }
    let zero = Complex::new(T::zero(), T::zero());
    let q = params.q;
    if q == zero {
        return Ok(zero);
    }
    let one = T::one();
    let two = one + one;
    let half = T::from(0.5).expect("float constant");
    let s = params.scale();
    let y = v.im.abs() * s;
    let aq = q.norm();
    let q2 = q * q;
    // q^(n(n+1)) and q^(2(n+1)) at n = 0
    let mut power = Complex::new(one, T::zero());
    let mut step = q2;
    let mut sum = zero;
    let mut n = 0usize;
    loop {
        let k = T::from(2 * n + 1).expect("term index");
        let arg = v * (k * s);
        let term = if derivative { arg.cos() * (k * s) } else { arg.sin() };
        let signed = power * term;
        sum = if n.is_multiple_of(2) { sum + signed } else { sum - signed };
        n += 1;
        match params.truncation {
            Truncation::Terms(count) => {
                if n >= count {
                    break;
                }
            }
            Truncation::Tolerance(tol) => {
                // Bound on the next term, without the common 2|q|^(1/4):
                // |q|^(n(n+1)) cosh((2n+1) y) [(2n+1) s].
                let nf = T::from(n).expect("term index");
                let k_next = two * nf + one;
                let mut bound = aq.powf(nf * (nf + one)) * (k_next * y).cosh();
                let mut ratio = aq.powf(two * (nf + one)) * (two * y).exp();
                if derivative {
                    bound = bound * k_next * s;
                    ratio = ratio * (k_next + two) / k_next;
                }
                // With ratio < 1/2 the tail is at most twice its first term.
                if ratio < half && two * bound <= tol {
                    break;
                }
            }
        }
        if n >= MAX_THETA_TERMS {
            return Err(NumericError::NotConverged(MAX_THETA_TERMS));
        }
        power = power * step;
        step = step * q2;
    }
    Ok(sum * q.powf(T::from(0.25).expect("float constant")) * two)
}

/// Odd theta function `theta11(v)` for nome `q`.
pub fn theta11<T: Float + FloatConst>(v: Complex<T>, params: &ThetaParams<T>) -> Result<Complex<T>, NumericError> {
    series(v, params, false)
}

/// `d theta11 / dv` by termwise differentiation.
pub fn theta11_prime<T: Float + FloatConst>(v: Complex<T>, params: &ThetaParams<T>) -> Result<Complex<T>, NumericError> {
    series(v, params, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn p(q: f64) -> ThetaParams<f64> {
        ThetaParams::new(C::new(q, 0.0)).unwrap()
    }

    /// Jacobi product `2 q^(1/4) sin(u) prod_n (1 - q^2n)(1 - 2 q^2n cos 2u + q^4n)`
    /// with `u = s v`.
    fn product_form(v: C, q: f64, s: f64) -> C {
        let u = v * s;
        let mut acc = u.sin() * (2.0 * q.powf(0.25));
        for n in 1..200 {
            let q2n = q.powi(2 * n);
            acc = acc * (1.0 - q2n) * ((u * 2.0).cos() * (-2.0 * q2n) + 1.0 + q2n * q2n);
        }
        acc
    }

    /// The same series summed from its smallest term upward.
    fn reversed(v: C, q: f64, terms: usize) -> C {
        let mut acc = C::new(0.0, 0.0);
        for n in (0..terms).rev() {
            let e = (n as f64 + 0.5).powi(2);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += (v * ((2 * n + 1) as f64 * std::f64::consts::PI)).sin() * (sign * q.powf(e));
        }
        acc * 2.0
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(ThetaParams::new(C::new(1.0, 0.0)), Err(NumericError::NomeOutOfRange(_))));
        assert_eq!(ThetaParams::new(C::new(f64::NAN, 0.0)), Err(NumericError::NonFinite));
        assert!(ThetaParams::with(C::new(0.1, 0.0), Truncation::Terms(0), ThetaConvention::Mumford).is_err());
        assert!(ThetaParams::with(C::new(0.1, 0.0), Truncation::Tolerance(0.0), ThetaConvention::Mumford).is_err());
    }

    #[test]
    fn zero_and_known_values() {
        assert_eq!(theta11(C::new(0.0, 0.0), &p(0.1)).unwrap(), C::new(0.0, 0.0));
        let v = C::new(0.3, 0.0);
        let a = theta11(v, &p(0.1)).unwrap();
        assert!((a - reversed(v, 0.1, 30)).norm() < 1e-15);
        assert!((a - product_form(v, 0.1, std::f64::consts::PI)).norm() < 1e-14);
    }

    #[test]
    fn conventions_differ_by_argument_scale() {
        let jac = p(0.2).with_convention(ThetaConvention::Jacobi);
        let v = C::new(0.7, 0.1);
        let a = theta11(v, &jac).unwrap();
        let b = theta11(v / std::f64::consts::PI, &p(0.2)).unwrap();
        assert!((a - b).norm() < 1e-14);
        assert!((a - product_form(v, 0.2, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn fixed_term_count() {
        let one = ThetaParams::with(C::new(0.1, 0.0), Truncation::Terms(1), ThetaConvention::Mumford).unwrap();
        let v = C::new(0.25, 0.0);
        let expected = (v * std::f64::consts::PI).sin() * (2.0 * 0.1f64.powf(0.25));
        assert!((theta11(v, &one).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let params = p(0.3);
        let v = C::new(0.41, 0.05);
        let h = 1e-6;
        let fd = (theta11(v + h, &params).unwrap() - theta11(v - h, &params).unwrap()) / (2.0 * h);
        assert!((theta11_prime(v, &params).unwrap() - fd).norm() < 1e-7);
    }

    #[test]
    fn generic_over_f32() {
        let params = ThetaParams::new(Complex::new(0.1f32, 0.0)).unwrap();
        let a = theta11(Complex::new(0.3f32, 0.0), &params).unwrap();
        let b = theta11(C::new(0.3, 0.0), &p(0.1)).unwrap();
        assert!((a.re as f64 - b.re).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn odd_and_antiperiodic(re in -2.0f64..2.0, im in -0.5f64..0.5, q in 0.01f64..0.5) {
            let params = p(q);
            let v = C::new(re, im);
            let a = theta11(v, &params).unwrap();
            let scale = a.norm().max(1.0);
            prop_assert!((a + theta11(-v, &params).unwrap()).norm() < 1e-13 * scale);
            prop_assert!((a + theta11(v + 1.0, &params).unwrap()).norm() < 1e-12 * scale);
        }
    }
}
