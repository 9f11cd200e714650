use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{AlgebraError, Coeff, MPoly, Var};

/// Quotient of two polynomials.
///
/// The representation is only partially reduced: common monomial factors are
/// cancelled and the denominator is made monic, but no multivariate gcd is
/// taken. Equality is decided by cross-multiplication, which is exact.
#[derive(Clone)]
pub struct RationalFunction<C> {
    num: MPoly<C>,
    den: MPoly<C>,
}

impl<C: Coeff> RationalFunction<C> {
    pub fn new(num: MPoly<C>, den: MPoly<C>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: MPoly<C>) -> Self {
        RationalFunction {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    /// `1 / v`.
    pub fn inverse_var(v: Var) -> Self {
        RationalFunction {
            num: MPoly::one(),
            den: MPoly::var(v),
        }
    }

    fn normalized(num: MPoly<C>, den: MPoly<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_monomial(&g).expect("content divides"),
                den.div_monomial(&g).expect("content divides"),
            )
        };
        let lc = den.leading_term().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = C::one() / lc;
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &MPoly<C> {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly<C> {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly<C>, MPoly<C>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, if the denominator divides out.
    pub fn as_poly(&self) -> Option<MPoly<C>> {
        if self.den.is_constant() {
            let c = self.den.as_constant().expect("constant");
            return Some(self.num.scale(&(C::one() / c)));
        }
        self.num.div_exact(&self.den)
    }

    /// Cancels the denominator entirely when it divides the numerator.
    pub fn reduced(&self) -> Self {
        match self.as_poly() {
            Some(p) => Self::from_poly(p),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn mul_poly(&self, p: &MPoly<C>) -> Self {
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn div_poly(&self, p: &MPoly<C>) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalized(self.num.clone(), &self.den * p))
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::normalized(self.num.pow(e), self.den.pow(e))
    }

    pub fn differentiate(&self, v: Var) -> Self {
        if self.den.is_constant() {
            return Self::normalized(self.num.differentiate(v), self.den.clone());
        }
        let dn = self.num.differentiate(v);
        let dd = self.den.differentiate(v);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        Self::normalized(&(&dn * &self.den) - &(&self.num * &dd), self.den.pow(2))
    }

    /// `f * dg/dv - df/dv * g`. Shared denominators cancel to `W(a, c) / b^2`.
    pub fn wronskian(&self, other: &Self, v: Var) -> Self {
        if self.den == other.den {
            let w = &(&self.num * &other.num.differentiate(v))
                - &(&self.num.differentiate(v) * &other.num);
            return Self::normalized(w, self.den.pow(2));
        }
        &(self * &other.differentiate(v)) - &(&self.differentiate(v) * other)
    }

    /// Exact evaluation; a vanishing denominator is reported as a singular point.
    pub fn eval(&self, assignment: &HashMap<Var, C>) -> Result<C, AlgebraError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(AlgebraError::SingularPoint);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    pub fn rename<F: Fn(Var) -> Var>(&self, f: F) -> Self {
        Self::normalized(self.num.rename(&f), self.den.rename(&f))
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let rnum = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.den == rhs.den {
            return Self::normalized(&self.num + &rnum, self.den.clone());
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            // both denominators are c*m after normalization with c = 1
            let (ma, _) = self.den.leading_term().expect("monomial");
            let (mb, _) = rhs.den.leading_term().expect("monomial");
            let l = ma.lcm(mb);
            let fa = l.div(ma).expect("lcm");
            let fb = l.div(mb).expect("lcm");
            let one = C::one();
            let num = &self.num.mul_monomial(&fa, &one) + &rnum.mul_monomial(&fb, &one);
            return Self::normalized(num, MPoly::term(one, l));
        }
        Self::normalized(
            &(&self.num * &rhs.den) + &(&rnum * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<C: Coeff> PartialEq for RationalFunction<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<C: Coeff> From<MPoly<C>> for RationalFunction<C> {
    fn from(p: MPoly<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<'a, C: Coeff> Add<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn add(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self.combine(rhs, false)
    }
}

impl<'a, C: Coeff> Sub<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn sub(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self.combine(rhs, true)
    }
}

impl<'a, C: Coeff> Mul<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn mul(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<C: Coeff> Neg for &RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn neg(self) -> RationalFunction<C> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<C: Coeff> fmt::Debug for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl<C: Coeff> Zero for RationalFunction<C> {
    fn zero() -> Self {
        RationalFunction::zero()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Coeff> Add for RationalFunction<C> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Poly, RatFun};

    fn t(k: u32) -> Poly {
        Poly::var(Var::t(k))
    }

    #[test]
    fn cancels_common_monomial() {
        let a = RatFun::new(t(1), t(1).pow(2)).unwrap();
        let b = RatFun::new(Poly::one(), t(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.denominator(), &t(1));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = RatFun::inverse_var(Var::t(1));
        assert!((&a + &(-&a)).is_zero());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RatFun::new(t(1), Poly::zero()),
            Err(AlgebraError::ZeroDenominator)
        ));
    }

    #[test]
    fn singular_point() {
        let f = RatFun::new(t(1), t(3)).unwrap();
        let mut a = HashMap::new();
        a.insert(Var::t(1), crate::Rational::from_integer(1.into()));
        a.insert(Var::t(3), crate::Rational::zero());
        assert!(matches!(f.eval(&a), Err(AlgebraError::SingularPoint)));
    }

    #[test]
    fn quotient_rule() {
        // d/dt1 (1/t1) = -1/t1^2
        let f = RatFun::inverse_var(Var::t(1));
        let expected = RatFun::new(Poly::from_i64(-1), t(1).pow(2)).unwrap();
        assert_eq!(f.differentiate(Var::t(1)), expected);
    }

    #[test]
    fn shared_denominator_wronskian() {
        let g = &t(1).pow(3) - &t(3);
        let f1 = RatFun::new(t(1), g.clone()).unwrap();
        let f2 = RatFun::new(t(1).pow(2), g.clone()).unwrap();
        let direct = &(&f1 * &f2.differentiate(Var::x())) - &(&f1.differentiate(Var::x()) * &f2);
        assert_eq!(f1.wronskian(&f2, Var::x()), direct);
        assert_eq!(
            f1.wronskian(&f2, Var::x()),
            RatFun::new(t(1).pow(2), g.pow(2)).unwrap()
        );
    }
}
