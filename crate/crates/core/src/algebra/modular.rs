use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::Rational;

/// The Mersenne prime 2^61 - 1.
pub const MOD61_PRIME: u64 = (1 << 61) - 1;

/// Element of the prime field of order 2^61 - 1, used for fast randomized
/// zero tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Mod61(u64);

impl Mod61 {
    pub fn new(v: u64) -> Self {
        Mod61(v % MOD61_PRIME)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        let p = MOD61_PRIME as u128;
        let folded = (x & p) + (x >> 61);
        let folded = (folded & p) + (folded >> 61);
        let r = folded as u64;
        if r >= MOD61_PRIME {
            r - MOD61_PRIME
        } else {
            r
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Mod61(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(MOD61_PRIME - 2))
    }

    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(MOD61_PRIME));
        Mod61(r.to_u64().expect("reduced residue fits u64"))
    }

    /// Image of a rational under reduction, or `None` if the prime divides
    /// the denominator.
    pub fn from_rational(q: &Rational) -> Option<Self> {
        let num = Self::from_bigint(q.numer());
        let den = Self::from_bigint(q.denom()).inverse()?;
        Some(num * den)
    }
}

impl fmt::Display for Mod61 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Mod61 {
    type Output = Mod61;
    fn add(self, rhs: Mod61) -> Mod61 {
        let s = self.0 + rhs.0;
        Mod61(if s >= MOD61_PRIME { s - MOD61_PRIME } else { s })
    }
}

impl Sub for Mod61 {
    type Output = Mod61;
    fn sub(self, rhs: Mod61) -> Mod61 {
        self + (-rhs)
    }
}

impl Neg for Mod61 {
    type Output = Mod61;
    fn neg(self) -> Mod61 {
        if self.0 == 0 {
            self
        } else {
            Mod61(MOD61_PRIME - self.0)
        }
    }
}

impl Mul for Mod61 {
    type Output = Mod61;
    fn mul(self, rhs: Mod61) -> Mod61 {
        Mod61(Self::reduce(self.0 as u128 * rhs.0 as u128))
    }
}

impl Div for Mod61 {
    type Output = Mod61;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Mod61) -> Mod61 {
        self * rhs.inverse().expect("division by zero in GF(2^61 - 1)")
    }
}

/// Field remainder: always zero for a nonzero divisor.
impl Rem for Mod61 {
    type Output = Mod61;
    fn rem(self, rhs: Mod61) -> Mod61 {
        assert!(rhs.0 != 0, "remainder by zero");
        Mod61(0)
    }
}

impl Zero for Mod61 {
    fn zero() -> Self {
        Mod61(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Mod61 {
    fn one() -> Self {
        Mod61(1)
    }
}

impl Num for Mod61 {
    type FromStrRadixErr = std::num::ParseIntError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        u64::from_str_radix(s, radix).map(Mod61::new)
    }
}

impl FromPrimitive for Mod61 {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Self::from_bigint(&BigInt::from(n)))
    }

    fn from_u64(n: u64) -> Option<Self> {
        Some(Mod61::new(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_roundtrip() {
        let a = Mod61::new(123_456_789);
        assert_eq!(a * a.inverse().unwrap(), Mod61::one());
        assert_eq!(Mod61::zero().inverse(), None);
        assert_eq!(Mod61::from_i64(-1).unwrap(), Mod61::new(MOD61_PRIME - 1));
    }

    #[test]
    fn rational_reduction() {
        let half = Rational::new(1.into(), 2.into());
        let h = Mod61::from_rational(&half).unwrap();
        assert_eq!(h + h, Mod61::one());
    }

    proptest! {
        #[test]
        fn multiplication_matches_bigint(a in 0u64..MOD61_PRIME, b in 0u64..MOD61_PRIME) {
            let expected = (a as u128 * b as u128 % MOD61_PRIME as u128) as u64;
            prop_assert_eq!((Mod61::new(a) * Mod61::new(b)).value(), expected);
        }
    }
}
