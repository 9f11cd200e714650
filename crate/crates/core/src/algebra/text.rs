//! Canonical text form of polynomials: terms in descending graded-lex order,
//! integer or `a/b` coefficients, `*` products and `^` powers, for example
//! `t1^3 - 3*t3`. The parser accepts that grammar plus parentheses.

use std::fmt::{self, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Coeff, MPoly, RationalFunction, Var};
use crate::{Poly, Rational};

impl<C: Coeff + Display + Signed> Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff + Display + Signed> Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator().is_one_poly() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "({})/({})", self.numerator(), self.denominator())
        }
    }
}

impl<C: Coeff> MPoly<C> {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

impl FromStr for Poly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

/// Parses the canonical text form (and any expression built from `+ - * /
/// ^` and parentheses, with division only by nonzero constants).
pub fn parse_poly(input: &str) -> Result<Poly, AlgebraError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let p = parser.expr()?;
    if let Some((at, tok)) = parser.tokens.get(parser.pos) {
        return Err(AlgebraError::Parse {
            position: *at,
            message: format!("unexpected {tok:?}"),
        });
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, AlgebraError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigInt>().expect("digits");
            out.push((start, Token::Int(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse {
                position: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(usize::MAX)
    }

    fn error(&self, message: impl Into<String>) -> AlgebraError {
        AlgebraError::Parse {
            position: self.position(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                match rhs.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::one() / c)),
                    Some(_) => return Err(self.error("division by zero")),
                    None => return Err(self.error("division by a non-constant")),
                }
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, AlgebraError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((_, Token::Int(n))) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.error("exponent out of range"))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(self.error("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, AlgebraError> {
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        match tok {
            Token::Int(n) => {
                self.pos += 1;
                Ok(Poly::constant(Rational::from_integer(n)))
            }
            Token::Ident(name) => {
                let v: Var = name.parse().map_err(|_| self.error(format!("unknown variable `{name}`")))?;
                self.pos += 1;
                Ok(Poly::var(v))
            }
            Token::Op('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Op(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        let t1 = Poly::var(Var::t(1));
        let t3 = Poly::var(Var::t(3));
        let tau3 = &t1.pow(3) - &(&Poly::from_i64(3) * &t3);
        assert_eq!(tau3.to_string(), "t1^3 - 3*t3");
        assert_eq!((-&tau3).to_string(), "-t1^3 + 3*t3");
        assert_eq!(Poly::zero().to_string(), "0");
        let third = Poly::constant(Rational::new(1.into(), 3.into()));
        assert_eq!((&third * &t1.pow(3)).to_string(), "1/3*t1^3");
        let z = Poly::var(Var::z(0));
        assert_eq!((&Poly::from_i64(4) * &z.pow(3)).to_string(), "4*z^3");
    }

    #[test]
    fn parses_canonical_and_extended_input() {
        let p: Poly = "t1^3 - 3*t3".parse().unwrap();
        assert_eq!(p.to_string(), "t1^3 - 3*t3");
        let q: Poly = "1/3*t1^3 - t3".parse().unwrap();
        assert_eq!(q.scale(&Rational::from_integer(3.into())), p);
        let r: Poly = "(t1 + z1)*(t1 - z1)".parse().unwrap();
        assert_eq!(r.to_string(), "t1^2 - z1^2");
        assert_eq!("-2".parse::<Poly>().unwrap(), Poly::from_i64(-2));
    }

    #[test]
    fn parse_errors() {
        assert!("t1 +".parse::<Poly>().is_err());
        assert!("t1 / t3".parse::<Poly>().is_err());
        assert!("t1 / 0".parse::<Poly>().is_err());
        assert!("t1 $ 2".parse::<Poly>().is_err());
        assert!("q7".parse::<Poly>().is_err());
        assert!("(t1".parse::<Poly>().is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let vars = prop::sample::select(vec![Var::t(1), Var::t(3), Var::z(1), Var::w(2)]);
        let term = (
            -20i64..20,
            1i64..6,
            prop::collection::vec((vars, 0u32..4), 0..3),
        );
        prop::collection::vec(term, 0..6).prop_map(|terms| {
            Poly::from_terms(terms.into_iter().map(|(n, d, pw)| {
                (
                    crate::algebra::Monomial::from_powers(pw),
                    Rational::new(n.into(), d.into()),
                )
            }))
        })
    }

    proptest! {
        #[test]
        fn text_roundtrip(p in arb_poly()) {
            let back: Poly = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
