//! Wronskian calculus and exact checks of the polynomial tau-function
//! identities: differential Fay, the eight two-tau Wronskian formulas, the
//! two cubic identities and the seventh-order identity.
//!
//! All `1/z` prefactors are cleared by multiplying through by the product of
//! the shift parameters involved, so every comparison is between polynomials.

mod expr;

pub use expr::{
    evaluate, generate_product_identity, generate_product_identity_with_limit, unexpanded_wronskian, verify_identity, IdentityExpr,
    Pairing, Prefactor, VerifyOutcome, DEFAULT_MAX_ORDER,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraError, Var};
use crate::tau::{Shifter, TauError};
use crate::{Poly, Rational};

pub use crate::algebra::wronskian as wronskian_in;

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("invalid variant {0}")]
    InvalidVariant(u8),
    #[error("shift parameters must be distinct")]
    RepeatedParameter,
    #[error("expression uses {expected} parameters but {got} were assigned")]
    Arity { expected: usize, got: usize },
    #[error("product identities need n >= 2 (got {0})")]
    OrderTooSmall(u32),
    #[error("order {n} exceeds the configured limit {limit}")]
    OrderTooLarge { n: u32, limit: u32 },
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Wronskian in `x = t1`.
pub fn wronskian(f: &Poly, g: &Poly) -> Poly {
    wronskian_in(f, g, Var::x())
}

/// `W_{2k+1}(f, g) = f dg/dt_{2k+1} - df/dt_{2k+1} g`.
pub fn wronskian_odd(f: &Poly, g: &Poly, k: u32) -> Poly {
    wronskian_in(f, g, Var::t(2 * k + 1))
}

/// The two sides of an identity after clearing denominators.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySides {
    pub lhs: Poly,
    pub rhs: Poly,
}

impl IdentitySides {
    pub fn residual(&self) -> Poly {
        &self.lhs - &self.rhs
    }

    pub fn passes(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn lhs_terms(&self) -> usize {
        self.lhs.term_count()
    }

    pub fn rhs_terms(&self) -> usize {
        self.rhs.term_count()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        IdentitySides {
            lhs: self.lhs.scale(c),
            rhs: self.rhs.scale(c),
        }
    }

    pub fn map<F: Fn(&Poly) -> Poly>(&self, f: F) -> Self {
        IdentitySides {
            lhs: f(&self.lhs),
            rhs: f(&self.rhs),
        }
    }
}

fn distinct(vars: &[Var]) -> Result<(), IdentityError> {
    for (i, a) in vars.iter().enumerate() {
        if vars[i + 1..].contains(a) {
            return Err(IdentityError::RepeatedParameter);
        }
    }
    Ok(())
}

fn v(z: Var) -> Poly {
    Poly::var(z)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `W(f1 f2, g1 g2)` minus each of the two product-rule expansions.
pub fn product_rule_residual(f1: &Poly, f2: &Poly, g1: &Poly, g2: &Poly) -> (Poly, Poly) {
    let whole = wronskian(&(f1 * f2), &(g1 * g2));
    let aligned = &(&(f1 * g1) * &wronskian(f2, g2)) + &(&(f2 * g2) * &wronskian(f1, g1));
    let crossed = &(&(f1 * g2) * &wronskian(f2, g1)) + &(&(f2 * g1) * &wronskian(f1, g2));
    (&whole - &aligned, &whole - &crossed)
}

/// Differential Fay identity multiplied through by `z1 z2`:
/// `z1 z2 W(tau(t+[z1]), tau(t+[z2])) - (z1 - z2)[tau(t+[z1]) tau(t+[z2]) - tau tau(t+[z1]+[z2])]`.
pub fn diff_fay_residual(tau: &Poly, z1: Var, z2: Var) -> Result<Poly, IdentityError> {
    distinct(&[z1, z2])?;
    let mut sh = Shifter::new(tau, &[z1, z2])?;
    let a = sh.at(&[(z1, 1)]);
    let b = sh.at(&[(z2, 1)]);
    let ab = sh.at(&[(z1, 1), (z2, 1)]);
    let lhs = &(&v(z1) * &v(z2)) * &wronskian(&a, &b);
    let bracket = &(&a * &b) - &(tau * &ab);
    let rhs = &(&v(z1) - &v(z2)) * &bracket;
    Ok(&lhs - &rhs)
}

/// Shift multiplicities of `(z1, z2)`.
type Shift2 = [i64; 2];

struct Lemma22Row {
    left: Shift2,
    right: Shift2,
    /// Coefficients of `(1/z1, 1/z2)` in the prefactor.
    prefactor: Shift2,
    /// The bracket is `tau(p.0) tau(p.1) - tau(q.0) tau(q.1)`.
    first: (Shift2, Shift2),
    second: (Shift2, Shift2),
}

const LEMMA22: [Lemma22Row; 8] = [
    // W(tau(+1), tau(+2)) = (1/z2 - 1/z1)[tau(+1) tau(+2) - tau tau(+1+2)]
    Lemma22Row { left: [1, 0], right: [0, 1], prefactor: [-1, 1], first: ([1, 0], [0, 1]), second: ([0, 0], [1, 1]) },
    // W(tau(-1), tau(-2)) = -(1/z2 - 1/z1)[tau(-1) tau(-2) - tau tau(-1-2)]
    Lemma22Row { left: [-1, 0], right: [0, -1], prefactor: [1, -1], first: ([-1, 0], [0, -1]), second: ([0, 0], [-1, -1]) },
    // W(tau(-1), tau(+2)) = (1/z2 + 1/z1)[tau(-1) tau(+2) - tau tau(-1+2)]
    Lemma22Row { left: [-1, 0], right: [0, 1], prefactor: [1, 1], first: ([-1, 0], [0, 1]), second: ([0, 0], [-1, 1]) },
    // W(tau(+1), tau(-2)) = -(1/z2 + 1/z1)[tau(+1) tau(-2) - tau tau(+1-2)]
    Lemma22Row { left: [1, 0], right: [0, -1], prefactor: [-1, -1], first: ([1, 0], [0, -1]), second: ([0, 0], [1, -1]) },
    // W(tau(+1-2), tau) = (1/z2 - 1/z1)[tau(+1-2) tau - tau(+1) tau(-2)]
    Lemma22Row { left: [1, -1], right: [0, 0], prefactor: [-1, 1], first: ([1, -1], [0, 0]), second: ([1, 0], [0, -1]) },
    // W(tau(-1+2), tau) = -(1/z2 - 1/z1)[tau(-1+2) tau - tau(-1) tau(+2)]
    Lemma22Row { left: [-1, 1], right: [0, 0], prefactor: [1, -1], first: ([-1, 1], [0, 0]), second: ([-1, 0], [0, 1]) },
    // W(tau(-1-2), tau) = (1/z2 + 1/z1)[tau(-1-2) tau - tau(-1) tau(-2)]
    Lemma22Row { left: [-1, -1], right: [0, 0], prefactor: [1, 1], first: ([-1, -1], [0, 0]), second: ([-1, 0], [0, -1]) },
    // W(tau(+1+2), tau) = -(1/z2 + 1/z1)[tau(+1+2) tau - tau(+1) tau(+2)]
    Lemma22Row { left: [1, 1], right: [0, 0], prefactor: [-1, -1], first: ([1, 1], [0, 0]), second: ([1, 0], [0, 1]) },
];

/// Both sides of one of the eight two-tau Wronskian formulas (variants
/// `1..=8`), multiplied through by `z1 z2`.
pub fn lemma22_sides(tau: &Poly, variant: u8, z1: Var, z2: Var) -> Result<IdentitySides, IdentityError> {
    let row = variant
        .checked_sub(1)
        .and_then(|i| LEMMA22.get(i as usize))
        .ok_or(IdentityError::InvalidVariant(variant))?;
    distinct(&[z1, z2])?;
    let mut sh = Shifter::new(tau, &[z1, z2])?;
    let mut at = |s: Shift2| sh.at(&[(z1, s[0]), (z2, s[1])]);
    let lhs = &(&v(z1) * &v(z2)) * &wronskian(&at(row.left), &at(row.right));
    // (p1/z1 + p2/z2) z1 z2 = p1 z2 + p2 z1
    let cleared = &v(z2).scale(&int(row.prefactor[0])) + &v(z1).scale(&int(row.prefactor[1]));
    let bracket = &(&at(row.first.0) * &at(row.first.1)) - &(&at(row.second.0) * &at(row.second.1));
    Ok(IdentitySides {
        lhs,
        rhs: &cleared * &bracket,
    })
}

pub fn lemma22_residual(tau: &Poly, variant: u8, z1: Var, z2: Var) -> Result<Poly, IdentityError> {
    Ok(lemma22_sides(tau, variant, z1, z2)?.residual())
}

/// `tau(+a) tau(+b) tau(-a-b) - tau(-a) tau(-b) tau(+a+b)`.
fn cubic_bracket(sh: &mut Shifter<'_>, a: Var, b: Var) -> Poly {
    let first = &(&sh.at(&[(a, 1)]) * &sh.at(&[(b, 1)])) * &sh.at(&[(a, -1), (b, -1)]);
    let second = &(&sh.at(&[(a, -1)]) * &sh.at(&[(b, -1)])) * &sh.at(&[(a, 1), (b, 1)]);
    &first - &second
}

/// The cubic identity in two shift parameters:
///
/// `(z2 - z1)[tau(+1+2) tau(-1) tau(-2) - tau(-1-2) tau(+1) tau(+2)]
///   = (z2 + z1)[tau(+1-2) tau(-1) tau(+2) - tau(-1+2) tau(+1) tau(-2)]`.
pub fn cubic_i_sides(tau: &Poly, z1: Var, z2: Var) -> Result<IdentitySides, IdentityError> {
    distinct(&[z1, z2])?;
    let mut sh = Shifter::new(tau, &[z1, z2])?;
    let mut at = |a: i64, b: i64| sh.at(&[(z1, a), (z2, b)]);
    let left = &(&(&at(1, 1) * &at(-1, 0)) * &at(0, -1)) - &(&(&at(-1, -1) * &at(1, 0)) * &at(0, 1));
    let right = &(&(&at(1, -1) * &at(-1, 0)) * &at(0, 1)) - &(&(&at(-1, 1) * &at(1, 0)) * &at(0, -1));
    Ok(IdentitySides {
        lhs: &(&v(z2) - &v(z1)) * &left,
        rhs: &(&v(z2) + &v(z1)) * &right,
    })
}

/// Number of odd-time flows that can act on `tau`: the sum over `k` in the
/// second cubic identity stops at `(m - 1) / 2` where `t_m` is the highest
/// time present, because `tau` and all its Miwa shifts are independent of
/// every later time, so each `W_{2k+1}` beyond it vanishes identically.
pub fn odd_flow_count(tau: &Poly) -> u32 {
    let max = tau
        .variables()
        .into_iter()
        .filter(|v| v.is_time())
        .map(|v| v.index())
        .max()
        .unwrap_or(1);
    (max - 1) / 2 + 1
}

/// The one-parameter cubic identity:
///
/// `tau(+2[z]) tau(-[z])^2 - tau(-2[z]) tau(+[z])^2
///   = 2 sum_k z^{2k+1}[tau(-[z]) W_{2k+1}(tau, tau(+[z])) + tau(+[z]) W_{2k+1}(tau, tau(-[z]))]`.
pub fn cubic_ii_sides(tau: &Poly, z: Var) -> Result<IdentitySides, IdentityError> {
    let mut sh = Shifter::new(tau, &[z])?;
    let plus = sh.at(&[(z, 1)]);
    let minus = sh.at(&[(z, -1)]);
    let lhs = &(&sh.at(&[(z, 2)]) * &minus.pow(2)) - &(&sh.at(&[(z, -2)]) * &plus.pow(2));
    let mut rhs = Poly::zero();
    for k in 0..odd_flow_count(tau) {
        let inner = &(&minus * &wronskian_odd(tau, &plus, k)) + &(&plus * &wronskian_odd(tau, &minus, k));
        rhs = &rhs + &(&v(z).pow(2 * k + 1) * &inner);
    }
    Ok(IdentitySides {
        lhs,
        rhs: rhs.scale(&int(2)),
    })
}

/// Second cubic identity obtained as the `z2 -> z1` limit of the first:
/// both sides of the first identity vanish on the diagonal, so their
/// `z2`-derivatives there must agree, and they reproduce the two sides of the
/// one-parameter identity in the variable `z`.
pub fn cubic_ii_from_limit(tau: &Poly, z1: Var, z2: Var, z: Var) -> Result<IdentitySides, IdentityError> {
    let sides = cubic_i_sides(tau, z1, z2)?;
    let mut diagonal = BTreeMap::new();
    diagonal.insert(z1, v(z));
    diagonal.insert(z2, v(z));
    Ok(sides.map(|p| p.differentiate(z2).compose(&diagonal)))
}

/// The seventh-order identity in four parameters, multiplied through by
/// `z1 z2 z3 z4`:
///
/// `(1/z4 - 1/z3) P1 P2 B(3,4) + (1/z2 - 1/z1) P3 P4 B(1,2)
///   = (1/z2 - 1/z3) P1 P4 B(2,3) + (1/z4 - 1/z1) P2 P3 B(1,4)`
///
/// with `P_i = tau(+[z_i]) tau(-[z_i])` and
/// `B(a,b) = tau(+a) tau(+b) tau(-a-b) - tau(-a) tau(-b) tau(+a+b)`.
pub fn seventh_order_sides(tau: &Poly, zs: [Var; 4]) -> Result<IdentitySides, IdentityError> {
    distinct(&zs)?;
    let [z1, z2, z3, z4] = zs;
    let mut sh = Shifter::new(tau, &zs)?;
    let mut pair = |z: Var| &sh.at(&[(z, 1)]) * &sh.at(&[(z, -1)]);
    let p: Vec<Poly> = zs.iter().map(|&z| pair(z)).collect();
    let b12 = cubic_bracket(&mut sh, z1, z2);
    let b34 = cubic_bracket(&mut sh, z3, z4);
    let b23 = cubic_bracket(&mut sh, z2, z3);
    let b14 = cubic_bracket(&mut sh, z1, z4);
    let mono = |a: Var, b: Var| &v(a) * &v(b);
    let diff = |a: Var, b: Var| &v(a) - &v(b);
    let lhs = &(&(&(&mono(z1, z2) * &diff(z3, z4)) * &(&p[0] * &p[1])) * &b34)
        + &(&(&(&mono(z3, z4) * &diff(z1, z2)) * &(&p[2] * &p[3])) * &b12);
    let rhs = &(&(&(&mono(z1, z4) * &diff(z3, z2)) * &(&p[0] * &p[3])) * &b23)
        + &(&(&(&mono(z2, z3) * &diff(z1, z4)) * &(&p[1] * &p[2])) * &b14);
    Ok(IdentitySides { lhs, rhs })
}

/// Closed-form value of either side of the seventh-order identity for
/// `tau = t1`, before clearing denominators. With `z3_cubed` the term
/// `z1^2 z3^2 z4^2` is replaced by `z1^2 z3^3 z4^2`, a known misprint whose
/// degree differs from all its siblings; that variant is not a valid value.
pub fn seventh_order_tau1_reference(zs: [Var; 4], z3_cubed: bool) -> Poly {
    let [z1, z2, z3, z4] = zs.map(Poly::var);
    let t = Poly::var(Var::x());
    let sq = |p: &Poly| p.pow(2);
    let quartic = (&(&(&sq(&z2) - &sq(&z1)) - &sq(&z3)) + &sq(&z4)).scale(&int(2));
    let quadratic = (&(&sq(&z1) * &sq(&z3)) - &(&sq(&z2) * &sq(&z4))).scale(&int(4));
    let odd_one = if z3_cubed { z3.pow(3) } else { sq(&z3) };
    let constant = [
        -(&(&sq(&z1) * &sq(&z2)) * &sq(&z3)),
        &(&sq(&z1) * &sq(&z2)) * &sq(&z4),
        -(&(&sq(&z1) * &odd_one) * &sq(&z4)),
        &(&sq(&z2) * &sq(&z3)) * &sq(&z4),
    ]
    .into_iter()
    .sum::<Poly>()
    .scale(&int(2));
    &(&(&quartic * &t.pow(4)) + &(&quadratic * &t.pow(2))) + &constant
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::staircase_tau;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    const Z1: Var = Var::z(1);
    const Z2: Var = Var::z(2);

    #[test]
    fn wronskian_basics() {
        let f = p("t1^3 - 3*t3");
        assert!(wronskian(&f, &f).is_zero());
        assert_eq!(wronskian(&p("t1"), &p("t1^2")), p("t1^2"));
        // f g' - f' g with f = t1 + z1, g = t1 + z2
        assert_eq!(wronskian(&p("t1 + z1"), &p("t1 + z2")), p("z1 - z2"));
    }

    #[test]
    fn product_rule() {
        let t = p("t1");
        assert_eq!(product_rule_residual(&t, &t, &t, &t), (Poly::zero(), Poly::zero()));
        let tau = p("t1^3 - 3*t3");
        let mut sh = Shifter::new(&tau, &[Z1, Z2]).unwrap();
        let r = product_rule_residual(
            &sh.at(&[(Z1, 1)]),
            &sh.at(&[(Z1, -1)]),
            &sh.at(&[(Z2, 1)]),
            &sh.at(&[(Z2, -1)]),
        );
        assert!(r.0.is_zero() && r.1.is_zero());
    }

    #[test]
    fn differential_fay() {
        assert!(diff_fay_residual(&p("t1"), Z1, Z2).unwrap().is_zero());
        assert!(diff_fay_residual(&p("t1^3 - 3*t3"), Z1, Z2).unwrap().is_zero());
        assert!(!diff_fay_residual(&p("t1^3 - 4*t3"), Z1, Z2).unwrap().is_zero());
        assert!(matches!(
            diff_fay_residual(&p("t1"), Z1, Z1),
            Err(IdentityError::RepeatedParameter)
        ));
    }

    #[test]
    fn lemma22_variants() {
        for k in 1..=2 {
            let tau = staircase_tau(k).unwrap();
            for variant in 1..=8 {
                let r = lemma22_residual(tau.poly(), variant, Z1, Z2).unwrap();
                assert!(r.is_zero(), "variant {variant} fails for k = {k}");
                let diag = r.substitute(Z2, &Poly::var(Z1));
                assert!(diag.is_zero());
            }
        }
        assert!(matches!(
            lemma22_residual(&p("t1"), 9, Z1, Z2),
            Err(IdentityError::InvalidVariant(9))
        ));
        assert!(matches!(
            lemma22_residual(&p("t1"), 0, Z1, Z2),
            Err(IdentityError::InvalidVariant(0))
        ));
    }

    #[test]
    fn cubic_identities_on_tau1() {
        let s = cubic_i_sides(&p("t1"), Z1, Z2).unwrap();
        assert_eq!(s.lhs, p("2*z1*z2^3 - 2*z1^3*z2"));
        assert_eq!(s.rhs, s.lhs);
        let z = Var::z(0);
        let s = cubic_ii_sides(&p("t1"), z).unwrap();
        assert_eq!(s.lhs, p("4*z^3"));
        assert_eq!(s.rhs, s.lhs);
        let one = cubic_i_sides(&Poly::one(), Z1, Z2).unwrap();
        assert!(one.lhs.is_zero() && one.rhs.is_zero());
        let one = cubic_ii_sides(&Poly::one(), z).unwrap();
        assert!(one.lhs.is_zero() && one.rhs.is_zero());
    }

    #[test]
    fn limit_reproduces_second_identity() {
        let z = Var::z(0);
        for tau in [p("t1"), p("t1^3 - 3*t3")] {
            let limit = cubic_ii_from_limit(&tau, Z1, Z2, z).unwrap();
            assert_eq!(limit, cubic_ii_sides(&tau, z).unwrap());
        }
    }

    #[test]
    fn seventh_order_on_tau1() {
        let zs = [Var::z(1), Var::z(2), Var::z(3), Var::z(4)];
        let s = seventh_order_sides(&p("t1"), zs).unwrap();
        assert!(s.passes());
        let cleared = crate::algebra::Monomial::from_powers(zs.iter().map(|&z| (z, 1)));
        let lhs = s.lhs.div_monomial(&cleared).unwrap();
        assert_eq!(lhs, seventh_order_tau1_reference(zs, false));
        assert_ne!(lhs, seventh_order_tau1_reference(zs, true));
    }
}
