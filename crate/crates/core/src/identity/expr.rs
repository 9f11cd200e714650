//! Expression trees for the family of product Wronskian identities.
//!
//! Starting from `W(prod_{i in A} P_i, prod_{i in B} P_i)` with
//! `P_i = tau(t+[z_i]) tau(t-[z_i])`, `A` the even slots and `B` the odd
//! slots among `2^(n-1)` parameters, the product rule
//!
//! `W(F1 F2, G1 G2) = F1 G1 W(F2, G2) + F2 G2 W(F1, G1)      (aligned)
//!                  = F1 G2 W(F2, G1) + F2 G1 W(F1, G2)      (crossed)`
//!
//! is applied recursively on halves until only two-tau Wronskians remain,
//! which are replaced by their closed forms. Tree one is aligned at every
//! level; tree two is crossed at the top level and aligned below.

use std::time::Instant;

use super::IdentityError;
use crate::algebra::Var;
use crate::report::IdentityReport;
use crate::tau::{Shifter, TauPoly};
use crate::{Poly, RatFun, Rational};

/// Largest `n` accepted by [`generate_product_identity`].
pub const DEFAULT_MAX_ORDER: u32 = 4;

/// Scalar `constant + sum_i c_i / z_{slot_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefactor {
    pub constant: i64,
    pub inverse: Vec<(i64, usize)>,
}

impl Prefactor {
    pub fn constant(c: i64) -> Self {
        Prefactor {
            constant: c,
            inverse: Vec::new(),
        }
    }

    fn eval(&self, zs: &[Var]) -> RatFun {
        let mut acc = RatFun::constant(Rational::from_integer(self.constant.into()));
        for &(c, slot) in &self.inverse {
            acc = &acc + &RatFun::inverse_var(zs[slot]).scale(&Rational::from_integer(c.into()));
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityExpr {
    /// `tau(t + sum_j m_j [z_{slot_j}])`; an empty list is `tau(t)`.
    Tau(Vec<(usize, i64)>),
    Product(Vec<IdentityExpr>),
    Sum(Vec<IdentityExpr>),
    Scaled(Prefactor, Box<IdentityExpr>),
    /// Wronskian in `x = t1`.
    Wronskian(Box<IdentityExpr>, Box<IdentityExpr>),
}

impl IdentityExpr {
    /// Number of parameter slots referenced (largest slot plus one).
    pub fn arity(&self) -> usize {
        match self {
            IdentityExpr::Tau(shifts) => shifts.iter().map(|&(s, _)| s + 1).max().unwrap_or(0),
            IdentityExpr::Product(xs) | IdentityExpr::Sum(xs) => xs.iter().map(Self::arity).max().unwrap_or(0),
            IdentityExpr::Scaled(p, e) => p.inverse.iter().map(|&(_, s)| s + 1).max().unwrap_or(0).max(e.arity()),
            IdentityExpr::Wronskian(a, b) => a.arity().max(b.arity()),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            IdentityExpr::Tau(_) => 0,
            IdentityExpr::Product(xs) | IdentityExpr::Sum(xs) => xs.iter().map(Self::node_count).sum(),
            IdentityExpr::Scaled(_, e) => e.node_count(),
            IdentityExpr::Wronskian(a, b) => a.node_count() + b.node_count(),
        }
    }

    fn eval(&self, sh: &mut Shifter<'_>, zs: &[Var]) -> RatFun {
        match self {
            IdentityExpr::Tau(shifts) => {
                let s: Vec<(Var, i64)> = shifts.iter().map(|&(slot, m)| (zs[slot], m)).collect();
                RatFun::from_poly(sh.at(&s))
            }
            IdentityExpr::Product(xs) => {
                // Multiply polynomial leaves first; most products are pure taus.
                let mut poly = Poly::one();
                let mut rest = RatFun::one();
                for x in xs {
                    let v = x.eval(sh, zs);
                    match v.as_poly() {
                        Some(p) => poly = &poly * &p,
                        None => rest = &rest * &v,
                    }
                }
                rest.mul_poly(&poly)
            }
            IdentityExpr::Sum(xs) => xs.iter().fold(RatFun::zero(), |acc, x| &acc + &x.eval(sh, zs)),
            IdentityExpr::Scaled(p, e) => &p.eval(zs) * &e.eval(sh, zs),
            IdentityExpr::Wronskian(a, b) => a.eval(sh, zs).wronskian(&b.eval(sh, zs), Var::x()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    Aligned,
    Crossed,
}

type Factor = (usize, i64);

fn leaf(f: Factor) -> IdentityExpr {
    IdentityExpr::Tau(vec![f])
}

fn product(fs: &[Factor]) -> IdentityExpr {
    IdentityExpr::Product(fs.iter().copied().map(leaf).collect())
}

/// `W(tau(s_a [z_a]), tau(s_b [z_b])) = (s_b/z_b - s_a/z_a)
///   [tau(s_a [z_a]) tau(s_b [z_b]) - tau tau(s_a [z_a] + s_b [z_b])]`.
fn closed_form(a: Factor, b: Factor) -> IdentityExpr {
    let bracket = IdentityExpr::Sum(vec![
        IdentityExpr::Product(vec![leaf(a), leaf(b)]),
        IdentityExpr::Scaled(
            Prefactor::constant(-1),
            Box::new(IdentityExpr::Product(vec![IdentityExpr::Tau(vec![]), IdentityExpr::Tau(vec![a, b])])),
        ),
    ]);
    let prefactor = Prefactor {
        constant: 0,
        inverse: vec![(b.1, b.0), (-a.1, a.0)],
    };
    IdentityExpr::Scaled(prefactor, Box::new(bracket))
}

fn expand(f: &[Factor], g: &[Factor], pairing: Pairing) -> IdentityExpr {
    debug_assert_eq!(f.len(), g.len());
    if f.len() == 1 {
        return closed_form(f[0], g[0]);
    }
    let (f1, f2) = f.split_at(f.len() / 2);
    let (g1, g2) = g.split_at(g.len() / 2);
    let term = |p: &[Factor], q: &[Factor], wf: &[Factor], wg: &[Factor]| {
        IdentityExpr::Product(vec![product(p), product(q), expand(wf, wg, Pairing::Aligned)])
    };
    match pairing {
        Pairing::Aligned => IdentityExpr::Sum(vec![term(f1, g1, f2, g2), term(f2, g2, f1, g1)]),
        Pairing::Crossed => IdentityExpr::Sum(vec![term(f1, g2, f2, g1), term(f2, g1, f1, g2)]),
    }
}

fn factor_lists(n: u32) -> (Vec<Factor>, Vec<Factor>) {
    let slots = 1usize << (n - 1);
    let pairs = |parity: usize| -> Vec<Factor> {
        (0..slots)
            .filter(|s| s % 2 == parity)
            .flat_map(|s| [(s, 1), (s, -1)])
            .collect()
    };
    (pairs(0), pairs(1))
}

fn check_order(n: u32, limit: u32) -> Result<(), IdentityError> {
    if n < 2 {
        return Err(IdentityError::OrderTooSmall(n));
    }
    if n > limit {
        return Err(IdentityError::OrderTooLarge { n, limit });
    }
    Ok(())
}

/// The two expansions of the order `2^n - 1` identity over `2^(n-1)`
/// parameters, `2 <= n <= limit`.
pub fn generate_product_identity_with_limit(n: u32, limit: u32) -> Result<(IdentityExpr, IdentityExpr), IdentityError> {
    check_order(n, limit)?;
    let (f, g) = factor_lists(n);
    Ok((expand(&f, &g, Pairing::Aligned), expand(&f, &g, Pairing::Crossed)))
}

pub fn generate_product_identity(n: u32) -> Result<(IdentityExpr, IdentityExpr), IdentityError> {
    generate_product_identity_with_limit(n, DEFAULT_MAX_ORDER)
}

/// The Wronskian both trees expand, left as a single node.
pub fn unexpanded_wronskian(n: u32) -> Result<IdentityExpr, IdentityError> {
    check_order(n, u32::MAX)?;
    let (f, g) = factor_lists(n);
    Ok(IdentityExpr::Wronskian(Box::new(product(&f)), Box::new(product(&g))))
}

/// Evaluates `expr` against `tau`, with slot `i` bound to `assignment[i]`.
pub fn evaluate(expr: &IdentityExpr, tau: &Poly, assignment: &[Var]) -> Result<RatFun, IdentityError> {
    let mut sh = shifter(expr.arity(), tau, assignment)?;
    Ok(expr.eval(&mut sh, assignment))
}

fn shifter<'a>(arity: usize, tau: &'a Poly, assignment: &[Var]) -> Result<Shifter<'a>, IdentityError> {
    if arity != assignment.len() {
        return Err(IdentityError::Arity {
            expected: arity,
            got: assignment.len(),
        });
    }
    super::distinct(assignment)?;
    Ok(Shifter::new(tau, assignment)?)
}

/// Both trees evaluated as rational functions.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub lhs: RatFun,
    pub rhs: RatFun,
}

impl VerifyOutcome {
    pub fn compare(exprs: &(IdentityExpr, IdentityExpr), tau: &Poly, assignment: &[Var]) -> Result<Self, IdentityError> {
        let arity = exprs.0.arity().max(exprs.1.arity());
        let mut sh = shifter(arity, tau, assignment)?;
        let lhs = exprs.0.eval(&mut sh, assignment);
        let rhs = exprs.1.eval(&mut sh, assignment);
        Ok(VerifyOutcome { lhs, rhs })
    }

    pub fn residual(&self) -> RatFun {
        &self.lhs - &self.rhs
    }

    pub fn passes(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn report(&self, tau: &TauPoly, assignment: &[Var]) -> IdentityReport {
        let vars: Vec<String> = assignment.iter().map(|v| v.to_string()).collect();
        IdentityReport::new("generated", tau.label())
            .param("vars", vars.join(","))
            .exact(self.residual().numerator().term_count())
            .sides(
                (&self.lhs, self.lhs.numerator().term_count()),
                (&self.rhs, self.rhs.numerator().term_count()),
            )
    }
}

/// Evaluates both trees against `tau`; passes iff their difference is the
/// zero rational function.
pub fn verify_identity(
    exprs: &(IdentityExpr, IdentityExpr),
    tau: &TauPoly,
    assignment: &[Var],
) -> Result<IdentityReport, IdentityError> {
    let start = Instant::now();
    let outcome = VerifyOutcome::compare(exprs, tau.poly(), assignment)?;
    Ok(outcome.report(tau, assignment).elapsed(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{cubic_i_sides, seventh_order_sides};
    use crate::tau::staircase_tau;

    fn zs(n: u32) -> Vec<Var> {
        (1..=n).map(Var::z).collect()
    }

    fn z_product(vars: &[Var]) -> Poly {
        vars.iter().map(|&v| Poly::var(v)).product()
    }

    #[test]
    fn order_bounds() {
        assert!(matches!(generate_product_identity(1), Err(IdentityError::OrderTooSmall(1))));
        assert!(matches!(
            generate_product_identity(5),
            Err(IdentityError::OrderTooLarge { n: 5, limit: 4 })
        ));
        let (a, b) = generate_product_identity(3).unwrap();
        assert_eq!((a.arity(), b.arity()), (4, 4));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let pair = generate_product_identity(2).unwrap();
        let tau = staircase_tau(1).unwrap();
        assert!(matches!(
            verify_identity(&pair, &tau, &zs(3)),
            Err(IdentityError::Arity { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn trivial_tau() {
        let pair = generate_product_identity(2).unwrap();
        let out = VerifyOutcome::compare(&pair, &Poly::one(), &zs(2)).unwrap();
        assert!(out.passes());
    }

    #[test]
    fn order_three_recovers_cubic_identity() {
        let pair = generate_product_identity(2).unwrap();
        let vars = zs(2);
        for k in 1..=2 {
            let tau = staircase_tau(k).unwrap();
            let out = VerifyOutcome::compare(&pair, tau.poly(), &vars).unwrap();
            let sides = cubic_i_sides(tau.poly(), vars[0], vars[1]).unwrap();
            let factor = z_product(&vars);
            assert_eq!(out.lhs.mul_poly(&factor), RatFun::from_poly(tau.poly() * &sides.lhs));
            assert_eq!(out.rhs.mul_poly(&factor), RatFun::from_poly(tau.poly() * &sides.rhs));
            let reference = evaluate(&unexpanded_wronskian(2).unwrap(), tau.poly(), &vars).unwrap();
            assert_eq!(reference, out.lhs);
        }
    }

    #[test]
    fn order_seven_recovers_four_parameter_identity() {
        let pair = generate_product_identity(3).unwrap();
        let vars = zs(4);
        let tau = staircase_tau(1).unwrap();
        let out = VerifyOutcome::compare(&pair, tau.poly(), &vars).unwrap();
        assert!(out.passes());
        let sides = seventh_order_sides(tau.poly(), [vars[0], vars[1], vars[2], vars[3]]).unwrap();
        let factor = z_product(&vars);
        assert_eq!(out.lhs.mul_poly(&factor), RatFun::from_poly(tau.poly() * &sides.lhs));
        assert_eq!(out.rhs.mul_poly(&factor), RatFun::from_poly(tau.poly() * &sides.rhs));
    }
}
