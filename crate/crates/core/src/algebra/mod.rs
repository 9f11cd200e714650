//! Exact arithmetic kernel: variables, monomials, sparse polynomials over any
//! `num-traits` field, rational functions, and their text form.

mod modular;
mod monomial;
mod poly;
mod ratfun;
mod text;
mod var;

pub use modular::{Mod61, MOD61_PRIME};
pub use monomial::Monomial;
pub use poly::{univariate_div_rem, univariate_gcd, Coeff, MPoly};
pub use ratfun::RationalFunction;
pub use text::parse_poly;
pub use var::{Var, VarKind};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("singular evaluation point")]
    SingularPoint,
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(Var),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Wronskian `f * dg/dv - df/dv * g`.
pub fn wronskian<C: Coeff>(f: &MPoly<C>, g: &MPoly<C>, v: Var) -> MPoly<C> {
    &(f * &g.differentiate(v)) - &(&f.differentiate(v) * g)
}
