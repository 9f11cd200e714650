use std::fmt;
use std::str::FromStr;

use super::AlgebraError;

/// Kind of an indeterminate. The declaration order is the variable order
/// used by monomial comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// `t1, t3, t5, ...`
    OddTime,
    /// `t2, t4, ...`
    EvenTime,
    /// Miwa shift parameters `z, z1, z2, ...`
    Shift,
    /// Inverse spectral parameters `w_i = 1 / z_i`.
    InverseShift,
    /// Free symbolic parameters `a, a1, ...` used when probing families of
    /// candidate polynomials.
    Param,
}

/// A polynomial indeterminate.
///
/// Variables are self-describing (kind plus index), so there is no shared
/// symbol table to synchronize: two `Var` values name the same symbol iff
/// they compare equal. Index 0 of a non-time kind prints bare (`z`, `w`, `a`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    kind: VarKind,
    index: u32,
}

impl Var {
    /// The time variable `t_k`; parity decides between odd and even kind.
    pub fn t(k: u32) -> Self {
        assert!(k >= 1, "time variables start at t1");
        let kind = if k % 2 == 1 {
            VarKind::OddTime
        } else {
            VarKind::EvenTime
        };
        Var { kind, index: k }
    }

    pub const fn z(i: u32) -> Self {
        Var {
            kind: VarKind::Shift,
            index: i,
        }
    }

    pub const fn w(i: u32) -> Self {
        Var {
            kind: VarKind::InverseShift,
            index: i,
        }
    }

    pub const fn param(i: u32) -> Self {
        Var {
            kind: VarKind::Param,
            index: i,
        }
    }

    /// Shorthand for `t1`, the spatial variable `x`.
    pub fn x() -> Self {
        Var::t(1)
    }

    pub fn kind(self) -> VarKind {
        self.kind
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_time(self) -> bool {
        matches!(self.kind, VarKind::OddTime | VarKind::EvenTime)
    }

    pub fn is_even_time(self) -> bool {
        self.kind == VarKind::EvenTime
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            VarKind::OddTime | VarKind::EvenTime => return write!(f, "t{}", self.index),
            VarKind::Shift => "z",
            VarKind::InverseShift => "w",
            VarKind::Param => "a",
        };
        if self.index == 0 {
            f.write_str(prefix)
        } else {
            write!(f, "{prefix}{}", self.index)
        }
    }
}

impl FromStr for Var {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::Parse {
            position: 0,
            message: format!("unknown variable `{s}`"),
        };
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let digits = chars.as_str();
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let index = if digits.is_empty() {
            None
        } else {
            Some(digits.parse::<u32>().map_err(|_| bad())?)
        };
        match (head, index) {
            ('t', Some(k)) if k >= 1 => Ok(Var::t(k)),
            ('z', i) => Ok(Var::z(i.unwrap_or(0))),
            ('w', i) => Ok(Var::w(i.unwrap_or(0))),
            ('a', i) => Ok(Var::param(i.unwrap_or(0))),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kind_then_index() {
        assert!(Var::t(1) < Var::t(3));
        assert!(Var::t(5) < Var::t(2));
        assert!(Var::t(2) < Var::z(0));
        assert!(Var::z(9) < Var::w(1));
        assert!(Var::w(9) < Var::param(0));
    }

    #[test]
    fn display_and_parse_agree() {
        for v in [Var::t(1), Var::t(4), Var::z(0), Var::z(3), Var::w(2), Var::param(0)] {
            assert_eq!(v.to_string().parse::<Var>().unwrap(), v);
        }
        assert_eq!(Var::z(0).to_string(), "z");
        assert!("t0".parse::<Var>().is_err());
        assert!("q1".parse::<Var>().is_err());
    }
}
