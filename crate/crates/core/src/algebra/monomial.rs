use std::cmp::Ordering;
use std::fmt;

use super::Var;

/// A power product of variables, stored as `(var, exponent)` pairs sorted by
/// variable with no zero exponents.
///
/// Ordering is graded lexicographic: total degree first, then the exponent of
/// the smallest variable where the two differ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial::power(v, 1)
    }

    pub fn power(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial {
                powers: vec![(v, e)],
            }
        }
    }

    /// Builds a monomial from arbitrary pairs; repeated variables multiply.
    pub fn from_powers<I: IntoIterator<Item = (Var, u32)>>(iter: I) -> Self {
        let mut powers: Vec<(Var, u32)> = iter.into_iter().filter(|&(_, e)| e > 0).collect();
        powers.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { powers: merged }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.powers
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn weighted_degree<F: Fn(Var) -> i64>(&self, weight: F) -> i64 {
        self.powers.iter().map(|&(v, e)| weight(v) * e as i64).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.powers.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.powers, &other.powers);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { powers: out }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.powers.len());
        let mut j = 0;
        for &(v, e) in &self.powers {
            if j < other.powers.len() && other.powers[j].0 < v {
                return None;
            }
            if j < other.powers.len() && other.powers[j].0 == v {
                let d = other.powers[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.powers.len() {
            return None;
        }
        Some(Monomial { powers: out })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let powers = self
            .powers
            .iter()
            .filter_map(|&(v, e)| {
                let f = other.exponent(v);
                (f > 0).then_some((v, e.min(f)))
            })
            .collect();
        Monomial { powers }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        self.mul(other).div(&g).expect("gcd divides the product")
    }

    /// Removes `v`, returning its exponent and the remaining cofactor.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        let powers = self.powers.iter().copied().filter(|&(w, _)| w != v).collect();
        (e, Monomial { powers })
    }

    pub fn rename<F: Fn(Var) -> Var>(&self, f: F) -> Monomial {
        Monomial::from_powers(self.powers.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.powers, &other.powers);
            for (x, y) in a.iter().zip(b.iter()) {
                if x.0 != y.0 {
                    // the side holding the smaller variable has the larger
                    // exponent there
                    return if x.0 < y.0 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.powers.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
