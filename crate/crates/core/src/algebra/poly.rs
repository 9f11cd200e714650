use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use super::{AlgebraError, Monomial, Var};

/// Coefficient ring for [`MPoly`]. Any numeric field from `num-traits`
/// qualifies: exact rationals, machine floats, or a prime field.
pub trait Coeff:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync
{
}

/// Sparse multivariate polynomial. Terms are kept in a sorted map with no
/// zero coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for MPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> MPoly<C> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n).expect("integer coefficient"))
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(iter: I) -> Self {
        let mut terms: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in iter {
            accumulate(&mut terms, m, c);
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Largest term under the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Maximum weighted degree over all terms; `None` for the zero polynomial.
    pub fn weighted_degree<F: Fn(Var) -> i64>(&self, weight: F) -> Option<i64> {
        self.terms.keys().map(|m| m.weighted_degree(&weight)).max()
    }

    /// True when every term has the same weighted degree.
    pub fn is_weighted_homogeneous<F: Fn(Var) -> i64>(&self, weight: F) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(&weight));
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Divides every term by `mono`; `None` if some term is not divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.div(mono)?, c.clone());
        }
        Some(MPoly { terms })
    }

    /// Greatest common monomial factor of all terms (1 for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn differentiate(&self, v: Var) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == 0 {
                continue;
            }
            let factor = C::from_u32(e).expect("exponent fits the coefficient ring");
            let mono = rest.mul(&Monomial::power(v, e - 1));
            accumulate(&mut terms, mono, c.clone() * factor);
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    /// Replaces `v` by `q`.
    pub fn substitute(&self, v: Var, q: &Self) -> Self {
        let mut images = BTreeMap::new();
        images.insert(v, q.clone());
        self.compose(&images)
    }

    /// Simultaneous substitution: every variable present in `images` is
    /// replaced by its image; other variables are left alone.
    pub fn compose(&self, images: &BTreeMap<Var, Self>) -> Self {
        let mut powers: HashMap<(Var, u32), Self> = HashMap::new();
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Self::constant(c.clone());
            for &(v, e) in m.powers() {
                match images.get(&v) {
                    Some(img) => {
                        let p = powers
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        factor = &factor * &p;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_powers(kept);
            for (fm, fc) in factor.terms {
                let key = fm.mul(&kept);
                match acc.get_mut(&key) {
                    Some(slot) => *slot = slot.clone() + fc,
                    None => {
                        acc.insert(key, fc);
                    }
                }
            }
        }
        MPoly::from_terms(acc)
    }

    /// Renames variables. The map must be injective on this polynomial's
    /// variables for the result to be a pure relabeling.
    pub fn rename<F: Fn(Var) -> Var>(&self, f: F) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())))
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Evaluates in any target ring `F`, mapping coefficients with `lift`.
    pub fn eval_with<F, L, A>(&self, lift: L, assign: A) -> Result<F, AlgebraError>
    where
        F: Clone + Zero + One + Mul<Output = F> + Add<Output = F>,
        L: Fn(&C) -> F,
        A: Fn(Var) -> Option<F>,
    {
        let mut cache: HashMap<Var, F> = HashMap::new();
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut value = lift(c);
            for &(v, e) in m.powers() {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assign(v).ok_or(AlgebraError::UnassignedVariable(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                for _ in 0..e {
                    value = value * x.clone();
                }
            }
            total = total + value;
        }
        Ok(total)
    }

    /// Exact evaluation in the coefficient ring.
    pub fn eval(&self, assignment: &HashMap<Var, C>) -> Result<C, AlgebraError> {
        self.eval_with(|c| c.clone(), |v| assignment.get(&v).cloned())
    }

    /// Groups terms by the power of `v`: `self = sum_k out[k] * v^k`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, BTreeMap<Monomial, C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().insert(rest, c.clone());
        }
        out.into_iter().map(|(e, terms)| (e, MPoly { terms })).collect()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// Multivariate division under the graded-lex order; if `d | self` the
    /// remainder of the leading-term reduction is zero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        if d.is_monomial() {
            let inv = C::one() / dc;
            return self.div_monomial(&dm).map(|q| q.scale(&inv));
        }
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, C> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&dm)?;
            let qc = rc.clone() / dc.clone();
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.insert(qm, qc);
        }
        Some(MPoly { terms: quot })
    }
}

impl<C: Coeff + Signed> MPoly<C> {
    /// Divides by the leading coefficient when it is negative, so that the
    /// leading coefficient is positive.
    pub fn with_positive_leading(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }
}

fn accumulate<C: Coeff>(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    match terms.get_mut(&m) {
        Some(slot) => *slot = slot.clone() + c,
        None => {
            terms.insert(m, c);
        }
    }
}

/// Quotient and remainder of univariate polynomials in `v` over a field.
pub fn univariate_div_rem<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, v: Var) -> (MPoly<C>, MPoly<C>) {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let lead = |p: &MPoly<C>| -> (u32, C) {
        let d = p.degree_in(v);
        (d, p.coeff(&Monomial::power(v, d)))
    };
    let (db, cb) = lead(b);
    let mut q = MPoly::zero();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let (dr, cr) = lead(&r);
        let t = MPoly::term(cr / cb.clone(), Monomial::power(v, dr - db));
        r = &r - &(&t * b);
        q = &q + &t;
    }
    (q, r)
}

/// Monic greatest common divisor of univariate polynomials in `v`.
pub fn univariate_gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, v: Var) -> MPoly<C> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = univariate_div_rem(&x, &y, v);
        x = y;
        y = r;
    }
    match x.leading_term() {
        Some((_, c)) => {
            let inv = C::one() / c.clone();
            x.scale(&inv)
        }
        None => x,
    }
}

impl<C: Coeff> Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c:?})*{m}")?;
        }
        Ok(())
    }
}

impl<'a, C: Coeff> Add<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;

    fn add(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }
}

impl<'a, C: Coeff> Sub<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;

    fn sub(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            accumulate(&mut terms, m.clone(), -c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }
}

impl<'a, C: Coeff> Mul<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;

    fn mul(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut acc: HashMap<Monomial, C> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;

    fn neg(self) -> MPoly<C> {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;

    fn neg(self) -> MPoly<C> {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> $tr<MPoly<C>> for MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: MPoly<C>) -> MPoly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, C: Coeff> $tr<&'a MPoly<C>> for MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: &'a MPoly<C>) -> MPoly<C> {
                (&self).$method(rhs)
            }
        }
        impl<'a, C: Coeff> $tr<MPoly<C>> for &'a MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: MPoly<C>) -> MPoly<C> {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<C: Coeff> std::iter::Sum for MPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(MPoly::zero(), |acc, p| &acc + &p)
    }
}

impl<C: Coeff> std::iter::Product for MPoly<C> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(MPoly::one(), |acc, p| &acc * &p)
    }
}
