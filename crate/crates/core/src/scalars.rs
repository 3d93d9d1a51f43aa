//! Exact scalars: arbitrary-precision rationals and polynomials in the formal
//! parameter ħ (rendered as `hb`).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parses `p` or `p/q` with optional sign.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::from_big(n, d))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
    };
}
rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl std::ops::Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

/// Polynomial in ħ with rational coefficients, stored as `(exponent,
/// coefficient)` pairs in ascending exponent order with no zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HbarPoly {
    terms: Vec<(u32, Rational)>,
}

impl HbarPoly {
    pub fn zero() -> Self {
        HbarPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(Rational::from_int(v))
    }

    /// `c·ħ^k`.
    pub fn monomial(c: Rational, k: u32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            HbarPoly { terms: vec![(k, c)] }
        }
    }

    /// ħ itself.
    pub fn hbar() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// Builds from arbitrary pairs, merging duplicates and pruning zeros.
    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(it: I) -> Self {
        let mut v: Vec<(u32, Rational)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(u32, Rational)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += &c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        HbarPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, Rational)] {
        &self.terms
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.terms
            .iter()
            .find(|t| t.0 == k)
            .map(|t| t.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HbarPoly {
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    /// Multiplies by ħ^k.
    pub fn shift(&self, k: u32) -> Self {
        HbarPoly {
            terms: self.terms.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (k, c) in &self.terms {
            total += &(c * &x.pow(*k));
        }
        total
    }

    fn merge(&self, rhs: &HbarPoly, negate: bool) -> HbarPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut a, mut b) = (0, 0);
        while a < self.terms.len() || b < rhs.terms.len() {
            let ka = self.terms.get(a).map(|t| t.0);
            let kb = rhs.terms.get(b).map(|t| t.0);
            match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    let c = if negate {
                        &self.terms[a].1 - &rhs.terms[b].1
                    } else {
                        &self.terms[a].1 + &rhs.terms[b].1
                    };
                    if !c.is_zero() {
                        out.push((x, c));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.terms[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.terms[a].clone());
                    a += 1;
                }
                _ => {
                    let (k, c) = &rhs.terms[b];
                    out.push((*k, if negate { -c } else { c.clone() }));
                    b += 1;
                }
            }
        }
        HbarPoly { terms: out }
    }

    /// `self += c * rhs`, the hot path of every linear-combination update.
    pub fn add_scaled(&mut self, rhs: &HbarPoly, c: &HbarPoly) {
        if rhs.is_zero() || c.is_zero() {
            return;
        }
        *self = &*self + &(rhs * c);
    }
}

impl fmt::Display for HbarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match *k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if *k == 1 {
                        write!(f, "hb")?;
                    } else {
                        write!(f, "hb^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HbarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HbarPoly({self})")
    }
}

impl Add<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;
    fn add(self, rhs: &HbarPoly) -> HbarPoly {
        self.merge(rhs, false)
    }
}

impl Sub<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;
    fn sub(self, rhs: &HbarPoly) -> HbarPoly {
        self.merge(rhs, true)
    }
}

impl Mul<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;
    fn mul(self, rhs: &HbarPoly) -> HbarPoly {
        if self.is_zero() || rhs.is_zero() {
            return HbarPoly::zero();
        }
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (ka, a) = &self.terms[0];
            let (kb, b) = &rhs.terms[0];
            return HbarPoly::monomial(a * b, ka + kb);
        }
        HbarPoly::from_terms(
            self.terms
                .iter()
                .flat_map(|(ka, a)| rhs.terms.iter().map(move |(kb, b)| (ka + kb, a * b))),
        )
    }
}

impl Neg for &HbarPoly {
    type Output = HbarPoly;
    fn neg(self) -> HbarPoly {
        HbarPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl AddAssign<&HbarPoly> for HbarPoly {
    fn add_assign(&mut self, rhs: &HbarPoly) {
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&HbarPoly> for HbarPoly {
    fn sub_assign(&mut self, rhs: &HbarPoly) {
        *self = self.merge(rhs, true);
    }
}

impl From<Rational> for HbarPoly {
    fn from(c: Rational) -> Self {
        HbarPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rational_is_reduced() {
        let x = r(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(Rational::parse("-10/4"), Some(r(-5, 2)));
        assert_eq!(Rational::parse("7"), Some(r(7, 1)));
        assert_eq!(Rational::parse("1/0"), None);
    }

    #[test]
    fn half_hbar_squared() {
        let h2 = HbarPoly::monomial(r(1, 2), 1);
        assert_eq!(&h2 * &h2, HbarPoly::monomial(r(1, 4), 2));
    }

    #[test]
    fn cancellation_prunes() {
        let a = &HbarPoly::one() - &HbarPoly::hbar();
        assert_eq!(&a + &HbarPoly::hbar(), HbarPoly::one());
        let z = &HbarPoly::zero() * &HbarPoly::monomial(r(3, 1), 3);
        assert!(z.is_zero());
        assert!(z.terms().is_empty());
    }

    #[test]
    fn evaluation() {
        assert_eq!(HbarPoly::monomial(r(1, 1), 2).eval(&r(1, 2)), r(1, 4));
        let p = &HbarPoly::one() + &HbarPoly::hbar();
        assert_eq!(p.eval(&Rational::zero()), r(1, 1));
        let q = &HbarPoly::monomial(r(1, 4), 1) - &HbarPoly::hbar();
        assert_eq!(q.eval(&r(2, 1)), r(-3, 2));
    }

    #[test]
    fn rendering() {
        let p = &HbarPoly::monomial(r(1, 4), 2) - &HbarPoly::monomial(r(2, 1), 1);
        assert_eq!(p.to_string(), "1/4*hb^2 - 2*hb");
        let q = HbarPoly::from_terms([(0, r(-1, 1)), (1, r(1, 1)), (3, r(-5, 3))]);
        assert_eq!(q.to_string(), "-5/3*hb^3 + hb - 1");
        assert_eq!(HbarPoly::zero().to_string(), "0");
    }
}
