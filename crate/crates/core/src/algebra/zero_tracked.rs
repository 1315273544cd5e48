//! Exact multiplicative domains that keep `x * 0` invertible.
//!
//! A value is stored as `mantissa * 0^depth`: multiplying by zero bumps the
//! depth instead of destroying the mantissa, so every update factor has an
//! exact inverse `(1 / mantissa, -depth)`. The effective (observable) value is
//! the depth-0 part.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    t.parse::<Rational>()
        .map_err(|_| Error::Parse(format!("`{t}` is not an integer or p/q rational")))
}

fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn pow_rational(base: &Rational, mut exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    if b.is_one() || exp == 0 {
        return acc;
    }
    if (-b.clone()).is_one() {
        return if exp.is_multiple_of(2) { acc } else { b };
    }
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// A sum of zero-tracked terms: `(depth, mantissa)` pairs sorted by depth,
/// with distinct depths and no zero mantissas.
///
/// Updates are single terms; applying one scales every mantissa and shifts
/// every depth, which distributes over the key-wise sum.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZeroTrackedSum {
    terms: Vec<(i64, Rational)>,
}

impl ZeroTrackedSum {
    /// The additive identity: no terms.
    pub fn zero_sum() -> Self {
        Self::default()
    }

    /// The multiplicative identity `1 * 0^0`.
    pub fn unit() -> Self {
        Self::monomial(0, Rational::one())
    }

    /// `mantissa * 0^depth`. A zero mantissa yields the empty sum.
    pub fn monomial(depth: i64, mantissa: Rational) -> Self {
        let terms = if mantissa.is_zero() {
            Vec::new()
        } else {
            vec![(depth, mantissa)]
        };
        Self { terms }
    }

    /// An element holding the ordinary number `q`; zero is encoded as
    /// `1 * 0^1` so that it stays invertible.
    pub fn from_rational(q: Rational) -> Self {
        if q.is_zero() {
            Self::monomial(1, Rational::one())
        } else {
            Self::monomial(0, q)
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(x)))
    }

    pub fn terms(&self) -> &[(i64, Rational)] {
        &self.terms
    }

    /// The mantissa sum at `depth`.
    pub fn term(&self, depth: i64) -> Option<&Rational> {
        self.terms
            .binary_search_by_key(&depth, |(d, _)| *d)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// The single term, if this sum has exactly one.
    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        match self.terms.as_slice() {
            [(d, m)] => Some((*d, m)),
            _ => None,
        }
    }

    /// The observable value: the depth-0 mantissa sum.
    pub fn effective(&self) -> Rational {
        self.term(0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn sum(&self, other: &Self) -> Self {
        if self.terms.is_empty() {
            return other.clone();
        }
        if other.terms.is_empty() {
            return self.clone();
        }
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(x.len() + y.len());
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                Ordering::Less => {
                    terms.push(x[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(y[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let m = &x[i].1 + &y[j].1;
                    if !m.is_zero() {
                        terms.push((x[i].0, m));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&x[i..]);
        terms.extend_from_slice(&y[j..]);
        Self { terms }
    }

    /// Scale every mantissa by `factor` and shift every depth by `delta`.
    pub fn scale_shift(&self, factor: &Rational, delta: i64) -> Result<Self> {
        debug_assert!(!factor.is_zero());
        let sign = if factor.is_one() {
            Some(false)
        } else if factor.denom().is_one() && (-factor.numer()).is_one() {
            Some(true)
        } else {
            None
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for (d, m) in &self.terms {
            let depth = d
                .checked_add(delta)
                .ok_or(Error::Overflow("zero depth shift"))?;
            let scaled = match sign {
                Some(false) => m.clone(),
                Some(true) => -m,
                None => m * factor,
            };
            terms.push((depth, scaled));
        }
        Ok(Self { terms })
    }

    /// Apply the single-term update `v` to this sum.
    pub fn apply(&self, v: &Self) -> Result<Self> {
        let (delta, factor) = v
            .as_monomial()
            .ok_or_else(|| Error::NotMonomial(v.to_string()))?;
        self.scale_shift(factor, delta)
    }

    /// The update that undoes `self`, when `self` is a single term.
    pub fn inverse(&self) -> Result<Self> {
        let (d, m) = self
            .as_monomial()
            .ok_or_else(|| Error::NotInvertible(self.to_string()))?;
        let depth = d
            .checked_neg()
            .ok_or(Error::Overflow("zero depth negation"))?;
        Ok(Self::monomial(depth, m.recip()))
    }

    /// `self` composed with itself `j` times (single terms only).
    pub fn power(&self, j: u64) -> Result<Self> {
        let (d, m) = self
            .as_monomial()
            .ok_or_else(|| Error::NotMonomial(self.to_string()))?;
        let depth = i64::try_from(j)
            .ok()
            .and_then(|j| d.checked_mul(j))
            .ok_or(Error::Overflow("zero depth power"))?;
        Ok(Self::monomial(depth, pow_rational(m, j)))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.effective())
    }
}

impl fmt::Display for ZeroTrackedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.effective())
    }
}

impl fmt::Debug for ZeroTrackedSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}: {m}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for ZeroTrackedSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Self::from_rational)
    }
}

/// A single zero-tracked factor `mantissa * 0^depth` under multiplication.
/// The mantissa is never zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZeroTrackedProduct {
    depth: i64,
    mantissa: Rational,
}

impl ZeroTrackedProduct {
    pub fn unit() -> Self {
        Self {
            depth: 0,
            mantissa: Rational::one(),
        }
    }

    pub fn new(depth: i64, mantissa: Rational) -> Result<Self> {
        if mantissa.is_zero() {
            return Err(Error::Parse(
                "zero-tracked mantissa must be non-zero".into(),
            ));
        }
        Ok(Self { depth, mantissa })
    }

    pub fn from_rational(q: Rational) -> Self {
        if q.is_zero() {
            Self {
                depth: 1,
                mantissa: Rational::one(),
            }
        } else {
            Self {
                depth: 0,
                mantissa: q,
            }
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(x)))
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn mantissa(&self) -> &Rational {
        &self.mantissa
    }

    pub fn effective(&self) -> Rational {
        if self.depth == 0 {
            self.mantissa.clone()
        } else {
            Rational::zero()
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            depth: self
                .depth
                .checked_add(other.depth)
                .ok_or(Error::Overflow("zero depth product"))?,
            mantissa: &self.mantissa * &other.mantissa,
        })
    }

    pub fn power(&self, k: u64) -> Result<Self> {
        let depth = i64::try_from(k)
            .ok()
            .and_then(|k| self.depth.checked_mul(k))
            .ok_or(Error::Overflow("zero depth power"))?;
        Ok(Self {
            depth,
            mantissa: pow_rational(&self.mantissa, k),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            depth: self
                .depth
                .checked_neg()
                .ok_or(Error::Overflow("zero depth negation"))?,
            mantissa: self.mantissa.recip(),
        })
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.effective())
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }
}

impl fmt::Display for ZeroTrackedProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.depth {
            0 => write!(f, "{}", self.mantissa),
            d if d > 0 => f.write_str("0"),
            d => write!(f, "{}*0^{}", self.mantissa, d),
        }
    }
}

impl fmt::Debug for ZeroTrackedProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*0^{}", self.mantissa, self.depth)
    }
}

impl FromStr for ZeroTrackedProduct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Self::from_rational)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn no_explicit_zero_entries() {
        let a = ZeroTrackedSum::from_int(3);
        let b = ZeroTrackedSum::from_int(-3);
        assert_eq!(a.sum(&b), ZeroTrackedSum::zero_sum());
        assert!(a.sum(&b).terms().is_empty());
    }

    #[test]
    fn plain_elements_have_one_depth_zero_entry() {
        let a = ZeroTrackedSum::from_int(7);
        assert_eq!(a.as_monomial(), Some((0, &q("7"))));
        let zero = ZeroTrackedSum::from_int(0);
        assert_eq!(zero.as_monomial(), Some((1, &q("1"))));
        assert_eq!(zero.effective(), q("0"));
    }

    #[test]
    fn multiplying_by_zero_is_undone_exactly() {
        let a = ZeroTrackedSum::from_int(5).sum(&ZeroTrackedSum::from_int(2));
        let by_zero = ZeroTrackedSum::from_int(0);
        let zeroed = a.apply(&by_zero).unwrap();
        assert_eq!(zeroed.effective(), q("0"));
        assert_eq!(zeroed.term(1), Some(&q("7")));
        let restored = zeroed.apply(&by_zero.inverse().unwrap()).unwrap();
        assert_eq!(restored, a);
    }

    #[test]
    fn sums_only_accept_single_term_updates() {
        let two_terms = ZeroTrackedSum::from_int(1).sum(&ZeroTrackedSum::from_int(0));
        assert!(matches!(
            ZeroTrackedSum::unit().apply(&two_terms),
            Err(Error::NotMonomial(_))
        ));
        assert!(two_terms.inverse().is_err());
    }

    #[test]
    fn power_tracks_depth_and_sign() {
        let m = ZeroTrackedSum::from_int(-2);
        assert_eq!(m.power(3).unwrap(), ZeroTrackedSum::from_int(-8));
        let z = ZeroTrackedSum::from_int(0).power(4).unwrap();
        assert_eq!(z.as_monomial(), Some((4, &q("1"))));
    }

    #[test]
    fn product_domain() {
        let a = ZeroTrackedProduct::from_int(3);
        let z = ZeroTrackedProduct::from_int(0);
        let p = a.mul(&z).unwrap();
        assert_eq!(p.effective(), q("0"));
        assert_eq!(p.to_string(), "0");
        let back = p.mul(&z.inverse().unwrap()).unwrap();
        assert_eq!(back, a);
        assert_eq!(
            ZeroTrackedProduct::from_int(-1)
                .power(5)
                .unwrap()
                .to_string(),
            "-1"
        );
        assert_eq!(
            "3/4".parse::<ZeroTrackedProduct>().unwrap().to_string(),
            "3/4"
        );
        assert_eq!(z.inverse().unwrap().to_string(), "1*0^-1");
    }
}
