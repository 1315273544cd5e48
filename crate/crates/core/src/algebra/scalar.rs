use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A 64-bit integer extended with `+inf` and `-inf`.
///
/// The two extreme `i64` values are reserved as the infinities, so the finite
/// range is `i64::MIN + 1 ..= i64::MAX - 1`. The derived ordering is the
/// extended ordering. Arithmetic is checked: overflow and `inf + -inf` are
/// errors, never wraparound.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(i64);

impl Scalar {
    pub const POS_INF: Scalar = Scalar(i64::MAX);
    pub const NEG_INF: Scalar = Scalar(i64::MIN);
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);
    pub const MAX_FINITE: i64 = i64::MAX - 1;
    pub const MIN_FINITE: i64 = i64::MIN + 1;

    /// A finite scalar, or `None` if `x` is one of the reserved sentinels.
    pub fn finite(x: i64) -> Option<Scalar> {
        (Self::MIN_FINITE..=Self::MAX_FINITE)
            .contains(&x)
            .then_some(Scalar(x))
    }

    fn checked(x: Option<i64>, op: &'static str) -> Result<Scalar> {
        x.and_then(Scalar::finite).ok_or(Error::Overflow(op))
    }

    pub fn is_finite(self) -> bool {
        self != Self::POS_INF && self != Self::NEG_INF
    }

    /// The finite value, if any.
    pub fn get(self) -> Option<i64> {
        self.is_finite().then_some(self.0)
    }

    pub fn checked_add(self, rhs: Scalar) -> Result<Scalar> {
        match (self.is_finite(), rhs.is_finite()) {
            (true, true) => Self::checked(self.0.checked_add(rhs.0), "scalar addition"),
            (false, true) => Ok(self),
            (true, false) => Ok(rhs),
            (false, false) if self == rhs => Ok(self),
            (false, false) => Err(Error::Indeterminate(format!("{self} + {rhs}"))),
        }
    }

    /// `self` added to itself `k` times.
    pub fn checked_scale(self, k: u64) -> Result<Scalar> {
        if k == 0 {
            return Ok(Scalar::ZERO);
        }
        if !self.is_finite() {
            return Ok(self);
        }
        let k = i64::try_from(k).map_err(|_| Error::Overflow("scalar scaling"))?;
        Self::checked(self.0.checked_mul(k), "scalar scaling")
    }

    pub fn checked_neg(self) -> Result<Scalar> {
        if self.is_finite() {
            Ok(Scalar(-self.0))
        } else {
            Err(Error::NotInvertible(self.to_string()))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::POS_INF => f64::INFINITY,
            Self::NEG_INF => f64::NEG_INFINITY,
            Scalar(x) => x as f64,
        }
    }
}

impl From<i32> for Scalar {
    fn from(x: i32) -> Self {
        Scalar(i64::from(x))
    }
}

impl TryFrom<i64> for Scalar {
    type Error = Error;

    fn try_from(x: i64) -> Result<Self> {
        Scalar::finite(x).ok_or(Error::Overflow("scalar conversion"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::POS_INF => f.write_str("inf"),
            Self::NEG_INF => f.write_str("-inf"),
            Scalar(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Self::POS_INF),
            "-inf" => Ok(Self::NEG_INF),
            t => {
                let x: i64 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("`{t}` is not an integer or ±inf")))?;
                Scalar::finite(x)
                    .ok_or_else(|| Error::Parse(format!("`{t}` is a reserved sentinel")))
            }
        }
    }
}
