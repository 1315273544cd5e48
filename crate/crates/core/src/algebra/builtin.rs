use std::fmt;

use rand::{Rng, RngCore};

use super::{
    OperatorPair, Rational, SampledPair, Scalar, ValueRange, ZeroTrackedProduct, ZeroTrackedSum,
};
use crate::error::{Error, Result};

fn small_scalars() -> Vec<Scalar> {
    [0, 1, -1, 2, -2].into_iter().map(Scalar::from).collect()
}

fn sample_scalar(rng: &mut dyn RngCore, range: ValueRange) -> Scalar {
    let lo = range.lo.max(Scalar::MIN_FINITE);
    let hi = range.hi.min(Scalar::MAX_FINITE).max(lo);
    Scalar::finite(rng.gen_range(lo..=hi)).expect("clamped to the finite range")
}

macro_rules! scalar_sampling {
    ($t:ty) => {
        impl SampledPair for $t {
            fn small_values(&self) -> Vec<Scalar> {
                small_scalars()
            }

            fn sample_value(&self, rng: &mut dyn RngCore, range: ValueRange) -> Scalar {
                sample_scalar(rng, range)
            }
        }
    };
}

/// `(+, min)` with `F(a, v, k) = a + v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlusMin;

impl OperatorPair for PlusMin {
    type Value = Scalar;

    fn name(&self) -> String {
        "plus-min".into()
    }
    fn update_op(&self, a: &Scalar, v: &Scalar) -> Result<Scalar> {
        a.checked_add(*v)
    }
    fn query_op(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(*a.min(b))
    }
    fn update_identity(&self) -> Scalar {
        Scalar::ZERO
    }
    fn query_identity(&self) -> Scalar {
        Scalar::POS_INF
    }
    fn aggregate(&self, a: &Scalar, v: &Scalar, _k: u64) -> Result<Scalar> {
        a.checked_add(*v)
    }
    fn repeat(&self, v: &Scalar, j: u64) -> Result<Scalar> {
        v.checked_scale(j)
    }
    fn inverse(&self, x: &Scalar) -> Result<Scalar> {
        x.checked_neg()
    }
    fn has_inverse(&self) -> bool {
        true
    }
    fn query_idempotent(&self) -> bool {
        true
    }
}
scalar_sampling!(PlusMin);

/// `(+, max)` with `F(a, v, k) = a + v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlusMax;

impl OperatorPair for PlusMax {
    type Value = Scalar;

    fn name(&self) -> String {
        "plus-max".into()
    }
    fn update_op(&self, a: &Scalar, v: &Scalar) -> Result<Scalar> {
        a.checked_add(*v)
    }
    fn query_op(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(*a.max(b))
    }
    fn update_identity(&self) -> Scalar {
        Scalar::ZERO
    }
    fn query_identity(&self) -> Scalar {
        Scalar::NEG_INF
    }
    fn aggregate(&self, a: &Scalar, v: &Scalar, _k: u64) -> Result<Scalar> {
        a.checked_add(*v)
    }
    fn repeat(&self, v: &Scalar, j: u64) -> Result<Scalar> {
        v.checked_scale(j)
    }
    fn inverse(&self, x: &Scalar) -> Result<Scalar> {
        x.checked_neg()
    }
    fn has_inverse(&self) -> bool {
        true
    }
    fn query_idempotent(&self) -> bool {
        true
    }
}
scalar_sampling!(PlusMax);

/// `(+, +)` with `F(a, v, k) = a + v * k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlusPlus;

impl OperatorPair for PlusPlus {
    type Value = Scalar;

    fn name(&self) -> String {
        "plus-plus".into()
    }
    fn update_op(&self, a: &Scalar, v: &Scalar) -> Result<Scalar> {
        a.checked_add(*v)
    }
    fn query_op(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        a.checked_add(*b)
    }
    fn update_identity(&self) -> Scalar {
        Scalar::ZERO
    }
    fn query_identity(&self) -> Scalar {
        Scalar::ZERO
    }
    fn aggregate(&self, a: &Scalar, v: &Scalar, k: u64) -> Result<Scalar> {
        a.checked_add(v.checked_scale(k)?)
    }
    fn repeat(&self, v: &Scalar, j: u64) -> Result<Scalar> {
        v.checked_scale(j)
    }
    fn inverse(&self, x: &Scalar) -> Result<Scalar> {
        x.checked_neg()
    }
    fn has_inverse(&self) -> bool {
        true
    }
    fn is_special(&self) -> bool {
        true
    }
}
scalar_sampling!(PlusPlus);

/// `(min, min)` with `F(a, v, k) = min(a, v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MinMin;

impl OperatorPair for MinMin {
    type Value = Scalar;

    fn name(&self) -> String {
        "min-min".into()
    }
    fn update_op(&self, a: &Scalar, v: &Scalar) -> Result<Scalar> {
        Ok(*a.min(v))
    }
    fn query_op(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(*a.min(b))
    }
    fn update_identity(&self) -> Scalar {
        Scalar::POS_INF
    }
    fn query_identity(&self) -> Scalar {
        Scalar::POS_INF
    }
    fn aggregate(&self, a: &Scalar, v: &Scalar, _k: u64) -> Result<Scalar> {
        Ok(*a.min(v))
    }
    fn is_special(&self) -> bool {
        true
    }
    fn update_idempotent(&self) -> bool {
        true
    }
    fn query_idempotent(&self) -> bool {
        true
    }
}
scalar_sampling!(MinMin);

/// `(max, max)` with `F(a, v, k) = max(a, v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaxMax;

impl OperatorPair for MaxMax {
    type Value = Scalar;

    fn name(&self) -> String {
        "max-max".into()
    }
    fn update_op(&self, a: &Scalar, v: &Scalar) -> Result<Scalar> {
        Ok(*a.max(v))
    }
    fn query_op(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(*a.max(b))
    }
    fn update_identity(&self) -> Scalar {
        Scalar::NEG_INF
    }
    fn query_identity(&self) -> Scalar {
        Scalar::NEG_INF
    }
    fn aggregate(&self, a: &Scalar, v: &Scalar, _k: u64) -> Result<Scalar> {
        Ok(*a.max(v))
    }
    fn is_special(&self) -> bool {
        true
    }
    fn update_idempotent(&self) -> bool {
        true
    }
    fn query_idempotent(&self) -> bool {
        true
    }
}
scalar_sampling!(MaxMax);

fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `(*, *)` over zero-tracked rationals, `F(a, v, k) = a * v^k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TimesTimes;

impl OperatorPair for TimesTimes {
    type Value = ZeroTrackedProduct;

    fn name(&self) -> String {
        "times-times".into()
    }
    fn update_op(
        &self,
        a: &ZeroTrackedProduct,
        v: &ZeroTrackedProduct,
    ) -> Result<ZeroTrackedProduct> {
        a.mul(v)
    }
    fn query_op(
        &self,
        a: &ZeroTrackedProduct,
        b: &ZeroTrackedProduct,
    ) -> Result<ZeroTrackedProduct> {
        a.mul(b)
    }
    fn update_identity(&self) -> ZeroTrackedProduct {
        ZeroTrackedProduct::unit()
    }
    fn query_identity(&self) -> ZeroTrackedProduct {
        ZeroTrackedProduct::unit()
    }
    fn aggregate(
        &self,
        a: &ZeroTrackedProduct,
        v: &ZeroTrackedProduct,
        k: u64,
    ) -> Result<ZeroTrackedProduct> {
        a.mul(&v.power(k)?)
    }
    fn repeat(&self, v: &ZeroTrackedProduct, j: u64) -> Result<ZeroTrackedProduct> {
        v.power(j)
    }
    fn inverse(&self, x: &ZeroTrackedProduct) -> Result<ZeroTrackedProduct> {
        x.inverse()
    }
    fn has_inverse(&self) -> bool {
        true
    }
    fn is_special(&self) -> bool {
        true
    }
}

impl SampledPair for TimesTimes {
    fn small_values(&self) -> Vec<ZeroTrackedProduct> {
        [
            rational(1, 1),
            rational(-1, 1),
            rational(2, 1),
            rational(0, 1),
            rational(1, 2),
        ]
        .into_iter()
        .map(ZeroTrackedProduct::from_rational)
        .collect()
    }

    /// Draws from `{-1, 0, 1}` (zero with probability 1/8) regardless of the
    /// range: a product over a whole grid of larger factors grows without bound.
    fn sample_value(&self, rng: &mut dyn RngCore, _range: ValueRange) -> ZeroTrackedProduct {
        let x = match rng.gen_range(0..8) {
            0 => 0,
            1..=4 => 1,
            _ => -1,
        };
        ZeroTrackedProduct::from_int(x)
    }
}

/// `(*, +)` over zero-tracked rational sums, `F(a, v, k) = a * v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TimesPlus;

impl OperatorPair for TimesPlus {
    type Value = ZeroTrackedSum;

    fn name(&self) -> String {
        "times-plus".into()
    }
    fn update_op(&self, a: &ZeroTrackedSum, v: &ZeroTrackedSum) -> Result<ZeroTrackedSum> {
        a.apply(v)
    }
    fn query_op(&self, a: &ZeroTrackedSum, b: &ZeroTrackedSum) -> Result<ZeroTrackedSum> {
        Ok(a.sum(b))
    }
    fn update_identity(&self) -> ZeroTrackedSum {
        ZeroTrackedSum::unit()
    }
    fn query_identity(&self) -> ZeroTrackedSum {
        ZeroTrackedSum::zero_sum()
    }
    fn aggregate(&self, a: &ZeroTrackedSum, v: &ZeroTrackedSum, _k: u64) -> Result<ZeroTrackedSum> {
        a.apply(v)
    }
    fn repeat(&self, v: &ZeroTrackedSum, j: u64) -> Result<ZeroTrackedSum> {
        v.power(j)
    }
    fn inverse(&self, x: &ZeroTrackedSum) -> Result<ZeroTrackedSum> {
        x.inverse()
    }
    fn has_inverse(&self) -> bool {
        true
    }
}

impl SampledPair for TimesPlus {
    fn small_values(&self) -> Vec<ZeroTrackedSum> {
        [
            rational(1, 1),
            rational(0, 1),
            rational(-1, 1),
            rational(2, 1),
            rational(1, 2),
        ]
        .into_iter()
        .map(ZeroTrackedSum::from_rational)
        .collect()
    }

    /// Draws zero with probability 1/32, otherwise `±1`, `±2` or `±1/2` with
    /// weights 6:1:1, regardless of the range.
    fn sample_value(&self, rng: &mut dyn RngCore, _range: ValueRange) -> ZeroTrackedSum {
        if rng.gen_range(0..32) == 0 {
            return ZeroTrackedSum::from_int(0);
        }
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let q = match rng.gen_range(0..8) {
            0 => rational(sign * 2, 1),
            1 => rational(sign, 2),
            _ => rational(sign, 1),
        };
        ZeroTrackedSum::from_rational(q)
    }
}

/// Stable identifiers of the built-in pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairId {
    PlusMin,
    PlusMax,
    PlusPlus,
    TimesTimes,
    MinMin,
    MaxMax,
    TimesPlus,
}

/// Generic callback over a built-in pair, see [`PairId::visit`].
pub trait PairVisitor {
    type Output;

    fn visit<P: SampledPair>(self, pair: P) -> Self::Output;
}

impl PairId {
    pub const ALL: [PairId; 7] = [
        PairId::PlusMin,
        PairId::PlusMax,
        PairId::PlusPlus,
        PairId::TimesTimes,
        PairId::MinMin,
        PairId::MaxMax,
        PairId::TimesPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairId::PlusMin => "plus-min",
            PairId::PlusMax => "plus-max",
            PairId::PlusPlus => "plus-plus",
            PairId::TimesTimes => "times-times",
            PairId::MinMin => "min-min",
            PairId::MaxMax => "max-max",
            PairId::TimesPlus => "times-plus",
        }
    }

    pub fn from_name(name: &str) -> Result<PairId> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == name)
            .ok_or_else(|| Error::Unknown {
                kind: "operator pair",
                name: name.to_string(),
            })
    }

    /// Call `visitor` with the concrete pair.
    pub fn visit<V: PairVisitor>(self, visitor: V) -> V::Output {
        match self {
            PairId::PlusMin => visitor.visit(PlusMin),
            PairId::PlusMax => visitor.visit(PlusMax),
            PairId::PlusPlus => visitor.visit(PlusPlus),
            PairId::TimesTimes => visitor.visit(TimesTimes),
            PairId::MinMin => visitor.visit(MinMin),
            PairId::MaxMax => visitor.visit(MaxMax),
            PairId::TimesPlus => visitor.visit(TimesPlus),
        }
    }

    pub fn info(self) -> PairInfo {
        struct Describe(PairId);
        impl PairVisitor for Describe {
            type Output = PairInfo;
            fn visit<P: SampledPair>(self, pair: P) -> PairInfo {
                PairInfo {
                    id: self.0,
                    name: self.0.name(),
                    update_identity: pair.update_identity().to_string(),
                    query_identity: pair.query_identity().to_string(),
                    has_inverse: pair.has_inverse(),
                    is_special: pair.is_special(),
                    update_idempotent: pair.update_idempotent(),
                    query_idempotent: pair.query_idempotent(),
                }
            }
        }
        self.visit(Describe(self))
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PairId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairId::from_name(s)
    }
}

/// Registry entry describing a built-in pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairInfo {
    pub id: PairId,
    pub name: &'static str,
    pub update_identity: String,
    pub query_identity: String,
    pub has_inverse: bool,
    pub is_special: bool,
    pub update_idempotent: bool,
    pub query_idempotent: bool,
}

pub fn builtin_pairs() -> Vec<PairInfo> {
    PairId::ALL.into_iter().map(PairId::info).collect()
}

pub fn lookup(name: &str) -> Result<PairInfo> {
    PairId::from_name(name).map(PairId::info)
}
