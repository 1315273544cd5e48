//! Operator pairs `(update, query)` and the aggregator `F` every structure in
//! this crate is generic over.
//!
//! A pair supplies an update operator `∇`, a query operator `△` (both
//! commutative and associative, with identities) and an aggregator
//! `F(a, v, k)` such that folding `k` elements after updating each one by `v`
//! equals `F(fold, v, k)`.

mod builtin;
pub mod laws;
mod scalar;
mod zero_tracked;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};

pub use builtin::{
    builtin_pairs, lookup, MaxMax, MinMin, PairId, PairInfo, PairVisitor, PlusMax, PlusMin,
    PlusPlus, TimesPlus, TimesTimes,
};
pub use scalar::Scalar;
pub use zero_tracked::{Rational, ZeroTrackedProduct, ZeroTrackedSum};

/// A value stored in a range structure.
pub trait Element:
    Clone + PartialEq + fmt::Debug + fmt::Display + FromStr<Err = Error> + Send + Sync + 'static
{
    /// Lossy numeric view, used only for deviation reports.
    fn to_f64(&self) -> f64;
}

impl Element for Scalar {
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(*self)
    }
}

impl Element for ZeroTrackedSum {
    fn to_f64(&self) -> f64 {
        ZeroTrackedSum::to_f64(self)
    }
}

impl Element for ZeroTrackedProduct {
    fn to_f64(&self) -> f64 {
        ZeroTrackedProduct::to_f64(self)
    }
}

/// An update/query operator pair.
///
/// `update_op` composes update values (and applies one to a single element);
/// structures apply updates to aggregates only through [`aggregate`].
///
/// [`aggregate`]: OperatorPair::aggregate
pub trait OperatorPair: Clone + fmt::Debug + Send + Sync + 'static {
    type Value: Element;

    fn name(&self) -> String;

    /// `a ∇ v`
    fn update_op(&self, a: &Self::Value, v: &Self::Value) -> Result<Self::Value>;

    /// `a △ b`
    fn query_op(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;

    fn update_identity(&self) -> Self::Value;

    fn query_identity(&self) -> Self::Value;

    /// `F(a, v, k)`: the fold of `k` elements, each updated by `v`, given
    /// that their fold before the update was `a`.
    fn aggregate(&self, a: &Self::Value, v: &Self::Value, k: u64) -> Result<Self::Value>;

    /// `v ∇ v ∇ … ∇ v` with `j` copies; the identity for `j = 0`.
    fn repeat(&self, v: &Self::Value, j: u64) -> Result<Self::Value> {
        if self.update_idempotent() {
            return Ok(if j == 0 {
                self.update_identity()
            } else {
                v.clone()
            });
        }
        let mut acc = self.update_identity();
        let mut base = v.clone();
        let mut j = j;
        while j > 0 {
            if j & 1 == 1 {
                acc = self.update_op(&acc, &base)?;
            }
            j >>= 1;
            if j > 0 {
                base = self.update_op(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `inv(x)` with `x ∇ inv(x) = ∅_U`.
    fn inverse(&self, x: &Self::Value) -> Result<Self::Value> {
        let _ = x;
        Err(Error::NoInverse(self.name()))
    }

    fn has_inverse(&self) -> bool {
        false
    }

    /// Whether `(a ∇ v) △ b = (a △ b) ∇ v` holds.
    fn is_special(&self) -> bool {
        false
    }

    fn update_idempotent(&self) -> bool {
        false
    }

    fn query_idempotent(&self) -> bool {
        false
    }
}

/// Inclusive bounds for randomly drawn values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ValueRange {
    pub lo: i64,
    pub hi: i64,
}

impl ValueRange {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }
}

impl Default for ValueRange {
    fn default() -> Self {
        Self::new(-100, 100)
    }
}

/// Pairs that can produce sample values for law checks and workloads.
pub trait SampledPair: OperatorPair {
    /// A short list of small values, tried exhaustively before random sampling.
    fn small_values(&self) -> Vec<Self::Value>;

    /// A random element or update value. Additive pairs draw uniformly from
    /// `range`; the multiplicative pairs draw from a fixed set of small
    /// factors so that exact products stay compact.
    fn sample_value(&self, rng: &mut dyn RngCore, range: ValueRange) -> Self::Value;
}

/// `F(a, v, k)` for `k >= 1`.
pub fn eval_f<P: OperatorPair>(pair: &P, a: &P::Value, v: &P::Value, k: u64) -> Result<P::Value> {
    if k == 0 {
        return Err(Error::Config("aggregator count k must be positive".into()));
    }
    pair.aggregate(a, v, k)
}

/// `v ⊗ j` for `j >= 1`.
pub fn repeat<P: OperatorPair>(pair: &P, v: &P::Value, j: u64) -> Result<P::Value> {
    if j == 0 {
        return Err(Error::Config("repeat count j must be positive".into()));
    }
    pair.repeat(v, j)
}

/// `G(a, v, j, k)`: the fold of `k` elements with fold `a` after updating
/// exactly `j` of them by `v`. Only defined for special pairs.
pub fn eval_g<P: OperatorPair>(
    pair: &P,
    a: &P::Value,
    v: &P::Value,
    j: u64,
    k: u64,
) -> Result<P::Value> {
    if !pair.is_special() {
        return Err(Error::NotSpecial {
            pair: pair.name(),
            witness: None,
        });
    }
    if k == 0 || j > k {
        return Err(Error::Config(format!(
            "G requires 0 <= j <= k and k >= 1, got j={j}, k={k}"
        )));
    }
    if j == 0 {
        return Ok(a.clone());
    }
    pair.update_op(a, &pair.repeat(v, j)?)
}

/// `inv(x)`.
pub fn invert<P: OperatorPair>(pair: &P, x: &P::Value) -> Result<P::Value> {
    pair.inverse(x)
}

/// The pair `(∇, ∇)`: the lazy-array pair of the special d-dimensional tree.
#[derive(Clone, Debug)]
pub struct UpdateFold<P>(pub P);

impl<P: OperatorPair> OperatorPair for UpdateFold<P> {
    type Value = P::Value;

    fn name(&self) -> String {
        format!("update-fold({})", self.0.name())
    }

    fn update_op(&self, a: &P::Value, v: &P::Value) -> Result<P::Value> {
        self.0.update_op(a, v)
    }

    fn query_op(&self, a: &P::Value, b: &P::Value) -> Result<P::Value> {
        self.0.update_op(a, b)
    }

    fn update_identity(&self) -> P::Value {
        self.0.update_identity()
    }

    fn query_identity(&self) -> P::Value {
        self.0.update_identity()
    }

    fn aggregate(&self, a: &P::Value, v: &P::Value, k: u64) -> Result<P::Value> {
        self.0.update_op(a, &self.0.repeat(v, k)?)
    }

    fn repeat(&self, v: &P::Value, j: u64) -> Result<P::Value> {
        self.0.repeat(v, j)
    }

    fn inverse(&self, x: &P::Value) -> Result<P::Value> {
        self.0.inverse(x)
    }

    fn has_inverse(&self) -> bool {
        self.0.has_inverse()
    }

    fn is_special(&self) -> bool {
        true
    }

    fn update_idempotent(&self) -> bool {
        self.0.update_idempotent()
    }

    fn query_idempotent(&self) -> bool {
        self.0.update_idempotent()
    }
}

/// The pair used by an inner tree whose outer node covers `scale` rows.
///
/// Each inner element is already a fold of `scale` base elements, so an
/// update `v` changes it to `F(a, v, scale)` and a fold of `k` inner elements
/// is updated by `F(a, v, scale * k)`. Update values still compose with the
/// base `∇`.
#[derive(Clone, Debug)]
pub struct ScaledPair<P> {
    base: P,
    scale: u64,
}

impl<P: OperatorPair> ScaledPair<P> {
    pub fn new(base: P, scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::Config("scale must be positive".into()));
        }
        Ok(Self { base, scale })
    }

    pub fn base(&self) -> &P {
        &self.base
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// `a ∇_x v = F(a, v, x)`: one inner element updated by `v`.
    pub fn apply(&self, a: &P::Value, v: &P::Value) -> Result<P::Value> {
        self.base.aggregate(a, v, self.scale)
    }
}

impl<P: OperatorPair> OperatorPair for ScaledPair<P> {
    type Value = P::Value;

    fn name(&self) -> String {
        format!("{}/x{}", self.base.name(), self.scale)
    }

    fn update_op(&self, a: &P::Value, v: &P::Value) -> Result<P::Value> {
        self.base.update_op(a, v)
    }

    fn query_op(&self, a: &P::Value, b: &P::Value) -> Result<P::Value> {
        self.base.query_op(a, b)
    }

    fn update_identity(&self) -> P::Value {
        self.base.update_identity()
    }

    fn query_identity(&self) -> P::Value {
        self.base.query_identity()
    }

    fn aggregate(&self, a: &P::Value, v: &P::Value, k: u64) -> Result<P::Value> {
        let n = self
            .scale
            .checked_mul(k)
            .ok_or(Error::Overflow("scaled aggregate count"))?;
        self.base.aggregate(a, v, n)
    }

    fn repeat(&self, v: &P::Value, j: u64) -> Result<P::Value> {
        self.base.repeat(v, j)
    }

    fn inverse(&self, x: &P::Value) -> Result<P::Value> {
        self.base.inverse(x)
    }

    fn has_inverse(&self) -> bool {
        self.base.has_inverse()
    }

    fn update_idempotent(&self) -> bool {
        self.base.update_idempotent()
    }

    fn query_idempotent(&self) -> bool {
        self.base.query_idempotent()
    }
}
