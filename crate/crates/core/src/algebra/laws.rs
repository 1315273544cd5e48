//! Sampled checks of the algebraic laws a pair must satisfy.
//!
//! Laws over unbounded domains cannot be checked exhaustively; every check
//! first runs over combinations of [`SampledPair::small_values`] and then
//! over seeded random samples, stopping at the first violation.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{eval_g, SampledPair, ValueRange};
use crate::error::Result;

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;

/// Values drawn for law checks: small enough that integer pairs never overflow.
const LAW_RANGE: ValueRange = ValueRange::new(-50, 50);
const MAX_SEQUENCE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub detail: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.law, self.detail)
    }
}

impl std::error::Error for LawViolation {}

/// A triple on which `(a ∇ v) △ b = (a △ b) ∇ v` fails.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialWitness<V> {
    pub a: V,
    pub b: V,
    pub v: V,
    pub lhs: V,
    pub rhs: V,
}

impl<V: fmt::Display> fmt::Display for SpecialWitness<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={}, b={}, v={}: (a∇v)△b = {} but (a△b)∇v = {}",
            self.a, self.b, self.v, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialCheck<V> {
    pub holds: bool,
    pub samples: usize,
    pub witness: Option<SpecialWitness<V>>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Triples from the small-value grid, then random ones, `samples` in total.
fn triples<P: SampledPair>(
    pair: &P,
    samples: usize,
    seed: u64,
) -> impl Iterator<Item = (P::Value, P::Value, P::Value)> + '_ {
    let small = pair.small_values();
    let mut grid = Vec::with_capacity(small.len().pow(3));
    for a in &small {
        for b in &small {
            for c in &small {
                grid.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let mut r = rng(seed);
    let random = std::iter::repeat_with(move || {
        (
            pair.sample_value(&mut r, LAW_RANGE),
            pair.sample_value(&mut r, LAW_RANGE),
            pair.sample_value(&mut r, LAW_RANGE),
        )
    });
    grid.into_iter().chain(random).take(samples)
}

/// Sample-check the special law and report a counterexample if one is found.
pub fn check_special<P: SampledPair>(
    pair: &P,
    samples: usize,
    seed: u64,
) -> SpecialCheck<P::Value> {
    let mut checked = 0;
    for (a, b, v) in triples(pair, samples, seed) {
        checked += 1;
        let lhs = pair.update_op(&a, &v).and_then(|av| pair.query_op(&av, &b));
        let rhs = pair.query_op(&a, &b).and_then(|ab| pair.update_op(&ab, &v));
        match (lhs, rhs) {
            (Ok(lhs), Ok(rhs)) if lhs == rhs => {}
            (Ok(lhs), Ok(rhs)) => {
                return SpecialCheck {
                    holds: false,
                    samples: checked,
                    witness: Some(SpecialWitness { a, b, v, lhs, rhs }),
                };
            }
            // values outside the update domain (e.g. multi-term sums) are skipped
            _ => {}
        }
    }
    SpecialCheck {
        holds: true,
        samples: checked,
        witness: None,
    }
}

fn violation(law: &'static str, detail: String) -> LawViolation {
    LawViolation { law, detail }
}

fn expect_eq<V: PartialEq + fmt::Debug>(
    law: &'static str,
    context: impl FnOnce() -> String,
    lhs: Result<V>,
    rhs: Result<V>,
) -> Result<(), LawViolation> {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if l == r => Ok(()),
        (Ok(l), Ok(r)) => Err(violation(law, format!("{}: {l:?} != {r:?}", context()))),
        (Err(e), _) | (_, Err(e)) => Err(violation(law, format!("{}: {e}", context()))),
    }
}

fn fold<P: SampledPair>(pair: &P, values: &[P::Value]) -> Result<P::Value> {
    values
        .iter()
        .try_fold(pair.query_identity(), |acc, x| pair.query_op(&acc, x))
}

fn sequence<P: SampledPair>(pair: &P, r: &mut ChaCha8Rng, len: usize) -> Vec<P::Value> {
    (0..len).map(|_| pair.sample_value(r, LAW_RANGE)).collect()
}

/// `∇` and `△` are commutative and associative.
pub fn commutative_associative<P: SampledPair>(
    pair: &P,
    samples: usize,
    seed: u64,
) -> Result<(), LawViolation> {
    for (a, b, c) in triples(pair, samples, seed) {
        let ctx = || format!("a={a:?}, b={b:?}, c={c:?}");
        expect_eq(
            "query commutativity",
            ctx,
            pair.query_op(&a, &b),
            pair.query_op(&b, &a),
        )?;
        expect_eq(
            "query associativity",
            ctx,
            pair.query_op(&a, &b).and_then(|ab| pair.query_op(&ab, &c)),
            pair.query_op(&b, &c).and_then(|bc| pair.query_op(&a, &bc)),
        )?;
        expect_eq(
            "update commutativity",
            ctx,
            pair.update_op(&a, &b),
            pair.update_op(&b, &a),
        )?;
        expect_eq(
            "update associativity",
            ctx,
            pair.update_op(&a, &b)
                .and_then(|ab| pair.update_op(&ab, &c)),
            pair.update_op(&b, &c)
                .and_then(|bc| pair.update_op(&a, &bc)),
        )?;
    }
    Ok(())
}

/// `a ∇ ∅_U = a` and `a △ ∅_Q = a`.
pub fn identities<P: SampledPair>(pair: &P, samples: usize, seed: u64) -> Result<(), LawViolation> {
    let eu = pair.update_identity();
    let eq = pair.query_identity();
    for (a, _, _) in triples(pair, samples, seed) {
        let ctx = || format!("a={a:?}");
        expect_eq(
            "update identity",
            ctx,
            pair.update_op(&a, &eu),
            Ok(a.clone()),
        )?;
        expect_eq("query identity", ctx, pair.query_op(&a, &eq), Ok(a.clone()))?;
    }
    Ok(())
}

/// The defining law of `F`: `△ (a_i ∇ v) = F(△ a_i, v, k)`.
pub fn aggregator<P: SampledPair>(pair: &P, samples: usize, seed: u64) -> Result<(), LawViolation> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let k = r.gen_range(1..=MAX_SEQUENCE);
        let seq = sequence(pair, &mut r, k);
        let v = pair.sample_value(&mut r, LAW_RANGE);
        let updated: Result<Vec<_>> = seq.iter().map(|a| pair.update_op(a, &v)).collect();
        expect_eq(
            "aggregator law",
            || format!("seq={seq:?}, v={v:?}"),
            updated.and_then(|u| fold(pair, &u)),
            fold(pair, &seq).and_then(|a| pair.aggregate(&a, &v, k as u64)),
        )?;
    }
    Ok(())
}

/// `F(a, x∇y, k) = F(F(a,x,k), y, k) = F(F(a,y,k), x, k)`.
pub fn f_composition<P: SampledPair>(
    pair: &P,
    samples: usize,
    seed: u64,
) -> Result<(), LawViolation> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let len = r.gen_range(1..=MAX_SEQUENCE);
        let a = fold(pair, &sequence(pair, &mut r, len))
            .map_err(|e| violation("F composition", e.to_string()))?;
        let x = pair.sample_value(&mut r, LAW_RANGE);
        let y = pair.sample_value(&mut r, LAW_RANGE);
        let k = r.gen_range(1..=64u64);
        let ctx = || format!("a={a:?}, x={x:?}, y={y:?}, k={k}");
        let joint = pair
            .update_op(&x, &y)
            .and_then(|xy| pair.aggregate(&a, &xy, k));
        let xy = pair
            .aggregate(&a, &x, k)
            .and_then(|ax| pair.aggregate(&ax, &y, k));
        let yx = pair
            .aggregate(&a, &y, k)
            .and_then(|ay| pair.aggregate(&ay, &x, k));
        expect_eq("F composition", ctx, joint.clone(), xy)?;
        expect_eq("F composition", ctx, joint, yx)?;
    }
    Ok(())
}

/// `F(a,v,p) △ F(b,v,q) = F(a△b, v, p+q)`.
pub fn f_merge<P: SampledPair>(pair: &P, samples: usize, seed: u64) -> Result<(), LawViolation> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let (lp, lq) = (r.gen_range(1..=MAX_SEQUENCE), r.gen_range(1..=MAX_SEQUENCE));
        let a = fold(pair, &sequence(pair, &mut r, lp))
            .map_err(|e| violation("F merge", e.to_string()))?;
        let b = fold(pair, &sequence(pair, &mut r, lq))
            .map_err(|e| violation("F merge", e.to_string()))?;
        let v = pair.sample_value(&mut r, LAW_RANGE);
        let (p, q) = (r.gen_range(1..=64u64), r.gen_range(1..=64u64));
        expect_eq(
            "F merge",
            || format!("a={a:?}, b={b:?}, v={v:?}, p={p}, q={q}"),
            pair.aggregate(&a, &v, p).and_then(|l| {
                pair.aggregate(&b, &v, q)
                    .and_then(|rr| pair.query_op(&l, &rr))
            }),
            pair.query_op(&a, &b)
                .and_then(|ab| pair.aggregate(&ab, &v, p + q)),
        )?;
    }
    Ok(())
}

/// `repeat(v, j) ∇ repeat(v, l) = repeat(v, j + l)`.
pub fn repeat_additive<P: SampledPair>(
    pair: &P,
    samples: usize,
    seed: u64,
) -> Result<(), LawViolation> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let v = pair.sample_value(&mut r, LAW_RANGE);
        let (j, l) = (r.gen_range(1..=16u64), r.gen_range(1..=16u64));
        expect_eq(
            "repeat additivity",
            || format!("v={v:?}, j={j}, l={l}"),
            pair.repeat(&v, j)
                .and_then(|vj| pair.repeat(&v, l).and_then(|vl| pair.update_op(&vj, &vl))),
            pair.repeat(&v, j + l),
        )?;
    }
    Ok(())
}

/// `G` agrees with folding an explicit sequence where only a subset `J` was
/// updated. Vacuous for non-special pairs.
pub fn g_matches_bruteforce<P: SampledPair>(
    pair: &P,
    samples: usize,
    seed: u64,
) -> Result<(), LawViolation> {
    if !pair.is_special() {
        return Ok(());
    }
    let mut r = rng(seed);
    for _ in 0..samples {
        let k = r.gen_range(1..=8usize);
        let seq = sequence(pair, &mut r, k);
        let v = pair.sample_value(&mut r, LAW_RANGE);
        let subset: Vec<bool> = (0..k).map(|_| r.gen_bool(0.5)).collect();
        let j = subset.iter().filter(|&&s| s).count() as u64;
        let updated: Result<Vec<_>> = seq
            .iter()
            .zip(&subset)
            .map(|(a, &hit)| {
                if hit {
                    pair.update_op(a, &v)
                } else {
                    Ok(a.clone())
                }
            })
            .collect();
        expect_eq(
            "G brute force",
            || format!("seq={seq:?}, v={v:?}, J={subset:?}"),
            updated.and_then(|u| fold(pair, &u)),
            fold(pair, &seq).and_then(|a| eval_g(pair, &a, &v, j, k as u64)),
        )?;
    }
    Ok(())
}

/// `x ∇ inv(x) = ∅_U`. Vacuous for pairs without an inverse.
pub fn inverse<P: SampledPair>(pair: &P, samples: usize, seed: u64) -> Result<(), LawViolation> {
    if !pair.has_inverse() {
        return Ok(());
    }
    for (x, _, _) in triples(pair, samples, seed) {
        expect_eq(
            "inverse",
            || format!("x={x:?}"),
            pair.inverse(&x).and_then(|ix| pair.update_op(&x, &ix)),
            Ok(pair.update_identity()),
        )?;
    }
    Ok(())
}

pub type LawCheck<P> = fn(&P, usize, u64) -> Result<(), LawViolation>;

/// Every law above, by name.
pub fn all_laws<P: SampledPair>() -> Vec<(&'static str, LawCheck<P>)> {
    vec![
        (
            "commutativity and associativity",
            commutative_associative::<P>,
        ),
        ("identities", identities::<P>),
        ("aggregator law", aggregator::<P>),
        ("F composition", f_composition::<P>),
        ("F merge", f_merge::<P>),
        ("repeat additivity", repeat_additive::<P>),
        ("G brute force", g_matches_bruteforce::<P>),
        ("inverse", inverse::<P>),
    ]
}

/// Run every law; returns the first violation.
pub fn check_laws<P: SampledPair>(pair: &P, samples: usize, seed: u64) -> Result<(), LawViolation> {
    all_laws::<P>()
        .into_iter()
        .try_for_each(|(_, law)| law(pair, samples, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        MaxMax, MinMin, OperatorPair, PlusMax, PlusMin, PlusPlus, Scalar, TimesPlus, TimesTimes,
        UpdateFold,
    };

    #[test]
    fn special_examples() {
        assert!(check_special(&PlusPlus, 1000, 0).holds);
        assert!(check_special(&MaxMax, 1000, 0).holds);
        let res = check_special(&PlusMin, 1000, 0);
        assert!(!res.holds);
        let w = res.witness.unwrap();
        assert_eq!((w.a, w.b, w.v), (Scalar::ZERO, Scalar::ZERO, Scalar::ONE));
        assert_eq!((w.lhs, w.rhs), (Scalar::ZERO, Scalar::ONE));
    }

    #[test]
    fn registered_flags_agree_with_sampling() {
        assert_eq!(check_special(&PlusMax, 1000, 0).holds, PlusMax.is_special());
        assert_eq!(check_special(&MinMin, 1000, 0).holds, MinMin.is_special());
        assert_eq!(
            check_special(&TimesTimes, 1000, 0).holds,
            TimesTimes.is_special()
        );
        assert_eq!(
            check_special(&TimesPlus, 1000, 0).holds,
            TimesPlus.is_special()
        );
    }

    #[test]
    fn every_builtin_pair_satisfies_its_laws() {
        check_laws(&PlusMin, 300, 1).unwrap();
        check_laws(&PlusMax, 300, 2).unwrap();
        check_laws(&PlusPlus, 300, 3).unwrap();
        check_laws(&MinMin, 300, 4).unwrap();
        check_laws(&MaxMax, 300, 5).unwrap();
        check_laws(&TimesTimes, 300, 6).unwrap();
        check_laws(&TimesPlus, 300, 7).unwrap();
    }

    #[test]
    fn update_fold_pairs_satisfy_their_laws() {
        #[derive(Clone, Debug)]
        struct Folded<P>(UpdateFold<P>);
        impl<P: SampledPair> OperatorPair for Folded<P> {
            type Value = P::Value;
            fn name(&self) -> String {
                self.0.name()
            }
            fn update_op(&self, a: &P::Value, v: &P::Value) -> Result<P::Value> {
                self.0.update_op(a, v)
            }
            fn query_op(&self, a: &P::Value, b: &P::Value) -> Result<P::Value> {
                self.0.query_op(a, b)
            }
            fn update_identity(&self) -> P::Value {
                self.0.update_identity()
            }
            fn query_identity(&self) -> P::Value {
                self.0.query_identity()
            }
            fn aggregate(&self, a: &P::Value, v: &P::Value, k: u64) -> Result<P::Value> {
                self.0.aggregate(a, v, k)
            }
            fn is_special(&self) -> bool {
                true
            }
        }
        impl<P: SampledPair> SampledPair for Folded<P> {
            fn small_values(&self) -> Vec<P::Value> {
                (self.0).0.small_values()
            }
            fn sample_value(&self, rng: &mut dyn rand::RngCore, range: ValueRange) -> P::Value {
                (self.0).0.sample_value(rng, range)
            }
        }
        check_laws(&Folded(UpdateFold(PlusPlus)), 200, 9).unwrap();
        check_laws(&Folded(UpdateFold(MinMin)), 200, 9).unwrap();
        check_laws(&Folded(UpdateFold(TimesTimes)), 200, 9).unwrap();
    }

    #[test]
    fn a_broken_aggregator_is_caught() {
        #[derive(Clone, Debug)]
        struct Broken;
        impl OperatorPair for Broken {
            type Value = Scalar;
            fn name(&self) -> String {
                "broken".into()
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
            // (+,+) needs a + v*k
            fn aggregate(&self, a: &Scalar, v: &Scalar, _k: u64) -> Result<Scalar> {
                a.checked_add(*v)
            }
        }
        impl SampledPair for Broken {
            fn small_values(&self) -> Vec<Scalar> {
                PlusPlus.small_values()
            }
            fn sample_value(&self, rng: &mut dyn rand::RngCore, range: ValueRange) -> Scalar {
                PlusPlus.sample_value(rng, range)
            }
        }
        let err = aggregator(&Broken, 100, 0).unwrap_err();
        assert_eq!(err.law, "aggregator law");
        assert!(f_merge(&Broken, 100, 0).is_err());
    }
}
