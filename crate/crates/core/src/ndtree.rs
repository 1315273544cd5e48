//! The d-dimensional segment tree for special pairs.
//!
//! Axis 0 is the outer 1D tree. Each outer node `n` holds two trees over the
//! remaining axes:
//! - `A`, over the pair itself, with `A(c)` the fold of `n`'s rows at `c`;
//! - `AZ`, over `(∇, ∇)`, holding the lazy updates that covered all of `n`.
//!
//! Updates and queries cost `O(log^d N)` node visits.

use crate::algebra::OperatorPair;
use crate::backend::RangeBackend;
use crate::boxes::RangeBox;
use crate::counters::OpCounters;
use crate::error::{Error, Result};
use crate::oracle::DenseTensor;
use crate::segtree1d::SegTree1D;

/// A special pair, read either as itself `(∇, △)` or as `(∇, ∇)`.
///
/// Both readings are special, so every level of the recursion can use the
/// same code with one concrete type.
#[derive(Clone, Debug)]
pub struct Role<P> {
    pair: P,
    fold_updates: bool,
}

impl<P: OperatorPair> Role<P> {
    pub fn query(pair: P) -> Self {
        Self {
            pair,
            fold_updates: false,
        }
    }

    pub fn fold(pair: P) -> Self {
        Self {
            pair,
            fold_updates: true,
        }
    }

    fn lazy_role(&self) -> Self {
        Self::fold(self.pair.clone())
    }
}

impl<P: OperatorPair> OperatorPair for Role<P> {
    type Value = P::Value;

    fn name(&self) -> String {
        if self.fold_updates {
            format!("update-fold({})", self.pair.name())
        } else {
            self.pair.name()
        }
    }

    fn update_op(&self, a: &P::Value, v: &P::Value) -> Result<P::Value> {
        self.pair.update_op(a, v)
    }

    fn query_op(&self, a: &P::Value, b: &P::Value) -> Result<P::Value> {
        if self.fold_updates {
            self.pair.update_op(a, b)
        } else {
            self.pair.query_op(a, b)
        }
    }

    fn update_identity(&self) -> P::Value {
        self.pair.update_identity()
    }

    fn query_identity(&self) -> P::Value {
        if self.fold_updates {
            self.pair.update_identity()
        } else {
            self.pair.query_identity()
        }
    }

    fn aggregate(&self, a: &P::Value, v: &P::Value, k: u64) -> Result<P::Value> {
        if self.fold_updates {
            self.pair.update_op(a, &self.pair.repeat(v, k)?)
        } else {
            self.pair.aggregate(a, v, k)
        }
    }

    fn repeat(&self, v: &P::Value, j: u64) -> Result<P::Value> {
        self.pair.repeat(v, j)
    }

    fn is_special(&self) -> bool {
        true
    }

    fn update_idempotent(&self) -> bool {
        self.pair.update_idempotent()
    }
}

fn span(l: usize, r: usize) -> u64 {
    (r - l + 1) as u64
}

fn right_child(i: usize, l: usize, m: usize) -> usize {
    i + 2 * (m - l + 1)
}

/// One level of the recursion: a 1D tree, or an outer tree over the first
/// remaining axis whose nodes hold `(A, AZ)` pairs of lower-rank levels.
#[derive(Clone, Debug)]
enum Level<P: OperatorPair> {
    Line(SegTree1D<Role<P>>),
    Outer {
        role: Role<P>,
        extent: usize,
        a: Vec<Level<P>>,
        az: Vec<Level<P>>,
    },
}

impl<P: OperatorPair> Level<P> {
    fn build(role: Role<P>, dims: &[usize], data: &[P::Value], visits: &mut u64) -> Result<Self> {
        if dims.len() == 1 {
            return Ok(Level::Line(SegTree1D::build_counted(role, data, visits)?));
        }
        let extent = dims[0];
        let mut a = vec![None; 2 * extent - 1];
        let mut az = vec![None; 2 * extent - 1];
        let lazies = vec![role.update_identity(); data.len() / extent];
        Self::build_outer(
            &role,
            0,
            0,
            extent - 1,
            &dims[1..],
            data,
            &lazies,
            &mut a,
            &mut az,
            visits,
        )?;
        Ok(Level::Outer {
            extent,
            a: a.into_iter()
                .map(|x| x.expect("every node built"))
                .collect(),
            az: az
                .into_iter()
                .map(|x| x.expect("every node built"))
                .collect(),
            role,
        })
    }

    /// Builds the outer subtree at `i` and returns its row fold.
    #[allow(clippy::too_many_arguments)]
    fn build_outer(
        role: &Role<P>,
        i: usize,
        l: usize,
        r: usize,
        rest: &[usize],
        data: &[P::Value],
        lazies: &[P::Value],
        a: &mut [Option<Level<P>>],
        az: &mut [Option<Level<P>>],
        visits: &mut u64,
    ) -> Result<Vec<P::Value>> {
        *visits += 1;
        let stride = lazies.len();
        let fold = if l == r {
            data[l * stride..(l + 1) * stride].to_vec()
        } else {
            let m = (l + r) / 2;
            let left = Self::build_outer(role, i + 1, l, m, rest, data, lazies, a, az, visits)?;
            let right = Self::build_outer(
                role,
                right_child(i, l, m),
                m + 1,
                r,
                rest,
                data,
                lazies,
                a,
                az,
                visits,
            )?;
            left.iter()
                .zip(&right)
                .map(|(x, y)| role.query_op(x, y))
                .collect::<Result<Vec<_>>>()?
        };
        a[i] = Some(Self::build(role.clone(), rest, &fold, visits)?);
        az[i] = Some(Self::build(role.lazy_role(), rest, lazies, visits)?);
        Ok(fold)
    }

    fn role(&self) -> &Role<P> {
        match self {
            Level::Line(t) => t.pair(),
            Level::Outer { role, .. } => role,
        }
    }

    fn update(&mut self, b: &[(usize, usize)], v: &P::Value, visits: &mut u64) -> Result<()> {
        match self {
            Level::Line(t) => t.update_counted(b[0].0, b[0].1, v, visits),
            Level::Outer {
                role,
                extent,
                a,
                az,
            } => Self::update_outer(role, a, az, 0, 0, *extent - 1, b, v, visits),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn update_outer(
        role: &Role<P>,
        a: &mut [Level<P>],
        az: &mut [Level<P>],
        i: usize,
        l: usize,
        r: usize,
        b: &[(usize, usize)],
        v: &P::Value,
        visits: &mut u64,
    ) -> Result<()> {
        *visits += 1;
        let (xl, xr) = b[0];
        let rest = &b[1..];
        if xr < l || r < xl {
            return Ok(());
        }
        if xl <= l && r <= xr {
            return az[i].update(rest, v, visits);
        }
        let m = (l + r) / 2;
        Self::update_outer(role, a, az, i + 1, l, m, b, v, visits)?;
        Self::update_outer(role, a, az, right_child(i, l, m), m + 1, r, b, v, visits)?;
        let covered = span(l.max(xl), r.min(xr));
        a[i].update(rest, &role.repeat(v, covered)?, visits)
    }

    fn query(&self, b: &[(usize, usize)], visits: &mut u64) -> Result<P::Value> {
        match self {
            Level::Line(t) => t.query_counted(b[0].0, b[0].1, visits),
            Level::Outer {
                role,
                extent,
                a,
                az,
            } => Self::query_outer(role, a, az, 0, 0, *extent - 1, b, visits),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn query_outer(
        role: &Role<P>,
        a: &[Level<P>],
        az: &[Level<P>],
        i: usize,
        l: usize,
        r: usize,
        b: &[(usize, usize)],
        visits: &mut u64,
    ) -> Result<P::Value> {
        *visits += 1;
        let (xl, xr) = b[0];
        let rest = &b[1..];
        if xr < l || r < xl {
            return Ok(role.query_identity());
        }
        let (inner, covered) = if xl <= l && r <= xr {
            (a[i].query(rest, visits)?, span(l, r))
        } else {
            let m = (l + r) / 2;
            let left = Self::query_outer(role, a, az, i + 1, l, m, b, visits)?;
            let right = Self::query_outer(role, a, az, right_child(i, l, m), m + 1, r, b, visits)?;
            (role.query_op(&left, &right)?, span(l.max(xl), r.min(xr)))
        };
        let lazy = az[i].query(rest, visits)?;
        role.update_op(&inner, &role.repeat(&lazy, covered)?)
    }
}

/// The d-dimensional tree (`d = 1, 2, 3, …`) for special pairs.
#[derive(Clone, Debug)]
pub struct NdTree<P: OperatorPair> {
    pair: P,
    dims: Vec<usize>,
    root: Level<P>,
    counters: OpCounters,
    build_visits: u64,
}

impl<P: OperatorPair> NdTree<P> {
    /// Bottom-up build; rejects pairs that are not special.
    pub fn build(t: &DenseTensor<P>) -> Result<Self> {
        let pair = t.pair().clone();
        if !pair.is_special() {
            return Err(Error::NotSpecial {
                pair: pair.name(),
                witness: None,
            });
        }
        let mut visits = 0;
        let root = Level::build(Role::query(pair.clone()), t.dims(), t.data(), &mut visits)?;
        Ok(Self {
            pair,
            dims: t.dims().to_vec(),
            root,
            counters: OpCounters::default(),
            build_visits: visits,
        })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    /// The ranges of the outermost tree's nodes, in arena order.
    pub fn outer_ranges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(0, self.dims[0] - 1)];
        while let Some((l, r)) = stack.pop() {
            out.push((l, r));
            if l < r {
                let m = (l + r) / 2;
                stack.push((m + 1, r));
                stack.push((l, m));
            }
        }
        out
    }

    /// The true value of outer node `node` over the remaining-axis box
    /// `rest`: `A.Q(rest) ∇ ((∇ of AZ.Q(rest) over ancestor-or-self nodes) ⊗ |n|)`.
    pub fn outer_true_value(&self, node: usize, rest: &[(usize, usize)]) -> Result<P::Value> {
        let Level::Outer {
            role,
            extent,
            a,
            az,
        } = &self.root
        else {
            return Err(Error::DimensionMismatch {
                expected: "rank 2 or more".into(),
                got: format!("extents {:?}", self.dims),
            });
        };
        let mut visits = 0;
        let (mut i, mut l, mut r) = (0usize, 0usize, *extent - 1);
        let mut lazy = role.update_identity();
        loop {
            lazy = role.update_op(&lazy, &az[i].query(rest, &mut visits)?)?;
            if i == node {
                break;
            }
            if l == r || node < i {
                return Err(Error::Config(format!("no outer node with index {node}")));
            }
            let m = (l + r) / 2;
            let rc = right_child(i, l, m);
            if node < rc {
                (i, r) = (i + 1, m);
            } else {
                (i, l) = (rc, m + 1);
            }
        }
        let inner = a[i].query(rest, &mut visits)?;
        role.update_op(&inner, &role.repeat(&lazy, span(l, r))?)
    }
}

impl<P: OperatorPair> RangeBackend<P> for NdTree<P> {
    fn pair(&self) -> &P {
        &self.pair
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        self.root.update(b.bounds(), v, &mut visits)?;
        self.counters.record(visits);
        Ok(())
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        let out = self.root.query(b.bounds(), &mut visits)?;
        debug_assert!(self.root.role().is_special());
        self.counters.record(visits);
        Ok(out)
    }

    fn counters(&self) -> &OpCounters {
        &self.counters
    }

    fn build_visits(&self) -> u64 {
        self.build_visits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MinMin, PlusMin, PlusPlus, Scalar};

    fn s(v: &[i32]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn build_examples() {
        let t = DenseTensor::from_rows(PlusPlus, vec![s(&[1, 2]), s(&[3, 4])]).unwrap();
        let nd = NdTree::build(&t).unwrap();
        assert_eq!(
            nd.query(&RangeBox::full(&[2, 2]).unwrap()),
            Ok(Scalar::from(10))
        );

        let one = DenseTensor::new(PlusPlus, vec![1, 1], s(&[6])).unwrap();
        let nd = NdTree::build(&one).unwrap();
        assert_eq!(
            nd.query(&RangeBox::cell(&[0, 0]).unwrap()),
            Ok(Scalar::from(6))
        );

        let cube = DenseTensor::filled(PlusPlus, vec![2, 2, 2], Scalar::ONE).unwrap();
        let nd = NdTree::build(&cube).unwrap();
        assert_eq!(
            nd.query(&RangeBox::full(&[2, 2, 2]).unwrap()),
            Ok(Scalar::from(8))
        );
    }

    #[test]
    fn rejects_non_special_pairs() {
        let t = DenseTensor::filled(PlusMin, vec![2, 2], Scalar::ONE).unwrap();
        assert!(matches!(NdTree::build(&t), Err(Error::NotSpecial { .. })));
    }

    #[test]
    fn update_examples() {
        let t = DenseTensor::from_rows(PlusPlus, vec![s(&[1, 2]), s(&[3, 4])]).unwrap();
        let mut nd = NdTree::build(&t).unwrap();
        nd.update(&RangeBox::rect((0, 0), (0, 1)).unwrap(), &Scalar::from(5))
            .unwrap();
        assert_eq!(
            nd.query(&RangeBox::rect((0, 1), (0, 0)).unwrap()),
            Ok(Scalar::from(9))
        );
        nd.update(&RangeBox::full(&[2, 2]).unwrap(), &Scalar::ZERO)
            .unwrap();
        assert_eq!(
            nd.query(&RangeBox::full(&[2, 2]).unwrap()),
            Ok(Scalar::from(20))
        );

        let g = DenseTensor::from_rows(MinMin, vec![s(&[4, 8, 6]), s(&[9, 5, 7]), s(&[3, 2, 8])])
            .unwrap();
        let mut nd = NdTree::build(&g).unwrap();
        nd.update(&RangeBox::full(&[3, 3]).unwrap(), &Scalar::from(1))
            .unwrap();
        assert_eq!(
            nd.query(&RangeBox::full(&[3, 3]).unwrap()),
            Ok(Scalar::from(1))
        );
    }

    #[test]
    fn outer_true_values_match_the_oracle() {
        let rows: Vec<Vec<Scalar>> = (0..5)
            .map(|x| (0..4).map(|y| Scalar::from(x * 4 + y)).collect())
            .collect();
        let mut oracle = DenseTensor::from_rows(PlusPlus, rows).unwrap();
        let mut nd = NdTree::build(&oracle).unwrap();
        for (b, v) in [
            (RangeBox::rect((1, 3), (0, 2)).unwrap(), 3),
            (RangeBox::rect((0, 4), (2, 3)).unwrap(), -2),
            (RangeBox::rect((2, 2), (1, 1)).unwrap(), 7),
        ] {
            nd.update(&b, &Scalar::from(v)).unwrap();
            oracle.oracle_update(&b, &Scalar::from(v)).unwrap();
        }
        for (node, (l, r)) in nd.outer_ranges().into_iter().enumerate() {
            for y0 in 0..4 {
                for y1 in y0..4 {
                    let expected = oracle
                        .oracle_query(&RangeBox::rect((l, r), (y0, y1)).unwrap())
                        .unwrap();
                    assert_eq!(nd.outer_true_value(node, &[(y0, y1)]).unwrap(), expected);
                }
            }
        }
    }
}
