//! The 1D lazy segment tree.
//!
//! Nodes live in a preorder arena: the node covering `[l, r]` at index `i`
//! has its left child `[l, m]` at `i + 1` and its right child `[m + 1, r]` at
//! `i + 2 * (m - l + 1)`, with `m = ⌊(l + r) / 2⌋`.
//!
//! Each node stores `V`, the fold of its range, and `Z`, a lazy update meaning
//! "every descendant `m` should have `F(m_V, Z, |m|)`". Queries never push
//! lazies down; they apply them on the way up.

use crate::algebra::OperatorPair;
use crate::backend::RangeBackend;
use crate::boxes::RangeBox;
use crate::counters::OpCounters;
use crate::error::{Error, Result};
use crate::oracle::DenseTensor;

#[derive(Clone, Debug)]
struct Node<V> {
    value: V,
    lazy: V,
}

/// Ranges recorded by [`SegTree1D::update_traced`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateTrace {
    /// Nodes whose lazy value received the update.
    pub lazy: Vec<(usize, usize)>,
    /// Partially covered nodes whose `V` was recomputed from their children.
    pub rebuilt: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct SegTree1D<P: OperatorPair> {
    pair: P,
    len: usize,
    nodes: Vec<Node<P::Value>>,
    dims: [usize; 1],
    counters: OpCounters,
    build_visits: u64,
}

fn right_child(i: usize, l: usize, m: usize) -> usize {
    i + 2 * (m - l + 1)
}

fn span(l: usize, r: usize) -> u64 {
    (r - l + 1) as u64
}

impl<P: OperatorPair> SegTree1D<P> {
    /// Bottom-up build over `values`.
    pub fn build(pair: P, values: &[P::Value]) -> Result<Self> {
        let mut visits = 0;
        Self::build_counted(pair, values, &mut visits)
    }

    pub(crate) fn build_counted(pair: P, values: &[P::Value], visits: &mut u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let len = values.len();
        let blank = Node {
            value: pair.query_identity(),
            lazy: pair.update_identity(),
        };
        let mut tree = Self {
            nodes: vec![blank; 2 * len - 1],
            pair,
            len,
            dims: [len],
            counters: OpCounters::default(),
            build_visits: 0,
        };
        let before = *visits;
        tree.init(0, 0, len - 1, values, visits)?;
        tree.build_visits = *visits - before;
        Ok(tree)
    }

    pub fn from_tensor(t: &DenseTensor<P>) -> Result<Self> {
        if t.dims().len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: "a 1D tensor".into(),
                got: format!("extents {:?}", t.dims()),
            });
        }
        Self::build(t.pair().clone(), t.data())
    }

    /// Replace the contents with `values` (same length), rebuilding bottom-up.
    pub(crate) fn reinit(&mut self, values: &[P::Value], visits: &mut u64) -> Result<()> {
        debug_assert_eq!(values.len(), self.len);
        self.init(0, 0, self.len - 1, values, visits)
    }

    fn init(
        &mut self,
        i: usize,
        l: usize,
        r: usize,
        a: &[P::Value],
        visits: &mut u64,
    ) -> Result<()> {
        *visits += 1;
        self.nodes[i].lazy = self.pair.update_identity();
        if l == r {
            self.nodes[i].value = a[l].clone();
            return Ok(());
        }
        let m = (l + r) / 2;
        let rc = right_child(i, l, m);
        self.init(i + 1, l, m, a, visits)?;
        self.init(rc, m + 1, r, a, visits)?;
        self.nodes[i].value = self
            .pair
            .query_op(&self.nodes[i + 1].value, &self.nodes[rc].value)?;
        Ok(())
    }

    pub fn pair(&self) -> &P {
        &self.pair
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    pub fn build_visits(&self) -> u64 {
        self.build_visits
    }

    /// The maximum node depth; the root has depth 0.
    pub fn depth(&self) -> usize {
        fn go(l: usize, r: usize) -> usize {
            if l == r {
                0
            } else {
                let m = (l + r) / 2;
                1 + go(l, m).max(go(m + 1, r))
            }
        }
        go(0, self.len - 1)
    }

    /// Node ranges in arena (preorder) order.
    pub fn node_ranges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(0, self.len - 1)];
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

    fn check(&self, l: usize, r: usize) -> Result<()> {
        if l > r || r >= self.len {
            return Err(Error::OutOfBounds {
                bounds: format!("[{l},{r}]"),
                dims: vec![self.len],
            });
        }
        Ok(())
    }

    /// `e ← e ∇ v` on `[l, r]`.
    pub fn range_update(&mut self, l: usize, r: usize, v: &P::Value) -> Result<()> {
        self.check(l, r)?;
        let mut visits = 0;
        self.update_node(0, 0, self.len - 1, l, r, v, &mut visits, &mut None)?;
        self.counters.record(visits);
        Ok(())
    }

    /// The fold of `[l, r]`.
    pub fn range_query(&self, l: usize, r: usize) -> Result<P::Value> {
        self.check(l, r)?;
        let mut visits = 0;
        let out = self.query_node(0, 0, self.len - 1, l, r, &mut visits)?;
        self.counters.record(visits);
        Ok(out)
    }

    /// Update without touching the counters; visits are added to `visits`.
    pub(crate) fn update_counted(
        &mut self,
        l: usize,
        r: usize,
        v: &P::Value,
        visits: &mut u64,
    ) -> Result<()> {
        self.update_node(0, 0, self.len - 1, l, r, v, visits, &mut None)
    }

    pub(crate) fn query_counted(&self, l: usize, r: usize, visits: &mut u64) -> Result<P::Value> {
        self.query_node(0, 0, self.len - 1, l, r, visits)
    }

    /// Like [`range_update`](Self::range_update), also recording which nodes
    /// received the lazy value and which were recomputed.
    pub fn update_traced(&mut self, l: usize, r: usize, v: &P::Value) -> Result<UpdateTrace> {
        self.check(l, r)?;
        let mut visits = 0;
        let mut trace = Some(UpdateTrace::default());
        self.update_node(0, 0, self.len - 1, l, r, v, &mut visits, &mut trace)?;
        self.counters.record(visits);
        Ok(trace.unwrap_or_default())
    }

    #[allow(clippy::too_many_arguments)]
    fn update_node(
        &mut self,
        i: usize,
        l: usize,
        r: usize,
        ql: usize,
        qr: usize,
        v: &P::Value,
        visits: &mut u64,
        trace: &mut Option<UpdateTrace>,
    ) -> Result<()> {
        *visits += 1;
        if qr < l || r < ql {
            return Ok(());
        }
        if ql <= l && r <= qr {
            self.nodes[i].lazy = self.pair.update_op(&self.nodes[i].lazy, v)?;
            if let Some(t) = trace {
                t.lazy.push((l, r));
            }
            return Ok(());
        }
        let m = (l + r) / 2;
        let rc = right_child(i, l, m);
        self.update_node(i + 1, l, m, ql, qr, v, visits, trace)?;
        self.update_node(rc, m + 1, r, ql, qr, v, visits, trace)?;
        let left = self.true_value(i + 1, l, m)?;
        let right = self.true_value(rc, m + 1, r)?;
        self.nodes[i].value = self.pair.query_op(&left, &right)?;
        if let Some(t) = trace {
            t.rebuilt.push((l, r));
        }
        Ok(())
    }

    /// `F(V, Z, |n|)`: the node's fold with its own lazy applied.
    fn true_value(&self, i: usize, l: usize, r: usize) -> Result<P::Value> {
        let n = &self.nodes[i];
        self.pair.aggregate(&n.value, &n.lazy, span(l, r))
    }

    fn query_node(
        &self,
        i: usize,
        l: usize,
        r: usize,
        ql: usize,
        qr: usize,
        visits: &mut u64,
    ) -> Result<P::Value> {
        *visits += 1;
        if qr < l || r < ql {
            return Ok(self.pair.query_identity());
        }
        if ql <= l && r <= qr {
            return self.true_value(i, l, r);
        }
        let m = (l + r) / 2;
        let left = self.query_node(i + 1, l, m, ql, qr, visits)?;
        let right = self.query_node(right_child(i, l, m), m + 1, r, ql, qr, visits)?;
        let covered = span(l.max(ql), r.min(qr));
        self.pair.aggregate(
            &self.pair.query_op(&left, &right)?,
            &self.nodes[i].lazy,
            covered,
        )
    }

    /// The canonical decomposition of `[l, r]`: the maximal nodes inside it.
    pub fn decompose(&self, l: usize, r: usize) -> Result<Vec<(usize, usize)>> {
        self.check(l, r)?;
        fn go(l: usize, r: usize, ql: usize, qr: usize, out: &mut Vec<(usize, usize)>) {
            if qr < l || r < ql {
                return;
            }
            if ql <= l && r <= qr {
                out.push((l, r));
                return;
            }
            let m = (l + r) / 2;
            go(l, m, ql, qr, out);
            go(m + 1, r, ql, qr, out);
        }
        let mut out = Vec::new();
        go(0, self.len - 1, l, r, &mut out);
        Ok(out)
    }

    /// Every element, visiting each node once and carrying the accumulated
    /// ancestor lazies downwards.
    pub fn to_array(&self) -> Result<Vec<P::Value>> {
        let mut visits = 0;
        let out = self.to_array_counted(&mut visits)?;
        self.counters.record(visits);
        Ok(out)
    }

    pub(crate) fn to_array_counted(&self, visits: &mut u64) -> Result<Vec<P::Value>> {
        let mut out = Vec::with_capacity(self.len);
        self.collect(
            0,
            0,
            self.len - 1,
            &self.pair.update_identity(),
            &mut out,
            visits,
        )?;
        Ok(out)
    }

    fn collect(
        &self,
        i: usize,
        l: usize,
        r: usize,
        above: &P::Value,
        out: &mut Vec<P::Value>,
        visits: &mut u64,
    ) -> Result<()> {
        *visits += 1;
        let acc = self.pair.update_op(above, &self.nodes[i].lazy)?;
        if l == r {
            out.push(self.pair.aggregate(&self.nodes[i].value, &acc, 1)?);
            return Ok(());
        }
        let m = (l + r) / 2;
        self.collect(i + 1, l, m, &acc, out, visits)?;
        self.collect(right_child(i, l, m), m + 1, r, &acc, out, visits)
    }

    /// Check every node's true value `F(V, ∇ of ancestor-and-self Z, |n|)`
    /// against `reference`, reporting the first node that disagrees.
    pub fn validate(&self, reference: &DenseTensor<P>) -> Result<()> {
        if reference.dims() != [self.len] {
            return Err(Error::DimensionMismatch {
                expected: format!("[{}]", self.len),
                got: format!("{:?}", reference.dims()),
            });
        }
        let mut stack = vec![(0usize, 0usize, self.len - 1, self.pair.update_identity())];
        while let Some((i, l, r, above)) = stack.pop() {
            let acc = self.pair.update_op(&above, &self.nodes[i].lazy)?;
            let found = self
                .pair
                .aggregate(&self.nodes[i].value, &acc, span(l, r))?;
            let expected = reference.oracle_query(&RangeBox::line(l, r)?)?;
            if found != expected {
                return Err(Error::Validation {
                    range: format!("[{l},{r}]"),
                    expected: expected.to_string(),
                    found: found.to_string(),
                });
            }
            if l < r {
                let m = (l + r) / 2;
                stack.push((right_child(i, l, m), m + 1, r, acc.clone()));
                stack.push((i + 1, l, m, acc));
            }
        }
        Ok(())
    }

    /// Fault injection for tests: `V ← V ∇ v` at the arena index `node`.
    #[doc(hidden)]
    pub fn corrupt_value(&mut self, node: usize, v: &P::Value) -> Result<()> {
        let n = &mut self.nodes[node];
        n.value = self.pair.update_op(&n.value, v)?;
        Ok(())
    }
}

fn line_of(b: &RangeBox, len: usize) -> Result<(usize, usize)> {
    b.check_within(&[len])?;
    Ok(b.axis(0))
}

impl<P: OperatorPair> RangeBackend<P> for SegTree1D<P> {
    fn pair(&self) -> &P {
        &self.pair
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        let (l, r) = line_of(b, self.len)?;
        self.range_update(l, r, v)
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        let (l, r) = line_of(b, self.len)?;
        self.range_query(l, r)
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
    use crate::algebra::{eval_f, PlusMin, PlusPlus, Scalar};

    fn s(v: &[i32]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn build_examples() {
        let t = SegTree1D::build(PlusPlus, &s(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(t.node_count(), 9);
        assert_eq!(t.range_query(0, 4), Ok(Scalar::from(15)));
        assert_eq!(t.build_visits(), 9);
        let one = SegTree1D::build(PlusMin, &s(&[7])).unwrap();
        assert_eq!((one.node_count(), one.depth()), (1, 0));
        assert_eq!(one.range_query(0, 0), Ok(Scalar::from(7)));
        assert_eq!(
            SegTree1D::build(PlusMin, &[]).unwrap_err(),
            Error::EmptyInput
        );
    }

    #[test]
    fn update_examples() {
        let mut t = SegTree1D::build(PlusMin, &s(&[3, 1, 4, 1, 5])).unwrap();
        assert_eq!(t.range_query(0, 4), Ok(Scalar::from(1)));
        t.range_update(1, 3, &Scalar::from(2)).unwrap();
        assert_eq!(t.range_query(0, 4), Ok(Scalar::from(3)));
        assert_eq!(t.to_array().unwrap(), s(&[3, 3, 6, 3, 5]));
        t.range_update(0, 4, &Scalar::ZERO).unwrap();
        assert_eq!(t.to_array().unwrap(), s(&[3, 3, 6, 3, 5]));
    }

    #[test]
    fn canonical_lazy_set() {
        let mut t = SegTree1D::build(PlusPlus, &[Scalar::ZERO; 8]).unwrap();
        let trace = t.update_traced(1, 6, &Scalar::ONE).unwrap();
        assert_eq!(trace.lazy, vec![(1, 1), (2, 3), (4, 5), (6, 6)]);
        assert_eq!(t.decompose(1, 6).unwrap(), trace.lazy);
        assert_eq!(t.decompose(4, 7).unwrap(), vec![(4, 7)]);
        assert_eq!(t.decompose(0, 7).unwrap(), vec![(0, 7)]);
    }

    #[test]
    fn full_update_matches_aggregator() {
        let init = s(&[4, -2, 9, 0, 3, 3]);
        let mut t = SegTree1D::build(PlusPlus, &init).unwrap();
        t.range_update(0, 5, &Scalar::from(7)).unwrap();
        let expected = eval_f(&PlusPlus, &Scalar::from(17), &Scalar::from(7), 6).unwrap();
        assert_eq!(t.range_query(0, 5), Ok(expected));
    }

    #[test]
    fn to_array_visits_every_node_once() {
        let mut t = SegTree1D::build(PlusMin, &s(&[5, 6, 7, 8, 9, 10, 11])).unwrap();
        t.range_update(2, 5, &Scalar::from(-1)).unwrap();
        assert_eq!(t.to_array().unwrap(), s(&[5, 6, 6, 7, 8, 9, 11]));
        assert_eq!(t.counters().last(), t.node_count() as u64);
    }

    #[test]
    fn validate_catches_a_corrupted_node() {
        let init = s(&[2, 7, 1, 8, 2, 8]);
        let mut t = SegTree1D::build(PlusPlus, &init).unwrap();
        let mut oracle = DenseTensor::from_vec(PlusPlus, init).unwrap();
        assert!(t.validate(&oracle).is_ok());
        t.range_update(1, 4, &Scalar::from(3)).unwrap();
        oracle
            .oracle_update(&RangeBox::line(1, 4).unwrap(), &Scalar::from(3))
            .unwrap();
        assert!(t.validate(&oracle).is_ok());
        let victim = 3;
        let (l, r) = t.node_ranges()[victim];
        t.corrupt_value(victim, &Scalar::ONE).unwrap();
        match t.validate(&oracle) {
            Err(Error::Validation { range, .. }) => {
                // ancestors are checked first and still hold
                assert_eq!(range, format!("[{l},{r}]"));
            }
            other => panic!("expected a validation failure, got {other:?}"),
        }
    }

    #[test]
    fn out_of_bounds() {
        let mut t = SegTree1D::build(PlusMin, &s(&[1, 2, 3])).unwrap();
        assert!(t.range_query(1, 3).is_err());
        assert!(t.range_update(2, 1, &Scalar::ONE).is_err());
        assert!(t.query(&RangeBox::rect((0, 0), (0, 0)).unwrap()).is_err());
    }
}
