//! The general 2D tree: an outer segment tree over rows whose nodes hold
//! inner 1D lazy trees over columns.
//!
//! The inner tree of an outer node `n` covering `|n|` rows stores
//! `n_A[y] = △_{x∈n} A[x][y]` under the scaled pair, so an update `v` turns
//! an entry into `F(a, v, |n|)`. Outer nodes carry no lazy values: an update
//! applies lazily inside the inner tree of every outer node it contains and
//! rebuilds the inner trees of the outer nodes it only partly covers.
//!
//! Updates cost `O(N log M + M log N)` visits, queries `O(log N log M)`.

use crate::algebra::{OperatorPair, ScaledPair};
use crate::backend::RangeBackend;
use crate::boxes::RangeBox;
use crate::counters::OpCounters;
use crate::error::{Error, Result};
use crate::oracle::DenseTensor;
use crate::segtree1d::SegTree1D;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// The outer node lies inside the update's rows: inner range update.
    Lazy,
    /// The outer node is partly covered: its inner tree was rebuilt from its
    /// children's arrays.
    Rebuilt,
}

/// One outer node touched by an update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TouchedNode {
    pub range: (usize, usize),
    pub action: Action,
    /// Position in the order the update finished with each node.
    pub seq: usize,
    /// Visits made by each child array extraction of a rebuild.
    pub arr_visits: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Grid2D<P: OperatorPair> {
    pair: P,
    dims: [usize; 2],
    inner: Vec<SegTree1D<ScaledPair<P>>>,
    counters: OpCounters,
    build_visits: u64,
}

fn right_child(i: usize, l: usize, m: usize) -> usize {
    i + 2 * (m - l + 1)
}

impl<P: OperatorPair> Grid2D<P> {
    pub fn build(t: &DenseTensor<P>) -> Result<Self> {
        let &[n, m] = t.dims() else {
            return Err(Error::DimensionMismatch {
                expected: "a 2D tensor".into(),
                got: format!("extents {:?}", t.dims()),
            });
        };
        let pair = t.pair().clone();
        let mut slots = vec![None; 2 * n - 1];
        let mut visits = 0;
        Self::build_node(&pair, 0, 0, n - 1, m, t.data(), &mut slots, &mut visits)?;
        Ok(Self {
            pair,
            dims: [n, m],
            inner: slots
                .into_iter()
                .map(|s| s.expect("every node built"))
                .collect(),
            counters: OpCounters::default(),
            build_visits: visits,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn build_node(
        pair: &P,
        i: usize,
        l: usize,
        r: usize,
        width: usize,
        data: &[P::Value],
        slots: &mut [Option<SegTree1D<ScaledPair<P>>>],
        visits: &mut u64,
    ) -> Result<Vec<P::Value>> {
        *visits += 1;
        let fold = if l == r {
            data[l * width..(l + 1) * width].to_vec()
        } else {
            let m = (l + r) / 2;
            let left = Self::build_node(pair, i + 1, l, m, width, data, slots, visits)?;
            let right = Self::build_node(
                pair,
                right_child(i, l, m),
                m + 1,
                r,
                width,
                data,
                slots,
                visits,
            )?;
            left.iter()
                .zip(&right)
                .map(|(x, y)| pair.query_op(x, y))
                .collect::<Result<Vec<_>>>()?
        };
        let scaled = ScaledPair::new(pair.clone(), (r - l + 1) as u64)?;
        slots[i] = Some(SegTree1D::build_counted(scaled, &fold, visits)?);
        Ok(fold)
    }

    pub fn rows(&self) -> usize {
        self.dims[0]
    }

    pub fn cols(&self) -> usize {
        self.dims[1]
    }

    /// Outer node ranges in arena order.
    pub fn outer_ranges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.inner.len());
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

    /// `n_A.Q([lo, hi])` for outer node `node`.
    pub fn inner_query(&self, node: usize, lo: usize, hi: usize) -> Result<P::Value> {
        let tree = self
            .inner
            .get(node)
            .ok_or_else(|| Error::Config(format!("no outer node with index {node}")))?;
        tree.range_query(lo, hi)
    }

    /// The inner array `n_A` of outer node `node`.
    pub fn inner_array(&self, node: usize) -> Result<Vec<P::Value>> {
        let tree = self
            .inner
            .get(node)
            .ok_or_else(|| Error::Config(format!("no outer node with index {node}")))?;
        tree.to_array()
    }

    /// Node count of every inner tree (they all span the columns).
    pub fn inner_node_count(&self) -> usize {
        self.inner[0].node_count()
    }

    /// Update and report the touched outer nodes in the order they were
    /// finished.
    pub fn update_traced(&mut self, b: &RangeBox, v: &P::Value) -> Result<Vec<TouchedNode>> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        let mut trace = Vec::new();
        self.update_node(
            0,
            0,
            self.dims[0] - 1,
            b.axis(0),
            b.axis(1),
            v,
            &mut visits,
            &mut trace,
        )?;
        self.counters.record(visits);
        Ok(trace)
    }

    #[allow(clippy::too_many_arguments)]
    fn update_node(
        &mut self,
        i: usize,
        l: usize,
        r: usize,
        (xl, xr): (usize, usize),
        (yl, yr): (usize, usize),
        v: &P::Value,
        visits: &mut u64,
        trace: &mut Vec<TouchedNode>,
    ) -> Result<()> {
        *visits += 1;
        if xl <= l && r <= xr {
            if l < r {
                let m = (l + r) / 2;
                self.update_node(i + 1, l, m, (xl, xr), (yl, yr), v, visits, trace)?;
                self.update_node(
                    right_child(i, l, m),
                    m + 1,
                    r,
                    (xl, xr),
                    (yl, yr),
                    v,
                    visits,
                    trace,
                )?;
            }
            self.inner[i].update_counted(yl, yr, v, visits)?;
            trace.push(TouchedNode {
                range: (l, r),
                action: Action::Lazy,
                seq: trace.len(),
                arr_visits: Vec::new(),
            });
            return Ok(());
        }
        let m = (l + r) / 2;
        let rc = right_child(i, l, m);
        if xl <= m {
            self.update_node(i + 1, l, m, (xl, xr), (yl, yr), v, visits, trace)?;
        }
        if xr > m {
            self.update_node(rc, m + 1, r, (xl, xr), (yl, yr), v, visits, trace)?;
        }
        let mut arr_visits = Vec::with_capacity(2);
        let mut arrays = Vec::with_capacity(2);
        for child in [i + 1, rc] {
            let mut count = 0;
            arrays.push(self.inner[child].to_array_counted(&mut count)?);
            arr_visits.push(count);
            *visits += count;
        }
        let combined = arrays[0]
            .iter()
            .zip(&arrays[1])
            .map(|(x, y)| self.pair.query_op(x, y))
            .collect::<Result<Vec<_>>>()?;
        self.inner[i].reinit(&combined, visits)?;
        trace.push(TouchedNode {
            range: (l, r),
            action: Action::Rebuilt,
            seq: trace.len(),
            arr_visits,
        });
        Ok(())
    }

    fn query_node(
        &self,
        i: usize,
        l: usize,
        r: usize,
        (xl, xr): (usize, usize),
        (yl, yr): (usize, usize),
        visits: &mut u64,
    ) -> Result<P::Value> {
        *visits += 1;
        if xl <= l && r <= xr {
            return self.inner[i].query_counted(yl, yr, visits);
        }
        let m = (l + r) / 2;
        let mut acc = self.pair.query_identity();
        if xl <= m {
            let left = self.query_node(i + 1, l, m, (xl, xr), (yl, yr), visits)?;
            acc = self.pair.query_op(&acc, &left)?;
        }
        if xr > m {
            let right =
                self.query_node(right_child(i, l, m), m + 1, r, (xl, xr), (yl, yr), visits)?;
            acc = self.pair.query_op(&acc, &right)?;
        }
        Ok(acc)
    }
}

impl<P: OperatorPair> RangeBackend<P> for Grid2D<P> {
    fn pair(&self) -> &P {
        &self.pair
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        let mut trace = Vec::new();
        self.update_node(
            0,
            0,
            self.dims[0] - 1,
            b.axis(0),
            b.axis(1),
            v,
            &mut visits,
            &mut trace,
        )?;
        self.counters.record(visits);
        Ok(())
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        let out = self.query_node(0, 0, self.dims[0] - 1, b.axis(0), b.axis(1), &mut visits)?;
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
