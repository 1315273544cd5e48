//! The lazy quadtree over an `N × M` grid.
//!
//! Every node splits its rectangle at `x_m = ⌊(x_0 + x_1) / 2⌋` and
//! `y_m = ⌊(y_0 + y_1) / 2⌋` into up to four children; a rectangle one cell
//! wide along an axis is not split along it. Nodes carry `V` and a lazy `Z`
//! with the same meaning as in the 1D tree. Updates and queries visit `O(N)`
//! nodes on square grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::OperatorPair;
use crate::backend::RangeBackend;
use crate::boxes::RangeBox;
use crate::counters::OpCounters;
use crate::error::{Error, Result};
use crate::oracle::DenseTensor;

/// Inclusive rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
    pub y1: usize,
}

impl Rect {
    pub fn area(&self) -> u64 {
        ((self.x1 - self.x0 + 1) * (self.y1 - self.y0 + 1)) as u64
    }

    pub fn contains(&self, o: &Rect) -> bool {
        self.x0 <= o.x0 && o.x1 <= self.x1 && self.y0 <= o.y0 && o.y1 <= self.y1
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x0 <= o.x1 && o.x0 <= self.x1 && self.y0 <= o.y1 && o.y0 <= self.y1
    }

    fn overlap(&self, o: &Rect) -> u64 {
        let w = self.x1.min(o.x1) - self.x0.max(o.x0) + 1;
        let h = self.y1.min(o.y1) - self.y0.max(o.y0) + 1;
        (w * h) as u64
    }

    fn of(b: &RangeBox) -> Self {
        let ((x0, x1), (y0, y1)) = (b.axis(0), b.axis(1));
        Rect { x0, x1, y0, y1 }
    }
}

#[derive(Clone, Debug)]
struct Node<V> {
    rect: Rect,
    value: V,
    lazy: V,
    children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct QuadTree<P: OperatorPair> {
    pair: P,
    dims: [usize; 2],
    nodes: Vec<Node<P::Value>>,
    counters: OpCounters,
    build_visits: u64,
}

impl<P: OperatorPair> QuadTree<P> {
    pub fn build(t: &DenseTensor<P>) -> Result<Self> {
        let &[n, m] = t.dims() else {
            return Err(Error::DimensionMismatch {
                expected: "a 2D tensor".into(),
                got: format!("extents {:?}", t.dims()),
            });
        };
        let mut tree = Self {
            pair: t.pair().clone(),
            dims: [n, m],
            nodes: Vec::new(),
            counters: OpCounters::default(),
            build_visits: 0,
        };
        let root = Rect {
            x0: 0,
            x1: n - 1,
            y0: 0,
            y1: m - 1,
        };
        tree.build_node(root, t.data(), m)?;
        tree.build_visits = tree.nodes.len() as u64;
        Ok(tree)
    }

    fn build_node(&mut self, rect: Rect, data: &[P::Value], width: usize) -> Result<usize> {
        let id = self.nodes.len();
        self.nodes.push(Node {
            rect,
            value: self.pair.query_identity(),
            lazy: self.pair.update_identity(),
            children: Vec::new(),
        });
        if rect.x0 == rect.x1 && rect.y0 == rect.y1 {
            self.nodes[id].value = data[rect.x0 * width + rect.y0].clone();
            return Ok(id);
        }
        let xm = (rect.x0 + rect.x1) / 2;
        let ym = (rect.y0 + rect.y1) / 2;
        let xs: &[(usize, usize)] = if rect.x0 < rect.x1 {
            &[(rect.x0, xm), (xm + 1, rect.x1)]
        } else {
            &[(rect.x0, rect.x1)]
        };
        let ys: &[(usize, usize)] = if rect.y0 < rect.y1 {
            &[(rect.y0, ym), (ym + 1, rect.y1)]
        } else {
            &[(rect.y0, rect.y1)]
        };
        let mut children = Vec::with_capacity(4);
        let mut fold = self.pair.query_identity();
        for &(x0, x1) in xs {
            for &(y0, y1) in ys {
                let c = self.build_node(Rect { x0, x1, y0, y1 }, data, width)?;
                fold = self.pair.query_op(&fold, &self.nodes[c].value)?;
                children.push(c);
            }
        }
        self.nodes[id].value = fold;
        self.nodes[id].children = children;
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Node rectangles in arena (preorder) order.
    pub fn node_rects(&self) -> Vec<Rect> {
        self.nodes.iter().map(|n| n.rect).collect()
    }

    /// `V` of the root.
    pub fn root_value(&self) -> &P::Value {
        &self.nodes[0].value
    }

    fn true_value(&self, i: usize) -> Result<P::Value> {
        let n = &self.nodes[i];
        self.pair.aggregate(&n.value, &n.lazy, n.rect.area())
    }

    fn update_node(&mut self, i: usize, b: &Rect, v: &P::Value, visits: &mut u64) -> Result<()> {
        *visits += 1;
        let rect = self.nodes[i].rect;
        if !rect.intersects(b) {
            return Ok(());
        }
        if b.contains(&rect) {
            self.nodes[i].lazy = self.pair.update_op(&self.nodes[i].lazy, v)?;
            return Ok(());
        }
        let children = self.nodes[i].children.clone();
        let mut fold = self.pair.query_identity();
        for c in children {
            self.update_node(c, b, v, visits)?;
            fold = self.pair.query_op(&fold, &self.true_value(c)?)?;
        }
        self.nodes[i].value = fold;
        Ok(())
    }

    fn query_node(&self, i: usize, b: &Rect, visits: &mut u64) -> Result<P::Value> {
        *visits += 1;
        let node = &self.nodes[i];
        if !node.rect.intersects(b) {
            return Ok(self.pair.query_identity());
        }
        if b.contains(&node.rect) {
            return self.true_value(i);
        }
        let mut fold = self.pair.query_identity();
        for &c in &node.children {
            fold = self.pair.query_op(&fold, &self.query_node(c, b, visits)?)?;
        }
        self.pair.aggregate(&fold, &node.lazy, node.rect.overlap(b))
    }

    /// The largest visit count over a probe family: every single row, every
    /// single column and `random_boxes` seeded random boxes, each both as an
    /// identity update and as a query.
    ///
    /// Requires a square grid with `N = 2^k`, `k >= 2`.
    pub fn max_visits(&mut self, random_boxes: usize, seed: u64) -> Result<u64> {
        let n = self.dims[0];
        if self.dims[1] != n || !n.is_power_of_two() || n < 4 {
            return Err(Error::NotPowerOfTwo(n));
        }
        let mut probes = Vec::with_capacity(2 * n + random_boxes);
        for x in 0..n {
            probes.push(RangeBox::rect((x, x), (0, n - 1))?);
            probes.push(RangeBox::rect((0, n - 1), (x, x))?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random_boxes {
            let mut axis = || {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                (a.min(b), a.max(b))
            };
            let (x, y) = (axis(), axis());
            probes.push(RangeBox::rect(x, y)?);
        }
        let identity = self.pair.update_identity();
        let mut worst = 0;
        for b in &probes {
            self.update(b, &identity)?;
            worst = worst.max(self.counters.last());
            self.query(b)?;
            worst = worst.max(self.counters.last());
        }
        Ok(worst)
    }
}

/// `5 · (2^{k+5} + 3)`: the worst-case visit envelope for `N = 2^k`.
pub fn visit_bound(k: u32) -> u64 {
    5 * ((1u64 << (k + 5)) + 3)
}

impl<P: OperatorPair> RangeBackend<P> for QuadTree<P> {
    fn pair(&self) -> &P {
        &self.pair
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        self.update_node(0, &Rect::of(b), v, &mut visits)?;
        self.counters.record(visits);
        Ok(())
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        b.check_within(&self.dims)?;
        let mut visits = 0;
        let out = self.query_node(0, &Rect::of(b), &mut visits)?;
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
