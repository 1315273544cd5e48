//! The update/query interface shared by every structure.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::algebra::OperatorPair;
use crate::boxes::RangeBox;
use crate::counters::OpCounters;
use crate::error::{Error, Result};
use crate::grid2d::Grid2D;
use crate::ndtree::NdTree;
use crate::oracle::DenseTensor;
use crate::quadtree::QuadTree;
use crate::segtree1d::SegTree1D;

/// A structure answering box updates `U(B, v)` and box queries `Q(B)`.
pub trait RangeBackend<P: OperatorPair>: Send + Sync {
    fn pair(&self) -> &P;

    fn dims(&self) -> &[usize];

    /// `e ← e ∇ v` for every element of `b`.
    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()>;

    /// The `△` of every element of `b`.
    fn query(&self, b: &RangeBox) -> Result<P::Value>;

    /// Visit counters; `last` refers to the most recent update or query.
    fn counters(&self) -> &OpCounters;

    /// Nodes visited while building.
    fn build_visits(&self) -> u64;
}

impl<P: OperatorPair, B: RangeBackend<P> + ?Sized> RangeBackend<P> for Box<B> {
    fn pair(&self) -> &P {
        (**self).pair()
    }

    fn dims(&self) -> &[usize] {
        (**self).dims()
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        (**self).update(b, v)
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        (**self).query(b)
    }

    fn counters(&self) -> &OpCounters {
        (**self).counters()
    }

    fn build_visits(&self) -> u64 {
        (**self).build_visits()
    }
}

/// The registered backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Oracle,
    Seg1d,
    NdSpecial,
    Grid2dGeneral,
    Quadtree,
}

impl BackendKind {
    pub const ALL: [BackendKind; 5] = [
        BackendKind::Oracle,
        BackendKind::Seg1d,
        BackendKind::NdSpecial,
        BackendKind::Grid2dGeneral,
        BackendKind::Quadtree,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BackendKind::Oracle => "oracle",
            BackendKind::Seg1d => "seg1d",
            BackendKind::NdSpecial => "nd-special",
            BackendKind::Grid2dGeneral => "grid2d-general",
            BackendKind::Quadtree => "quadtree",
        }
    }

    /// Whether the backend accepts tensors of this rank.
    pub fn supports_rank(self, rank: usize) -> bool {
        match self {
            BackendKind::Oracle => rank >= 1,
            BackendKind::Seg1d => rank == 1,
            BackendKind::NdSpecial => (1..=3).contains(&rank),
            BackendKind::Grid2dGeneral | BackendKind::Quadtree => rank == 2,
        }
    }

    fn rank_text(self) -> &'static str {
        match self {
            BackendKind::Oracle => "any rank",
            BackendKind::Seg1d => "rank 1",
            BackendKind::NdSpecial => "rank 1 to 3",
            BackendKind::Grid2dGeneral | BackendKind::Quadtree => "rank 2",
        }
    }

    pub fn check_dims(self, dims: &[usize]) -> Result<()> {
        if self.supports_rank(dims.len()) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{} for backend {}", self.rank_text(), self.id()),
                got: format!("extents {dims:?}"),
            })
        }
    }

    /// Build this backend over `init`.
    pub fn build<P: OperatorPair>(self, init: &DenseTensor<P>) -> Result<Box<dyn RangeBackend<P>>> {
        self.check_dims(init.dims())?;
        Ok(match self {
            BackendKind::Oracle => Box::new(init.clone()),
            BackendKind::Seg1d => Box::new(SegTree1D::from_tensor(init)?),
            BackendKind::NdSpecial => Box::new(NdTree::build(init)?),
            BackendKind::Grid2dGeneral => Box::new(Grid2D::build(init)?),
            BackendKind::Quadtree => Box::new(QuadTree::build(init)?),
        })
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BackendKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "backend",
                name: s.to_string(),
            })
    }
}

/// Counts the update and query calls made through it.
pub struct Census<B> {
    inner: B,
    updates: AtomicU64,
    queries: AtomicU64,
}

impl<B> Census<B> {
    pub fn new(inner: B) -> Self {
        Self {
            inner,
            updates: AtomicU64::new(0),
            queries: AtomicU64::new(0),
        }
    }

    pub fn updates(&self) -> u64 {
        self.updates.load(Ordering::Relaxed)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }

    pub fn into_inner(self) -> B {
        self.inner
    }
}

impl<P: OperatorPair, B: RangeBackend<P>> RangeBackend<P> for Census<B> {
    fn pair(&self) -> &P {
        self.inner.pair()
    }

    fn dims(&self) -> &[usize] {
        self.inner.dims()
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        self.updates.fetch_add(1, Ordering::Relaxed);
        self.inner.update(b, v)
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.inner.query(b)
    }

    fn counters(&self) -> &OpCounters {
        self.inner.counters()
    }

    fn build_visits(&self) -> u64 {
        self.inner.build_visits()
    }
}
