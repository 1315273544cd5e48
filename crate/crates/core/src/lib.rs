//! Range updates and range queries over d-dimensional arrays for arbitrary
//! operator pairs.
//!
//! Structures:
//! - [`DenseTensor`]: the brute-force reference.
//! - [`SegTree1D`]: the 1D lazy segment tree.
//! - [`NdTree`]: the d-dimensional tree for special pairs.
//! - [`Grid2D`]: the 2D tree for any pair with an aggregator.
//! - [`QuadTree`]: the lazy quadtree.
//!
//! [`matmul`] reduces `(△, ∇)` matrix products to update/query calls on any
//! 2D backend, and [`workload`] drives seeded workloads, benchmarks and
//! growth reports.

pub mod algebra;
pub mod backend;
pub mod boxes;
pub mod counters;
pub mod error;
pub mod grid2d;
pub mod matmul;
pub mod ndtree;
pub mod oracle;
pub mod quadtree;
pub mod segtree1d;
pub mod workload;

pub use algebra::{OperatorPair, PairId, SampledPair, Scalar};
pub use backend::{BackendKind, RangeBackend};
pub use boxes::RangeBox;
pub use counters::OpCounters;
pub use error::{Error, Result};
pub use grid2d::Grid2D;
pub use ndtree::NdTree;
pub use oracle::DenseTensor;
pub use quadtree::QuadTree;
pub use segtree1d::SegTree1D;
