use std::fmt;

use crate::error::{Error, Result};

/// A non-empty, axis-aligned box of inclusive per-axis bounds `[l_i, r_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RangeBox {
    bounds: Vec<(usize, usize)>,
}

impl RangeBox {
    pub fn new(bounds: Vec<(usize, usize)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidBox("a box needs at least one axis".into()));
        }
        if let Some((axis, (l, r))) = bounds.iter().enumerate().find(|(_, (l, r))| l > r) {
            return Err(Error::InvalidBox(format!("axis {axis} has l={l} > r={r}")));
        }
        Ok(Self { bounds })
    }

    pub fn line(l: usize, r: usize) -> Result<Self> {
        Self::new(vec![(l, r)])
    }

    pub fn rect(x: (usize, usize), y: (usize, usize)) -> Result<Self> {
        Self::new(vec![x, y])
    }

    /// The box covering every cell of a tensor with the given extents.
    pub fn full(dims: &[usize]) -> Result<Self> {
        Self::new(dims.iter().map(|&n| (0, n.saturating_sub(1))).collect())
    }

    pub fn cell(coords: &[usize]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| (x, x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(usize, usize)] {
        &self.bounds
    }

    pub fn axis(&self, i: usize) -> (usize, usize) {
        self.bounds[i]
    }

    pub fn volume(&self) -> u64 {
        self.bounds
            .iter()
            .map(|(l, r)| (r - l + 1) as u64)
            .product()
    }

    pub fn contains(&self, coords: &[usize]) -> bool {
        coords.len() == self.rank()
            && coords
                .iter()
                .zip(&self.bounds)
                .all(|(x, (l, r))| l <= x && x <= r)
    }

    /// Error unless the box has `dims.len()` axes and fits inside `dims`.
    pub fn check_within(&self, dims: &[usize]) -> Result<()> {
        if self.rank() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}-dimensional box", dims.len()),
                got: format!("{}-dimensional box {self}", self.rank()),
            });
        }
        if self.bounds.iter().zip(dims).any(|((_, r), n)| r >= n) {
            return Err(Error::OutOfBounds {
                bounds: self.to_string(),
                dims: dims.to_vec(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for RangeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, r)) in self.bounds.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "[{l},{r}]")?;
        }
        Ok(())
    }
}
