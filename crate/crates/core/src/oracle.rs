//! Brute-force dense tensor: the ground truth for every differential test.
//!
//! Updates and queries touch every covered cell, so each costs `O(|B|)`.
//! The visit counter records the number of cells touched.

use rand::RngCore;

use crate::algebra::{OperatorPair, SampledPair, ValueRange};
use crate::backend::RangeBackend;
use crate::boxes::RangeBox;
use crate::counters::OpCounters;
use crate::error::{Error, Result};

/// A d-dimensional array in row-major order.
#[derive(Clone, Debug)]
pub struct DenseTensor<P: OperatorPair> {
    pair: P,
    dims: Vec<usize>,
    data: Vec<P::Value>,
    counters: OpCounters,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch {
            expected: "at least one positive extent".into(),
            got: format!("{dims:?}"),
        });
    }
    dims.iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .ok_or(Error::Overflow("tensor size"))
}

impl<P: OperatorPair> DenseTensor<P> {
    pub fn new(pair: P, dims: Vec<usize>, data: Vec<P::Value>) -> Result<Self> {
        let len = check_dims(&dims)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch {
                expected: format!("{len} values for extents {dims:?}"),
                got: format!("{} values", data.len()),
            });
        }
        Ok(Self {
            pair,
            dims,
            data,
            counters: OpCounters::default(),
        })
    }

    pub fn filled(pair: P, dims: Vec<usize>, value: P::Value) -> Result<Self> {
        let len = check_dims(&dims)?;
        Self::new(pair, dims, vec![value; len])
    }

    /// A 1D tensor.
    pub fn from_vec(pair: P, values: Vec<P::Value>) -> Result<Self> {
        let n = values.len();
        Self::new(pair, vec![n], values)
    }

    /// A 2D tensor from equal-length rows.
    pub fn from_rows(pair: P, rows: Vec<Vec<P::Value>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: format!("rows of length {m}"),
                got: "ragged rows".into(),
            });
        }
        Self::new(pair, vec![n, m], rows.into_iter().flatten().collect())
    }

    pub fn random(
        pair: P,
        dims: Vec<usize>,
        rng: &mut dyn RngCore,
        range: ValueRange,
    ) -> Result<Self>
    where
        P: SampledPair,
    {
        let len = check_dims(&dims)?;
        let data = (0..len).map(|_| pair.sample_value(rng, range)).collect();
        Self::new(pair, dims, data)
    }

    pub fn pair(&self) -> &P {
        &self.pair
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[P::Value] {
        &self.data
    }

    pub fn into_data(self) -> Vec<P::Value> {
        self.data
    }

    pub fn offset(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &n)| acc * n + x)
    }

    pub fn get(&self, coords: &[usize]) -> &P::Value {
        &self.data[self.offset(coords)]
    }

    /// Flat indices of the cells inside `b`, in row-major order.
    fn cells(&self, b: &RangeBox) -> Vec<usize> {
        let mut out = vec![0usize];
        for (axis, &(l, r)) in b.bounds().iter().enumerate() {
            let n = self.dims[axis];
            out = out
                .into_iter()
                .flat_map(|base| (l..=r).map(move |x| base * n + x))
                .collect();
        }
        out
    }

    /// `e ← e ∇ v` for every cell of `b`.
    pub fn oracle_update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        b.check_within(&self.dims)?;
        let cells = self.cells(b);
        for &i in &cells {
            self.data[i] = self.pair.update_op(&self.data[i], v)?;
        }
        self.counters.record(cells.len() as u64);
        Ok(())
    }

    /// `△` of every cell of `b`.
    pub fn oracle_query(&self, b: &RangeBox) -> Result<P::Value> {
        b.check_within(&self.dims)?;
        let cells = self.cells(b);
        let mut acc = self.pair.query_identity();
        for &i in &cells {
            acc = self.pair.query_op(&acc, &self.data[i])?;
        }
        self.counters.record(cells.len() as u64);
        Ok(acc)
    }

    /// Rows of a 2D tensor.
    pub fn rows(&self) -> impl Iterator<Item = &[P::Value]> {
        let width = *self.dims.last().expect("at least one axis");
        self.data.chunks(width)
    }

    /// The text format: a header `d n_0 … n_{d-1}` followed by the values in
    /// row-major order, one innermost row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}", self.dims.len());
        for n in &self.dims {
            out.push_str(&format!(" {n}"));
        }
        out.push('\n');
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the text format written by [`DenseTensor::to_text`].
    ///
    /// Values may be laid out freely, but when they span several lines every
    /// line must hold the same number of values.
    pub fn parse(pair: P, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty tensor file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header token `{t}`")))
            })
            .collect::<Result<_>>()?;
        let (&d, dims) = nums
            .split_first()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        if d == 0 || dims.len() != d {
            return Err(Error::Parse(format!(
                "header declares {d} axes but lists {} extents",
                dims.len()
            )));
        }
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
        if rows.len() > 1 {
            let width = rows[0].len();
            if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
                return Err(Error::Parse(format!(
                    "ragged input: line {} has {} values, expected {width}",
                    i + 2,
                    row.len()
                )));
            }
        }
        let data: Vec<P::Value> = rows
            .into_iter()
            .flatten()
            .map(str::parse)
            .collect::<Result<_>>()?;
        let expected = check_dims(dims)?;
        if data.len() != expected {
            return Err(Error::Parse(format!(
                "expected {expected} values for extents {dims:?}, found {}",
                data.len()
            )));
        }
        Self::new(pair, dims.to_vec(), data)
    }
}

impl<P: OperatorPair> RangeBackend<P> for DenseTensor<P> {
    fn pair(&self) -> &P {
        &self.pair
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn update(&mut self, b: &RangeBox, v: &P::Value) -> Result<()> {
        self.oracle_update(b, v)
    }

    fn query(&self, b: &RangeBox) -> Result<P::Value> {
        self.oracle_query(b)
    }

    fn counters(&self) -> &OpCounters {
        &self.counters
    }

    fn build_visits(&self) -> u64 {
        self.data.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PlusMin, PlusPlus, Scalar};

    fn s(v: &[i32]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn update_examples() {
        let mut t = DenseTensor::from_vec(PlusMin, s(&[3, 1, 4])).unwrap();
        t.oracle_update(&RangeBox::line(1, 2).unwrap(), &Scalar::from(2))
            .unwrap();
        assert_eq!(t.data(), s(&[3, 3, 6]).as_slice());

        let before = t.data().to_vec();
        t.oracle_update(&RangeBox::full(&[3]).unwrap(), &Scalar::ZERO)
            .unwrap();
        assert_eq!(t.data(), before.as_slice());

        let mut g = DenseTensor::from_rows(PlusPlus, vec![s(&[1, 2]), s(&[3, 4])]).unwrap();
        g.oracle_update(&RangeBox::rect((0, 0), (0, 1)).unwrap(), &Scalar::from(5))
            .unwrap();
        assert_eq!(g.data(), s(&[6, 7, 3, 4]).as_slice());
    }

    #[test]
    fn query_examples() {
        let t = DenseTensor::from_vec(PlusMin, s(&[3, 1, 4])).unwrap();
        assert_eq!(
            t.oracle_query(&RangeBox::line(0, 2).unwrap()),
            Ok(Scalar::from(1))
        );
        assert_eq!(
            t.oracle_query(&RangeBox::line(2, 2).unwrap()),
            Ok(Scalar::from(4))
        );
        let g = DenseTensor::from_rows(PlusPlus, vec![s(&[1, 2]), s(&[3, 4])]).unwrap();
        assert_eq!(
            g.oracle_query(&RangeBox::full(&[2, 2]).unwrap()),
            Ok(Scalar::from(10))
        );
        assert_eq!(g.counters.last(), 4);
    }

    #[test]
    fn out_of_bounds_is_rejected() {
        let mut t = DenseTensor::from_vec(PlusMin, s(&[3, 1, 4])).unwrap();
        assert!(t.oracle_query(&RangeBox::line(0, 3).unwrap()).is_err());
        assert!(t
            .oracle_update(&RangeBox::rect((0, 0), (0, 0)).unwrap(), &Scalar::ONE)
            .is_err());
    }

    #[test]
    fn text_format() {
        let g = DenseTensor::from_rows(PlusMin, vec![s(&[1, -2]), s(&[3, 4])]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "2 2 2\n1 -2\n3 4\n");
        let back = DenseTensor::parse(PlusMin, &text).unwrap();
        assert_eq!(back.data(), g.data());
        assert_eq!(back.dims(), g.dims());

        let flat = DenseTensor::parse(PlusMin, "3 2 1 2\n1 2 3 inf\n").unwrap();
        assert_eq!(flat.dims(), &[2, 1, 2]);
        assert_eq!(flat.get(&[1, 0, 1]), &Scalar::POS_INF);

        assert!(DenseTensor::parse(PlusMin, "2 2 2\n1 2\n3\n").is_err());
        assert!(DenseTensor::parse(PlusMin, "2 2 2\n1 2 3\n4\n").is_err());
        assert!(DenseTensor::parse(PlusMin, "2 2 2\n1 2 3 4 5\n").is_err());
        assert!(DenseTensor::parse(PlusMin, "2 2\n1 2\n").is_err());
        assert!(DenseTensor::parse(PlusMin, "").is_err());
        assert!(DenseTensor::parse(PlusMin, "1 2\nx y\n").is_err());
    }
}
