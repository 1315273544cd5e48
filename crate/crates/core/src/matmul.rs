//! `(△, ∇)` matrix products, `C[i][j] = △_k (A[i][k] ∇ B[k][j])`, computed
//! through any 2D update/query backend.
//!
//! One product costs `2N²` updates and `N²` queries: for each column `j` of
//! `C`, column `k` of the backend is updated by `B[k][j]`, every row is
//! queried, and the updates are undone with `inv`.

use std::fmt;

use crate::algebra::{Element, OperatorPair};
use crate::backend::RangeBackend;
use crate::boxes::RangeBox;
use crate::error::{Error, Result};
use crate::oracle::DenseTensor;

/// An `N × N` matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix<V> {
    n: usize,
    data: Vec<V>,
}

impl<V: Element> SquareMatrix<V> {
    pub fn new(n: usize, data: Vec<V>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} values with N >= 1"),
                got: format!("{} values", data.len()),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<V>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} rows of {n} values"),
                got: "a non-square matrix".into(),
            });
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> V) -> Result<Self> {
        let data = (0..n * n).map(|i| f(i / n.max(1), i % n.max(1))).collect();
        Self::new(n, data)
    }

    /// A matrix from a square 2D tensor.
    pub fn from_tensor<P: OperatorPair<Value = V>>(t: DenseTensor<P>) -> Result<Self> {
        match *t.dims() {
            [n, m] if n == m => Self::new(n, t.into_data()),
            _ => Err(Error::DimensionMismatch {
                expected: "a square 2D matrix".into(),
                got: format!("extents {:?}", t.dims()),
            }),
        }
    }

    pub fn to_tensor<P: OperatorPair<Value = V>>(&self, pair: P) -> Result<DenseTensor<P>> {
        DenseTensor::new(pair, vec![self.n, self.n], self.data.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &V {
        &self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[V] {
        &self.data
    }

    /// Cells that differ, and the largest absolute difference of their
    /// numeric views.
    pub fn deviation(&self, other: &Self) -> Result<Deviation> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.n),
                got: format!("{0}x{0}", other.n),
            });
        }
        let mut dev = Deviation::default();
        for (x, y) in self.data.iter().zip(&other.data) {
            if x != y {
                dev.mismatches += 1;
                let d = (x.to_f64() - y.to_f64()).abs();
                dev.max_abs = dev.max_abs.max(if d.is_nan() { f64::INFINITY } else { d });
            }
        }
        Ok(dev)
    }
}

impl<V: Element> fmt::Display for SquareMatrix<V> {
    /// The shared tensor text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "2 {} {}", self.n, self.n)?;
        for row in self.data.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Deviation {
    pub mismatches: usize,
    pub max_abs: f64,
}

fn same_size<V: Element>(a: &SquareMatrix<V>, b: &SquareMatrix<V>) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", a.n),
            got: format!("{0}x{0}", b.n),
        });
    }
    Ok(())
}

/// The operands of one product.
pub type MatrixPair<V> = (SquareMatrix<V>, SquareMatrix<V>);

/// The cubic reference product.
pub fn schoolbook<P: OperatorPair>(
    a: &SquareMatrix<P::Value>,
    b: &SquareMatrix<P::Value>,
    pair: &P,
) -> Result<SquareMatrix<P::Value>> {
    same_size(a, b)?;
    let n = a.n;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = pair.query_identity();
            for k in 0..n {
                acc = pair.query_op(&acc, &pair.update_op(a.get(i, k), b.get(k, j))?)?;
            }
            data.push(acc);
        }
    }
    SquareMatrix::new(n, data)
}

fn check_backend<P: OperatorPair, B: RangeBackend<P> + ?Sized>(
    pair: &P,
    backend: &B,
    n: usize,
) -> Result<()> {
    if !pair.has_inverse() {
        return Err(Error::NoInverse(pair.name()));
    }
    if backend.pair().name() != pair.name() {
        return Err(Error::Config(format!(
            "backend holds pair {} but the product uses {}",
            backend.pair().name(),
            pair.name()
        )));
    }
    if backend.dims() != [n, n] {
        return Err(Error::DimensionMismatch {
            expected: format!("a {n}x{n} backend"),
            got: format!("extents {:?}", backend.dims()),
        });
    }
    Ok(())
}

/// `A * B` through `backend`, which must currently hold `A`. The backend is
/// left in its initial state.
pub fn product_via_uq<P, B>(
    a: &SquareMatrix<P::Value>,
    b: &SquareMatrix<P::Value>,
    pair: &P,
    backend: &mut B,
) -> Result<SquareMatrix<P::Value>>
where
    P: OperatorPair,
    B: RangeBackend<P> + ?Sized,
{
    same_size(a, b)?;
    check_backend(pair, backend, a.n)?;
    column_loop(b, pair, backend)
}

fn column_loop<P, B>(
    b: &SquareMatrix<P::Value>,
    pair: &P,
    backend: &mut B,
) -> Result<SquareMatrix<P::Value>>
where
    P: OperatorPair,
    B: RangeBackend<P> + ?Sized,
{
    let n = b.n;
    let columns: Vec<RangeBox> = (0..n)
        .map(|k| RangeBox::rect((0, n - 1), (k, k)))
        .collect::<Result<_>>()?;
    let rows: Vec<RangeBox> = (0..n)
        .map(|i| RangeBox::rect((i, i), (0, n - 1)))
        .collect::<Result<_>>()?;
    let mut out = vec![pair.query_identity(); n * n];
    for j in 0..n {
        for (k, col) in columns.iter().enumerate() {
            backend.update(col, b.get(k, j))?;
        }
        for (i, row) in rows.iter().enumerate() {
            out[i * n + j] = backend.query(row)?;
        }
        for (k, col) in columns.iter().enumerate() {
            backend.update(col, &pair.inverse(b.get(k, j))?)?;
        }
    }
    SquareMatrix::new(n, out)
}

/// `A_k * B_k` for every pair of matrices, reusing one `N × N` backend that
/// may hold anything initially. Each product first rewrites every cell to
/// `A_k` with `U(cell, inv(Q(cell)) ∇ A_k[i][j])`.
pub fn products_via_uq<P, B>(
    products: &[MatrixPair<P::Value>],
    pair: &P,
    backend: &mut B,
) -> Result<Vec<SquareMatrix<P::Value>>>
where
    P: OperatorPair,
    B: RangeBackend<P> + ?Sized,
{
    let n = backend.dims().first().copied().unwrap_or(0);
    check_backend(pair, backend, n)?;
    let mut out = Vec::with_capacity(products.len());
    for (a, b) in products {
        same_size(a, b)?;
        if a.n != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} matrices"),
                got: format!("{0}x{0}", a.n),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let cell = RangeBox::cell(&[i, j])?;
                let current = backend.query(&cell)?;
                let seed = pair.update_op(&pair.inverse(&current)?, a.get(i, j))?;
                backend.update(&cell, &seed)?;
            }
        }
        out.push(column_loop(b, pair, backend)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PlusMin, Scalar, TimesPlus, ZeroTrackedSum};
    use crate::backend::{BackendKind, Census};

    fn m(rows: &[&[i32]]) -> SquareMatrix<Scalar> {
        SquareMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn zt(rows: &[&[i64]]) -> SquareMatrix<ZeroTrackedSum> {
        SquareMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ZeroTrackedSum::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn schoolbook_examples() {
        let a = m(&[&[0, 1], &[2, 3]]);
        let b = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            schoolbook(&a, &b, &PlusMin).unwrap(),
            m(&[&[1, 0], &[3, 2]])
        );
        let zeros = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(
            schoolbook(&a, &zeros, &PlusMin).unwrap(),
            m(&[&[0, 0], &[2, 2]])
        );
        let sa = zt(&[&[1, 2], &[3, 4]]);
        let id = zt(&[&[1, 0], &[0, 1]]);
        let effective = |x: &SquareMatrix<ZeroTrackedSum>| {
            x.data()
                .iter()
                .map(ZeroTrackedSum::effective)
                .collect::<Vec<_>>()
        };
        assert_eq!(
            effective(&schoolbook(&sa, &id, &TimesPlus).unwrap()),
            effective(&sa)
        );
        assert!(schoolbook(&a, &m(&[&[1]]), &PlusMin).is_err());
    }

    #[test]
    fn reduction_on_two_backends() {
        let a = m(&[&[0, 1], &[2, 3]]);
        let b = m(&[&[1, 0], &[0, 1]]);
        for kind in [BackendKind::Oracle, BackendKind::Grid2dGeneral] {
            let mut backend = Census::new(kind.build(&a.to_tensor(PlusMin).unwrap()).unwrap());
            let c = product_via_uq(&a, &b, &PlusMin, &mut backend).unwrap();
            assert_eq!(c, m(&[&[1, 0], &[3, 2]]));
            assert_eq!((backend.updates(), backend.queries()), (8, 4));
        }
    }

    #[test]
    fn zero_entries_are_undone_exactly() {
        let a = zt(&[&[1, 2], &[3, 4]]);
        let b = zt(&[&[0, 5], &[-1, 0]]);
        let expected = schoolbook(&a, &b, &TimesPlus).unwrap();
        let mut backend = BackendKind::Grid2dGeneral
            .build(&a.to_tensor(TimesPlus).unwrap())
            .unwrap();
        assert_eq!(
            product_via_uq(&a, &b, &TimesPlus, &mut backend).unwrap(),
            expected
        );
        assert_eq!(
            product_via_uq(&a, &b, &TimesPlus, &mut backend).unwrap(),
            expected
        );
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    &backend.query(&RangeBox::cell(&[i, j]).unwrap()).unwrap(),
                    a.get(i, j)
                );
            }
        }
    }

    #[test]
    fn many_products_reseed_the_backend() {
        let junk = m(&[&[9, -4], &[7, 7]]);
        let pairs = vec![
            (m(&[&[0, 1], &[2, 3]]), m(&[&[1, 0], &[0, 1]])),
            (m(&[&[5, -1], &[0, 2]]), m(&[&[3, 3], &[-2, 8]])),
            (m(&[&[5, -1], &[0, 2]]), m(&[&[3, 3], &[-2, 8]])),
        ];
        let mut backend = BackendKind::Grid2dGeneral
            .build(&junk.to_tensor(PlusMin).unwrap())
            .unwrap();
        let got = products_via_uq(&pairs, &PlusMin, &mut backend).unwrap();
        for ((a, b), c) in pairs.iter().zip(&got) {
            assert_eq!(c, &schoolbook(a, b, &PlusMin).unwrap());
        }
        assert_eq!(got[1], got[2]);
    }

    #[test]
    fn pairs_without_inverse_are_rejected() {
        use crate::algebra::MinMin;
        let a = m(&[&[1]]);
        let mut backend = a.to_tensor(MinMin).unwrap();
        assert!(matches!(
            product_via_uq(&a, &a, &MinMin, &mut backend),
            Err(Error::NoInverse(_))
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!(m(&[&[1, 0], &[3, 2]]).to_string(), "2 2 2\n1 0\n3 2\n");
    }
}
