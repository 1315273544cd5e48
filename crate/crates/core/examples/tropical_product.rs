//! Min-plus matrix products computed only through rectangle updates and
//! queries, compared with the cubic product.

use lazygrid::algebra::PlusMin;
use lazygrid::matmul::{product_via_uq, products_via_uq, schoolbook, SquareMatrix};
use lazygrid::{BackendKind, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(n: usize, rng: &mut ChaCha8Rng) -> lazygrid::Result<SquareMatrix<Scalar>> {
    SquareMatrix::from_fn(n, |_, _| Scalar::from(rng.gen_range(0..10)))
}

fn main() -> lazygrid::Result<()> {
    let a = SquareMatrix::from_rows(vec![
        vec![Scalar::from(0), Scalar::from(3)],
        vec![Scalar::from(2), Scalar::from(0)],
    ])?;
    let b = SquareMatrix::from_rows(vec![
        vec![Scalar::from(1), Scalar::from(6)],
        vec![Scalar::from(0), Scalar::from(4)],
    ])?;
    for kind in [BackendKind::Oracle, BackendKind::Grid2dGeneral] {
        let mut backend = kind.build(&a.to_tensor(PlusMin)?)?;
        let c = product_via_uq(&a, &b, &PlusMin, &mut backend)?;
        println!("{kind}:\n{c}");
        assert_eq!(c, schoolbook(&a, &b, &PlusMin)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 6;
    let batch = (0..4)
        .map(|_| Ok((random(n, &mut rng)?, random(n, &mut rng)?)))
        .collect::<lazygrid::Result<Vec<_>>>()?;
    let start = SquareMatrix::from_fn(n, |i, j| Scalar::from((i * j) as i32))?;
    let mut backend = BackendKind::Grid2dGeneral.build(&start.to_tensor(PlusMin)?)?;
    let products = products_via_uq(&batch, &PlusMin, &mut backend)?;
    for ((a, b), c) in batch.iter().zip(&products) {
        let d = c.deviation(&schoolbook(a, b, &PlusMin)?)?;
        println!("batch product: {} mismatched cells", d.mismatches);
    }
    Ok(())
}
