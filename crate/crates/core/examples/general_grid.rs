//! Rectangle add / rectangle min on the general 2D grid, with the outer
//! nodes each update touches.

use lazygrid::algebra::PlusMin;
use lazygrid::grid2d::Action;
use lazygrid::{DenseTensor, Grid2D, RangeBackend, RangeBox, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> lazygrid::Result<()> {
    let n = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Scalar::from(rng.gen_range(-20..=20)))
                .collect()
        })
        .collect();
    let mut reference = DenseTensor::from_rows(PlusMin, rows)?;
    let mut grid = Grid2D::build(&reference)?;

    let b = RangeBox::rect((2, 5), (1, 6))?;
    let touched = grid.update_traced(&b, &Scalar::from(-4))?;
    reference.oracle_update(&b, &Scalar::from(-4))?;
    for t in &touched {
        let how = match t.action {
            Action::Lazy => "inner range update",
            Action::Rebuilt => "rebuilt from children",
        };
        println!("rows {:?}: {how}", t.range);
    }

    for _ in 0..200 {
        let (x0, x1) = ordered(&mut rng, n);
        let (y0, y1) = ordered(&mut rng, n);
        let q = RangeBox::rect((x0, x1), (y0, y1))?;
        if rng.gen_bool(0.5) {
            let v = Scalar::from(rng.gen_range(-5..=5));
            grid.update(&q, &v)?;
            reference.oracle_update(&q, &v)?;
        } else {
            assert_eq!(grid.query(&q)?, reference.oracle_query(&q)?);
        }
    }
    let all = RangeBox::full(&[n, n])?;
    println!(
        "min of the grid after 200 random ops: {}",
        grid.query(&all)?
    );
    println!(
        "mean visits per op: {:.1}",
        grid.counters().total() as f64 / grid.counters().ops() as f64
    );
    Ok(())
}

fn ordered(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    (a.min(b), a.max(b))
}
