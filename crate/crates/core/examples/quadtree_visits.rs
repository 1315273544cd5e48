//! Worst-case node visits of the lazy quadtree against the `O(N)` bound, and
//! a full column update that already costs `Ω(N)`.

use lazygrid::algebra::PlusMin;
use lazygrid::quadtree::visit_bound;
use lazygrid::{DenseTensor, QuadTree, RangeBackend, RangeBox, Scalar};

fn main() -> lazygrid::Result<()> {
    println!(
        "{:>5} {:>10} {:>10} {:>14}",
        "N", "max", "bound", "column update"
    );
    for k in 2..=7u32 {
        let n = 1usize << k;
        let t = DenseTensor::filled(PlusMin, vec![n, n], Scalar::ZERO)?;
        let mut tree = QuadTree::build(&t)?;
        let max = tree.max_visits(200, 1)?;
        tree.update(&RangeBox::rect((0, n - 1), (0, 0))?, &Scalar::from(1))?;
        let column = tree.counters().last();
        println!("{n:>5} {max:>10} {:>10} {column:>14}", visit_bound(k));
        assert!(max <= visit_bound(k));
    }
    Ok(())
}
