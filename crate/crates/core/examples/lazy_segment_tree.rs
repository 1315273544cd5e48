//! Range add / range min on a 1D lazy segment tree, checked against the
//! dense reference.

use lazygrid::algebra::PlusMin;
use lazygrid::{DenseTensor, Scalar, SegTree1D};

fn main() -> lazygrid::Result<()> {
    let values: Vec<Scalar> = [5, 3, 8, 1, 9, 2, 7, 4]
        .into_iter()
        .map(Scalar::from)
        .collect();
    let mut tree = SegTree1D::build(PlusMin, &values)?;
    let mut reference = DenseTensor::from_vec(PlusMin, values)?;

    println!("nodes: {} (depth {})", tree.node_count(), tree.depth());
    println!("[2, 6] splits into {:?}", tree.decompose(2, 6)?);

    let trace = tree.update_traced(2, 5, &Scalar::from(10))?;
    reference.oracle_update(&lazygrid::RangeBox::line(2, 5)?, &Scalar::from(10))?;
    println!(
        "add 10 on [2, 5]: lazy {:?}, recomputed {:?}",
        trace.lazy, trace.rebuilt
    );

    for (l, r) in [(0, 7), (2, 5), (0, 2), (6, 7)] {
        let got = tree.range_query(l, r)?;
        println!("min[{l}, {r}] = {got}");
        assert_eq!(
            got,
            reference.oracle_query(&lazygrid::RangeBox::line(l, r)?)?
        );
    }
    println!("visits of the last query: {}", tree.counters().last());
    println!(
        "array: {:?}",
        tree.to_array()?
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    tree.validate(&reference)?;
    Ok(())
}
