//! Range add / range sum over a 3D array with the tree for special pairs.

use lazygrid::algebra::{PlusMin, PlusPlus};
use lazygrid::{DenseTensor, Error, NdTree, RangeBackend, RangeBox, Scalar};

fn main() -> lazygrid::Result<()> {
    let dims = vec![4, 5, 6];
    let cells: usize = dims.iter().product();
    let values = (0..cells).map(|x| Scalar::from((x % 7) as i32)).collect();
    let mut reference = DenseTensor::new(PlusPlus, dims, values)?;
    let mut tree = NdTree::build(&reference)?;
    println!(
        "rank {} tree, {} outer nodes",
        tree.rank(),
        tree.outer_ranges().len()
    );

    let b = RangeBox::new(vec![(1, 3), (0, 2), (2, 5)])?;
    tree.update(&b, &Scalar::from(3))?;
    reference.oracle_update(&b, &Scalar::from(3))?;
    println!(
        "added 3 to {} cells, {} node visits",
        b.volume(),
        tree.counters().last()
    );

    for q in [
        RangeBox::full(&[4, 5, 6])?,
        RangeBox::new(vec![(0, 1), (1, 4), (0, 3)])?,
        RangeBox::cell(&[2, 1, 3])?,
    ] {
        let got = tree.query(&q)?;
        assert_eq!(got, reference.oracle_query(&q)?);
        println!(
            "sum over {:?} = {got} ({} visits)",
            q.bounds(),
            tree.counters().last()
        );
    }

    let plus_min = DenseTensor::filled(PlusMin, vec![3, 3], Scalar::ZERO)?;
    match NdTree::build(&plus_min) {
        Err(Error::NotSpecial { .. }) => println!("plus-min is rejected: it is not special"),
        other => panic!("expected a rejection, got {other:?}"),
    }
    Ok(())
}
