use lazygrid::algebra::{PlusMax, PlusMin, PlusPlus, TimesPlus, ZeroTrackedSum};
use lazygrid::matmul::{product_via_uq, schoolbook, SquareMatrix};
use lazygrid::{BackendKind, DenseTensor, OperatorPair, RangeBackend, RangeBox, Scalar, SegTree1D};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Act {
    Update(Vec<(usize, usize)>, i32),
    Query(Vec<(usize, usize)>),
}

fn span(n: usize) -> impl Strategy<Value = (usize, usize)> + Clone {
    (0..n, 0..n).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

fn acts(dims: Vec<usize>, len: usize) -> impl Strategy<Value = Vec<Act>> {
    let b: Vec<_> = dims.iter().map(|&n| span(n)).collect();
    prop::collection::vec(
        prop_oneof![
            (b.clone(), -9..=9i32).prop_map(|(b, v)| Act::Update(b, v)),
            b.prop_map(Act::Query),
        ],
        1..len,
    )
}

fn replay<P: OperatorPair<Value = Scalar>>(
    pair: P,
    kind: BackendKind,
    dims: &[usize],
    init: &[i32],
    ops: &[Act],
) -> Result<(), TestCaseError> {
    let values = init.iter().map(|&x| Scalar::from(x)).collect();
    let mut reference = DenseTensor::new(pair, dims.to_vec(), values).unwrap();
    let mut backend = kind.build(&reference).unwrap();
    for op in ops {
        match op {
            Act::Update(b, v) => {
                let b = RangeBox::new(b.clone()).unwrap();
                backend.update(&b, &Scalar::from(*v)).unwrap();
                reference.oracle_update(&b, &Scalar::from(*v)).unwrap();
            }
            Act::Query(b) => {
                let b = RangeBox::new(b.clone()).unwrap();
                prop_assert_eq!(
                    backend.query(&b).unwrap(),
                    reference.oracle_query(&b).unwrap(),
                    "{:?}",
                    b
                );
            }
        }
    }
    Ok(())
}

fn case(dims: Vec<usize>) -> impl Strategy<Value = (Vec<usize>, Vec<i32>, Vec<Act>)> {
    let cells: usize = dims.iter().product();
    (
        Just(dims.clone()),
        prop::collection::vec(-20..=20i32, cells),
        acts(dims, 60),
    )
}

fn grid_dims() -> impl Strategy<Value = Vec<usize>> {
    (1..=9usize, 1..=9usize).prop_map(|(a, b)| vec![a, b])
}

fn quad_dims() -> impl Strategy<Value = Vec<usize>> {
    (0..=3u32).prop_map(|k| vec![1 << k, 1 << k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn seg1d_matches_oracle((dims, init, ops) in (1..=40usize).prop_flat_map(|n| case(vec![n]))) {
        replay(PlusMin, BackendKind::Seg1d, &dims, &init, &ops)?;
        replay(PlusPlus, BackendKind::Seg1d, &dims, &init, &ops)?;
    }

    #[test]
    fn nd_special_matches_oracle(
        (dims, init, ops) in prop::collection::vec(1..=6usize, 1..=3).prop_flat_map(case)
    ) {
        replay(PlusPlus, BackendKind::NdSpecial, &dims, &init, &ops)?;
    }

    #[test]
    fn grid_matches_oracle((dims, init, ops) in grid_dims().prop_flat_map(case)) {
        replay(PlusMin, BackendKind::Grid2dGeneral, &dims, &init, &ops)?;
        replay(PlusMax, BackendKind::Grid2dGeneral, &dims, &init, &ops)?;
        replay(PlusPlus, BackendKind::Grid2dGeneral, &dims, &init, &ops)?;
    }

    #[test]
    fn quadtree_matches_oracle((dims, init, ops) in quad_dims().prop_flat_map(case)) {
        replay(PlusMin, BackendKind::Quadtree, &dims, &init, &ops)?;
        replay(PlusPlus, BackendKind::Quadtree, &dims, &init, &ops)?;
    }

    #[test]
    fn decomposition_is_a_partition((n, (l, r)) in (1..=200usize).prop_flat_map(|n| (Just(n), span(n)))) {
        let tree = SegTree1D::build(PlusPlus, &vec![Scalar::ZERO; n]).unwrap();
        let parts = tree.decompose(l, r).unwrap();
        let mut next = l;
        for &(a, b) in &parts {
            prop_assert_eq!(a, next);
            prop_assert!(a <= b);
            next = b + 1;
        }
        prop_assert_eq!(next, r + 1);
    }

    #[test]
    fn text_format_round_trips(dims in prop::collection::vec(1..=5usize, 1..=3), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let range = lazygrid::algebra::ValueRange::new(-50, 50);
        let t = DenseTensor::random(PlusMin, dims, &mut rng, range).unwrap();
        let back = DenseTensor::parse(PlusMin, &t.to_text()).unwrap();
        prop_assert_eq!(back.dims(), t.dims());
        prop_assert_eq!(back.data(), t.data());
    }

    #[test]
    fn min_plus_product_matches_schoolbook(
        (n, a, b) in (1..=6usize).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(-9..=9i32, n * n),
            prop::collection::vec(-9..=9i32, n * n),
        ))
    ) {
        let m = |v: &[i32]| SquareMatrix::new(n, v.iter().map(|&x| Scalar::from(x)).collect()).unwrap();
        let (a, b) = (m(&a), m(&b));
        let expected = schoolbook(&a, &b, &PlusMin).unwrap();
        for kind in [BackendKind::Oracle, BackendKind::Grid2dGeneral] {
            let mut backend = kind.build(&a.to_tensor(PlusMin).unwrap()).unwrap();
            prop_assert_eq!(&product_via_uq(&a, &b, &PlusMin, &mut backend).unwrap(), &expected);
        }
    }

    #[test]
    fn standard_product_survives_zero_entries(
        (n, a, b) in (1..=4usize).prop_flat_map(|n| (
            Just(n),
            prop::collection::vec(-3..=3i64, n * n),
            prop::collection::vec(-3..=3i64, n * n),
        ))
    ) {
        let m = |v: &[i64]| SquareMatrix::new(n, v.iter().map(|&x| ZeroTrackedSum::from_int(x)).collect()).unwrap();
        let (a, b) = (m(&a), m(&b));
        let expected = schoolbook(&a, &b, &TimesPlus).unwrap();
        let mut backend = BackendKind::Grid2dGeneral.build(&a.to_tensor(TimesPlus).unwrap()).unwrap();
        let first = product_via_uq(&a, &b, &TimesPlus, &mut backend).unwrap();
        let second = product_via_uq(&a, &b, &TimesPlus, &mut backend).unwrap();
        prop_assert_eq!(first.deviation(&expected).unwrap().mismatches, 0);
        prop_assert_eq!(second.deviation(&expected).unwrap().mismatches, 0);
    }
}
