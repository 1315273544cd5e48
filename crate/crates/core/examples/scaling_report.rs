//! Mean node visits as the grid grows, per backend, with the ratio between
//! consecutive sizes and the envelope it must stay in.

use lazygrid::workload::run_scaling;
use lazygrid::{BackendKind, PairId};

fn main() -> lazygrid::Result<()> {
    let runs = [
        (BackendKind::Seg1d, PairId::PlusMin, vec![256, 1024, 4096]),
        (BackendKind::NdSpecial, PairId::PlusPlus, vec![32, 64, 128]),
        (BackendKind::Quadtree, PairId::PlusMin, vec![32, 64, 128]),
        (
            BackendKind::Grid2dGeneral,
            PairId::PlusMin,
            vec![16, 32, 64],
        ),
    ];
    for (backend, pair, sizes) in runs {
        let report = run_scaling(backend, pair, &sizes, 2000, 5)?;
        println!("{backend} / {pair}");
        for p in &report.points {
            println!(
                "  {:>9}  {:>10.1} visits per op",
                p.dims, p.mean_visits_per_op
            );
        }
        for s in &report.steps {
            println!(
                "  {} -> {}: ratio {:.3} in [{:.2}, {:.2}] {}",
                s.from,
                s.to,
                s.op_ratio,
                s.envelope.lo,
                s.envelope.hi,
                if s.pass { "ok" } else { "outside" }
            );
        }
    }
    Ok(())
}
