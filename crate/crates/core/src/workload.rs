//! Seeded workloads: differential verification against the oracle,
//! visit-count benchmarks, growth reports and matrix products.
//!
//! A workload draws its initial tensor and then `ops` actions from one
//! ChaCha8 stream. Each action is an update with probability `update_ratio`,
//! otherwise a query; boxes take two uniform indices per axis, sorted.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::laws::{check_special, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::algebra::{OperatorPair, PairId, PairVisitor, SampledPair, ValueRange};
use crate::backend::{BackendKind, RangeBackend};
use crate::boxes::RangeBox;
use crate::error::{Error, Result};
use crate::matmul::{product_via_uq, schoolbook, Deviation, SquareMatrix};
use crate::oracle::DenseTensor;

pub const DEFAULT_OPS: usize = 10_000;
pub const DEFAULT_UPDATE_RATIO: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct WorkloadConfig {
    pub backend: BackendKind,
    pub pair: PairId,
    pub dims: Vec<usize>,
    pub ops: usize,
    pub update_ratio: f64,
    pub seed: u64,
    pub range: ValueRange,
}

impl WorkloadConfig {
    pub fn new(backend: BackendKind, pair: PairId, dims: Vec<usize>) -> Self {
        Self {
            backend,
            pair,
            dims,
            ops: DEFAULT_OPS,
            update_ratio: DEFAULT_UPDATE_RATIO,
            seed: 0,
            range: ValueRange::default(),
        }
    }

    pub fn with_ops(mut self, ops: usize) -> Self {
        self.ops = ops;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_ratio(mut self, update_ratio: f64) -> Self {
        self.update_ratio = update_ratio;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ops == 0 {
            return Err(Error::Config("op count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.update_ratio) {
            return Err(Error::Config(format!(
                "update ratio {} is outside [0, 1]",
                self.update_ratio
            )));
        }
        if self.range.lo > self.range.hi {
            return Err(Error::Config("value range is empty".into()));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Config(format!("invalid extents {:?}", self.dims)));
        }
        self.backend.check_dims(&self.dims)
    }
}

pub fn format_dims(dims: &[usize]) -> String {
    dims.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// Parse `AxBxC`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split('x')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Parse(format!(
                "`{s}` is not a list of positive extents like 32x32"
            ))),
        })
        .collect()
}

/// One workload action.
#[derive(Clone, Debug, PartialEq)]
pub enum Op<V> {
    Update(RangeBox, V),
    Query(RangeBox),
}

/// An initial tensor and the actions to replay on it.
pub type Workload<P> = (DenseTensor<P>, Vec<Op<<P as OperatorPair>::Value>>);

/// The seeded initial tensor and action list for `cfg`.
pub fn generate<P: SampledPair>(pair: &P, cfg: &WorkloadConfig) -> Result<Workload<P>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let init = DenseTensor::random(pair.clone(), cfg.dims.clone(), &mut rng, cfg.range)?;
    let mut ops = Vec::with_capacity(cfg.ops);
    for _ in 0..cfg.ops {
        let update = rng.gen_bool(cfg.update_ratio);
        let bounds = cfg
            .dims
            .iter()
            .map(|&n| {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                (a.min(b), a.max(b))
            })
            .collect();
        let b = RangeBox::new(bounds)?;
        ops.push(if update {
            Op::Update(b, pair.sample_value(&mut rng, cfg.range))
        } else {
            Op::Query(b)
        });
    }
    Ok((init, ops))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub backend: String,
    pub pair: String,
    pub dims: String,
    pub ops: usize,
    pub updates: usize,
    pub queries: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

fn reject_non_special<P: SampledPair>(pair: &P, backend: BackendKind) -> Result<()> {
    if backend == BackendKind::NdSpecial && !pair.is_special() {
        let check = check_special(pair, DEFAULT_SAMPLES, DEFAULT_SEED);
        return Err(Error::NotSpecial {
            pair: pair.name(),
            witness: check.witness.map(|w| w.to_string()),
        });
    }
    Ok(())
}

/// Replay `cfg` on its backend and on the oracle in lockstep.
pub fn verify_with<P: SampledPair>(pair: P, cfg: &WorkloadConfig) -> Result<VerifyReport> {
    verify_with_fault(pair, cfg, None)
}

/// Like [`verify_with`], but before action `fault` the backend alone
/// receives a full-box update by a non-identity value. Used to exercise the
/// mismatch path.
pub fn verify_with_fault<P: SampledPair>(
    pair: P,
    cfg: &WorkloadConfig,
    fault: Option<usize>,
) -> Result<VerifyReport> {
    reject_non_special(&pair, cfg.backend)?;
    let fault_value = pair
        .small_values()
        .into_iter()
        .find(|v| *v != pair.update_identity())
        .ok_or_else(|| {
            Error::Config(format!("{} has no non-identity sample value", pair.name()))
        })?;
    let (mut oracle, ops) = generate(&pair, cfg)?;
    let mut backend = cfg.backend.build(&oracle)?;
    let mut report = VerifyReport {
        backend: cfg.backend.to_string(),
        pair: cfg.pair.to_string(),
        dims: format_dims(&cfg.dims),
        ops: ops.len(),
        updates: 0,
        queries: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for (step, op) in ops.iter().enumerate() {
        if fault == Some(step) {
            backend.update(&RangeBox::full(&cfg.dims)?, &fault_value)?;
        }
        match op {
            Op::Update(b, v) => {
                report.updates += 1;
                backend.update(b, v)?;
                oracle.oracle_update(b, v)?;
            }
            Op::Query(b) => {
                report.queries += 1;
                let got = backend.query(b)?;
                let want = oracle.oracle_query(b)?;
                if got != want {
                    report.mismatches += 1;
                    report.first_mismatch.get_or_insert_with(|| {
                        format!("op {step}: Q({b}) returned {got:?}, oracle {want:?}")
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn run_verify(cfg: &WorkloadConfig) -> Result<VerifyReport> {
    run_verify_with_fault(cfg, None)
}

pub fn run_verify_with_fault(cfg: &WorkloadConfig, fault: Option<usize>) -> Result<VerifyReport> {
    struct Run<'a>(&'a WorkloadConfig, Option<usize>);
    impl PairVisitor for Run<'_> {
        type Output = Result<VerifyReport>;
        fn visit<P: SampledPair>(self, pair: P) -> Self::Output {
            verify_with_fault(pair, self.0, self.1)
        }
    }
    cfg.pair.visit(Run(cfg, fault))
}

/// One benchmark result; the field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub backend: String,
    pub pair: String,
    pub dims: String,
    pub init_visits: u64,
    pub mean_visits_per_update: f64,
    pub mean_visits_per_query: f64,
    pub wall_init_seconds: f64,
    pub wall_ops_seconds: f64,
}

pub const BENCH_COLUMNS: [&str; 8] = [
    "backend",
    "pair",
    "dims",
    "init_visits",
    "mean_visits_per_update",
    "mean_visits_per_query",
    "wall_init_seconds",
    "wall_ops_seconds",
];

impl BenchRow {
    /// Mean visits over all actions.
    pub fn mean_visits_per_op(&self, update_ratio: f64) -> f64 {
        update_ratio * self.mean_visits_per_update
            + (1.0 - update_ratio) * self.mean_visits_per_query
    }
}

/// Visit totals of one workload run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VisitStats {
    pub init_visits: u64,
    pub updates: u64,
    pub queries: u64,
    pub update_visits: u64,
    pub query_visits: u64,
}

impl VisitStats {
    fn mean(total: u64, count: u64) -> f64 {
        if count == 0 {
            0.0
        } else {
            total as f64 / count as f64
        }
    }

    pub fn mean_update(&self) -> f64 {
        Self::mean(self.update_visits, self.updates)
    }

    pub fn mean_query(&self) -> f64 {
        Self::mean(self.query_visits, self.queries)
    }

    pub fn mean_op(&self) -> f64 {
        Self::mean(
            self.update_visits + self.query_visits,
            self.updates + self.queries,
        )
    }
}

fn measure<P: SampledPair>(pair: P, cfg: &WorkloadConfig) -> Result<(VisitStats, f64, f64)> {
    reject_non_special(&pair, cfg.backend)?;
    let (init, ops) = generate(&pair, cfg)?;
    let start = Instant::now();
    let mut backend = cfg.backend.build(&init)?;
    let wall_init = start.elapsed().as_secs_f64();
    drop(init);
    let mut stats = VisitStats {
        init_visits: backend.build_visits(),
        ..VisitStats::default()
    };
    let start = Instant::now();
    for op in &ops {
        match op {
            Op::Update(b, v) => {
                backend.update(b, v)?;
                stats.updates += 1;
                stats.update_visits += backend.counters().last();
            }
            Op::Query(b) => {
                backend.query(b)?;
                stats.queries += 1;
                stats.query_visits += backend.counters().last();
            }
        }
    }
    Ok((stats, wall_init, start.elapsed().as_secs_f64()))
}

pub fn run_stats(cfg: &WorkloadConfig) -> Result<VisitStats> {
    struct Run<'a>(&'a WorkloadConfig);
    impl PairVisitor for Run<'_> {
        type Output = Result<VisitStats>;
        fn visit<P: SampledPair>(self, pair: P) -> Self::Output {
            measure(pair, self.0).map(|(s, _, _)| s)
        }
    }
    cfg.pair.visit(Run(cfg))
}

pub fn run_bench(cfg: &WorkloadConfig) -> Result<BenchRow> {
    struct Run<'a>(&'a WorkloadConfig);
    impl PairVisitor for Run<'_> {
        type Output = Result<(VisitStats, f64, f64)>;
        fn visit<P: SampledPair>(self, pair: P) -> Self::Output {
            measure(pair, self.0)
        }
    }
    let (stats, wall_init, wall_ops) = cfg.pair.visit(Run(cfg))?;
    Ok(BenchRow {
        backend: cfg.backend.to_string(),
        pair: cfg.pair.to_string(),
        dims: format_dims(&cfg.dims),
        init_visits: stats.init_visits,
        mean_visits_per_update: stats.mean_update(),
        mean_visits_per_query: stats.mean_query(),
        wall_init_seconds: wall_init,
        wall_ops_seconds: wall_ops,
    })
}

pub fn run_bench_all(cfgs: &[WorkloadConfig]) -> Result<Vec<BenchRow>> {
    cfgs.iter().map(run_bench).collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(BENCH_COLUMNS).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ConfigView<'a> {
    backends: Vec<String>,
    pairs: Vec<String>,
    dims: Vec<String>,
    ops: Vec<usize>,
    update_ratio: Vec<f64>,
    seed: Vec<u64>,
    value_range: Vec<&'a ValueRange>,
}

/// `{"config": …, "rows": […]}`.
pub fn write_json<W: Write>(cfgs: &[WorkloadConfig], rows: &[BenchRow], out: W) -> Result<()> {
    fn distinct<T: PartialEq>(items: impl Iterator<Item = T>) -> Vec<T> {
        let mut out = Vec::new();
        for x in items {
            if !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }
    let config = ConfigView {
        backends: distinct(cfgs.iter().map(|c| c.backend.to_string())),
        pairs: distinct(cfgs.iter().map(|c| c.pair.to_string())),
        dims: cfgs.iter().map(|c| format_dims(&c.dims)).collect(),
        ops: distinct(cfgs.iter().map(|c| c.ops)),
        update_ratio: distinct(cfgs.iter().map(|c| c.update_ratio)),
        seed: distinct(cfgs.iter().map(|c| c.seed)),
        value_range: distinct(cfgs.iter().map(|c| &c.range)),
    };
    let doc = serde_json::json!({ "config": config, "rows": rows });
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// The growth allowed when every extent grows from `n1` to `n2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub lo: f64,
    pub hi: f64,
}

/// Slack added to polylogarithmic envelopes for lower-order terms.
pub const POLYLOG_SLACK: f64 = 0.35;

impl Envelope {
    /// The declared growth of mean visits per action for `backend` on a
    /// rank-`rank` grid.
    pub fn declared(backend: BackendKind, rank: usize, n1: usize, n2: usize) -> Self {
        let g = n2 as f64 / n1 as f64;
        let l = (n2 as f64).log2() / (n1 as f64).log2();
        let d = rank as i32;
        match backend {
            BackendKind::Seg1d | BackendKind::NdSpecial => Envelope {
                lo: 0.0,
                hi: l.powi(d) + POLYLOG_SLACK,
            },
            BackendKind::Grid2dGeneral => Envelope {
                lo: 0.0,
                hi: g * l + POLYLOG_SLACK,
            },
            BackendKind::Quadtree => Envelope {
                lo: 0.75 * g,
                hi: 1.5 * g,
            },
            BackendKind::Oracle => Envelope {
                lo: 0.0,
                hi: 1.5 * g.powi(d),
            },
        }
    }

    pub fn admits(&self, ratio: f64) -> bool {
        self.lo <= ratio && ratio <= self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub size: usize,
    pub dims: String,
    pub mean_visits_per_update: f64,
    pub mean_visits_per_query: f64,
    pub mean_visits_per_op: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingStep {
    pub from: usize,
    pub to: usize,
    pub update_ratio: f64,
    pub query_ratio: f64,
    pub op_ratio: f64,
    pub envelope: Envelope,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub backend: String,
    pub pair: String,
    pub points: Vec<ScalingPoint>,
    pub steps: Vec<ScalingStep>,
}

impl ScalingReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }
}

/// The grid rank used for size sweeps: 1 for the 1D tree, 2 otherwise.
pub fn sweep_rank(backend: BackendKind) -> usize {
    if backend == BackendKind::Seg1d {
        1
    } else {
        2
    }
}

/// Mean visits at each size (every extent equal to the size) and the ratio
/// between consecutive sizes, gated on the mean visits per action.
pub fn run_scaling(
    backend: BackendKind,
    pair: PairId,
    sizes: &[usize],
    ops: usize,
    seed: u64,
) -> Result<ScalingReport> {
    if sizes.len() < 2 {
        return Err(Error::Config("scaling needs at least two sizes".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] < 2 {
        return Err(Error::Config(format!(
            "sizes must be strictly increasing and at least 2, got {sizes:?}"
        )));
    }
    let rank = sweep_rank(backend);
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let cfg = WorkloadConfig::new(backend, pair, vec![n; rank])
            .with_ops(ops)
            .with_seed(seed);
        let stats = run_stats(&cfg)?;
        points.push(ScalingPoint {
            size: n,
            dims: format_dims(&cfg.dims),
            mean_visits_per_update: stats.mean_update(),
            mean_visits_per_query: stats.mean_query(),
            mean_visits_per_op: stats.mean_op(),
        });
    }
    let ratio = |a: f64, b: f64| if a == 0.0 { f64::INFINITY } else { b / a };
    let steps = points
        .windows(2)
        .map(|w| {
            let envelope = Envelope::declared(backend, rank, w[0].size, w[1].size);
            let op_ratio = ratio(w[0].mean_visits_per_op, w[1].mean_visits_per_op);
            ScalingStep {
                from: w[0].size,
                to: w[1].size,
                update_ratio: ratio(w[0].mean_visits_per_update, w[1].mean_visits_per_update),
                query_ratio: ratio(w[0].mean_visits_per_query, w[1].mean_visits_per_query),
                op_ratio,
                envelope,
                pass: envelope.admits(op_ratio),
            }
        })
        .collect();
    Ok(ScalingReport {
        backend: backend.to_string(),
        pair: pair.to_string(),
        points,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatmulReport {
    /// The product in the tensor text format.
    pub product: String,
    pub deviation: Option<Deviation>,
}

impl MatmulReport {
    pub fn passed(&self) -> bool {
        self.deviation.is_none_or(|d| d.mismatches == 0)
    }
}

/// `A * B` from two matrix files' contents, through `backend`.
pub fn run_matmul(
    a_text: &str,
    b_text: &str,
    pair: PairId,
    backend: BackendKind,
    check: bool,
) -> Result<MatmulReport> {
    struct Run<'a> {
        a: &'a str,
        b: &'a str,
        backend: BackendKind,
        check: bool,
    }
    impl PairVisitor for Run<'_> {
        type Output = Result<MatmulReport>;
        fn visit<P: SampledPair>(self, pair: P) -> Self::Output {
            if !pair.has_inverse() {
                return Err(Error::NoInverse(pair.name()));
            }
            reject_non_special(&pair, self.backend)?;
            let a = SquareMatrix::from_tensor(DenseTensor::parse(pair.clone(), self.a)?)?;
            let b = SquareMatrix::from_tensor(DenseTensor::parse(pair.clone(), self.b)?)?;
            if a.n() != b.n() {
                return Err(Error::DimensionMismatch {
                    expected: format!("{0}x{0}", a.n()),
                    got: format!("{0}x{0}", b.n()),
                });
            }
            let mut structure = self.backend.build(&a.to_tensor(pair.clone())?)?;
            let c = product_via_uq(&a, &b, &pair, &mut structure)?;
            let deviation = if self.check {
                Some(c.deviation(&schoolbook(&a, &b, &pair)?)?)
            } else {
                None
            };
            Ok(MatmulReport {
                product: c.to_string(),
                deviation,
            })
        }
    }
    pair.visit(Run {
        a: a_text,
        b: b_text,
        backend,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_round_trip() {
        assert_eq!(parse_dims("32x16x2"), Ok(vec![32, 16, 2]));
        assert_eq!(format_dims(&[32, 16]), "32x16");
        assert!(parse_dims("4x0").is_err());
        assert!(parse_dims("ax4").is_err());
    }

    #[test]
    fn verify_examples() {
        let cfg = WorkloadConfig::new(BackendKind::Seg1d, PairId::PlusMin, vec![16])
            .with_ops(1000)
            .with_seed(42);
        let report = run_verify(&cfg).unwrap();
        assert!(report.passed());
        assert_eq!(report.updates + report.queries, 1000);

        let cfg = WorkloadConfig::new(BackendKind::NdSpecial, PairId::PlusMin, vec![4, 4]);
        match run_verify(&cfg) {
            Err(Error::NotSpecial {
                witness: Some(w), ..
            }) => assert!(w.contains("a=")),
            other => panic!("expected a special-law counterexample, got {other:?}"),
        }

        let cfg = WorkloadConfig::new(BackendKind::Oracle, PairId::PlusPlus, vec![1]).with_ops(1);
        assert!(run_verify(&cfg).unwrap().passed());

        let cfg = WorkloadConfig::new(BackendKind::Seg1d, PairId::PlusPlus, vec![8]).with_ops(200);
        let report = run_verify_with_fault(&cfg, Some(10)).unwrap();
        assert!(report.mismatches > 0);
        assert!(report.first_mismatch.is_some());
    }

    #[test]
    fn invalid_configs() {
        let base = WorkloadConfig::new(BackendKind::Seg1d, PairId::PlusMin, vec![4]);
        assert!(base.clone().with_ops(0).validate().is_err());
        assert!(base.clone().with_ratio(1.5).validate().is_err());
        let mut two_d = base.clone();
        two_d.dims = vec![4, 4];
        assert!(two_d.validate().is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg =
            WorkloadConfig::new(BackendKind::Quadtree, PairId::PlusPlus, vec![8, 8]).with_ops(50);
        let pair = crate::algebra::PlusPlus;
        let (t1, o1) = generate(&pair, &cfg).unwrap();
        let (t2, o2) = generate(&pair, &cfg).unwrap();
        assert_eq!(t1.data(), t2.data());
        assert_eq!(o1, o2);
    }

    #[test]
    fn csv_and_json_layout() {
        let cfg = WorkloadConfig::new(BackendKind::Seg1d, PairId::PlusPlus, vec![8]).with_ops(20);
        let rows = run_bench_all(std::slice::from_ref(&cfg)).unwrap();
        let mut csv_out = Vec::new();
        write_csv(&rows, &mut csv_out).unwrap();
        let text = String::from_utf8(csv_out).unwrap();
        assert!(text.starts_with(&BENCH_COLUMNS.join(",")));
        assert_eq!(text.lines().count(), 2);

        let mut json_out = Vec::new();
        write_json(&[cfg], &rows, &mut json_out).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&json_out).unwrap();
        assert_eq!(doc["rows"][0]["backend"], "seg1d");
        assert_eq!(doc["config"]["dims"][0], "8");

        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().lines().count(), 1);
    }

    #[test]
    fn matmul_fixture() {
        let report = run_matmul(
            "2 2 2\n0 1\n2 3\n",
            "2 2 2\n1 0\n0 1\n",
            PairId::PlusMin,
            BackendKind::Grid2dGeneral,
            true,
        )
        .unwrap();
        assert_eq!(report.product, "2 2 2\n1 0\n3 2\n");
        assert_eq!(report.deviation.unwrap().mismatches, 0);
        assert!(run_matmul(
            "2 2 2\n0 1\n2\n",
            "2 2 2\n1 0\n0 1\n",
            PairId::PlusMin,
            BackendKind::Oracle,
            false
        )
        .is_err());
        assert!(matches!(
            run_matmul(
                "2 1 1\n1\n",
                "2 1 1\n1\n",
                PairId::MinMin,
                BackendKind::Oracle,
                false
            ),
            Err(Error::NoInverse(_))
        ));
    }

    #[test]
    fn scaling_needs_two_sizes() {
        assert!(run_scaling(BackendKind::Seg1d, PairId::PlusPlus, &[8], 10, 0).is_err());
        assert!(run_scaling(BackendKind::Seg1d, PairId::PlusPlus, &[16, 8], 10, 0).is_err());
        let report = run_scaling(BackendKind::Seg1d, PairId::PlusPlus, &[64, 128], 500, 1).unwrap();
        assert_eq!(report.steps.len(), 1);
    }
}
