use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lazygrid::algebra::{PairId, ValueRange};
use lazygrid::backend::BackendKind;
use lazygrid::workload::{
    parse_dims, run_bench_all, run_matmul, run_scaling, run_verify_with_fault, write_csv,
    write_json, WorkloadConfig, DEFAULT_OPS, DEFAULT_UPDATE_RATIO,
};
use lazygrid::Error;

#[derive(Parser)]
#[command(
    name = "lazygrid",
    version,
    about = "Range update / range query structures over operator pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a seeded workload on a backend and the oracle in lockstep.
    Verify(VerifyArgs),
    /// Mean node visits per update and query for one or more grid sizes.
    Bench(BenchArgs),
    /// Multiply two matrix files through a backend.
    Matmul(MatmulArgs),
    /// Growth of mean visits across sizes, gated on the backend's envelope.
    Scaling(ScalingArgs),
}

#[derive(Args)]
struct Workload {
    #[arg(long, value_parser = parse_backend)]
    backend: BackendKind,
    #[arg(long, value_parser = parse_pair)]
    pair: PairId,
    #[arg(long, default_value_t = DEFAULT_OPS)]
    ops: usize,
    /// Probability that an action is an update.
    #[arg(long, default_value_t = DEFAULT_UPDATE_RATIO)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inclusive value range `LO:HI` for drawn values.
    #[arg(long, value_parser = parse_range, default_value = "-100:100")]
    range: ValueRange,
}

impl Workload {
    fn config(&self, dims: Vec<usize>) -> WorkloadConfig {
        WorkloadConfig {
            backend: self.backend,
            pair: self.pair,
            dims,
            ops: self.ops,
            update_ratio: self.ratio,
            seed: self.seed,
            range: self.range,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    workload: Workload,
    /// Extents, e.g. `32x32`.
    #[arg(long, value_parser = parse_dims_arg)]
    dims: Dims,
    /// Corrupt the backend before this action to exercise the mismatch path.
    #[arg(long, value_name = "STEP")]
    inject_fault: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    workload: Workload,
    /// Extents, repeatable: one row per occurrence.
    #[arg(long, value_parser = parse_dims_arg)]
    dims: Vec<Dims>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatmulArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_parser = parse_pair)]
    pair: PairId,
    #[arg(long, value_parser = parse_backend, default_value = "grid2d-general")]
    backend: BackendKind,
    /// Also compute the cubic product and report the deviation.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long, value_parser = parse_backend)]
    backend: BackendKind,
    #[arg(long, value_parser = parse_pair)]
    pair: PairId,
    /// Comma-separated, strictly increasing sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_OPS)]
    ops: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_backend(s: &str) -> Result<BackendKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pair(s: &str) -> Result<PairId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Extents such as `32x32`.
#[derive(Clone, Debug)]
struct Dims(Vec<usize>);

fn parse_dims_arg(s: &str) -> Result<Dims, String> {
    parse_dims(s).map(Dims).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<ValueRange, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo.trim().parse().map_err(|_| format!("bad bound `{lo}`"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad bound `{hi}`"))?;
    if lo > hi {
        return Err("LO must not exceed HI".into());
    }
    Ok(ValueRange::new(lo, hi))
}

/// Outcome of a subcommand: `Ok(true)` when every gate passed.
type Outcome = Result<bool, Error>;

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn verify(args: VerifyArgs) -> Outcome {
    let report = run_verify_with_fault(&args.workload.config(args.dims.0), args.inject_fault)?;
    println!(
        "backend={} pair={} dims={} ops={} updates={} queries={} mismatches={}",
        report.backend,
        report.pair,
        report.dims,
        report.ops,
        report.updates,
        report.queries,
        report.mismatches
    );
    if let Some(detail) = &report.first_mismatch {
        println!("first mismatch: {detail}");
    }
    Ok(report.passed())
}

fn bench(args: BenchArgs) -> Outcome {
    let cfgs: Vec<_> = args
        .dims
        .iter()
        .map(|d| args.workload.config(d.0.clone()))
        .collect();
    let rows = run_bench_all(&cfgs)?;
    let out = sink(&args.out)?;
    match args.format {
        Format::Csv => write_csv(&rows, out)?,
        Format::Json => write_json(&cfgs, &rows, out)?,
    }
    Ok(true)
}

fn matmul(args: MatmulArgs) -> Outcome {
    let a = fs::read_to_string(&args.a)?;
    let b = fs::read_to_string(&args.b)?;
    let report = run_matmul(&a, &b, args.pair, args.backend, args.check)?;
    let mut out = sink(&args.out)?;
    out.write_all(report.product.as_bytes())?;
    if let Some(d) = report.deviation {
        eprintln!(
            "check: mismatches={} max_deviation={}",
            d.mismatches, d.max_abs
        );
    }
    Ok(report.passed())
}

fn scaling(args: ScalingArgs) -> Outcome {
    let report = run_scaling(args.backend, args.pair, &args.sizes, args.ops, args.seed)?;
    let mut out = sink(&args.out)?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)
                .map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(
                out,
                "from,to,update_ratio,query_ratio,op_ratio,envelope_lo,envelope_hi,pass"
            )?;
            for s in &report.steps {
                writeln!(
                    out,
                    "{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{}",
                    s.from,
                    s.to,
                    s.update_ratio,
                    s.query_ratio,
                    s.op_ratio,
                    s.envelope.lo,
                    s.envelope.hi,
                    s.pass
                )?;
            }
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
        Command::Matmul(a) => matmul(a),
        Command::Scaling(a) => scaling(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
