//! Command-line surface for the entbound library: point evaluation,
//! triangle scans, segment curves, region geometry export, binegativity
//! search, and the oracle cross-check suites.
//!
//! Entropic values are reported in bits unless `--nats` (or the
//! `ENTBOUND_LOG_BASE` environment variable) selects natural logarithms;
//! randomized commands read their seed from `--seed` or `ENTBOUND_SEED`.
//! Exit codes: 0 on success, 1 on runtime failures and failed check
//! suites, 2 on rejected input.

mod checks;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entbound::{
    binegativity, key_points, measures, AdditivityLevel, LogBase, OOState64,
};

#[derive(Parser)]
#[command(name = "entbound", version, about = "Entanglement bounds for OO-invariant two-qudit states")]
struct Cli {
    /// Report entropic values in nats instead of bits.
    #[arg(long, global = true)]
    nats: bool,

    /// Seed for randomized commands; overrides ENTBOUND_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound at one (f, fhat) point; JSON on stdout.
    Eval(EvalArgs),
    /// Tabulate a measure on a triangle grid; CSV output.
    Scan(ScanArgs),
    /// Rains bound along the segment AB for one or more dimensions; CSV.
    Segment(SegmentArgs),
    /// Named points, boundary lines and the additive polygon; JSON.
    Regions(RegionsArgs),
    /// Run the oracle cross-check suites; JSON report, exit 1 on failure.
    Check(checks::CheckArgs),
    /// Random search for binegative states; JSON report.
    Bineg(BinegArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    /// Local dimension.
    #[arg(short, long)]
    d: usize,

    /// Flip expectation f.
    #[arg(short, long)]
    f: f64,

    /// Entangled-projector expectation fhat.
    #[arg(long)]
    fhat: f64,
}

#[derive(Args)]
struct ScanArgs {
    /// Local dimension.
    #[arg(short, long, default_value_t = 3)]
    d: usize,

    /// Grid points per axis (at least 2).
    #[arg(short, long, default_value_t = 200)]
    resolution: usize,

    /// Quantity to tabulate.
    #[arg(short, long, value_enum, default_value_t = Measure::Areep)]
    measure: Measure,

    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    /// Local dimensions, one curve per value.
    #[arg(short, long = "d", default_values_t = [3usize, 4, 5])]
    d: Vec<usize>,

    /// Samples per curve (at least 2); junction abscissae are added.
    #[arg(short, long, default_value_t = 400)]
    npoints: usize,

    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RegionsArgs {
    /// Local dimension.
    #[arg(short, long, default_value_t = 3)]
    d: usize,

    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BinegArgs {
    /// Local dimension.
    #[arg(short, long, default_value_t = 3)]
    d: usize,

    /// Number of random states to test.
    #[arg(short = 'n', long, default_value_t = 10_000)]
    samples: usize,

    /// Bias sampling toward half-rank states near the spectrum boundary.
    #[arg(long)]
    bias: bool,

    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Quantity selector for `scan`.
#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Measure {
    Areep,
    Rains,
    Reep,
    Negativity,
}

/// A failure, split by which exit code it maps to.
enum AppError {
    /// Rejected input: bad coordinates, dimensions or ranges. Exit 2.
    Domain(String),
    /// I/O trouble or an internal computation error. Exit 1.
    Runtime(String),
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

impl From<entbound::Error> for AppError {
    fn from(e: entbound::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base = resolve_base(cli.nats);
    let seed = resolve_seed(cli.seed);
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args, base),
        Command::Scan(args) => cmd_scan(args, base),
        Command::Segment(args) => cmd_segment(args, base),
        Command::Regions(args) => cmd_regions(args),
        Command::Check(args) => checks::cmd_check(args, base, seed),
        Command::Bineg(args) => cmd_bineg(args, seed),
    };
    match outcome {
        Ok(code) => code,
        Err(AppError::Domain(msg)) => {
            eprintln!("entbound: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("entbound: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Log base: the `--nats` flag wins, then `ENTBOUND_LOG_BASE`, then bits.
fn resolve_base(nats_flag: bool) -> LogBase {
    if nats_flag {
        return LogBase::E;
    }
    std::env::var("ENTBOUND_LOG_BASE")
        .ok()
        .and_then(|v| LogBase::parse(&v))
        .unwrap_or(LogBase::Two)
}

/// Seed: the `--seed` flag wins, then `ENTBOUND_SEED`, then a fixed default.
fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("ENTBOUND_SEED")
            .ok()
            .and_then(|v| v.trim().parse().ok())
    })
    .unwrap_or(42)
}

/// All CSV and JSON floats carry 12 significant digits.
fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, doc: &T) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(doc)
        .map_err(|e| AppError::Runtime(format!("serialization failed: {e}")))?;
    let mut w = open_output(path)?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

/// One point evaluation: every measure, the region, and the additivity
/// verdict of the state.
#[derive(Serialize)]
struct EvalRecord {
    d: usize,
    f: f64,
    fhat: f64,
    region: &'static str,
    subtag: &'static str,
    reep: f64,
    rains: f64,
    areep: f64,
    negativity: f64,
    additivity: &'static str,
    log_base: &'static str,
}

fn additivity_label(level: AdditivityLevel) -> &'static str {
    match level {
        AdditivityLevel::Strong => "strong",
        AdditivityLevel::Weak => "weak",
        AdditivityLevel::None => "none",
    }
}

fn eval_record(rho: &OOState64, base: LogBase) -> Result<EvalRecord, entbound::Error> {
    let region = rho.classify();
    let reep = measures::reep(rho, base);
    let rains = entbound::rains_closed(rho, base)?;
    let asymptotic = entbound::areep(rho, base)?;
    let verdict = measures::additivity_check(rho);
    Ok(EvalRecord {
        d: rho.d(),
        f: rho.f(),
        fhat: rho.fhat(),
        region: region.tag.label(),
        subtag: region.subtag.label(),
        reep: reep.value,
        rains: rains.value,
        areep: asymptotic.value,
        negativity: measures::negativity_closed(rho),
        additivity: additivity_label(verdict.level),
        log_base: base.label(),
    })
}

fn cmd_eval(args: &EvalArgs, base: LogBase) -> Result<ExitCode, AppError> {
    let rho = OOState64::new(args.d, args.f, args.fhat)
        .map_err(|e| AppError::Domain(e.to_string()))?;
    let record = eval_record(&rho, base)?;
    write_json(None, &record)?;
    Ok(ExitCode::SUCCESS)
}

fn measure_value(state: &OOState64, measure: Measure, base: LogBase) -> f64 {
    match measure {
        Measure::Areep => {
            entbound::areep(state, base)
                .expect("closed form evaluates on every valid state")
                .value
        }
        Measure::Rains => {
            entbound::rains_closed(state, base)
                .expect("closed form evaluates on every valid state")
                .value
        }
        Measure::Reep => measures::reep(state, base).value,
        Measure::Negativity => measures::negativity_closed(state),
    }
}

/// The lines of one constant-f scan row, in increasing fhat; grid nodes
/// outside the triangle are omitted.
fn scan_row(d: usize, resolution: usize, i: usize, measure: Measure, base: LogBase) -> Vec<String> {
    let steps = (resolution - 1) as f64;
    let f = -1.0 + 2.0 * i as f64 / steps;
    let mut lines = Vec::new();
    for j in 0..resolution {
        let fhat = d as f64 * j as f64 / steps;
        let Ok(state) = OOState64::new(d, f, fhat) else {
            continue;
        };
        let value = measure_value(&state, measure, base);
        lines.push(format!("{},{},{}", fmt(f), fmt(fhat), fmt(value)));
    }
    lines
}

fn cmd_scan(args: &ScanArgs, base: LogBase) -> Result<ExitCode, AppError> {
    if args.resolution < 2 {
        return Err(AppError::Domain(format!(
            "resolution must be at least 2, got {}",
            args.resolution
        )));
    }
    if args.d < 2 {
        return Err(AppError::Domain(format!(
            "local dimension must be at least 2, got {}",
            args.d
        )));
    }

    // Rows are independent; hand contiguous chunks to worker threads and
    // reassemble in index order so the output does not depend on timing.
    let resolution = args.resolution;
    let mut rows: Vec<Vec<String>> = vec![Vec::new(); resolution];
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = resolution.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slot) in rows.chunks_mut(chunk).enumerate() {
            let (d, measure) = (args.d, args.measure);
            scope.spawn(move || {
                for (k, row) in slot.iter_mut().enumerate() {
                    *row = scan_row(d, resolution, w * chunk + k, measure, base);
                }
            });
        }
    });

    let mut w = open_output(args.out.as_deref())?;
    writeln!(w, "# entbound v1, d={}, base={}", args.d, base.label())?;
    writeln!(w, "f,fhat,value")?;
    for row in rows {
        for line in row {
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_segment(args: &SegmentArgs, base: LogBase) -> Result<ExitCode, AppError> {
    if args.npoints < 2 {
        return Err(AppError::Domain(format!(
            "npoints must be at least 2, got {}",
            args.npoints
        )));
    }
    for &d in &args.d {
        if d < 3 {
            return Err(AppError::Domain(format!(
                "segment curves need local dimension at least 3, got {d}"
            )));
        }
    }

    let mut w = open_output(args.out.as_deref())?;
    for &d in &args.d {
        let kp = key_points::<f64>(d)?;
        let f_b = (d as f64 - 4.0) / d as f64;
        let steps = (args.npoints - 1) as f64;
        let mut fs: Vec<f64> = (0..args.npoints)
            .map(|i| {
                if i + 1 == args.npoints {
                    f_b
                } else {
                    -1.0 + (1.0 + f_b) * i as f64 / steps
                }
            })
            .collect();
        // The Rains bound changes its closed form at Y and X; pin both
        // abscissae so the junctions appear exactly.
        fs.push(kp.y.0);
        fs.push(kp.x.0);
        fs.sort_by(f64::total_cmp);
        fs.dedup();

        writeln!(w, "# entbound v1, d={d}, base={}", base.label())?;
        writeln!(w, "f,fhat,value")?;
        for f in fs {
            let fhat = d as f64 * (1.0 + f) / 2.0;
            let state = OOState64::new(d, f, fhat)?;
            let value = entbound::rains_closed(&state, base)?.value;
            writeln!(w, "{},{},{}", fmt(f), fmt(fhat), fmt(value))?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

/// Region geometry for external plotting: the named points, every
/// boundary line, and the vertices of the additive region.
#[derive(Serialize)]
struct RegionsDoc {
    d: usize,
    /// Meaning of each `[a, b, c]` triple below.
    line_convention: &'static str,
    key_points: BTreeMap<&'static str, [f64; 2]>,
    lines: BTreeMap<&'static str, [f64; 3]>,
    /// Closed polygon (last edge returns to the first vertex) bounding
    /// the region where the REEP is additive.
    additive_polygon: Vec<[f64; 2]>,
}

fn cmd_regions(args: &RegionsArgs) -> Result<ExitCode, AppError> {
    if args.d < 3 {
        return Err(AppError::Domain(format!(
            "region geometry needs local dimension at least 3, got {}",
            args.d
        )));
    }
    let d = args.d;
    let dr = d as f64;
    let kp = key_points::<f64>(d)?;

    let mut points = BTreeMap::new();
    points.insert("a", [kp.a.0, kp.a.1]);
    points.insert("b", [kp.b.0, kp.b.1]);
    points.insert("c", [kp.c.0, kp.c.1]);
    points.insert("d", [kp.d.0, kp.d.1]);
    points.insert("e", [kp.e.0, kp.e.1]);
    points.insert("x", [kp.x.0, kp.x.1]);
    points.insert("y", [kp.y.0, kp.y.1]);

    // a*f + b*fhat + c = 0. Slanted lines are scaled to b = -1 (so
    // fhat = a*f + c), vertical and horizontal ones to a unit leading
    // coefficient.
    let p_cy = -2.0 / (dr + 2.0);
    let q_cy = kp.c.1 + p_cy * kp.c.0;
    let mut lines = BTreeMap::new();
    lines.insert("bc", [dr - 1.0, -1.0, 3.0 - 4.0 / dr]);
    lines.insert("cd", [1.0, 0.0, 2.0 / dr]);
    lines.insert("cy", [-p_cy, -1.0, q_cy]);
    lines.insert("yx", [dr / 2.0, -1.0, dr / 2.0]);
    lines.insert("triangle_bottom", [0.0, 1.0, 0.0]);
    lines.insert("triangle_right", [1.0, 0.0, -1.0]);
    lines.insert("triangle_top", [dr / 2.0, -1.0, dr / 2.0]);
    lines.insert("ppt_left", [1.0, 0.0, 0.0]);
    lines.insert("ppt_right", [1.0, 0.0, -1.0]);
    lines.insert("ppt_bottom", [0.0, 1.0, 0.0]);
    lines.insert("ppt_top", [0.0, 1.0, -1.0]);

    let doc = RegionsDoc {
        d,
        line_convention: "a*f + b*fhat + c = 0 for [a, b, c]",
        key_points: points,
        lines,
        additive_polygon: vec![
            [kp.d.0, kp.d.1],
            [kp.c.0, kp.c.1],
            [kp.b.0, kp.b.1],
            [1.0, dr],
            [1.0, 0.0],
        ],
    };
    write_json(args.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

/// Dense Hermitian matrix split into real and imaginary parts.
#[derive(Serialize)]
struct MatrixDoc {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl MatrixDoc {
    fn from_operator(op: &entbound::HermitianOperator64) -> Self {
        let entries = op.entries();
        let dim = op.dim_total();
        let mut re = vec![vec![0.0; dim]; dim];
        let mut im = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                re[i][j] = entries[(i, j)].re;
                im[i][j] = entries[(i, j)].im;
            }
        }
        MatrixDoc { dim, re, im }
    }
}

#[derive(Serialize)]
struct BinegDoc {
    d: usize,
    samples: usize,
    seed: u64,
    bias_boundary: bool,
    /// Most negative eigenvalue of `|sigma^T2|^T2` seen.
    defect: f64,
    /// Defect threshold below which a state counts as binegative.
    threshold: f64,
    found: bool,
    worst_state: Option<MatrixDoc>,
}

fn cmd_bineg(args: &BinegArgs, seed: u64) -> Result<ExitCode, AppError> {
    if args.d < 2 {
        return Err(AppError::Domain(format!(
            "binegativity search needs local dimension at least 2, got {}",
            args.d
        )));
    }
    let report = binegativity::search_binegative::<f64>(args.d, args.samples, seed, args.bias)?;
    let doc = BinegDoc {
        d: args.d,
        samples: report.samples_tested,
        seed: report.seed,
        bias_boundary: args.bias,
        defect: report.defect,
        threshold: binegativity::FIND_THRESHOLD,
        found: report.defect < binegativity::FIND_THRESHOLD,
        worst_state: report.worst_state.as_ref().map(MatrixDoc::from_operator),
    };
    write_json(args.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}
