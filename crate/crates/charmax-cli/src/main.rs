//! `charmax` — sweep character tables, plot and summarize them, evaluate
//! the analytic constants and main-term shapes, and run the named
//! verification suites.
//!
//! Exit codes: 0 success, 1 failed checks / exceeded budgets / runtime
//! errors, 2 usage errors.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use charmax::analytic::{
    constant_a, divisor_series_log_bound, half_point_moment_shape, halfpoint_limit_constant,
    moment_lower_shape, moment_upper_shape, tail_shapes, MainTermShape, EULER_GAMMA,
};
use charmax::arith::UnitGroup;
use charmax::hist::{histogram, HistogramSpec, Normalization};
use charmax::moments::{empirical_moment, tail_f, tail_g, MomentStatistic};
use charmax::sweep::{sweep_rows, Engine, SweepTable};
use charmax::table::{load_table, save_table, write_csv};
use charmax::verify::{run_suite, Suite, SuiteReport, ALL_SUITES};

#[derive(Parser)]
#[command(name = "charmax", version, about = "computational laboratory for maxima of character sums")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one extremes row per nonprincipal character and persist
    /// the table (checkpointed, resumable).
    Sweep(SweepArgs),
    /// Histogram of M/√q from a table, as CSV or self-contained SVG.
    Hist(HistArgs),
    /// Empirical 2k-th moments with their reference columns.
    Moments(MomentsArgs),
    /// Tail fractions on an α-grid with advisory main terms.
    Tail(TailArgs),
    /// Evaluate named analytic constants.
    Constants(ConstantsArgs),
    /// Evaluate main-term shapes (always with caveats attached).
    Shapes(ShapesArgs),
    /// Run a named verification suite (exit 0 iff everything passes).
    Verify(VerifyArgs),
    /// Export a table to lossless CSV.
    Export(ExportArgs),
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Hist(a) => cmd_hist(a).map(|()| ExitCode::SUCCESS),
        Cmd::Moments(a) => cmd_moments(a).map(|()| ExitCode::SUCCESS),
        Cmd::Tail(a) => cmd_tail(a).map(|()| ExitCode::SUCCESS),
        Cmd::Constants(a) => cmd_constants(a).map(|()| ExitCode::SUCCESS),
        Cmd::Shapes(a) => cmd_shapes(a).map(|()| ExitCode::SUCCESS),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Export(a) => cmd_export(a).map(|()| ExitCode::SUCCESS),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("CHARMAX_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
    .max(1)
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long, default_value = "exact")]
    engine: Engine,
    /// Worker count (default: CHARMAX_THREADS, then all cores). Results
    /// are bitwise identical for every setting.
    #[arg(long)]
    threads: Option<usize>,
    /// Output path (default: q<MODULUS>-<ENGINE>.tbl).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop after roughly this many seconds, persisting a partial table
    /// (incomplete flag set) and exiting nonzero. A later run resumes
    /// from the checkpoint.
    #[arg(long)]
    budget_seconds: Option<f64>,
}

/// Characters per checkpoint chunk.
const CHUNK: u64 = 4096;

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let threads = resolve_threads(a.threads);
    let out = a
        .out
        .unwrap_or_else(|| PathBuf::from(format!("q{}-{}.tbl", a.modulus, a.engine)));
    let ckpt = {
        let mut s = out.as_os_str().to_owned();
        s.push(".ckpt");
        PathBuf::from(s)
    };
    let group = UnitGroup::new(a.modulus)?;
    let total = group.phi() - 1;

    let mut rows = Vec::new();
    if ckpt.exists() {
        let partial = load_table(&ckpt)?;
        if partial.q() != a.modulus || partial.engine() != a.engine {
            bail!(
                "checkpoint {} belongs to q={} engine={}; delete it or change flags",
                ckpt.display(),
                partial.q(),
                partial.engine()
            );
        }
        rows = partial.rows().to_vec();
        eprintln!("resuming from checkpoint: {}/{total} rows", rows.len());
    }

    let mut exceeded = false;
    while (rows.len() as u64) < total {
        if let Some(budget) = a.budget_seconds {
            if started.elapsed().as_secs_f64() > budget {
                exceeded = true;
                break;
            }
        }
        let first = rows.len() as u64;
        let count = CHUNK.min(total - first);
        rows.extend(sweep_rows(&group, a.engine, threads, first, count));
        let partial = SweepTable::assemble(
            Arc::clone(&group),
            a.engine,
            rows.clone(),
            rows.len() as u64 == total,
        );
        save_table(&partial, &ckpt)?;
        eprintln!("swept {}/{total} rows", rows.len());
    }

    let complete = rows.len() as u64 == total;
    let table = SweepTable::assemble(Arc::clone(&group), a.engine, rows, complete);
    save_table(&table, &out)?;
    if complete {
        std::fs::remove_file(&ckpt).ok();
    }
    let summary = json!({
        "q": a.modulus,
        "engine": a.engine,
        "rows": table.len(),
        "complete": complete,
        "path": out.display().to_string(),
        "seconds": started.elapsed().as_secs_f64(),
    });
    println!("{summary}");
    if exceeded {
        eprintln!("budget exceeded; wrote partial table (resume by re-running)");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(format!("unknown format {s:?} (expected csv or svg)")),
        }
    }
}

#[derive(Args)]
struct HistArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long, default_value_t = 40)]
    bins: u32,
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 3.0)]
    hi: f64,
    #[arg(long)]
    split_parity: bool,
    #[arg(long, default_value = "density")]
    normalization: Normalization,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_hist(a: HistArgs) -> Result<()> {
    let table = load_table(&a.table)?;
    let h = histogram(
        &table,
        HistogramSpec {
            bins: a.bins,
            lo: a.lo,
            hi: a.hi,
            split_parity: a.split_parity,
            normalization: a.normalization,
        },
    )?;
    let rendered = match a.format {
        Format::Csv => h.to_csv(),
        Format::Svg => h.to_svg(),
    };
    emit(a.out.as_deref(), rendered.as_bytes())
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<u64>,
    #[arg(long, default_value = "M")]
    statistic: MomentStatistic,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_moments(a: MomentsArgs) -> Result<()> {
    let table = load_table(&a.table)?;
    let reports = a
        .k
        .iter()
        .map(|&k| empirical_moment(&table, k, a.statistic))
        .collect::<charmax::Result<Vec<_>>>()?;
    let mut bytes = serde_json::to_vec_pretty(&reports)?;
    bytes.push(b'\n');
    emit(a.out.as_deref(), &bytes)
}

#[derive(Args)]
struct TailArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2,3,5")]
    alphas: Vec<f64>,
    /// Count |S_half| ≥ (e^γ/π)α√q over odd characters instead of the
    /// M ≤ α√q distribution.
    #[arg(long)]
    half_point: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_tail(a: TailArgs) -> Result<()> {
    let table = load_table(&a.table)?;
    let report = if a.half_point {
        tail_g(&table, &a.alphas)?
    } else {
        tail_f(&table, &a.alphas)?
    };
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    emit(a.out.as_deref(), &bytes)
}

#[derive(Args)]
struct ConstantsArgs {
    /// A | gamma | halfpoint
    #[arg(long)]
    what: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Moment order for `halfpoint`.
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_constants(a: ConstantsArgs) -> Result<()> {
    let value = match a.what.as_str() {
        "A" | "a" => {
            let r = constant_a(a.tol)?;
            json!({
                "what": "A",
                "value": r.value,
                "est_error": r.est_error,
                "scheme": r.scheme,
                "evaluations": r.evaluations,
            })
        }
        "gamma" => json!({
            "what": "gamma",
            "value": EULER_GAMMA,
            "note": "Euler-Mascheroni constant, stored to 30 digits",
        }),
        "halfpoint" => {
            let v = halfpoint_limit_constant(a.k, a.tol)?;
            json!({
                "what": "halfpoint",
                "k": a.k,
                "value": v,
                "note": "large-q limit of the normalized half-point moment over prime moduli",
            })
        }
        other => bail!("unknown constant {other:?} (expected A, gamma, or halfpoint)"),
    };
    let mut bytes = serde_json::to_vec_pretty(&value)?;
    bytes.push(b'\n');
    emit(a.out.as_deref(), &bytes)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum WhichShape {
    MomentUpper,
    MomentLower,
    HalfPointMoment,
    HalfPointTail,
    TailUpper,
    TailLower,
    DivisorSeriesBound,
}

impl FromStr for WhichShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "moment-upper" => WhichShape::MomentUpper,
            "moment-lower" => WhichShape::MomentLower,
            "half-point-moment" => WhichShape::HalfPointMoment,
            "half-point-tail" => WhichShape::HalfPointTail,
            "tail-upper" => WhichShape::TailUpper,
            "tail-lower" => WhichShape::TailLower,
            "divisor-series-bound" => WhichShape::DivisorSeriesBound,
            _ => {
                return Err(format!(
                    "unknown shape {s:?} (expected moment-upper, moment-lower, \
                     half-point-moment, half-point-tail, tail-upper, tail-lower, \
                     or divisor-series-bound)"
                ))
            }
        })
    }
}

#[derive(Args)]
struct ShapesArgs {
    #[arg(long)]
    which: WhichShape,
    /// Comma list or LO..HI range (α grids for the tail shapes).
    #[arg(long, default_value = "5..15")]
    alpha: String,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    k: Vec<u32>,
    #[arg(long, default_value_t = 100003)]
    q: u64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: f64 = lo.trim().parse().context("range start")?;
        let hi: f64 = hi.trim().parse().context("range end")?;
        if !(lo <= hi) {
            bail!("empty range {s:?}");
        }
        let mut grid = Vec::new();
        let mut a = lo;
        while a <= hi + 1e-9 {
            grid.push(a);
            a += 1.0;
        }
        Ok(grid)
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().context("grid entry"))
            .collect()
    }
}

fn cmd_shapes(a: ShapesArgs) -> Result<()> {
    let mut shapes: Vec<MainTermShape> = Vec::new();
    match a.which {
        WhichShape::MomentUpper => {
            for &k in &a.k {
                shapes.push(moment_upper_shape(k)?);
            }
        }
        WhichShape::MomentLower => {
            for &k in &a.k {
                shapes.push(moment_lower_shape(k)?);
            }
        }
        WhichShape::HalfPointMoment => {
            for &k in &a.k {
                shapes.push(half_point_moment_shape(k, a.q)?);
            }
        }
        WhichShape::DivisorSeriesBound => {
            for &k in &a.k {
                shapes.push(divisor_series_log_bound(k, a.sigma)?);
            }
        }
        WhichShape::TailUpper | WhichShape::TailLower | WhichShape::HalfPointTail => {
            for alpha in parse_grid(&a.alpha)? {
                let (upper, lower, half_point) = tail_shapes(alpha, a.b)?;
                shapes.push(match a.which {
                    WhichShape::TailUpper => upper,
                    WhichShape::TailLower => lower,
                    _ => half_point,
                });
            }
        }
    }
    let mut bytes = serde_json::to_vec_pretty(&shapes)?;
    bytes.push(b'\n');
    emit(a.out.as_deref(), &bytes)
}

#[derive(Args)]
struct VerifyArgs {
    /// One of gauss, polya, dyadic, orthogonality, bessel, primesum, lfun.
    #[arg(long, required_unless_present = "all")]
    suite: Option<Suite>,
    /// Run every suite.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 101)]
    modulus: u64,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let suites: Vec<Suite> = if a.all {
        ALL_SUITES.to_vec()
    } else {
        vec![a.suite.expect("clap enforces suite unless --all")]
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for suite in suites {
        let report = run_suite(suite, a.modulus, a.k)?;
        for check in &report.checks {
            eprintln!(
                "[{}] {}: {} (value {:.3e}, bound {:.3e})",
                report.suite,
                check.label,
                if check.pass { "pass" } else { "FAIL" },
                check.value,
                check.bound
            );
        }
        reports.push(report);
    }
    let all_pass = reports.iter().all(|r| r.pass);
    let mut bytes = serde_json::to_vec_pretty(&reports)?;
    bytes.push(b'\n');
    emit(a.out.as_deref(), &bytes)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_export(a: ExportArgs) -> Result<()> {
    let table = load_table(&a.table)?;
    let mut buf = Vec::new();
    write_csv(&table, &mut buf)?;
    emit(a.out.as_deref(), &buf)
}
