//! `outerk`: command-line front end for outerk-core.
//!
//! Results go to stdout as JSON. Errors go to stderr as one JSON object, and
//! the exit code says what went wrong: 1 for bad input, 2 for a bound
//! violation or failed certificate, 3 for an oracle refusing an oversized
//! instance.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use outerk_core::decomposition::build_tree_decomposition;
use outerk_core::drawing::ConvexDrawing;
use outerk_core::generators::{random_outer_k_planar, random_outer_min_k_planar, stacked_prism, StackedPrismSpec};
use outerk_core::oracles::{brute_convex_lcr, brute_min_balanced_separation, brute_treewidth};
use outerk_core::par::{configure_threads, Exec};
use outerk_core::render::{drawing_dot, svg};
use outerk_core::report::{analyze, analyze_batch, AnalysisReport, AnalyzeOptions};
use outerk_core::separation::build_separation;
use outerk_core::triangulation::{triangulate, Method, SplitTrace, Triangulation, TriangulationJson};
use outerk_core::Error;

/// Thread count for parallel work.
const THREADS_VAR: &str = "OUTERK_THREADS";

#[derive(Parser)]
#[command(name = "outerk", version, about = "Triangulations, tree decompositions and separations of convex drawings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and report every value with its bound.
    Analyze {
        /// Drawing JSON file, or `-` for stdin.
        #[arg(required_unless_present = "batch", conflicts_with = "batch")]
        input: Option<PathBuf>,
        /// Analyse against this crossing bound instead of the drawing's own.
        #[arg(long)]
        k: Option<usize>,
        /// Also run the outer min-k-planar pipeline with this k.
        #[arg(long)]
        min_k: Option<usize>,
        /// Human-readable summary instead of JSON.
        #[arg(long)]
        pretty: bool,
        /// Analyse every `*.json` file in a directory.
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// Print a generated drawing.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Triangulate the outer cycle and print the links and split trace.
    Triangulate {
        input: PathBuf,
        #[arg(long, default_value = "strong")]
        method: Method,
        /// Defaults to the drawing's local crossing number (min-k for `min`).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print a tree decomposition.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value = "strong")]
        method: Method,
        #[arg(long)]
        k: Option<usize>,
        /// Graphviz output instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Print a balanced separation.
    Separate {
        input: PathBuf,
        #[arg(long, default_value = "strong")]
        method: Method,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Write an SVG or DOT picture of a drawing.
    Render {
        input: PathBuf,
        /// Output file; the format follows the extension unless `--format` is given.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        /// Triangulation JSON (as printed by `triangulate`) to overlay.
        #[arg(long, conflicts_with = "method")]
        triangulation: Option<PathBuf>,
        /// Compute and overlay a triangulation with this method.
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact brute-force values for small instances.
    Oracle {
        which: OracleKind,
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// The stacked prism Y_{m,n} in its alternating circular layout.
    Prism { m: usize, n: usize },
    /// A random outer k-planar drawing (outer min-k-planar with `--min`).
    Random {
        n: usize,
        k: usize,
        seed: u64,
        #[arg(long)]
        min: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Tw,
    Sep,
    Lcr,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
}

#[derive(Serialize)]
struct BatchEntry {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn exit_code(err: &anyhow::Error) -> (u8, &'static str) {
    match err.downcast_ref::<Error>() {
        Some(e @ (Error::InvalidInput(_) | Error::Parse(_))) => (1, e.kind()),
        Some(e @ (Error::BoundViolation { .. } | Error::Certificate(_))) => (2, e.kind()),
        Some(e @ Error::OracleCap { .. }) => (3, e.kind()),
        None => (1, "io"),
    }
}

fn read_drawing(path: &Path) -> anyhow::Result<ConvexDrawing> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(ConvexDrawing::from_json(&text)?)
}

/// The default `k` of a method: the crossing bound the drawing meets.
fn default_k(d: &ConvexDrawing, method: Method) -> usize {
    let p = outerk_core::drawing::crossing_profile(d);
    match method {
        Method::Min => p.min_k_ok_for,
        _ => p.max_count,
    }
}

fn run_triangulate(d: &ConvexDrawing, method: Method, k: Option<usize>) -> anyhow::Result<(Triangulation, SplitTrace)> {
    let k = k.unwrap_or_else(|| default_k(d, method));
    Ok(triangulate(d, method, k)?)
}

fn run(cli: Cli) -> anyhow::Result<String> {
    match cli.command {
        Command::Analyze { input, k, min_k, pretty, batch } => {
            let opts = AnalyzeOptions { k, min_k };
            if let Some(dir) = batch {
                return run_batch(&dir, opts, pretty);
            }
            let d = read_drawing(&input.expect("required unless batch"))?;
            let r = analyze(&d, opts)?;
            Ok(if pretty { r.pretty() } else { r.to_json() + "\n" })
        }
        Command::Generate { kind } => {
            let d = match kind {
                GenerateKind::Prism { m, n } => stacked_prism(StackedPrismSpec { m, n })?,
                GenerateKind::Random { n, k, seed, min: false } => random_outer_k_planar(n, k, seed)?.drawing,
                GenerateKind::Random { n, k, seed, min: true } => random_outer_min_k_planar(n, k, seed)?.drawing,
            };
            Ok(d.to_json() + "\n")
        }
        Command::Triangulate { input, method, k } => {
            let d = read_drawing(&input)?;
            let (t, trace) = run_triangulate(&d, method, k)?;
            Ok(serde_json::to_string(&t.to_json(&trace))? + "\n")
        }
        Command::Decompose { input, method, k, dot } => {
            let d = read_drawing(&input)?;
            let (t, _) = run_triangulate(&d, method, k)?;
            let td = build_tree_decomposition(&d, &t)?;
            Ok(if dot { td.to_dot() } else { td.to_json() + "\n" })
        }
        Command::Separate { input, method, k } => {
            let d = read_drawing(&input)?;
            let (t, _) = run_triangulate(&d, method, k)?;
            Ok(build_separation(&d, &t)?.to_json() + "\n")
        }
        Command::Render { input, output, format, triangulation, method, k } => {
            let d = read_drawing(&input)?;
            let t = match (triangulation, method) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let tj: TriangulationJson =
                        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                    if tj.n != d.n() {
                        return Err(Error::InvalidInput(format!(
                            "triangulation has n={} but the drawing has n={}",
                            tj.n,
                            d.n()
                        ))
                        .into());
                    }
                    Some(SplitTrace { records: tj.trace }.replay(tj.n)?)
                }
                (None, Some(m)) => Some(run_triangulate(&d, m, k)?.0),
                (None, None) => None,
            };
            let format = match format {
                Some(f) => f,
                None => match output.extension().and_then(|e| e.to_str()) {
                    Some("svg") => Format::Svg,
                    Some("dot" | "gv") => Format::Dot,
                    _ => bail!(Error::InvalidInput(format!(
                        "cannot tell the format of {}; pass --format",
                        output.display()
                    ))),
                },
            };
            let body = match format {
                Format::Svg => svg(&d, t.as_ref()),
                Format::Dot => drawing_dot(&d, t.as_ref()),
            };
            fs::write(&output, body).with_context(|| format!("writing {}", output.display()))?;
            Ok(String::new())
        }
        Command::Oracle { which, input } => {
            let d = read_drawing(&input)?;
            let r = match which {
                OracleKind::Tw => brute_treewidth(&d)?,
                OracleKind::Sep => brute_min_balanced_separation(&d)?,
                OracleKind::Lcr => brute_convex_lcr(&d)?,
            };
            Ok(r.to_json() + "\n")
        }
    }
}

/// Analyses the `*.json` files of `dir` in parallel. Output lists them by
/// file name; the first failure in that order sets the exit code.
fn run_batch(dir: &Path, opts: AnalyzeOptions, pretty: bool) -> anyhow::Result<String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    let mut drawings = Vec::with_capacity(files.len());
    for f in &files {
        drawings.push(read_drawing(f)?);
    }
    let results = analyze_batch(Exec::default(), &drawings, opts);
    let mut entries = Vec::with_capacity(files.len());
    let mut first_error = None;
    for (f, r) in files.iter().zip(results) {
        let file = f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match r {
            Ok(report) => entries.push(BatchEntry { file, report: Some(report), error: None }),
            Err(e) => {
                entries.push(BatchEntry { file, report: None, error: Some(e.to_string()) });
                first_error.get_or_insert(e);
            }
        }
    }
    let out = if pretty {
        entries
            .iter()
            .map(|e| match (&e.report, &e.error) {
                (Some(r), _) => format!("== {}\n{}", e.file, r.pretty()),
                (None, Some(err)) => format!("== {}\nerror: {err}\n", e.file),
                (None, None) => unreachable!(),
            })
            .collect()
    } else {
        serde_json::to_string(&entries)? + "\n"
    };
    match first_error {
        Some(e) => {
            io::stdout().write_all(out.as_bytes())?;
            Err(e.into())
        }
        None => Ok(out),
    }
}

fn main() -> ExitCode {
    if let Some(threads) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            configure_threads(threads);
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (code, kind) = exit_code(&err);
            let body = ErrorJson { error: kind, message: format!("{err:#}") };
            eprintln!("{}", serde_json::to_string(&body).expect("serializable"));
            ExitCode::from(code)
        }
    }
}
