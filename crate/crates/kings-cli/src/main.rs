//! `kings` — tournament king analysis from the command line.
//!
//! Exit codes: 0 success (or falsifier pass), 1 semantic negative (a
//! continuity violation or verification failure), 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use kings::doc::{
    escape_trace_csv, export_dot, ReportDocument, ReportMetadata, SampledSpaceDocument,
    TournamentDocument,
};
use kings::{
    continuity_falsify, exhaustive_verify, gap_escape_experiment, graded_escape_experiment,
    EscapeTrace, SelectionSpec,
};

#[derive(Parser)]
#[command(
    name = "kings",
    version,
    about = "Tournament kings: generate, analyze, verify, run escape experiments, export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a tournament document from a selection recipe (JSON)
    Gen {
        /// Path to a SelectionSpec JSON file
        spec: PathBuf,
        /// Output path for the tournament document (stdout when omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Report the king set of a tournament document
    Kings {
        /// Path to a tournament document
        input: PathBuf,
        /// Include per-target k-sets and two-step witnesses
        #[arg(long)]
        witnesses: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively verify king existence over all small tournaments
    Verify {
        /// Largest player count to sweep (at most 6)
        #[arg(long = "n-max")]
        n_max: usize,
    },
    /// Trace king locations across nested refinements
    Escape {
        #[arg(long, value_enum)]
        mode: EscapeModeArg,
        #[arg(long)]
        levels: usize,
        /// Master seed for the graded mode's inner tournaments
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block sizes for the graded mode, cycled per level
        #[arg(long, value_delimiter = ',', default_value = "1")]
        block_sizes: Vec<usize>,
        /// Sample the compact control arm (right endpoint included)
        #[arg(long)]
        include_endpoint: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Export a tournament document as a DOT digraph (kings double-circled)
    ExportDot { input: PathBuf, out: PathBuf },
    /// Run the continuity falsifier on a sampled space and its tournament
    Continuity {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        tournament: PathBuf,
        /// Perturbation radius
        #[arg(long)]
        delta: f64,
        /// Pair separation threshold (must exceed delta)
        #[arg(long)]
        epsilon: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EscapeModeArg {
    Gap,
    Graded,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { spec, out } => {
            let bytes = read(&spec)?;
            let spec: SelectionSpec = serde_json::from_slice(&bytes)
                .with_context(|| format!("parsing selection spec {}", spec.display()))?;
            let sel = spec.materialize()?;
            emit(
                out.as_deref(),
                &TournamentDocument::from_selection(&sel).to_json(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Kings {
            input,
            witnesses,
            out,
        } => {
            let started = Instant::now();
            let doc = TournamentDocument::from_json(&read(&input)?)
                .with_context(|| format!("parsing tournament document {}", input.display()))?;
            let sel = doc.to_selection()?;
            let report = sel.king_report()?;
            let rendered = ReportDocument::from_report(
                &report,
                &doc.players,
                witnesses,
                ReportMetadata {
                    source: Some(input.display().to_string()),
                    elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
                    ..ReportMetadata::default()
                },
            );
            emit(out.as_deref(), &rendered.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { n_max } => {
            let report = exhaustive_verify(n_max)?;
            for (i, count) in report.per_n.iter().enumerate() {
                println!("n={}: {count} tournaments", i + 1);
            }
            println!(
                "total: {} tournaments, {} failures ({:.1} ms)",
                report.tournaments, report.failures, report.elapsed_ms
            );
            for sample in &report.failure_samples {
                println!("failure: {sample}");
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Escape {
            mode,
            levels,
            seed,
            block_sizes,
            include_endpoint,
            format,
            out,
        } => {
            let trace = match mode {
                EscapeModeArg::Gap => gap_escape_experiment(levels, include_endpoint)?,
                EscapeModeArg::Graded => graded_escape_experiment(&block_sizes, levels, seed)?,
            };
            let rendered = match format {
                OutputFormat::Json => trace_json(&trace),
                OutputFormat::Csv => escape_trace_csv(&trace),
            };
            emit(out.as_deref(), &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { input, out } => {
            let doc = TournamentDocument::from_json(&read(&input)?)
                .with_context(|| format!("parsing tournament document {}", input.display()))?;
            emit(Some(&out), &export_dot(&doc)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Continuity {
            space,
            tournament,
            delta,
            epsilon,
            out,
        } => {
            let space_doc = SampledSpaceDocument::from_json(&read(&space)?)
                .with_context(|| format!("parsing sampled space {}", space.display()))?;
            let tournament_doc = TournamentDocument::from_json(&read(&tournament)?)
                .with_context(|| format!("parsing tournament document {}", tournament.display()))?;
            let sel = tournament_doc.to_selection()?;
            let cert = continuity_falsify(&space_doc.to_space()?, &sel, delta, epsilon)?;
            let mut rendered =
                serde_json::to_string_pretty(&cert).context("serializing certificate")?;
            rendered.push('\n');
            emit(out.as_deref(), &rendered)?;
            Ok(if cert.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn trace_json(trace: &EscapeTrace) -> String {
    let mut out = serde_json::to_string_pretty(trace).expect("trace serializes");
    out.push('\n');
    out
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .context("writing to stdout")?,
    }
    Ok(())
}
