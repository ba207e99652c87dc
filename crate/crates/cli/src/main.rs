use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod report;
mod resolve;

use commands::{Outcome, Overrides};

/// Certify spacetime convex functions and probe level-set geometry.
///
/// Exit status: 0 when the check passes, 2 when it fails (violated or
/// degenerate certificate, wrong barrier sign pattern, negative geodesic
/// margin, non-positive Laplacian on a declared maximal slice), 1 on any
/// error.
#[derive(Debug, Parser)]
#[command(name = "stconvex", version, after_long_help = include_str!("../CONFIG.md"))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the convexity inequality and Hessian signature on a sampled box.
    Certify(Common),
    /// Tabulate the Schwarzschild interior mean curvature of r = const slices.
    BarrierScan(Common),
    /// Integrate a geodesic and report the convexity margin along it.
    GeodesicProbe(Common),
    /// Tabulate the mean curvature of level sets along a segment.
    Foliate(Common),
    /// Restricted Hessian eigenvalues and Laplacian on a coordinate slice.
    SliceProbe(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Run file (sectioned key = value; see --help for the grammar).
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Samples per axis (certify) or along the scan (barrier-scan, foliate).
    #[arg(long)]
    grid: Option<usize>,
    /// PSD tolerance (certify) or margin tolerance (geodesic-probe).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Omit the timestamp line so identical runs give identical output.
    #[arg(long)]
    no_timestamp: bool,
    /// Emit a key = value tree instead of comment lines and CSV.
    #[arg(long)]
    structured: bool,
}

type Handler = fn(&config::Document, &Overrides) -> Result<Outcome>;

fn run(cli: Cli) -> Result<bool> {
    let (common, command): (&Common, Handler) = match &cli.command {
        Command::Certify(c) => (c, commands::certify),
        Command::BarrierScan(c) => (c, commands::barrier),
        Command::GeodesicProbe(c) => (c, commands::geodesic),
        Command::Foliate(c) => (c, commands::foliate),
        Command::SliceProbe(c) => (c, commands::slice),
    };
    if let Some(t) = common.tolerance {
        anyhow::ensure!(t >= 0.0 && t.is_finite(), "--tolerance must be a non-negative number, got {t}");
    }
    let text = fs::read_to_string(&common.config)
        .with_context(|| format!("cannot read {}", common.config.display()))?;
    let doc = config::parse(&text)?;
    let overrides = Overrides {
        grid: common.grid,
        tolerance: common.tolerance,
    };
    let Outcome { mut report, passed } = command(&doc, &overrides)?;
    if !common.no_timestamp {
        report.put("generated", chrono::Local::now().to_rfc3339());
    }
    let rendered = report.render(common.structured);
    match &common.out {
        Some(path) => fs::write(path, rendered).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
