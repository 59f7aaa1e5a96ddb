use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use qd_cli::config::parse_config;
use qd_cli::runner;

#[derive(Parser)]
#[command(name = "qd", about = "Quality-diversity experiment runner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the configured search engine and persist archive + metrics.
    Run {
        /// Configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for this run.
        #[arg(long)]
        out: PathBuf,
        /// Override the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Allow writing into a non-empty output directory.
        #[arg(long)]
        force: bool,
    },
    /// Run damage recovery over a precomputed arm archive.
    Adapt {
        /// Directory holding a saved archive.
        #[arg(long)]
        archive: PathBuf,
        /// Configuration file (the [adapt] section drives the recovery).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for the trial log.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Emit an SVG heatmap of a saved 2-D archive.
    Plot {
        #[arg(long)]
        archive: PathBuf,
        /// Output file; defaults to `heatmap.svg` next to the archive.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print final coverage, QD-score and best fitness of a saved archive.
    Stats {
        #[arg(long)]
        archive: PathBuf,
    },
}

fn read_config(path: &PathBuf) -> Result<qd_cli::config::RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, seed, force } => {
            let mut cfg = read_config(&config)?;
            if let Some(seed) = seed {
                cfg.run.seed = seed;
            }
            runner::run(&cfg, &out, force)
        }
        Command::Adapt { archive, config, out, force } => {
            let cfg = read_config(&config)?;
            runner::adapt(&archive, &cfg, &out, force)
        }
        Command::Plot { archive, out } => runner::plot(&archive, out.as_deref()),
        Command::Stats { archive } => runner::stats(&archive),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qd: {e:#}");
            ExitCode::FAILURE
        }
    }
}
