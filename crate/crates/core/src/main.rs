use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rebalance::commands;
use rebalance::config::RunConfig;

#[derive(Parser)]
#[command(name = "rebalance", version, about = "Imbalanced-classification resampling benchmark")]
struct Cli {
    /// TOML run configuration (all keys optional).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap worker parallelism (0 = one worker per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Fit pipeline statistics on the full dataset before splitting,
    /// reproducing full-fit preprocessing instead of per-fold fitting.
    #[arg(long = "paper-compat", global = true)]
    paper_compat: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the preprocessing pipeline to a raw CSV.
    Prepare,
    /// Resample a processed dataset with the configured strategy.
    Resample,
    /// Fit the configured model on a processed dataset.
    Train,
    /// Score a stored model against a dataset file.
    Evaluate,
    /// Run the full sampler x model comparison.
    Benchmark,
}

fn run() -> rebalance::Result<()> {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.jobs = jobs;
    }
    if let Some(out) = cli.out {
        cfg.out_dir = out;
    }
    if cli.paper_compat {
        cfg.paper_compat_full_fit = true;
    }
    if cfg.jobs > 0 {
        // build_global fails only if a pool already exists; results do not
        // depend on worker count, so that is safe to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    }
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }

    match cli.command {
        Command::Prepare => commands::cmd_prepare(&cfg),
        Command::Resample => commands::cmd_resample(&cfg),
        Command::Train => commands::cmd_train(&cfg),
        Command::Evaluate => commands::cmd_evaluate(&cfg),
        Command::Benchmark => commands::cmd_benchmark(&cfg),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
