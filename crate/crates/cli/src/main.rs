//! Command line front end for the prediction scoring pipeline.
//!
//! Four subcommands: `simulate` writes game panels over a bot-fraction
//! grid, `score` compares two datasets with fold-trained models,
//! `replicate` reruns the whole simulation study and summarizes how well
//! the scores track the true mechanism distances, and `curves` re-exports
//! plot data from a cached report.
//!
//! Every run writes a `manifest.json` whose `argv` field, replayed with a
//! fresh `--out`, reproduces the outputs byte for byte. Exit codes: 0
//! success, 2 usage error, 3 data error, 4 numerical failure.

mod commands;
mod inputs;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use predscore::Error;

#[derive(Parser)]
#[command(
    name = "predscore",
    version,
    about = "Prediction scoring between data generating mechanisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate public-goods-game panels over a bot-fraction grid.
    Simulate(SimulateArgs),
    /// Score dataset tau-prime against fold models cross-validated on tau.
    Score(Box<ScoreArgs>),
    /// Rerun the simulation study and report score-vs-truth dependence.
    Replicate(ReplicateArgs),
    /// Re-export curves and loss samples from a cached report.
    Curves(CurvesArgs),
}

/// Simulation settings shared by `simulate` and `replicate`. Flags override
/// the config file, which overrides the built-in study defaults.
#[derive(Args, Debug, Clone)]
struct SimOverrides {
    /// TOML file with simulation settings (same keys as the flags below).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated bot fractions in [0, 1], e.g. `0,0.25,0.5`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pi: Option<Vec<f64>>,
    /// Cohorts per setting.
    #[arg(long)]
    cohorts: Option<usize>,
    /// Recorded rounds per cohort (the warm-up round is extra).
    #[arg(long)]
    rounds: Option<u32>,
    /// Recruitment pool size.
    #[arg(long = "pool_size")]
    pool_size: Option<u64>,
    /// Per-recruit participation probability.
    #[arg(long = "p_participate")]
    p_participate: Option<f64>,
    /// Human coefficients: intercept,round,own_lag,cohort_mean_lag.
    #[arg(long = "human_coefs", value_delimiter = ',', allow_negative_numbers = true)]
    human_coefs: Option<Vec<f64>>,
    /// Bot coefficients: intercept,own_lag.
    #[arg(long = "bot_coefs", value_delimiter = ',', allow_negative_numbers = true)]
    bot_coefs: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    sim: SimOverrides,
    /// RNG seed; generated and printed if absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores). Never changes the output bytes.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    /// Dataset whose folds train the models.
    #[arg(long)]
    tau: PathBuf,
    /// Dataset validated with those same fold models.
    #[arg(long = "tau_prime")]
    tau_prime: PathBuf,
    /// Named model: 1, 2, 3 (study models) or `interaction`.
    #[arg(long, conflicts_with = "covariates")]
    model: Option<String>,
    /// Custom logistic model: comma-separated covariate column names.
    #[arg(long, value_delimiter = ',')]
    covariates: Option<Vec<String>>,
    /// Label column for plain-CSV inputs (panel exports know their own).
    #[arg(long, default_value = "y")]
    label: String,
    /// Loss: roc_auc, pr_auc, log_score, or brier.
    #[arg(long, default_value = "roc_auc")]
    loss: String,
    /// Distance between the loss samples: ks, mean_diff, or both.
    #[arg(long, default_value = "ks")]
    h: String,
    /// Fold scheme: subsample or partition.
    #[arg(long, default_value = "subsample")]
    scheme: String,
    /// Fold count; defaults to 10 (subsample) or n/holdout_size (partition).
    #[arg(long)]
    k: Option<usize>,
    /// Partition scheme: rows per held-out fold when --k is absent.
    #[arg(long = "holdout_size", default_value_t = 50)]
    holdout_size: usize,
    /// Subsample scheme: rows per fold.
    #[arg(long = "subset_size")]
    subset_size: Option<usize>,
    /// Draw folds without stratifying on the label.
    #[arg(long = "no_stratify")]
    no_stratify: bool,
    /// Resample tau-prime to tau's label rate before scoring.
    #[arg(long)]
    rebalance: bool,
    /// Rows in the rebalanced tau-prime (default: keeps the scarcer class).
    #[arg(long = "rebalance_size", requires = "rebalance")]
    rebalance_size: Option<usize>,
    /// RNG seed; generated and printed if absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores). Never changes the output bytes.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct ReplicateArgs {
    #[command(flatten)]
    sim: SimOverrides,
    /// Independent repetitions of the whole study.
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Comma-separated model names: subsets of 1,2,3.
    #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string(), "2".to_string(), "3".to_string()])]
    models: Vec<String>,
    /// Loss behind the pairwise scores.
    #[arg(long, default_value = "roc_auc")]
    loss: String,
    /// Folds per scoring run.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Rows per subsampled fold.
    #[arg(long = "subset_size", default_value_t = 500)]
    subset_size: usize,
    /// Draw folds without stratifying on the label.
    #[arg(long = "no_stratify")]
    no_stratify: bool,
    /// Master RNG seed; generated and printed if absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores). Never changes the output bytes.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct CurvesArgs {
    /// A report.json written by `score`.
    #[arg(long)]
    report: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Rayon worker count (accepted for interface uniformity; this command
    /// has no parallel work).
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::Numerical(_) => 4,
        _ => 3,
    }
}

fn configure_threads(threads: Option<usize>) -> predscore::Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> predscore::Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            configure_threads(args.threads)?;
            commands::simulate(&args)
        }
        Command::Score(args) => {
            configure_threads(args.threads)?;
            commands::score(&args)
        }
        Command::Replicate(args) => {
            configure_threads(args.threads)?;
            commands::replicate(&args)
        }
        Command::Curves(args) => {
            configure_threads(args.threads)?;
            commands::curves(&args)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
