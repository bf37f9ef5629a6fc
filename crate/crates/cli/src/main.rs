//! `cgmy`: Monte Carlo option pricing and path sampling for CGMY processes.
//!
//! Exit codes: 0 success, 1 validation-suite failure, 2 bad configuration,
//! 3 sampler domain error.

// validation guards are written `!(x > 0.0)` on purpose: unlike `x <= 0.0`,
// the negated form also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod runcmd;
mod validate;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::RawConfig;

/// Application-level error with its process exit code.
#[derive(Debug)]
pub enum AppError {
    /// Invalid configuration or flags (exit 2).
    Config(String),
    /// Sampler or numerical failure at runtime (exit 3).
    Sampler(cgmy_core::Error),
    /// One or more validation checks failed (exit 1).
    Validation,
}

impl AppError {
    fn code(&self) -> i32 {
        match self {
            Self::Validation => 1,
            Self::Config(_) => 2,
            Self::Sampler(_) => 3,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "{msg}"),
            Self::Sampler(e) => write!(f, "{e}"),
            Self::Validation => write!(f, "one or more validation checks failed"),
        }
    }
}

impl From<cgmy_core::Error> for AppError {
    fn from(e: cgmy_core::Error) -> Self {
        match e {
            cgmy_core::Error::InvalidParameter(msg) => Self::Config(msg),
            other => Self::Sampler(other),
        }
    }
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// Flat key=value config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter preset: I (Y=0.45) or II (Y=1.01)
    #[arg(long)]
    design: Option<String>,
    /// Levy density scale C
    #[arg(long = "C")]
    c: Option<f64>,
    /// Left tempering G
    #[arg(long = "G")]
    g: Option<f64>,
    /// Right tempering M
    #[arg(long = "M")]
    m: Option<f64>,
    /// Stability index Y in (0, 2)
    #[arg(long = "Y")]
    y: Option<f64>,
    /// Increment sampler: exact, tcd or tcd-app
    #[arg(long)]
    method: Option<String>,
    /// L1 budget for the dropped time-change remainder
    #[arg(long)]
    eps: Option<f64>,
    /// Pathwise truncation bound of the series Dirichlet-mean sampler
    #[arg(long)]
    eps_tilde: Option<f64>,
    /// Base seed; trial i uses stream (seed, i)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (falls back to CGMY_SIM_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
struct PricingArgs {
    /// Payoff kind: european, asian, lookback or barrier
    #[arg(long = "option")]
    option_kind: Option<String>,
    /// Comma-separated strike list
    #[arg(long)]
    strikes: Option<String>,
    /// Barrier level for the up-and-in call
    #[arg(long)]
    barrier: Option<f64>,
    /// Number of equally spaced monitoring intervals on [0, T]
    #[arg(long)]
    weekly: Option<usize>,
    /// Monte Carlo trials
    #[arg(long)]
    trials: Option<u64>,
}

fn build_raw(common: &CommonArgs, pricing: Option<&PricingArgs>) -> RawConfig {
    let mut raw = RawConfig {
        design: common.design.clone(),
        c: common.c,
        g: common.g,
        m: common.m,
        y: common.y,
        method: common.method.clone(),
        eps: common.eps,
        eps_tilde: common.eps_tilde,
        seed: common.seed,
        threads: common.threads,
        out: common.out.clone(),
        ..RawConfig::default()
    };
    if let Some(p) = pricing {
        raw.option = p.option_kind.clone();
        raw.strikes = p.strikes.clone();
        raw.barrier = p.barrier;
        raw.weekly = p.weekly;
        raw.trials = p.trials;
    }
    raw
}

fn resolve(
    common: &CommonArgs,
    pricing: Option<&PricingArgs>,
) -> Result<config::Settings, AppError> {
    let flags = build_raw(common, pricing);
    let merged = match &common.config {
        Some(path) => flags.over(RawConfig::from_file(path)?),
        None => flags,
    };
    merged.resolve()
}

#[derive(Debug, Parser)]
#[command(
    name = "cgmy",
    about = "CGMY process sampling and option pricing",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Price an option by Monte Carlo and write CSV rows
    Price {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pricing: PricingArgs,
        /// Write 0 in the elapsed_sec column for byte-reproducible output
        #[arg(long)]
        zero_elapsed: bool,
    },
    /// Run the statistical validation suites
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Run a single suite by name
        #[arg(long)]
        only: Option<String>,
    },
    /// Sample paths and write them as trial,t,X,S rows
    SamplePaths {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        pricing: PricingArgs,
        /// Number of paths to write (at most 10000)
        #[arg(long, default_value_t = 3)]
        paths: u64,
    },
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Price {
            common,
            pricing,
            zero_elapsed,
        } => {
            let settings = resolve(&common, Some(&pricing))?;
            runcmd::cmd_price(&settings, zero_elapsed)
        }
        Command::Validate { common, only } => {
            let settings = resolve(&common, None)?;
            validate::cmd_validate(&settings, only.as_deref())
        }
        Command::SamplePaths {
            common,
            pricing,
            paths,
        } => {
            let settings = resolve(&common, Some(&pricing))?;
            runcmd::cmd_sample_paths(&settings, paths)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            if !matches!(e, AppError::Validation) {
                eprintln!("error: {e}");
            }
            std::process::exit(e.code());
        }
    }
}
