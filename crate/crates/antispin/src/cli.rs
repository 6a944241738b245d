use std::path::PathBuf;

use antispin_core::EncodingMode;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Antiparallel,
    Parallel,
}

impl From<ModeArg> for EncodingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Antiparallel => EncodingMode::Antiparallel,
            ModeArg::Parallel => EncodingMode::Parallel,
        }
    }
}

/// Information-disturbance tradeoff for measurements on spin pairs.
#[derive(Debug, Parser)]
#[command(name = "antispin", version)]
pub struct Cli {
    /// Two-spin encoding of a direction.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Antiparallel)]
    pub mode: ModeArg,

    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub mc_samples: Option<usize>,

    /// Output file (CSV for sweep and compare, the report otherwise).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Use the coefficients exactly as originally printed and report which
    /// conditions they violate.
    #[arg(long, global = true)]
    pub paper_coefficients: bool,

    #[command(subcommand)]
    pub command: Command,
}

fn at_least<const N: usize>(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < N {
        return Err(format!("must be at least {N}"));
    }
    Ok(n)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the trace conditions of a seed file.
    Validate { path: PathBuf },

    /// Trace-formula information and disturbance of a seed file, plus a
    /// Monte Carlo estimate with --mc-samples.
    Evaluate { path: PathBuf },

    /// Evaluate the minimal-disturbance family against the analytic bound.
    Sweep {
        #[arg(long, default_value_t = 9, value_parser = at_least::<2>)]
        points: usize,
    },

    /// Antiparallel bound against the optimizer-derived parallel curve.
    Compare {
        #[arg(long, default_value_t = 9, value_parser = at_least::<3>)]
        points: usize,
        #[arg(long, default_value_t = 20, value_parser = at_least::<1>)]
        restarts: usize,
    },

    /// Build the four-outcome tetrahedral realization and check it.
    Povm4Check {
        /// Seed file; defaults to the minimal-disturbance seed at --theta.
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, conflicts_with = "path")]
        theta: f64,
        /// Use the twelve-element tetrahedral rotation group instead.
        #[arg(long)]
        group: bool,
    },
}
