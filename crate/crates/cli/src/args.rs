use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact and leading-order complexity of multifold inverted-oscillator
/// evolutions. All times are given in units of ωt.
#[derive(Debug, Parser)]
#[command(name = "multifold", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// Oscillator frequency ω [default: 1]
    #[arg(long, global = true)]
    pub omega: Option<f64>,

    /// Perturbation ratio δω/ω [default: 1e-3]
    #[arg(long, global = true)]
    pub delta_ratio: Option<f64>,

    /// Mass m [default: 1]
    #[arg(long, global = true)]
    pub mass: Option<f64>,

    /// Gate scale g [default: 1]
    #[arg(long, global = true)]
    pub gate_scale: Option<f64>,

    /// Insertion times t_1,…,t_N: numbers, or multiples of the sweep
    /// variable such as t, -t, 0.5t, t/2
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub times: Option<Vec<String>>,

    /// Start time t_s [default: 0]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub ts: Option<String>,

    /// Final time t_f [default: 0]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tf: Option<String>,

    /// Sweep grid start:stop:step [default: 0.05:20:0.05]
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Output file [default: stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Significant decimal digits carried through cancellations [default: 40]
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// key=value file mirroring the flags; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a built-in figure scenario (3, 4, 5, 7, 8 or 9) and write CSV
    Figure { id: u32 },
    /// Sweep a Loschmidt-echo fold and write CSV
    Loschmidt,
    /// Sweep a precursor fold and write CSV
    Precursor,
    /// Sweep the single-kick harmonic control and write CSV
    Harmonic,
    /// List the enumerated leading-order terms for fixed times
    AnalyticTerms {
        #[arg(value_enum)]
        kind: TermKind,
    },
    /// Print t_T, t* and the switchback complexity for fixed times
    Switchback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TermKind {
    Loschmidt,
    Precursor,
}
