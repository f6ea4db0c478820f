//! `bergman`: command-line access to the projection, commutator, filtration,
//! matrix-calculus and kernel routines.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

mod commands;
mod config;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

impl From<bergman_core::Error> for CliError {
    fn from(e: bergman_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// What a subcommand wants printed and whether its checks held.
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub passed: bool,
}

#[derive(Parser, Debug)]
#[command(name = "bergman", version, about = "Exact Bergman-projection and operator-algebra checks")]
pub struct Cli {
    /// RNG seed; falls back to the config file, then BERGMAN_SEED, then 42.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file whose fields mirror the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Dz,
    Dzbar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelMode {
    Eval,
    Series,
    Reproduce,
    Suite,
    Peetre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaseOperator {
    Projection,
    Identity,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Project a polynomial (JSON) onto the Bergman space.
    Project {
        /// Polynomial JSON file, `-` for stdin.
        #[arg(long, default_value = "-")]
        input: PathBuf,
        /// Print the bare polynomial JSON without the report wrapper.
        #[arg(long)]
        raw: bool,
    },
    /// Apply [X, P] = X∘P − P∘X to a polynomial.
    Commutator {
        /// `dz:i`, `dzbar:i` (1-based) or `matrix:FILE`.
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "-")]
        input: PathBuf,
    },
    /// Exact norm-ratio scan for the witnesses z_i^{2m} z̄_i^m.
    RatioScan {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m_max: Option<u32>,
        /// 1-based coordinate.
        #[arg(long, default_value_t = 1)]
        coordinate: usize,
        /// Report the first m with ratio_sq above this value (repeatable).
        #[arg(long = "threshold")]
        thresholds: Vec<f64>,
    },
    /// Check [X, P] = 0 on every monomial up to a degree.
    VerifyTangent {
        /// Rational matrix JSON file.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Report whether (Ax)ᵗ d/dx is tangent to the sphere.
    Tangency {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Commutator semi-norm table for P (or the identity).
    PsiFiltration {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        /// Comma-separated truncation degrees.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u32>>,
        /// A JSON file of rational matrices, or comma-separated `dz:i` / `dzbar:i`.
        #[arg(long)]
        fields: String,
        #[arg(long, value_enum, default_value_t = BaseOperator::Projection)]
        operator: BaseOperator,
    },
    /// Holomorphic functional calculus on a matrix by a contour integral.
    Calculus {
        /// JSON rows (entries a number or [re, im]), inline or a file path.
        #[arg(long)]
        matrix: String,
        /// one | exp | id | poly:c0,c1,...
        #[arg(long, default_value = "exp")]
        function: String,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        radius_factor: Option<f64>,
    },
    /// Reproducing-kernel checks for ball:n, disk:a or fock:t.
    KernelCheck {
        #[arg(long)]
        space: String,
        #[arg(long, value_enum)]
        mode: KernelMode,
        /// Dimension of a Fock space.
        #[arg(long)]
        n: Option<usize>,
        /// Point as a JSON array (numbers or [re, im]; rationals for reproduce).
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        w: Option<String>,
        /// Series truncation degree.
        #[arg(long)]
        k_max: Option<u32>,
        /// Polynomial JSON file for reproduce.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// Peetre: second vector.
        #[arg(long)]
        mu: Option<String>,
        /// Peetre: exponent.
        #[arg(long, allow_hyphen_values = true)]
        l: Option<f64>,
    },
    /// Run the acceptance battery.
    Selftest {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(err) = out.stderr {
                eprint!("{err}");
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
