use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod load;

/// Hard cap on box sizes; P[5] and up are too slow for interactive use.
pub const N_MAX_CAP: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "tubecalc", version, about = "Traces of module categories, tube coherence checks and anchored planar algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pentagon, hexagon, snake and dimension residuals of a category file.
    Validate {
        category: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decompose Tr(y) for an endofunctor y and check its pairing.
    Trace {
        category: String,
        /// `regular`, a bundled module name, or a module JSON file.
        #[arg(long, default_value = "regular")]
        module: String,
        #[arg(long)]
        object: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tube-category coherence checks.
    Coherence {
        category: String,
        #[arg(long, default_value = "regular")]
        module: String,
        /// A check name or `all`.
        #[arg(long, default_value = "all")]
        check: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build P[0..=n] for a generator and check the nine axioms.
    ApaCheck {
        category: String,
        #[arg(long, default_value = "regular")]
        module: String,
        #[arg(long)]
        generator: String,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a .tangle program.
    TangleEval {
        category: String,
        program: PathBuf,
        #[arg(long, default_value = "regular")]
        module: String,
        #[arg(long)]
        generator: String,
        /// Defaults to the largest box the program uses.
        #[arg(long)]
        max_n: Option<usize>,
        /// Second program expected to evaluate to the same morphism.
        #[arg(long)]
        equals: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Some residual exceeded the tolerance; the report was printed.
    Check,
    /// Input data failed validation while loading.
    Invalid(String),
    Usage(String),
}

impl From<tubecalc::Error> for Failure {
    fn from(e: tubecalc::Error) -> Failure {
        match e {
            tubecalc::Error::Residual { .. } => Failure::Invalid(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<tubecalc_tangle::TangleError> for Failure {
    fn from(e: tubecalc_tangle::TangleError) -> Failure {
        match e {
            tubecalc_tangle::TangleError::Eval(e) => e.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
