//! `ncjet` command-line frontend.

mod commands;
mod spec_file;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    Failed(String),
    /// Exit code 2.
    Invalid(String),
    /// Exit code 3.
    Parse(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Parse(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Failed(m) | CliError::Invalid(m) | CliError::Parse(m) => m,
        }
    }
}

impl From<ncjet::Error> for CliError {
    fn from(e: ncjet::Error) -> CliError {
        use ncjet::Error::*;
        match e {
            Invalid(_) | DegreeOverflow { .. } | DimensionCap { .. } | AlgebraMismatch | AmbientMismatch(..) => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ncjet", version, about = "Exact jets, Spencer operators, connections and quantization")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Print a built-in fixture as a calculus file and exit.
    #[arg(long, value_name = "NAME")]
    dump_fixture: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the algebra and calculus axioms.
    Validate { input: String },
    /// Jet and symmetric-form dimensions with exactness verdicts.
    Jets {
        input: String,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Spencer complexes, cohomology and the bicomplex.
    Spencer {
        input: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Flip the sign of δ in the bicomplex (negative control).
        #[arg(long)]
        corrupt_sign: bool,
    },
    /// Left connections on Ω1, or bimodule connections.
    Connections {
        input: String,
        #[arg(long)]
        bimodule: bool,
        #[arg(long, value_enum)]
        ansatz: Option<AnsatzArg>,
    },
    /// Quantization maps, operator decomposition and star products.
    Quantize {
        input: String,
        #[arg(long, default_value = "1")]
        hbar: String,
        /// Operator file to decompose.
        #[arg(long)]
        op: Option<PathBuf>,
        /// Print the star table over x_a = R_a and p_s = ζ1(∂_s).
        #[arg(long)]
        star_gens: bool,
        #[arg(long, value_enum, default_value_t = RetractionArg::Braiding)]
        retraction: RetractionArg,
        #[arg(long, value_enum)]
        ansatz: Option<AnsatzArg>,
    },
    /// Run the quaternion pipeline and check every claim.
    Demo {
        #[arg(default_value = "quaternion")]
        name: String,
        /// Negate the braiding before building the retraction.
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum AnsatzArg {
    General,
    Frame,
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
pub enum RetractionArg {
    /// ½(id + σ) in degree one, the canonical solution elsewhere.
    Braiding,
    /// Canonical solution in every degree.
    Canonical,
}

pub struct Outcome {
    pub value: serde_json::Value,
    pub text: String,
    pub pass: bool,
    pub failure: Option<String>,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let command = match (cli.dump_fixture, cli.command) {
        (Some(name), None) => return commands::dump_fixture(&name),
        (Some(_), Some(_)) => return Err(CliError::Invalid("--dump-fixture takes no subcommand".into())),
        (None, None) => return Err(CliError::Invalid("no subcommand given".into())),
        (None, Some(c)) => c,
    };
    match command {
        Command::Validate { input } => commands::validate(&input),
        Command::Jets { input, order } => commands::jets(&input, order),
        Command::Spencer { input, order, corrupt_sign } => commands::spencer(&input, order, corrupt_sign),
        Command::Connections { input, bimodule, ansatz } => commands::connections(&input, bimodule, ansatz),
        Command::Quantize { input, hbar, op, star_gens, retraction, ansatz } => {
            commands::quantize(&input, &hbar, op.as_deref(), star_gens, retraction, ansatz)
        }
        Command::Demo { name, corrupt } => commands::demo(&name, corrupt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            let body = if json {
                serde_json::to_string_pretty(&out.value).expect("report serializes") + "\n"
            } else {
                out.text
            };
            let _ = std::io::stdout().write_all(body.as_bytes());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                if let Some(f) = out.failure {
                    eprintln!("failed: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
