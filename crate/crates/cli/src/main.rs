use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use paraverse_core::io::json::{envelope, render};

mod limits;
mod run;

use limits::Limits;
use run::Report;

const EXIT_CODES: &str = "\
Exit codes:
  0  definite answer
  1  definite negative answer to a yes/no query
  2  unknown or incomplete (a limit was hit)
  3  input error (parse or semantic)
  4  internal error

Limits (--limits k=v,... or PARAVERSE_LIMITS, flags win):
  maxStates=100000 maxDepth=1000 tokenCap=200 valuationBound=5";

#[derive(Parser, Debug)]
#[command(name = "paraverse", version, about = "Parametric verification of timed, probabilistic and concurrent models", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parametric timed automata
    Pta(Common),
    /// Parametric interval Markov chains
    Pimc(Common),
    /// Modal transition systems with action parameters
    Mts(Common),
    /// Parametric Petri nets
    Ppn(Common),
}

#[derive(Args, Debug)]
#[command(after_help = EXIT_CODES)]
struct Common {
    /// Model file
    model: PathBuf,
    /// Query text, or the path of a file holding it
    #[arg(short, long)]
    query: String,
    /// Comma-separated limits, e.g. maxStates=1000,maxDepth=50
    #[arg(long, value_name = "K=V,...")]
    limits: Option<String>,
    /// Emit JSON, to PATH if given and to stdout otherwise
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Definite = 0,
    Negative = 1,
    Unknown = 2,
    Input = 3,
    Internal = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit(&self) -> Exit {
        match self {
            CliError::Input(_) => Exit::Input,
            CliError::Internal(_) => Exit::Internal,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn limits(flag: Option<&str>) -> Result<Limits, CliError> {
    let mut l = Limits::default();
    if let Ok(env) = std::env::var("PARAVERSE_LIMITS") {
        l = l.apply(&env, "PARAVERSE_LIMITS")?;
    }
    match flag {
        Some(spec) => l.apply(spec, "--limits"),
        None => Ok(l),
    }
}

fn execute(formalism: &str, args: &Common) -> Result<Report, CliError> {
    let limits = limits(args.limits.as_deref())?;
    let text = read(&args.model)?;
    let query = query_text(&args.query)?;
    match formalism {
        "pta" => run::pta(&args.model, &text, &query, &limits),
        "pimc" => run::pimc(&args.model, &text, &query),
        "mts" => run::mts(&args.model, &text, &query),
        _ => run::ppn(&args.model, &text, &query, &limits),
    }
}

/// The query itself, or the contents of the file it names.
fn query_text(q: &str) -> Result<String, CliError> {
    let path = Path::new(q);
    if path.is_file() {
        Ok(read(path)?.trim().to_string())
    } else {
        Ok(q.to_string())
    }
}

fn emit(formalism: &str, args: &Common, report: &Report) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Internal(format!("writing output: {e}"));
    let query = query_text(&args.query)?;
    match &args.json {
        None => std::io::stdout().write_all(report.text.as_bytes()).map_err(io),
        Some(path) => {
            let doc = render(&envelope(formalism, &query, &report.answer, report.result.clone()));
            if path.as_os_str() == "-" {
                std::io::stdout().write_all(doc.as_bytes()).map_err(io)
            } else {
                std::fs::write(path, doc)
                    .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?;
                std::io::stdout().write_all(report.text.as_bytes()).map_err(io)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are input errors; --help and --version are not
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Input as u8 } else { 0 });
        }
    };
    let (formalism, args) = match &cli.command {
        Command::Pta(a) => ("pta", a),
        Command::Pimc(a) => ("pimc", a),
        Command::Mts(a) => ("mts", a),
        Command::Ppn(a) => ("ppn", a),
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| execute(formalism, args)))
        .unwrap_or_else(|_| Err(CliError::Internal("the engine panicked".into())));
    let code = match outcome {
        Ok(report) => match report.exit {
            Exit::Definite | Exit::Negative => match emit(formalism, args, &report) {
                Ok(()) => report.exit,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit()
                }
            },
            _ => {
                eprintln!("unknown: {}", report.text);
                report.exit
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    };
    ExitCode::from(code as u8)
}
