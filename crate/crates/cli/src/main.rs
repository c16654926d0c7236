use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ksection::slice::InvariantVector;
use ksection::{Family, RatMatrix};
use ksection_cli::verify::sorted_json;
use ksection_cli::{cmd_canonicalize, cmd_report, cmd_slice_rep, cmd_verify, CliError, Ranges};

#[derive(Parser)]
#[command(name = "ksection", version, about = "Rational sl2-triples and Kostant-Rallis slices for classical symmetric pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check for one case and print its certificate.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Slice round-trip trials.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificates for ranges of cases, with a summary.
    Report {
        /// General linear cases with 1 <= q <= p <= N.
        #[arg(long, default_value_t = 0)]
        gl_max: usize,
        /// Orthogonal cases with q <= p <= N and p - q <= 1.
        #[arg(long, default_value_t = 0)]
        o_max: usize,
        /// Symplectic cases with even 2 <= q <= p <= N.
        #[arg(long, default_value_t = 0)]
        sp_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Cases evaluated concurrently (default: available cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slice point with the given invariants (JSON array of "a/b" strings).
    SliceRep {
        #[command(flatten)]
        case: CaseArgs,
        /// Invariants file, or - for stdin.
        #[arg(long)]
        invariants: PathBuf,
    },
    /// Slice coordinates and representative for an element of g(-1).
    Canonicalize {
        #[command(flatten)]
        case: CaseArgs,
        /// Matrix file in the text format, or - for stdin.
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Gl,
    O,
    Sp,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Gl => Family::Gl,
            FamilyArg::O => Family::Orth,
            FamilyArg::Sp => Family::Sp,
        }
    }
}

#[derive(Args)]
struct CaseArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn print_stdout(text: &str) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Failed(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Failed(format!("{}: {e}", path.display()))),
        None => print_stdout(&format!("{text}\n")),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { case, seed, trials, out } => {
            let cert = cmd_verify(case.family.into(), case.p, case.q, seed, trials)?;
            emit(&cert.to_json(), out.as_deref())?;
            Ok(cert.is_passing())
        }
        Command::Report {
            gl_max,
            o_max,
            sp_max,
            seed,
            trials,
            jobs,
            out,
        } => {
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let report = cmd_report(Ranges { gl_max, o_max, sp_max }, seed, trials, jobs)?;
            eprint!("{}", report.table());
            emit(&report.to_json(), out.as_deref())?;
            Ok(report.is_passing())
        }
        Command::SliceRep { case, invariants } => {
            let target: InvariantVector = serde_json::from_str(&read_input(&invariants)?)
                .map_err(|e| CliError::Input(format!("invariants: {e}")))?;
            let x = cmd_slice_rep(case.family.into(), case.p, case.q, &target)?;
            print_stdout(&x.to_string())?;
            Ok(true)
        }
        Command::Canonicalize { case, matrix } => {
            let x: RatMatrix = read_input(&matrix)?.parse()?;
            let canon = cmd_canonicalize(case.family.into(), case.p, case.q, &x)?;
            print_stdout(&format!("{}\n", sorted_json(&canon)))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("KS_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            log::error!("{e}");
            let _ = print_stdout(&format!("{}\n", e.to_json()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
