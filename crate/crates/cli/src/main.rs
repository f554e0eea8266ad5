mod check;
mod report;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Entanglement detection from moments of positive maps.
#[derive(Parser)]
#[command(name = "pmoments", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every criterion for one state, map and subsystem.
    Check(CheckArgs),
    /// Sweep a state family over a parameter grid and write CSV.
    Scan(ScanArgs),
    /// Run the acceptance suite; exits 1 if any item fails.
    Report(ReportArgs),
    /// Print a generated state in the plain-text matrix format.
    State {
        /// State id, e.g. `werner:0.5`, `upb_tiles`, `sep:2x2:3:42`.
        id: String,
    },
}

#[derive(Args)]
pub struct CheckArgs {
    /// State id, e.g. `werner:0.5` or `file:rho.txt`.
    pub state: String,
    /// Map id: transpose[:d], lambda1, lambda2, phi1, reduction:d,
    /// hou:d:{unordered,ordered}.
    pub map: String,
    /// Subsystem the map acts on: A, B, C or a 0-based index.
    pub party: String,
    /// Number of moments (at least 5).
    #[arg(default_value_t = 5)]
    pub n: usize,
    /// Build Hankel matrices from normalized moments `m_k / m_1^k`.
    #[arg(long)]
    pub normalize: bool,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct ScanArgs {
    /// JSON file with scan settings; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// State family: werner, sigma_b, rho_alpha, sigma_a, ghz, w.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Map id; repeat for several maps.
    #[arg(long = "map")]
    pub maps: Vec<String>,
    #[arg(long)]
    pub party: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Bisect the first sign change of this CSV column to 1e-6 per map.
    #[arg(long)]
    pub refine: Option<String>,
}

#[derive(Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub json: bool,
    /// Separable states per layout for the separability item.
    #[arg(long, default_value_t = 1000, hide = true)]
    pub separable_trials: usize,
    /// Negative control: swap in a corrupted 2x4 family.
    #[arg(long, hide = true)]
    pub corrupt_fixture: bool,
}

/// Errors surfaced to the user, split by exit code.
pub enum CliError {
    /// Bad ids, dimensions or configuration; exit code 2.
    Usage(String),
    /// The acceptance suite found a failing item; exit code 1.
    Failed,
}

impl From<pmoments::Error> for CliError {
    fn from(e: pmoments::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Parses `A`/`B`/`C` (case-insensitive) or a 0-based index.
pub fn parse_party(s: &str) -> Result<usize, CliError> {
    match s.trim() {
        "A" | "a" => Ok(0),
        "B" | "b" => Ok(1),
        "C" | "c" => Ok(2),
        other => other
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid party '{other}'; use A, B, C or an index"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => check::run(&args),
        Command::Scan(args) => scan::run(&args),
        Command::Report(args) => report::run(&args),
        Command::State { id } => print_state(&id),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_state(id: &str) -> Result<(), CliError> {
    let id: pmoments::states::StateId = id.parse()?;
    print!("{}", pmoments::states::write_matrix_text(&id.generate()?));
    Ok(())
}
