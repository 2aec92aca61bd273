//! `ricci-wb`: load or define homogeneous spaces, compute invariant Ricci
//! curvature, classify metrics, solve the prescribed Ricci problem, run the
//! verification suites and sweep parameter grids to CSV.

mod output;
mod run;
mod source;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ricci-wb",
    about = "Invariant Ricci curvature workbench for homogeneous spaces",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Clone)]
pub struct SpaceArgs {
    /// Catalog space name (see `catalog list`).
    #[arg(long)]
    pub space: Option<String>,
    /// Path to a space-spec JSON file.
    #[arg(long)]
    pub spec_json: Option<String>,
    /// Output format.
    #[arg(long, default_value = "pretty", value_parser = ["pretty", "json"])]
    pub format: String,
}

#[derive(clap::Args, Clone)]
pub struct MetricArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Metric coordinates: entry parameters for catalog spaces, orthonormal
    /// basis coordinates of the metric square root for JSON spaces.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coords: Vec<f64>,
}

#[derive(clap::Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Target tensor coefficients in the same coordinates as `--coords`.
    #[arg(long = "T", value_delimiter = ',', allow_hyphen_values = true)]
    pub target: Vec<f64>,
    /// Starting metric coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Vec<f64>,
    /// Relative determinant to pin; defaults to the start's.
    #[arg(long)]
    pub normalize: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Record the residual at every iterate.
    #[arg(long)]
    pub log_path: bool,
}

#[derive(clap::Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Baseline coordinates; swept parameters override their entry.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coords: Vec<f64>,
    /// Sweep range `index=start:end:count`, repeatable.
    #[arg(long = "range")]
    pub ranges: Vec<String>,
}

#[derive(clap::Args)]
pub struct VerifyArgs {
    /// Restrict to one catalog space (default: the whole catalog).
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Summary of a space: dimensions, invariant basis, structural flags.
    Show(SpaceArgs),
    /// Curvature record of one metric.
    Ricci(MetricArgs),
    /// Variation matrix of the Ricci map and its singular values.
    Dric(MetricArgs),
    /// Kernel dimension, scalar curvature sign and invertibility certificate.
    Classify(MetricArgs),
    /// Newton solve of `ric(g) = c T`.
    Solve(SolveArgs),
    /// Oracle suites over the catalog (or one space); exits 0 when clean.
    Verify(VerifyArgs),
    /// Grid sweep of the classifier to CSV.
    Sweep(SweepArgs),
    /// Catalog access.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
pub enum CatalogAction {
    /// List the built-in spaces.
    List,
    /// Print a catalog entry in the space-spec JSON format.
    Export { name: String },
}

/// Error kinds mapped to exit codes: usage 1, validation 2, solver 3.
pub enum CliError {
    Usage(String),
    Validation(String),
    Solver(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Solver(_) => "solver",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Solver(m) => m,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            fail(&CliError::Usage(e.to_string()));
        }
    };
    match run::dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ! {
    eprintln!(
        "{}",
        serde_json::json!({ "error": { "kind": e.kind(), "message": e.message() } })
    );
    std::process::exit(e.exit_code());
}
