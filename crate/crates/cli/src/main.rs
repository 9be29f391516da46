mod commands;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use regrates::verify::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "regrates",
    version,
    about = "Convergence-rate analysis for spectral regularization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert-scale, triple and interpolation norms with the embedding chain.
    Norms(Common),
    /// Rate functionals and their two-sided bounds, one row per nu.
    Rates(Common),
    /// Noisy sweeps with an a priori, optimal or discrepancy parameter choice.
    Noisy(Common),
    /// Runs a verification battery; exits 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Problem file (JSON).
    #[arg(long)]
    problem: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for random noise, overriding the problem file.
    #[arg(long)]
    seed: Option<u64>,
    /// `a,b,c` or `start:stop:steps`.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Comma-separated noise levels.
    #[arg(long)]
    deltas: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("REGRATES_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("REGRATES_THREADS: {v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> anyhow::Result<bool> {
        configure_threads()?;
        match cli.command {
            Command::Norms(c) => commands::norms(&c).map(|_| true),
            Command::Rates(c) => commands::rates(&c).map(|_| true),
            Command::Noisy(c) => commands::noisy(&c).map(|_| true),
            Command::Verify(v) => commands::verify(&v),
        }
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
