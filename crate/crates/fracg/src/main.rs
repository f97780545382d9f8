use clap::{Parser, Subcommand};
use fracg::cli::{self, Subcommand as Cmd};
use fracg::config::{self, Overrides};
use fracg::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Nonlocal nonstandard-growth toolbox: Young-function calculus,
/// fractional g-Laplacian identities, constrained eigenvalue
/// minimization, and multistart critical-point search.
#[derive(Parser)]
#[command(name = "fracg", version, about)]
struct Args {
    /// Path to the run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Override the grid spacing h.
    #[arg(long, global = true)]
    h: Option<f64>,

    /// Override the exterior collar width.
    #[arg(long, global = true)]
    collar: Option<f64>,

    /// Override the solver tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Override the boundary condition (dirichlet|neumann|regional|robin|all).
    #[arg(long, global = true)]
    bc: Option<String>,

    /// Override the constraint level mu.
    #[arg(long, global = true)]
    mu: Option<f64>,

    /// Override the fractional order s.
    #[arg(long, global = true)]
    s: Option<f64>,

    /// Override the Young family name.
    #[arg(long, global = true)]
    family: Option<String>,

    /// Override the Young family parameters (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    params: Option<Vec<f64>>,

    /// Override the number of multistart seeds.
    #[arg(long, global = true)]
    starts: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report of the configured Young function.
    CheckYoung,
    /// Randomized inequality battery for the Young/modular calculus.
    VerifyCalculus,
    /// Divergence, integration-by-parts and pairing identity battery.
    VerifyOperator,
    /// Constrained quotient minimization for the configured conditions.
    Eigen,
    /// One minimization per constraint level in the configured list.
    SweepMu,
    /// Multistart critical-point search over a lambda sweep.
    Multiplicity,
    /// Fractional perimeter of the configured domain.
    Perimeter,
}

fn run(args: Args) -> Result<bool, Error> {
    let path = args
        .config
        .ok_or_else(|| Error::ValidationError("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(&path)?;
    let mut cfg = config::parse_config(&text)?;
    let ov = Overrides {
        seed: args.seed,
        out: args.out,
        h: args.h,
        collar: args.collar,
        tol: args.tol,
        bc: args.bc,
        mu: args.mu,
        s: args.s,
        family: args.family,
        params: args.params,
        starts: args.starts,
    };
    config::apply_overrides(&mut cfg, &ov)?;

    let cmd = match args.command {
        Command::CheckYoung => Cmd::CheckYoung,
        Command::VerifyCalculus => Cmd::VerifyCalculus,
        Command::VerifyOperator => Cmd::VerifyOperator,
        Command::Eigen => Cmd::Eigen,
        Command::SweepMu => Cmd::SweepMu,
        Command::Multiplicity => Cmd::Multiplicity,
        Command::Perimeter => Cmd::Perimeter,
    };
    let outcome = cli::dispatch(&cfg, cmd)?;
    if !outcome.passed {
        eprintln!("assertion failures:");
        for f in &outcome.failures {
            eprintln!("  {f}");
        }
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                // usage / configuration problems exit with 2
                Error::ParseError(_)
                | Error::ValidationError(_)
                | Error::MissingSection(_)
                | Error::InvalidParams(_)
                | Error::BadGeometry(_)
                | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
