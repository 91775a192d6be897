use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spiralforge::config::{thread_cap, Overrides, RunConfig};
use spiralforge::{run, RunError};

#[derive(Parser)]
#[command(name = "spiralforge", version, about = "Helicoid-like minimal surfaces bent along logarithmic spirals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the curve invariants over a few turns.
    Spiral(Common),
    /// Solve, then write report.toml, mesh.obj and mesh.csv.
    Solve(Common),
    /// Solve and report the embeddedness verdict.
    CheckEmbed(Common),
    /// Solve and write mesh.obj and mesh.csv.
    Export(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kappa0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    ns: Option<usize>,
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            kappa0: self.kappa0,
            tau0: self.tau0,
            xi: self.xi,
            delta: self.delta,
            ell: self.ell,
            n_s: self.ns,
            n_theta: self.ntheta,
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

fn execute(cli: Cli) -> Result<String, RunError> {
    // the solver is single-threaded, so the cap is only validated
    thread_cap(std::env::var("SPIRALFORGE_THREADS").ok().as_deref())?;
    let (Command::Spiral(c) | Command::Solve(c) | Command::CheckEmbed(c) | Command::Export(c)) = &cli.command;
    let mut config = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    config.apply(&c.overrides());
    let resolved = config.resolve()?;
    for w in &resolved.warnings {
        eprintln!("warning: {w}");
    }
    match &cli.command {
        Command::Spiral(_) => Ok(run::spiral_table(&resolved)),
        Command::Solve(_) => run::solve_command(&resolved),
        Command::CheckEmbed(_) => run::check_embed_command(&resolved),
        Command::Export(_) => run::export_command(&resolved),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
