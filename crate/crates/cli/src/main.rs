use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use betacone_cli::config::{resolve, Experiment, Overrides};
use betacone_cli::experiments::{noise_demo, rho_sweep, tomo, toy};

/// Nonnegative inverse problems under beta-divergences: experiment driver.
#[derive(Parser)]
#[command(name = "betacone", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-detector model: oracle vs solver, certificates, TV profiles.
    Toy(RunArgs),
    /// Tomography under scaled Poisson noise: traces and snapshots.
    Tomo(RunArgs),
    /// TV regularization sweep over rho on a head phantom.
    RhoSweep(RunArgs),
    /// Monte Carlo moments of the four noise models.
    NoiseDemo(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Divergence parameter in [0, 2].
    #[arg(long)]
    beta: Option<f64>,
    /// Iteration budget per solve.
    #[arg(long)]
    iters: Option<usize>,
    /// Dose parameter of the Poisson data (dispersion 1/t).
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated regularization weights.
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key-value config file; flags win over the file.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn into_overrides(self) -> Overrides {
        Overrides {
            beta: self.beta,
            iters: self.iters,
            t: self.t,
            rho: self.rho,
            seed: self.seed,
            out: self.out,
            config: self.config,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::Toy(a) => (Experiment::Toy, a),
        Command::Tomo(a) => (Experiment::Tomo, a),
        Command::RhoSweep(a) => (Experiment::RhoSweep, a),
        Command::NoiseDemo(a) => (Experiment::NoiseDemo, a),
    };
    let result = resolve(experiment, &args.into_overrides()).and_then(|config| {
        eprintln!(
            "running {:?} -> {}",
            experiment,
            config.out_dir.display()
        );
        match experiment {
            Experiment::Toy => toy::run(&config),
            Experiment::Tomo => tomo::run(&config),
            Experiment::RhoSweep => rho_sweep::run(&config),
            Experiment::NoiseDemo => noise_demo::run(&config),
        }
    });
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
