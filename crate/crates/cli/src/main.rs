use std::path::PathBuf;
use std::process::ExitCode;

use banditgv_cli::acceptance;
use banditgv_cli::commands::{self, CliError, EXIT_OK};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "banditgv",
    version,
    about = "Gradient-variation bandit convex optimization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured seed and write rows and summary CSVs.
    Run { config: PathBuf },
    /// Run every horizon in `horizons` and fit the regret growth exponent.
    Sweep { config: PathBuf },
    /// Play a bandit bilinear game and write duality-gap trajectories.
    Game { config: PathBuf },
    /// Sampling-gap and coupon-collector statistics of uniform coordinates.
    Diagnose {
        #[arg(long)]
        dim: usize,
        /// Total simulated rounds.
        #[arg(long)]
        trials: usize,
        /// Rounds per independent sequence; one sequence by default.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the acceptance suite and print one line per criterion.
    Accept,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => commands::cmd_run(&config),
        Command::Sweep { config } => commands::cmd_sweep(&config),
        Command::Game { config } => commands::cmd_game(&config),
        Command::Diagnose {
            dim,
            trials,
            horizon,
            seed,
            out,
        } => commands::cmd_diagnose(dim, trials, horizon, seed, &out).map(|d| {
            println!(
                "d={} rounds={} mean wait {:.4} (oracle {}), mean collection {:.4} (oracle {:.4})",
                d.dim, d.rounds, d.mean_wait, d.dim, d.mean_collection, d.coupon_oracle
            );
        }),
        Command::Accept => acceptance::cmd_accept(&mut std::io::stdout()),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            if !matches!(e, CliError::Acceptance(_)) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
