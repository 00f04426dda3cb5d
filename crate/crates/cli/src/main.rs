//! `strategizer`: plan against learners, simulate play, and run the
//! Hamiltonian-cycle reduction from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use strategizer_core::learners::LearnerKind;

use crate::output::CliError;

#[derive(Parser, Debug)]
#[command(name = "strategizer", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value and minmax strategies of a zero-sum game.
    Value {
        game: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Near-optimal constant strategy against the replicator dynamics.
    Plan {
        game: PathBuf,
        #[arg(long, env = "STRATEGIZER_ETA")]
        eta: f64,
        #[arg(long = "T", env = "STRATEGIZER_T")]
        horizon: f64,
        #[arg(long, env = "STRATEGIZER_EPS", default_value_t = 1e-3)]
        eps: f64,
        /// Initial learner history (JSON array or whitespace-separated).
        #[arg(long)]
        h0: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a schedule against a learner and write the trajectory.
    Simulate {
        game: PathBuf,
        #[arg(long, value_enum, env = "STRATEGIZER_LEARNER")]
        learner: Learner,
        /// Schedule file, or one of constant-xstar, alternating, pure:<i>, uniform.
        #[arg(long)]
        schedule: String,
        #[arg(long, env = "STRATEGIZER_ETA")]
        eta: f64,
        /// Horizon; required for built-in schedules, checked against schedule files.
        #[arg(long = "T", env = "STRATEGIZER_T")]
        horizon: Option<f64>,
        /// Planner accuracy for constant-xstar.
        #[arg(long, env = "STRATEGIZER_EPS", default_value_t = 1e-3)]
        eps: f64,
        #[arg(long)]
        h0: Option<PathBuf>,
        #[arg(long, env = "STRATEGIZER_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        /// File stem for `<stem>.csv` and `<stem>.json`.
        #[arg(long, default_value = "trajectory")]
        stem: String,
    },
    /// Reduce a directed graph to an OCDP instance.
    Reduce {
        graph: PathBuf,
        /// Also write the instance with learner payoffs mapped into [0, 1].
        #[arg(long)]
        normalize: bool,
        #[arg(long, env = "STRATEGIZER_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check a claimed Hamiltonian cycle or optimizer sequence.
    Verify { graph: PathBuf, witness: PathBuf },
    /// Exhaustive OCDP search on a graph or an exported instance.
    Brute {
        source: PathBuf,
        #[arg(long, env = "STRATEGIZER_CAP", default_value_t = strategizer_core::ocdp::DEFAULT_BRUTE_CAP)]
        cap: u64,
        /// Write the best sequence as a witness file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded acceptance battery and print a summary table.
    Battery {
        #[arg(long, env = "STRATEGIZER_SEED", default_value_t = 0)]
        seed: u64,
        /// Random games in the planner batteries.
        #[arg(long, env = "STRATEGIZER_COUNT", default_value_t = strategizer_core::battery::DEFAULT_GAME_COUNT)]
        count: usize,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Learner {
    Mwu,
    Br,
    Replicator,
}

impl From<Learner> for LearnerKind {
    fn from(l: Learner) -> Self {
        match l {
            Learner::Mwu => LearnerKind::Mwu,
            Learner::Br => LearnerKind::BestResponse,
            Learner::Replicator => LearnerKind::Replicator,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Value { game, out } => commands::value(&game, out.as_deref()),
        Command::Plan {
            game,
            eta,
            horizon,
            eps,
            h0,
            out,
        } => commands::plan(&game, eta, horizon, eps, h0.as_deref(), out.as_deref()),
        Command::Simulate {
            game,
            learner,
            schedule,
            eta,
            horizon,
            eps,
            h0,
            out_dir,
            stem,
        } => commands::simulate(&commands::SimulateArgs {
            game: &game,
            learner: learner.into(),
            schedule: &schedule,
            eta,
            horizon,
            eps,
            h0: h0.as_deref(),
            out_dir: &out_dir,
            stem: &stem,
        }),
        Command::Reduce {
            graph,
            normalize,
            out_dir,
        } => commands::reduce(&graph, normalize, &out_dir),
        Command::Verify { graph, witness } => commands::verify(&graph, &witness),
        Command::Brute { source, cap, out } => commands::brute(&source, cap, out.as_deref()),
        Command::Battery { seed, count, only, out } => commands::battery(seed, count, &only, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
