use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use normflow::harness::{self, verify, Method};
use normflow::Result;

#[derive(Parser)]
#[command(name = "normflow", version, about = "Norm-preserving nonlocal parabolic flow solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate an evolution law from a config file
    Flow {
        #[arg(long)]
        config: PathBuf,
        /// Override the seed recorded in the config
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compute a stationary ground state
    GroundState {
        #[arg(long)]
        config: PathBuf,
        /// shoot | minimize | flow
        #[arg(long, default_value = "shoot")]
        method: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the end-to-end verification checks
    Verify {
        /// fast | full
        #[arg(long, default_value = "fast")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Continue a run from the checkpoint named in the config
    Resume {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::error_exit_code(&e) as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Flow { config, seed } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let traj = harness::cli_flow(&cfg)?;
            let last = traj.rows.last().expect("trajectory has at least one row");
            println!(
                "{} at t = {:.6} after {} steps: F = {:.10e}, mass = {:.10e}, residual = {:.3e}",
                traj.termination.label(),
                traj.final_state.t,
                traj.final_state.step_index,
                last.f,
                last.mass,
                last.residual
            );
            Ok(harness::exit_code(&traj.termination) as u8)
        }
        Cmd::Resume { config, seed } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let traj = harness::cli_resume(&cfg)?;
            let last = traj.rows.last().expect("trajectory has at least one row");
            println!(
                "{} at t = {:.6} after {} steps: F = {:.10e}, mass = {:.10e}, residual = {:.3e}",
                traj.termination.label(),
                traj.final_state.t,
                traj.final_state.step_index,
                last.f,
                last.mass,
                last.residual
            );
            Ok(harness::exit_code(&traj.termination) as u8)
        }
        Cmd::GroundState { config, method, seed } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let method = Method::parse(&method)?;
            let state = harness::cli_ground_state(&cfg, method)?;
            println!(
                "ground state ({:?}): mass = {:.10e}, mu = {:.10e}, residual = {:.3e}",
                state.provenance, state.mass, state.mu_q, state.residual_l2
            );
            Ok(0)
        }
        Cmd::Verify { suite, seed } => {
            let suite = verify::Suite::parse(&suite)?;
            let report = verify::run_all(suite, seed);
            print!("{}", report.render());
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}
