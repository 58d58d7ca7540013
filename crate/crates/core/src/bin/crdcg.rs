//! Command-line driver. Exit codes: 0 success, 2 bad config or arguments,
//! 3 numerical non-convergence, 1 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cr_dcg::experiment::{run, ExperimentConfig, ExperimentKind, RunOptions};

#[derive(Parser)]
#[command(
    name = "crdcg",
    version,
    about = "Dynamically corrected cross-resonance gate experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulated Clifford randomized benchmarking
    Rb(Common),
    /// Error-channel tables of composite sequences
    DeltaU(Common),
    /// T1/T2 decoherence sweep and equal-infidelity contour
    Sweep(Common),
    /// Cancellation checks for one sequence
    Verify(Common),
    /// RB and trace infidelity against one-qubit infidelity
    FidelityScan(Common),
    /// Fit Hamiltonian coefficients to target error channels
    Calibrate(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config; defaults are used when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Config override, e.g. `rb.sequences_per_length=50`; repeatable
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::Rb(c) => (ExperimentKind::Rb, c),
        Command::DeltaU(c) => (ExperimentKind::DeltaU, c),
        Command::Sweep(c) => (ExperimentKind::Sweep, c),
        Command::Verify(c) => (ExperimentKind::Verify, c),
        Command::FidelityScan(c) => (ExperimentKind::FidelityScan, c),
        Command::Calibrate(c) => (ExperimentKind::Calibrate, c),
    };
    let result = ExperimentConfig::load(
        kind,
        common.config.as_deref(),
        &common.overrides,
        common.seed,
    )
    .and_then(|config| {
        run(
            &config,
            &RunOptions {
                out_dir: common.out_dir.clone(),
                workers: common.workers,
            },
        )
    });
    match result {
        Ok(report) => {
            for path in &report.outputs {
                println!("wrote {}", path.display());
            }
            println!("wrote {}", report.sidecar.display());
            for (k, v) in &report.summary {
                println!("{k} = {v}");
            }
            println!("done in {:.2} s", report.wall_time_s);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("crdcg {kind}: {e}");
            if let cr_dcg::Error::Fit { residuals, .. } = &e {
                if !residuals.is_empty() {
                    eprintln!("fit residuals: {residuals:?}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
