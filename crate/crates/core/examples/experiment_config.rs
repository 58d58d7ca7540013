//! Drive an experiment from a TOML config, as the `crdcg` binary does, and
//! read its CSV back.

use cr_dcg::experiment::output::{read_rows, DeltaURow};
use cr_dcg::experiment::{run as run_experiment, ExperimentConfig, ExperimentKind, RunOptions};
use cr_dcg::Result;

const CONFIG: &str = r#"
experiment = "delta-u"

[delta_u]
sequences = ["length2", "ecr", "clifford-generator"]
"#;

pub fn run() -> Result<Vec<DeltaURow>> {
    let config =
        ExperimentConfig::from_source(ExperimentKind::DeltaU, CONFIG, "inline", true, &[], None)?;
    let out_dir = std::env::temp_dir().join(format!("crdcg-example-{}", std::process::id()));
    let report = run_experiment(
        &config,
        &RunOptions {
            out_dir: out_dir.clone(),
            workers: Some(1),
        },
    )?;
    let rows: Vec<DeltaURow> = read_rows(&report.outputs[0])?;
    for r in rows.iter().filter(|r| r.coefficient.abs() > 1e-6) {
        println!("{:<20} {}  {:+.3e}", r.sequence, r.channel, r.coefficient);
    }
    print!("{}", std::fs::read_to_string(&report.sidecar)?);
    std::fs::remove_dir_all(out_dir)?;
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
