//! Two-qubit Clifford randomized benchmarking with noisy one-qubit gates,
//! comparing the length-2 and length-5 entangling schemes.
//!
//! Pass a sequence count to run closer to the reference scale, e.g.
//! `cargo run --release --example randomized_benchmarking -- 200`.

use cr_dcg::noise::{FreezePolicy, OneQubitNoiseModel};
use cr_dcg::rb::{
    clifford_infidelity, fit_decay, rb_run, suggest_lengths, FitOptions, RBConfig, Scheme,
};
use cr_dcg::{CRParams, Result};

pub fn run_with(sequences: usize) -> Result<Vec<(Scheme, f64)>> {
    let noise = OneQubitNoiseModel::from_infidelity(3e-4)?;
    let mut out = Vec::new();
    for scheme in [Scheme::Length2, Scheme::Length5] {
        let config = RBConfig {
            qubit_count: 2,
            lengths: suggest_lengths(3e-3, 2, 14),
            sequences_per_length: sequences,
            noise,
            freeze_policy: FreezePolicy::PerClifford,
            params: CRParams::calibrated().clone(),
            scheme,
            seed: 1,
        };
        let curve = rb_run(&config)?;
        let fit = fit_decay(&curve, &FitOptions::default())?;
        let r = clifford_infidelity(fit.p, 2);
        println!(
            "{:?}: a = {:.3}, p = {:.5}, b = {:.3}, Clifford infidelity {r:.3e}",
            scheme, fit.a, fit.p, fit.b
        );
        for pt in &curve.points {
            println!(
                "  k = {:4}  survival {:.4} ± {:.4}",
                pt.k, pt.mean_survival, pt.stderr
            );
        }
        out.push((scheme, r));
    }
    Ok(out)
}

pub fn run() -> Result<Vec<(Scheme, f64)>> {
    run_with(40)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(40);
    run_with(n).map(|_| ())
}
