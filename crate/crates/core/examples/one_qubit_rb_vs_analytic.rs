//! One-qubit randomized benchmarking under quasistatic pulse errors against
//! the closed-form average Clifford infidelity `(5/18)(1 − e^{−δθ²/2})`.

use cr_dcg::noise::{rb_infidelity_analytic, FreezePolicy, OneQubitNoiseModel};
use cr_dcg::rb::{
    clifford_infidelity, fit_decay, rb_run, suggest_lengths, FitOptions, RBConfig, Scheme,
};
use cr_dcg::{CRParams, Result};

pub fn run_with(sequences: usize, deltas: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::new();
    for &dt in deltas {
        let analytic = rb_infidelity_analytic(dt);
        let config = RBConfig {
            qubit_count: 1,
            lengths: suggest_lengths(analytic, 1, 14),
            sequences_per_length: sequences,
            noise: OneQubitNoiseModel::new(dt)?,
            freeze_policy: FreezePolicy::PerClifford,
            params: CRParams::default(),
            scheme: Scheme::Length2,
            seed: 1,
        };
        let fit = fit_decay(&rb_run(&config)?, &FitOptions::default())?;
        let simulated = clifford_infidelity(fit.p, 1);
        println!(
            "δθ = {dt}: analytic {analytic:.4e}, simulated {simulated:.4e} ({:+.1}%)",
            100.0 * (simulated / analytic - 1.0)
        );
        rows.push((dt, analytic, simulated));
    }
    Ok(rows)
}

pub fn run() -> Result<Vec<(f64, f64, f64)>> {
    run_with(300, &[0.1])
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_with(2000, &[0.01, 0.05, 0.1]).map(|_| ())
}
