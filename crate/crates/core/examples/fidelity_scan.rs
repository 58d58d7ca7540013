//! Averaged trace infidelity of the two entangling schemes as the one-qubit
//! gates get worse: length-5 wins with good one-qubit gates, length-2 with
//! poor ones.

use cr_dcg::noise::{FreezePolicy, OneQubitNoiseModel};
use cr_dcg::rb::{coherent_trace_infidelity, Scheme};
use cr_dcg::{CRParams, Result};

pub fn run_with(samples: usize) -> Result<Vec<(f64, f64, f64)>> {
    let params = CRParams::calibrated();
    let mut rows = Vec::new();
    println!("{:>10} {:>12} {:>12}", "r_1Q", "length-2", "length-5");
    for r1q in [1e-5, 3e-5, 1e-4, 3e-4, 1e-3] {
        let noise = OneQubitNoiseModel::from_infidelity(r1q)?;
        let l2 = coherent_trace_infidelity(
            Scheme::Length2,
            params,
            &noise,
            FreezePolicy::PerClifford,
            samples,
            1,
        );
        let l5 = coherent_trace_infidelity(
            Scheme::Length5,
            params,
            &noise,
            FreezePolicy::PerClifford,
            samples,
            1,
        );
        println!("{r1q:>10.1e} {l2:>12.3e} {l5:>12.3e}");
        rows.push((r1q, l2, l5));
    }
    Ok(rows)
}

pub fn run() -> Result<Vec<(f64, f64, f64)>> {
    run_with(400)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_with(2000).map(|_| ())
}
