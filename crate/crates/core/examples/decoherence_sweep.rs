//! Lindblad evolution of the length-2 and length-5 Clifford generators over a
//! T1/T2 grid, and the diagonal point where the two schemes are equally good.

use cr_dcg::lindblad::{
    choi_min_eigenvalue, diagonal_crossing, scheme_infidelities, sequence_channel, sweep,
    trace_preservation_defect, DecoherenceParams, SweepConfig,
};
use cr_dcg::sequences::clifford_generator_default;
use cr_dcg::units::{ms, ns};
use cr_dcg::{CRParams, Result};

pub struct Summary {
    pub crossing_s: Option<f64>,
    pub contour_points: usize,
}

pub fn run() -> Result<Summary> {
    let params = CRParams::calibrated();
    let dec = DecoherenceParams::new(0.23e-3, 0.38e-3)?;
    let (r2, r5) = scheme_infidelities(params, &dec);
    println!("T1 = 0.23 ms, T2 = 0.38 ms: length-2 {r2:.3e}, length-5 {r5:.3e}");

    let channel = sequence_channel(&clifford_generator_default(), params, &dec);
    println!(
        "generator channel: trace defect {:.1e}, min Choi eigenvalue {:.1e}",
        trace_preservation_defect(&channel),
        choi_min_eigenvalue(&channel)
    );

    let result = sweep(&SweepConfig::square(
        ms(0.01),
        ms(100.0),
        12,
        params.clone(),
    ));
    println!("contour ({} points):", result.contour.len());
    for (t1, t2) in &result.contour {
        println!("  T1 = {:.3} ms, T2 = {:.3} ms", t1 * 1e3, t2 * 1e3);
    }
    let crossing = diagonal_crossing(params, ns(30.0), ms(0.01), ms(100.0));
    if let Some(t) = crossing {
        println!("equal infidelity on T1 = T2 at {:.3} ms", t * 1e3);
    }
    Ok(Summary {
        crossing_s: crossing,
        contour_points: result.contour.len(),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
