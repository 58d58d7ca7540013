//! Build the composite sequences, print them in text form, and measure how
//! their residual error scales with the size of the Hamiltonian perturbation.
//! A slope of 2 means every first-order error cancels.

use cr_dcg::pauli::{local_invariants, trace_fidelity};
use cr_dcg::sequences::{
    clifford_generator_default, compile, ecr, format_sequence, hamiltonian_scaling_slope,
    length2_default, length4, length5_default, robustness_residual, theta0, RobustnessPattern,
};
use cr_dcg::{CRParams, Result};

pub struct Summary {
    pub length5_slope: f64,
    pub generator_slope: f64,
    pub length5_residual: f64,
}

pub fn run() -> Result<Summary> {
    let params = CRParams::calibrated();
    let lambdas = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];
    print!("{}", format_sequence(&length5_default()));
    let mut slopes = Vec::new();
    for seq in [
        length2_default(),
        ecr(),
        length4(std::f64::consts::FRAC_PI_4)?,
        length5_default(),
        clifford_generator_default(),
    ] {
        let r = 1.0 - trace_fidelity(seq.ideal_target(), &compile(&seq, params, None));
        let slope = hamiltonian_scaling_slope(&seq, params, &lambdas);
        println!(
            "{:<20} blocks {}  time {:6.1} ns  infidelity {r:.3e}  slope {slope:.3}",
            seq.name(),
            seq.entangling_blocks(),
            seq.total_entangling_time(params) * 1e9
        );
        slopes.push(slope);
    }
    let (g1, g2) = local_invariants(clifford_generator_default().ideal_target());
    println!(
        "generator local invariants: |G1| = {:.1e}, G2 = {g2:.6}",
        g1.norm()
    );
    let residual = robustness_residual(&RobustnessPattern::length5(theta0()));
    println!(
        "length-5 robustness residual at θ₀ = {theta:.6}: {residual:.1e}",
        theta = theta0()
    );
    Ok(Summary {
        length5_slope: slopes[3],
        generator_slope: slopes[4],
        length5_residual: residual,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
