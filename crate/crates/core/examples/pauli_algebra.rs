//! Two-qubit Pauli products, commutation, trace fidelity and the local
//! invariants that identify a CNOT-equivalent gate.

use std::f64::consts::PI;

use cr_dcg::pauli::{local_invariants, trace_fidelity};
use cr_dcg::{Result, TwoQubitPauli, Unitary4};

pub struct Summary {
    pub commuting_with_zx: usize,
    pub zx_rotation_invariants: (f64, f64),
}

pub fn run() -> Result<Summary> {
    let zx: TwoQubitPauli = "ZX".parse()?;
    let xz: TwoQubitPauli = "XZ".parse()?;
    let (phase, p) = zx.product(xz);
    println!("ZX · XZ = {} {p}", phase.value());
    println!("ZX and XZ commute: {}", zx.commutes_with(xz));

    let commuting: Vec<String> = TwoQubitPauli::all()
        .filter(|q| !q.is_identity() && q.commutes_with(zx))
        .map(|q| q.to_string())
        .collect();
    println!("commute with ZX: {}", commuting.join(" "));

    let gate = Unitary4::pauli_rotation(zx, PI / 2.0);
    let (g1, g2) = local_invariants(&gate);
    println!("(π/2)_ZX local invariants: G1 = {g1:.3}, G2 = {g2:.3}");

    let slightly_off = Unitary4::pauli_rotation(zx, PI / 2.0 + 0.01);
    println!(
        "trace infidelity of a 0.01 rad over-rotation: {:.3e}",
        1.0 - trace_fidelity(&gate, &slightly_off)
    );
    Ok(Summary {
        commuting_with_zx: commuting.len(),
        zx_rotation_invariants: (g1.norm(), g2),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
