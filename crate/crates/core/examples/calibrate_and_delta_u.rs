//! Calibrate the Hamiltonian coefficients against target length-2 error
//! channels, then print the full error tables of the length-2 and length-5
//! sequences.

use cr_dcg::cr_model::{calibrate_h, CalibrationTarget};
use cr_dcg::sequences::{compile, length2_default, length5_default};
use cr_dcg::units::rad_per_s_to_mhz;
use cr_dcg::{ErrorChannelMap, Result, TwoQubitPauli};

pub struct Summary {
    pub length2: ErrorChannelMap,
    pub length5: ErrorChannelMap,
}

pub fn run() -> Result<Summary> {
    let target = CalibrationTarget::default();
    let params = calibrate_h(&target)?;
    println!(
        "h_IZ = {:.4} MHz, h_ZX = {:.4} MHz, h_ZZ = {:.4} MHz",
        rad_per_s_to_mhz(params.h_iz),
        rad_per_s_to_mhz(params.h_zx),
        rad_per_s_to_mhz(params.h_zz)
    );
    let table = |seq: cr_dcg::CompositeSequence| {
        let m = ErrorChannelMap::between(seq.ideal_target(), &compile(&seq, &params, None));
        println!("δU for {}:", seq.name());
        for p in TwoQubitPauli::all() {
            let v = m.reported(p);
            if v.abs() > 1e-7 {
                println!("  {p}  {v:+.3e}");
            }
        }
        m
    };
    Ok(Summary {
        length2: table(length2_default()),
        length5: table(length5_default()),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
