//! Exhaustive search for echo Paulis that cancel a set of error channels
//! while commuting with the entangler, and the su(2) ⊕ su(2) structure of
//! the operators commuting with it.

use cr_dcg::sequences::{echo_search, su2_subspace};
use cr_dcg::{Result, TwoQubitPauli};

pub struct Summary {
    pub for_ix: Vec<TwoQubitPauli>,
    pub for_all_commuting: Vec<TwoQubitPauli>,
}

pub fn run() -> Result<Summary> {
    let zx = TwoQubitPauli::ZX;
    let labels = |v: &[TwoQubitPauli]| {
        v.iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let for_ix = echo_search(&["IX".parse()?], zx)?;
    println!("echoes cancelling IX: {}", labels(&for_ix));
    let pair = echo_search(&["IX".parse()?, "ZI".parse()?], zx)?;
    println!("echoes cancelling IX and ZI: {}", labels(&pair));
    let commuting: Vec<TwoQubitPauli> = TwoQubitPauli::all()
        .filter(|p| !p.is_identity() && *p != zx && p.commutes_with(zx))
        .collect();
    let for_all = echo_search(&commuting, zx)?;
    println!(
        "echoes cancelling all of {}: [{}]",
        labels(&commuting),
        labels(&for_all)
    );
    for p in &commuting {
        let axis = su2_subspace(zx, *p).map_or("-", |i| ["X̃", "Ỹ", "Z̃"][i]);
        println!("  {p} lies along {axis}");
    }
    Ok(Summary {
        for_ix,
        for_all_commuting: for_all,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
