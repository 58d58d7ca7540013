//! Exhaustive echo search and the `su(2) ⊕ su(2)` decomposition of the
//! operators commuting with an entangler.

use crate::linalg::{c, Mat4};
use crate::pauli::{Pauli, TwoQubitPauli};
use crate::{Error, Result};

/// Every non-identity Pauli that commutes with `entangler` and anticommutes
/// with each member of `errors`.
pub fn echo_search(
    errors: &[TwoQubitPauli],
    entangler: TwoQubitPauli,
) -> Result<Vec<TwoQubitPauli>> {
    if let Some(bad) = errors.iter().find(|e| !e.commutes_with(entangler)) {
        return Err(Error::InvalidParams(format!(
            "error channel {bad} anticommutes with the entangler {entangler}"
        )));
    }
    Ok(TwoQubitPauli::all()
        .filter(|p| !p.is_identity() && p.commutes_with(entangler))
        .filter(|p| errors.iter().all(|e| !p.commutes_with(*e)))
        .collect())
}

/// The `(X̃, Ỹ, Z̃)` generators of one `su(2)` summand.
pub type Su2Triple = [Mat4; 3];

fn cyclic_after(m: Pauli) -> (Pauli, Pauli) {
    match m {
        Pauli::X => (Pauli::Y, Pauli::Z),
        Pauli::Y => (Pauli::Z, Pauli::X),
        _ => (Pauli::X, Pauli::Y),
    }
}

fn third(m: Pauli, n: Pauli) -> Pauli {
    [Pauli::X, Pauli::Y, Pauli::Z]
        .into_iter()
        .find(|q| *q != m && *q != n)
        .expect("three distinct Paulis")
}

/// Labels `(X̃, Ỹ, Z̃)`, each a pair of Paulis, and the relative sign of the
/// second Pauli in the `+` triple. The `−` triple flips that sign.
fn generator_labels(entangler: TwoQubitPauli) -> Result<[(TwoQubitPauli, TwoQubitPauli, f64); 3]> {
    let (a, b) = (entangler.first, entangler.second);
    if a == Pauli::I || b == Pauli::I {
        return Err(Error::InvalidParams(format!(
            "entangler {entangler} must act on both qubits"
        )));
    }
    let t = TwoQubitPauli::new;
    if a == b {
        let m = a;
        let (n, p) = cyclic_after(m);
        Ok([
            (t(m, Pauli::I), t(Pauli::I, m), 1.0),
            (t(n, p), t(p, n), 1.0),
            (t(p, p), t(n, n), -1.0),
        ])
    } else {
        let (m, n) = (a, b);
        let p = third(m, n);
        Ok([
            (t(m, Pauli::I), t(Pauli::I, n), 1.0),
            (t(n, p), t(p, m), -1.0),
            (t(p, p), t(n, m), 1.0),
        ])
    }
}

/// The `+` and `−` generator triples for `entangler`.
pub fn su2_generators(entangler: TwoQubitPauli) -> Result<[Su2Triple; 2]> {
    let labels = generator_labels(entangler)?;
    let triple = |s: f64| -> Su2Triple {
        labels.map(|(p, q, sign)| (p.matrix() + q.matrix() * c(s * sign, 0.0)) * c(0.5, 0.0))
    };
    Ok([triple(1.0), triple(-1.0)])
}

/// Which of the three `su(2)` directions a commuting Pauli lies in:
/// 0 for `X̃`, 1 for `Ỹ`, 2 for `Z̃`. `None` for the entangler, the identity,
/// and anticommuting Paulis.
pub fn su2_subspace(entangler: TwoQubitPauli, p: TwoQubitPauli) -> Option<usize> {
    let labels = generator_labels(entangler).ok()?;
    labels.iter().position(|(a, b, _)| *a == p || *b == p)
}
