//! Open-system evolution of composite sequences under relaxation and dephasing.
//!
//! Density matrices are column-stacked, so `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.
//! The generator is
//! `−i[H, ρ] + (1/T1) Σ_j D[σ_j⁻]ρ + (1/T2) Σ_j D[Π_j¹]ρ`.

mod sweep;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::cr_model::{effective_hamiltonian, CRParams, DriveSign};
use crate::linalg::{c, kron2, kron4, unvec4, vec4, Mat16, Mat2, Mat4, ONE, ZERO};
use crate::pauli::{Pauli, TwoQubitPauli, Unitary4};
use crate::sequences::{element_unitary, CompositeSequence, SequenceElement};
use crate::units::ns;
use crate::{Error, Result};

pub use sweep::{
    diagonal_crossing, extract_contour, log_grid, scheme_infidelities, sweep, SweepConfig,
    SweepPoint, SweepResult,
};

pub type Superop16 = Mat16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceParams {
    /// Seconds; `f64::INFINITY` disables relaxation.
    pub t1: f64,
    /// Seconds; `f64::INFINITY` disables dephasing.
    pub t2: f64,
    pub one_qubit_gate_time: f64,
}

impl DecoherenceParams {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        let d = DecoherenceParams {
            t1,
            t2,
            one_qubit_gate_time: ns(30.0),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn closed() -> Self {
        DecoherenceParams {
            t1: f64::INFINITY,
            t2: f64::INFINITY,
            one_qubit_gate_time: ns(30.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t1 > 0.0 && self.t2 > 0.0) {
            return Err(Error::InvalidParams("T1 and T2 must be positive".into()));
        }
        if !(self.one_qubit_gate_time >= 0.0 && self.one_qubit_gate_time.is_finite()) {
            return Err(Error::InvalidParams(
                "one-qubit gate time must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    /// `T2 ≤ 2 T1`.
    pub fn is_physical(&self) -> bool {
        self.t2 <= 2.0 * self.t1
    }

    fn rate(t: f64) -> f64 {
        if t.is_infinite() {
            0.0
        } else {
            1.0 / t
        }
    }
}

/// `vec(A ρ)`.
pub fn spre(a: &Mat4) -> Superop16 {
    kron4(&Mat4::identity(), a)
}

/// `vec(ρ A)`.
pub fn spost(a: &Mat4) -> Superop16 {
    kron4(&a.transpose(), &Mat4::identity())
}

/// Superoperator of `ρ ↦ U ρ U†`.
pub fn unitary_superop(u: &Mat4) -> Superop16 {
    kron4(&u.conjugate(), u)
}

/// `D[A]ρ = AρA† − ½A†Aρ − ½ρA†A`.
pub fn dissipator(a: &Mat4) -> Superop16 {
    let ada = a.adjoint() * a;
    kron4(&a.conjugate(), a) - (spre(&ada) + spost(&ada)) * c(0.5, 0.0)
}

fn lowering() -> Mat2 {
    Mat2::new(ZERO, ONE, ZERO, ZERO)
}

fn excited_projector() -> Mat2 {
    Mat2::new(ZERO, ZERO, ZERO, ONE)
}

pub fn liouvillian(h: &Mat4, dec: &DecoherenceParams) -> Superop16 {
    let id = Mat2::identity();
    let mut l = (spre(h) - spost(h)) * c(0.0, -1.0);
    let g1 = DecoherenceParams::rate(dec.t1);
    let g2 = DecoherenceParams::rate(dec.t2);
    if g1 > 0.0 {
        let d = dissipator(&kron2(&lowering(), &id)) + dissipator(&kron2(&id, &lowering()));
        l += d * c(g1, 0.0);
    }
    if g2 > 0.0 {
        let d = dissipator(&kron2(&excited_projector(), &id))
            + dissipator(&kron2(&id, &excited_projector()));
        l += d * c(g2, 0.0);
    }
    l
}

/// `exp(L t)` for a constant generator.
pub fn segment_superop(h: &Mat4, dec: &DecoherenceParams, t: f64) -> Superop16 {
    (liouvillian(h, dec) * c(t, 0.0)).exp()
}

pub fn propagate_segment(rho: &Mat4, h: &Mat4, dec: &DecoherenceParams, t: f64) -> Mat4 {
    apply(&segment_superop(h, dec, t), rho)
}

pub fn apply(s: &Superop16, rho: &Mat4) -> Mat4 {
    unvec4(&(s * vec4(rho)))
}

fn is_physical_pulse(e: &SequenceElement) -> bool {
    match e {
        SequenceElement::Echo { pauli } => {
            matches!(pauli.first, Pauli::X | Pauli::Y)
                || matches!(pauli.second, Pauli::X | Pauli::Y)
        }
        SequenceElement::LocalX { angle, .. } => *angle != 0.0,
        _ => false,
    }
}

/// Channel of a sequence: entangling blocks evolve under the full Lindblad
/// generator; physical one-qubit gates are instantaneous and followed by an
/// idle of `one_qubit_gate_time`; virtual Z gates are instantaneous.
pub fn sequence_channel(
    seq: &CompositeSequence,
    params: &CRParams,
    dec: &DecoherenceParams,
) -> Superop16 {
    let idle = segment_superop(&Mat4::zeros(), dec, dec.one_qubit_gate_time);
    let mut cache: Vec<((u64, DriveSign), Superop16)> = Vec::new();
    let mut total = Superop16::identity();
    for e in seq.elements() {
        let step = match e {
            SequenceElement::Entangling { theta, drive_sign } => {
                let key = (theta.to_bits(), *drive_sign);
                if let Some((_, s)) = cache.iter().find(|(k, _)| *k == key) {
                    *s
                } else {
                    let h = effective_hamiltonian(&params.with_drive(*drive_sign));
                    let s = segment_superop(&h, dec, params.block_duration(*theta));
                    cache.push((key, s));
                    s
                }
            }
            other => {
                let u = unitary_superop(&element_unitary(other, params, None));
                if is_physical_pulse(other) {
                    idle * u
                } else {
                    u
                }
            }
        };
        total = step * total;
    }
    total
}

/// `(1/16)[4 + (1/5) Σ_{σ ≠ II} tr(U σ U† M(σ))]`.
pub fn average_fidelity(ideal: &Unitary4, channel: &Superop16) -> f64 {
    let u = ideal.matrix();
    let sum: crate::linalg::C64 = TwoQubitPauli::all()
        .filter(|p| !p.is_identity())
        .map(|p| {
            let s = p.matrix();
            (u * s * u.adjoint() * apply(channel, &s)).trace()
        })
        .sum();
    (4.0 + sum.re / 5.0) / 16.0
}

pub fn average_infidelity(ideal: &Unitary4, channel: &Superop16) -> f64 {
    1.0 - average_fidelity(ideal, channel)
}

/// Largest deviation of `Tr(M(|i⟩⟨j|))` from `δ_ij`.
pub fn trace_preservation_defect(channel: &Superop16) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let mut e = Mat4::zeros();
            e[(i, j)] = ONE;
            let t = apply(channel, &e).trace();
            let expected = if i == j { ONE } else { ZERO };
            worst = worst.max((t - expected).norm());
        }
    }
    worst
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ M(|i⟩⟨j|)`.
pub fn choi(channel: &Superop16) -> Superop16 {
    let mut out = Superop16::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let mut e = Mat4::zeros();
            e[(i, j)] = ONE;
            let m = apply(channel, &e);
            for r in 0..4 {
                for col in 0..4 {
                    out[(4 * i + r, 4 * j + col)] = m[(r, col)];
                }
            }
        }
    }
    out
}

/// Smallest eigenvalue of the Hermitian part of the Choi matrix.
pub fn choi_min_eigenvalue(channel: &Superop16) -> f64 {
    let ch = choi(channel);
    let herm = (ch + ch.adjoint()) * c(0.5, 0.0);
    SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::sequences::{compile, length2_default};

    fn basis(i: usize, j: usize) -> Mat4 {
        let mut m = Mat4::zeros();
        m[(i, j)] = ONE;
        m
    }

    #[test]
    fn dissipator_examples() {
        assert_eq!(dissipator(&Mat4::zeros()), Superop16::zeros());
        let sm1 = kron2(&lowering(), &Mat2::identity());
        // |1⟩⟨1| ⊗ |0⟩⟨0| is basis index 2
        let out = apply(&dissipator(&sm1), &basis(2, 2));
        assert!(max_abs_diff(&out, &(basis(0, 0) - basis(2, 2))) < 1e-15);
    }

    #[test]
    fn closed_generator_vanishes() {
        assert_eq!(
            liouvillian(&Mat4::zeros(), &DecoherenceParams::closed()),
            Superop16::zeros()
        );
    }

    #[test]
    fn relaxation_and_coherence_rates() {
        let (t1, t2) = (50e-6, 70e-6);
        let dec = DecoherenceParams::new(t1, t2).unwrap();
        let t = 20e-6;
        let rho = propagate_segment(&basis(3, 3), &Mat4::zeros(), &dec, t);
        assert!((rho[(3, 3)].re - (-2.0 * t / t1).exp()).abs() < 1e-12);
        // qubit-2 coherence between |00⟩ and |01⟩
        let plus = (basis(0, 0) + basis(0, 1) + basis(1, 0) + basis(1, 1)) * c(0.5, 0.0);
        let rho = propagate_segment(&plus, &Mat4::zeros(), &dec, t);
        let rate = 1.0 / (2.0 * t1) + 1.0 / (2.0 * t2);
        assert!((rho[(0, 1)].re - 0.5 * (-rate * t).exp()).abs() < 1e-12);
    }

    #[test]
    fn semigroup() {
        let dec = DecoherenceParams::new(30e-6, 40e-6).unwrap();
        let h = effective_hamiltonian(CRParams::calibrated());
        let full = segment_superop(&h, &dec, 80e-9);
        let half = segment_superop(&h, &dec, 40e-9);
        assert!(max_abs_diff(&(half * half), &full) < 1e-12);
        assert!(max_abs_diff(&segment_superop(&h, &dec, 0.0), &Superop16::identity()) < 1e-15);
    }

    #[test]
    fn closed_limit_is_unitary_conjugation() {
        let seq = length2_default();
        let p = CRParams::calibrated();
        let s = sequence_channel(&seq, p, &DecoherenceParams::closed());
        let u = compile(&seq, p, None);
        assert!(max_abs_diff(&s, &unitary_superop(u.matrix())) < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let u = length2_default().ideal_target().clone();
        assert!((average_fidelity(&u, &unitary_superop(u.matrix())) - 1.0).abs() < 1e-14);
        // fully depolarizing: ρ ↦ Tr(ρ) I/4
        let mut dep = Superop16::zeros();
        for a in 0..4 {
            for b in 0..4 {
                dep[(5 * b, 5 * a)] = c(0.25, 0.0);
            }
        }
        assert!((average_fidelity(&u, &dep) - 0.25).abs() < 1e-14);
        let eps = 0.03;
        let err = Unitary4::pauli_rotation(TwoQubitPauli::ZX, eps);
        let noisy = unitary_superop((u * err).matrix());
        let expected = 1.0 - 0.8 * (eps / 2.0).sin().powi(2);
        assert!((average_fidelity(&u, &noisy) - expected).abs() < 1e-14);
    }

    #[test]
    fn channels_are_cptp() {
        let dec = DecoherenceParams::new(100e-6, 150e-6).unwrap();
        let s = sequence_channel(&length2_default(), CRParams::calibrated(), &dec);
        assert!(trace_preservation_defect(&s) < 1e-12);
        assert!(choi_min_eigenvalue(&s) > -1e-10);
    }
}
