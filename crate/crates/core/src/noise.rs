//! Quasistatic coherent noise on physical one-qubit pulses.
//!
//! A noisy pulse is `exp(-i ε/2 r̂·σ) X_θ` with `r̂` drawn from the cube
//! `[−1, 1]³` and normalized, and `ε ~ N(0, δθ²)`. Virtual Z rotations are
//! exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::clifford::one_qubit::{self, Token, ORDER};
use crate::linalg::{su2_rotation, Mat2};
use crate::sequences::Qubit;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneQubitNoiseModel {
    pub delta_theta: f64,
}

impl OneQubitNoiseModel {
    pub fn new(delta_theta: f64) -> Result<Self> {
        if !(delta_theta >= 0.0 && delta_theta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "δθ must be non-negative, got {delta_theta}"
            )));
        }
        Ok(OneQubitNoiseModel { delta_theta })
    }

    pub fn from_infidelity(r: f64) -> Result<Self> {
        Self::new(delta_theta_for_infidelity(r)?)
    }
}

/// How perturbations are shared within one frozen realization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreezePolicy {
    /// An independent perturbation for each of the 20 pulsed one-qubit Cliffords.
    #[default]
    PerClifford,
    /// One perturbation per pulse kind (`X_{π/2}`, `X_{−π/2}`, `X_π`, `X_{−π}`),
    /// shared by every Clifford using that pulse.
    PerGateKind,
}

/// Draws `exp(-i ε/2 r̂·σ)`.
pub fn sample_perturbation<R: Rng + ?Sized>(delta_theta: f64, rng: &mut R) -> Mat2 {
    let r = loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.0 {
            break [v[0] / n, v[1] / n, v[2] / n];
        }
    };
    let eps = Normal::new(0.0, delta_theta)
        .expect("δθ is finite and non-negative")
        .sample(rng);
    su2_rotation(r, eps)
}

/// Average one-qubit Clifford fidelity `(13 + 5 e^{−δθ²/2}) / 18`.
pub fn rb_fidelity_analytic(delta_theta: f64) -> f64 {
    (13.0 + 5.0 * (-delta_theta * delta_theta / 2.0).exp()) / 18.0
}

/// `(5/18)(1 − e^{−δθ²/2})`.
pub fn rb_infidelity_analytic(delta_theta: f64) -> f64 {
    1.0 - rb_fidelity_analytic(delta_theta)
}

/// Fixed error angle with virtual Z gates: `(13 + 5 cos θ) / 18`.
pub fn fixed_angle_fidelity_vz(theta: f64) -> f64 {
    (13.0 + 5.0 * theta.cos()) / 18.0
}

/// Fixed error angle on every gate: `(2 + cos θ) / 3`.
pub fn fixed_angle_fidelity(theta: f64) -> f64 {
    (2.0 + theta.cos()) / 3.0
}

/// Inverts [`rb_infidelity_analytic`]: `δθ = √(−2 ln(1 − 18r/5))`.
pub fn delta_theta_for_infidelity(r: f64) -> Result<f64> {
    if !(0.0..5.0 / 18.0).contains(&r) {
        return Err(Error::UnreachableInfidelity(r));
    }
    Ok((-2.0 * (1.0 - 18.0 * r / 5.0).ln()).sqrt())
}

/// Frozen pre-errors for each one-qubit Clifford on each qubit.
///
/// The noisy element is `pre_error · ideal`: the pulse error is moved through
/// the virtual Z rotations that follow it.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseRealization {
    pre_errors: [[Mat2; ORDER]; 2],
    generic: [Mat2; 2],
}

impl NoiseRealization {
    pub fn noiseless() -> Self {
        NoiseRealization {
            pre_errors: [[Mat2::identity(); ORDER]; 2],
            generic: [Mat2::identity(); 2],
        }
    }

    pub fn pre_error(&self, qubit: Qubit, clifford: usize) -> &Mat2 {
        &self.pre_errors[qubit.index()][clifford]
    }

    /// Perturbation for physical rotations outside the Clifford set.
    pub fn generic(&self, qubit: Qubit) -> &Mat2 {
        &self.generic[qubit.index()]
    }

    /// Noisy matrix of one-qubit Clifford `clifford` on `qubit`.
    pub fn noisy_clifford(&self, qubit: Qubit, clifford: usize) -> Mat2 {
        self.pre_error(qubit, clifford) * one_qubit::group().get(clifford).matrix
    }
}

fn kind_index(token: Token) -> usize {
    match token {
        Token::X(1) => 0,
        Token::X(-1) => 1,
        Token::X(2) => 2,
        _ => 3,
    }
}

/// Draws one frozen realization. The two qubits get independent draws.
pub fn freeze_realization<R: Rng + ?Sized>(
    model: &OneQubitNoiseModel,
    policy: FreezePolicy,
    rng: &mut R,
) -> NoiseRealization {
    let group = one_qubit::group();
    let mut out = NoiseRealization::noiseless();
    for q in 0..2 {
        match policy {
            FreezePolicy::PerClifford => {
                for (i, e) in group.elements().iter().enumerate() {
                    if e.pulse.is_some() {
                        out.pre_errors[q][i] = sample_perturbation(model.delta_theta, rng);
                    }
                }
            }
            FreezePolicy::PerGateKind => {
                let kinds: Vec<Mat2> = (0..4)
                    .map(|_| sample_perturbation(model.delta_theta, rng))
                    .collect();
                for (i, e) in group.elements().iter().enumerate() {
                    if let Some(pulse) = e.pulse {
                        let frame = e.after_pulse;
                        out.pre_errors[q][i] = frame * kinds[kind_index(pulse)] * frame.adjoint();
                    }
                }
            }
        }
        out.generic[q] = sample_perturbation(model.delta_theta, rng);
    }
    out
}

/// Independent generator for stream `stream` under `master` seed.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_defect};

    #[test]
    fn zero_width_is_identity() {
        let mut rng = stream_rng(1, 0);
        let e = sample_perturbation(0.0, &mut rng);
        assert!(max_abs_diff(&e, &Mat2::identity()) < 1e-15);
        let r = freeze_realization(
            &OneQubitNoiseModel::new(0.0).unwrap(),
            FreezePolicy::PerClifford,
            &mut rng,
        );
        assert_eq!(r, NoiseRealization::noiseless());
    }

    #[test]
    fn draws_are_special_unitary() {
        let mut rng = stream_rng(2, 0);
        for _ in 0..100 {
            let e = sample_perturbation(0.3, &mut rng);
            assert!(unitarity_defect(&e) < 1e-14);
            assert!((e.determinant() - crate::linalg::ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn analytic_values() {
        assert_eq!(rb_fidelity_analytic(0.0), 1.0);
        assert!((fixed_angle_fidelity_vz(std::f64::consts::PI) - 8.0 / 18.0).abs() < 1e-15);
        let dt = delta_theta_for_infidelity(3e-4).unwrap();
        assert!((dt - 0.046489).abs() < 1e-6);
        assert!((rb_infidelity_analytic(dt) - 3e-4).abs() < 1e-12);
        assert_eq!(delta_theta_for_infidelity(0.0).unwrap(), 0.0);
        assert!(matches!(
            delta_theta_for_infidelity(5.0 / 18.0),
            Err(Error::UnreachableInfidelity(_))
        ));
        assert!(delta_theta_for_infidelity(-1e-3).is_err());
    }

    #[test]
    fn seeding() {
        let model = OneQubitNoiseModel::new(0.05).unwrap();
        for policy in [FreezePolicy::PerClifford, FreezePolicy::PerGateKind] {
            let a = freeze_realization(&model, policy, &mut stream_rng(9, 3));
            let b = freeze_realization(&model, policy, &mut stream_rng(9, 3));
            let c = freeze_realization(&model, policy, &mut stream_rng(9, 4));
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn per_kind_shares_pulse_error() {
        let model = OneQubitNoiseModel::new(0.2).unwrap();
        let r = freeze_realization(&model, FreezePolicy::PerGateKind, &mut stream_rng(5, 0));
        let g = one_qubit::group();
        let x_half: Vec<usize> = (0..ORDER)
            .filter(|&i| g.get(i).pulse == Some(Token::X(1)))
            .collect();
        let pulse_error = |i: usize| {
            g.get(i).after_pulse.adjoint() * r.pre_error(Qubit::One, i) * g.get(i).after_pulse
        };
        for &i in &x_half[1..] {
            assert!(max_abs_diff(&pulse_error(i), &pulse_error(x_half[0])) < 1e-14);
        }
    }

    #[test]
    fn monte_carlo_gate_infidelity_matches_closed_form() {
        // averaged over the 20 pulsed Cliffords and 4 exact ones
        let dt = 0.1;
        let mut rng = stream_rng(11, 0);
        let n = 200_000;
        let mean: f64 = (0..n)
            .map(|_| {
                let e = sample_perturbation(dt, &mut rng);
                1.0 - (e.trace() / 2.0).norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        // twirled process infidelity of one noisy gate, weighted by 20/24, as average-gate infidelity (×2/3)
        let predicted = rb_infidelity_analytic(dt);
        let simulated = mean * (20.0 / 24.0) * (2.0 / 3.0);
        assert!(
            (simulated - predicted).abs() < 0.02 * predicted,
            "{simulated} vs {predicted}"
        );
    }
}
