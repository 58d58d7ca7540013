//! Composite pulse sequences built from the `(θ)_ZX` entangling block.
//!
//! A [`CompositeSequence`] stores its elements in time order: the first
//! element acts first. The matrix product therefore reads right to left, so
//! the time-ordered list `[σ, U, σ, U]` compiles to `U σ U σ`.

mod search;
mod text;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::one_qubit;
use crate::cr_model::{propagator, CRParams, DriveSign};
use crate::linalg::{kron2, su2_rotation, Mat2, Mat4};
use crate::noise::NoiseRealization;
use crate::pauli::{Pauli, TwoQubitPauli, Unitary4};
use crate::{Error, Result};

pub use search::{echo_search, su2_generators, su2_subspace, Su2Triple};
pub use text::{format_sequence, parse_sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::One => 0,
            Qubit::Two => 1,
        }
    }

    pub fn from_index(i: usize) -> Qubit {
        if i == 0 {
            Qubit::One
        } else {
            Qubit::Two
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SequenceElement {
    /// `(θ)_ZX` block, run for `θ / h_zx`.
    Entangling { theta: f64, drive_sign: DriveSign },
    /// Instantaneous π rotation about a two-qubit Pauli.
    Echo { pauli: TwoQubitPauli },
    /// Physical X rotation `exp(-i angle/2 X)` on one qubit.
    LocalX { qubit: Qubit, angle: f64 },
    /// Error-free frame update `exp(-i angle/2 Z)`.
    VirtualZ { qubit: Qubit, angle: f64 },
}

impl SequenceElement {
    fn validate(&self) -> Result<()> {
        match self {
            SequenceElement::Entangling { theta, .. } if !(*theta > 0.0 && theta.is_finite()) => {
                Err(Error::InvalidParams(format!(
                    "entangling angle must be positive, got {theta}"
                )))
            }
            SequenceElement::LocalX { angle, .. } | SequenceElement::VirtualZ { angle, .. }
                if !angle.is_finite() =>
            {
                Err(Error::InvalidParams("non-finite rotation angle".into()))
            }
            _ => Ok(()),
        }
    }
}

/// An ordered, time-first list of segments plus the gate it implements.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeSequence {
    name: String,
    elements: Vec<SequenceElement>,
    ideal: Unitary4,
}

impl CompositeSequence {
    /// Builds a sequence whose ideal target is its own noiseless compilation
    /// with a pure `ZX` entangler.
    pub fn new(name: impl Into<String>, elements: Vec<SequenceElement>) -> Result<Self> {
        for e in &elements {
            e.validate()?;
        }
        let ideal = compile(
            &CompositeSequence {
                name: String::new(),
                elements: elements.clone(),
                ideal: Unitary4::identity(),
            },
            &CRParams::entangler_only(1.0),
            None,
        );
        Ok(CompositeSequence {
            name: name.into(),
            elements,
            ideal,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[SequenceElement] {
        &self.elements
    }

    pub fn ideal_target(&self) -> &Unitary4 {
        &self.ideal
    }

    pub fn entangling_blocks(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, SequenceElement::Entangling { .. }))
            .count()
    }

    pub fn total_entangling_angle(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                SequenceElement::Entangling { theta, .. } => *theta,
                _ => 0.0,
            })
            .sum()
    }

    pub fn total_entangling_time(&self, params: &CRParams) -> f64 {
        params.block_duration(self.total_entangling_angle())
    }

    /// Number of physical (noisy) one-qubit pulses. Z factors of echoes and
    /// virtual Z rotations are free.
    pub fn physical_1q_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| match e {
                SequenceElement::Echo { pauli } => [pauli.first, pauli.second]
                    .iter()
                    .filter(|p| matches!(p, Pauli::X | Pauli::Y))
                    .count(),
                SequenceElement::LocalX { angle, .. } if *angle != 0.0 => 1,
                _ => 0,
            })
            .sum()
    }

    /// Wall-clock duration with `t_1q` per physical one-qubit pulse.
    pub fn duration(&self, params: &CRParams, t_1q: f64) -> f64 {
        self.total_entangling_time(params) + t_1q * self.physical_1q_count() as f64
    }
}

impl fmt::Display for CompositeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sequence(self))
    }
}

/// `arccos[(√13 − 1)/4]`, the length-5 angle.
pub fn theta0() -> f64 {
    ((13f64.sqrt() - 1.0) / 4.0).acos()
}

/// Outer rotation angle of the Clifford generator.
pub fn psi() -> f64 {
    let s = 13f64.sqrt();
    2.0 * ((-57.0 + 16.0 * s).sqrt() / (4.0 - s + 2.0 * (-7.0 + 2.0 * s).sqrt())).atan()
}

/// Middle rotation angle of the Clifford generator.
pub fn phi() -> f64 {
    let s = 13f64.sqrt();
    -2.0 * (-1.0 / (2.0 * (-14.0 + 4.0 * s).sqrt())).acos()
}

fn ent(theta: f64) -> SequenceElement {
    SequenceElement::Entangling {
        theta,
        drive_sign: DriveSign::Positive,
    }
}

fn echo(pauli: TwoQubitPauli) -> SequenceElement {
    SequenceElement::Echo { pauli }
}

fn check_commuting_echo(echo: TwoQubitPauli) -> Result<()> {
    if echo.is_identity() {
        return Ok(());
    }
    if !echo.commutes_with(TwoQubitPauli::ZX) {
        return Err(Error::InvalidEcho {
            echo,
            reason: "anticommutes with ZX, so the sequence would collapse to a local gate".into(),
        });
    }
    Ok(())
}

pub fn single_block(theta: f64) -> Result<CompositeSequence> {
    CompositeSequence::new(format!("block({:.4}π)", theta / PI), vec![ent(theta)])
}

/// `U σ U σ` with a commuting echo; implements `(2θ)_ZX`.
pub fn length2(echo_pauli: TwoQubitPauli, theta: f64) -> Result<CompositeSequence> {
    check_commuting_echo(echo_pauli)?;
    CompositeSequence::new(
        "length2",
        vec![echo(echo_pauli), ent(theta), echo(echo_pauli), ent(theta)],
    )
}

/// Length-2 with the `XZ` echo at `θ = π/4`, giving `(π/2)_ZX`.
pub fn length2_default() -> CompositeSequence {
    length2(TwoQubitPauli::new(Pauli::X, Pauli::Z), PI / 4.0).expect("XZ commutes with ZX")
}

/// Echoed cross-resonance: `(π/4)_ZX σ_XI (−π/4)_ZX σ_XI`.
pub fn ecr() -> CompositeSequence {
    let xi = TwoQubitPauli::new(Pauli::X, Pauli::I);
    CompositeSequence::new(
        "ecr",
        vec![
            echo(xi),
            SequenceElement::Entangling {
                theta: PI / 4.0,
                drive_sign: DriveSign::Negative,
            },
            echo(xi),
            ent(PI / 4.0),
        ],
    )
    .expect("static sequence")
}

/// `U σ_ZI U σ_XY U σ_ZI U σ_XY`; implements `(4θ)_ZX`.
pub fn length4(theta: f64) -> Result<CompositeSequence> {
    let zi = TwoQubitPauli::new(Pauli::Z, Pauli::I);
    let xy = TwoQubitPauli::new(Pauli::X, Pauli::Y);
    CompositeSequence::new(
        "length4",
        vec![
            echo(xy),
            ent(theta),
            echo(zi),
            ent(theta),
            echo(xy),
            ent(theta),
            echo(zi),
            ent(theta),
        ],
    )
}

/// `U U σ_ZX U σ_ZX U U`; implements `(5θ)_ZX`.
pub fn length5(theta: f64) -> Result<CompositeSequence> {
    let zx = TwoQubitPauli::ZX;
    CompositeSequence::new(
        "length5",
        vec![
            ent(theta),
            ent(theta),
            echo(zx),
            ent(theta),
            echo(zx),
            ent(theta),
            ent(theta),
        ],
    )
}

pub fn length5_default() -> CompositeSequence {
    length5(theta0()).expect("θ₀ is positive")
}

/// `inner σ inner σ` (time order `σ, inner, σ, inner`); implements the square of `inner`.
pub fn nest(outer_echo: TwoQubitPauli, inner: &CompositeSequence) -> Result<CompositeSequence> {
    check_commuting_echo(outer_echo)?;
    let mut elements = Vec::with_capacity(2 * inner.elements.len() + 2);
    for _ in 0..2 {
        elements.push(echo(outer_echo));
        elements.extend(inner.elements.iter().cloned());
    }
    CompositeSequence::new(format!("nest({outer_echo},{})", inner.name), elements)
}

/// Time-ordered elements of `exp(-i angle/2 σ)` for a single-qubit Pauli.
fn local_rotation(axis: TwoQubitPauli, angle: f64) -> Vec<SequenceElement> {
    let (qubit, p) = if axis.first == Pauli::I {
        (Qubit::Two, axis.second)
    } else {
        (Qubit::One, axis.first)
    };
    match p {
        Pauli::Z => vec![SequenceElement::VirtualZ { qubit, angle }],
        Pauli::X => vec![SequenceElement::LocalX { qubit, angle }],
        Pauli::Y => vec![
            SequenceElement::VirtualZ {
                qubit,
                angle: -PI / 2.0,
            },
            SequenceElement::LocalX { qubit, angle },
            SequenceElement::VirtualZ {
                qubit,
                angle: PI / 2.0,
            },
        ],
        Pauli::I => vec![],
    }
}

/// `R(ψ) U⁽⁵⁾ R(φ) U⁽⁵⁾ R(ψ)` about a single-qubit axis anticommuting with
/// `ZX`; locally equivalent to CNOT.
pub fn clifford_generator(axis: TwoQubitPauli) -> Result<CompositeSequence> {
    if !axis.is_local_single() || axis.commutes_with(TwoQubitPauli::ZX) {
        return Err(Error::InvalidParams(format!(
            "Clifford generator axis must be a single-qubit Pauli anticommuting with ZX, got {axis}"
        )));
    }
    let l5 = length5_default();
    let mut elements = local_rotation(axis, psi());
    elements.extend(l5.elements.iter().cloned());
    elements.extend(local_rotation(axis, phi()));
    elements.extend(l5.elements.iter().cloned());
    elements.extend(local_rotation(axis, psi()));
    CompositeSequence::new("clifford_generator", elements)
}

pub fn clifford_generator_default() -> CompositeSequence {
    clifford_generator(TwoQubitPauli::new(Pauli::I, Pauli::Z)).expect("IZ anticommutes with ZX")
}

fn rx(angle: f64) -> Mat2 {
    su2_rotation([1.0, 0.0, 0.0], angle)
}

fn rz(angle: f64) -> Mat2 {
    su2_rotation([0.0, 0.0, 1.0], angle)
}

fn on_qubit(qubit: Qubit, m: &Mat2) -> Mat4 {
    match qubit {
        Qubit::One => kron2(m, &Mat2::identity()),
        Qubit::Two => kron2(&Mat2::identity(), m),
    }
}

/// One factor of an echo, with the pulse's frozen pre-error when noisy.
fn echo_factor(qubit: Qubit, p: Pauli, noise: Option<&NoiseRealization>) -> Mat2 {
    match (p, noise) {
        (Pauli::X | Pauli::Y, Some(n)) => {
            n.pre_error(qubit, one_qubit::index_of_pauli(p)) * p.matrix()
        }
        _ => p.matrix(),
    }
}

fn local_x(qubit: Qubit, angle: f64, noise: Option<&NoiseRealization>) -> Mat2 {
    let ideal = rx(angle);
    match noise {
        None => ideal,
        Some(n) => match one_qubit::index_of_x_rotation(angle) {
            Some(0) => ideal,
            Some(idx) => n.pre_error(qubit, idx) * ideal,
            None => n.generic(qubit) * ideal,
        },
    }
}

/// Unitary of one element.
pub fn element_unitary(
    element: &SequenceElement,
    params: &CRParams,
    noise: Option<&NoiseRealization>,
) -> Mat4 {
    match element {
        SequenceElement::Entangling { theta, drive_sign } => {
            propagator(params, params.block_duration(*theta), *drive_sign).into_matrix()
        }
        SequenceElement::Echo { pauli } => kron2(
            &echo_factor(Qubit::One, pauli.first, noise),
            &echo_factor(Qubit::Two, pauli.second, noise),
        ),
        SequenceElement::LocalX { qubit, angle } => {
            on_qubit(*qubit, &local_x(*qubit, *angle, noise))
        }
        SequenceElement::VirtualZ { qubit, angle } => on_qubit(*qubit, &rz(*angle)),
    }
}

/// Multiplies the element unitaries in time order.
pub fn compile(
    seq: &CompositeSequence,
    params: &CRParams,
    noise: Option<&NoiseRealization>,
) -> Unitary4 {
    let m = seq.elements.iter().fold(Mat4::identity(), |acc, e| {
        element_unitary(e, params, noise) * acc
    });
    Unitary4::from_matrix_unchecked(m)
}

/// Compiles with every entangling block replaced by `(θ)_ZX · exp(i Σ ε_p σ_p)`.
pub fn compile_with_block_error(
    seq: &CompositeSequence,
    errors: &[(TwoQubitPauli, f64)],
) -> Unitary4 {
    let gen = errors.iter().fold(Mat4::zeros(), |acc, (p, eps)| {
        acc + p.matrix() * crate::linalg::c(*eps, 0.0)
    });
    let kick = (gen * crate::linalg::I).exp();
    let params = CRParams::entangler_only(1.0);
    let m = seq.elements.iter().fold(Mat4::identity(), |acc, e| {
        let u = element_unitary(e, &params, None);
        let u = match e {
            SequenceElement::Entangling { .. } => u * kick,
            _ => u,
        };
        u * acc
    });
    Unitary4::from_matrix_unchecked(m)
}

/// Distance of `actual` from `ideal` after removing the global phase:
/// `‖W/phase − I‖_F / 2` with `W = ideal† actual`.
pub fn residual_norm(ideal: &Unitary4, actual: &Unitary4) -> f64 {
    let w = ideal.matrix().adjoint() * actual.matrix();
    let tr = w.trace();
    let phase = if tr.norm() > 0.0 {
        tr / tr.norm()
    } else {
        crate::linalg::ONE
    };
    (w / phase - Mat4::identity()).norm() / 2.0
}

/// Log–log slope of the composite residual against a common scale `λ`
/// applied to all injected block errors, fitted over `lambdas`.
pub fn residual_scaling_slope(
    seq: &CompositeSequence,
    errors: &[(TwoQubitPauli, f64)],
    lambdas: &[f64],
) -> f64 {
    let points: Vec<(f64, f64)> = lambdas
        .iter()
        .map(|&l| {
            let scaled: Vec<_> = errors.iter().map(|(p, e)| (*p, l * e)).collect();
            let r = residual_norm(seq.ideal_target(), &compile_with_block_error(seq, &scaled));
            (l.ln(), r.ln())
        })
        .collect();
    log_log_slope(&points)
}

/// Same as [`residual_scaling_slope`] but through the Hamiltonian: every
/// coefficient other than `h_zx` is scaled by `λ`.
pub fn hamiltonian_scaling_slope(
    seq: &CompositeSequence,
    params: &CRParams,
    lambdas: &[f64],
) -> f64 {
    let points: Vec<(f64, f64)> = lambdas
        .iter()
        .map(|&l| {
            let r = residual_norm(
                seq.ideal_target(),
                &compile(seq, &params.scale_perturbations(l), None),
            );
            (l.ln(), r.ln())
        })
        .collect();
    log_log_slope(&points)
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Sign pattern of the robustness condition for one error channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessPattern {
    pub zeta: Vec<i8>,
    pub xi: Vec<i8>,
    pub chi: i8,
    pub theta: f64,
}

impl RobustnessPattern {
    pub fn new(zeta: Vec<i8>, xi: Vec<i8>, chi: i8, theta: f64) -> Result<Self> {
        let signs_ok = |v: &[i8]| v.iter().all(|s| *s == 1 || *s == -1);
        if zeta.is_empty()
            || zeta.len() != xi.len()
            || !signs_ok(&zeta)
            || !signs_ok(&xi)
            || !signs_ok(&[chi])
        {
            return Err(Error::InvalidParams(
                "pattern needs equal-length nonempty ±1 lists and χ = ±1".into(),
            ));
        }
        Ok(RobustnessPattern {
            zeta,
            xi,
            chi,
            theta,
        })
    }

    /// `ζ = (1, 1, −1, 1, 1)`, `ξ = 1`, `χ = −1` at `θ`.
    pub fn length5(theta: f64) -> Self {
        RobustnessPattern {
            zeta: vec![1, 1, -1, 1, 1],
            xi: vec![1; 5],
            chi: -1,
            theta,
        }
    }

    /// Alternating `ζ`, `χ = +1`: a commuting channel under a length-`n` echo train.
    pub fn alternating_commuting(n: usize, theta: f64) -> Self {
        RobustnessPattern {
            zeta: (0..n).map(|m| if m % 2 == 0 { 1 } else { -1 }).collect(),
            xi: vec![1; n],
            chi: 1,
            theta,
        }
    }

    pub fn n(&self) -> usize {
        self.zeta.len()
    }
}

/// Norm of `Σ_m ζ_m exp[iθ(χ−1)/2 · Σ_{l<m} ξ_l σ_ab]`, evaluated as a
/// scalar on each `σ_ab` eigenspace. Zero means first-order cancellation.
pub fn robustness_residual(pattern: &RobustnessPattern) -> f64 {
    let half = pattern.theta * (pattern.chi as f64 - 1.0) / 2.0;
    [1.0, -1.0]
        .iter()
        .map(|eig| {
            let mut partial = 0.0;
            let mut sum = crate::linalg::ZERO;
            for (z, x) in pattern.zeta.iter().zip(&pattern.xi) {
                sum += num_complex::Complex64::from_polar(*z as f64, eig * half * partial);
                partial += *x as f64;
            }
            sum.norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::pauli::{local_invariants, trace_fidelity};

    fn tq(s: &str) -> TwoQubitPauli {
        s.parse().unwrap()
    }

    #[test]
    fn reference_angles() {
        assert!((theta0() - 0.861_384_2).abs() < 1e-6);
        assert!((psi() - 1.127_13).abs() < 1e-5);
        assert!((phi() + 4.897_706).abs() < 1e-5);
    }

    #[test]
    fn robustness_examples() {
        assert!(
            robustness_residual(&RobustnessPattern::new(vec![1, -1], vec![1, 1], 1, 0.3).unwrap())
                < 1e-15
        );
        assert!(robustness_residual(&RobustnessPattern::length5(theta0())) < 1e-12);
        assert!(robustness_residual(&RobustnessPattern::length5(PI / 4.0)) > 0.1);
        for n in [2, 4, 6, 8] {
            assert!(robustness_residual(&RobustnessPattern::alternating_commuting(n, 0.7)) < 1e-15);
        }
        assert!(robustness_residual(&RobustnessPattern::alternating_commuting(3, 0.7)) > 0.5);
    }

    #[test]
    fn pattern_validation() {
        assert!(RobustnessPattern::new(vec![1, 2], vec![1, 1], 1, 0.1).is_err());
        assert!(RobustnessPattern::new(vec![1], vec![1, 1], 1, 0.1).is_err());
        assert!(RobustnessPattern::new(vec![], vec![], 1, 0.1).is_err());
    }

    #[test]
    fn echo_validity() {
        assert!(length2(tq("XY"), PI / 4.0).is_ok());
        assert!(matches!(
            length2(tq("XI"), PI / 4.0),
            Err(Error::InvalidEcho { .. })
        ));
        assert!(nest(tq("XI"), &length5_default()).is_err());
    }

    #[test]
    fn ideal_targets() {
        let zx = |a: f64| Unitary4::pauli_rotation(TwoQubitPauli::ZX, a);
        let l2 = length2_default();
        assert!(l2.ideal_target().distance_up_to_phase(&zx(PI / 2.0)) < 1e-12);
        assert_eq!(l2.physical_1q_count(), 2);
        assert!(ecr().ideal_target().distance_up_to_phase(&zx(PI / 2.0)) < 1e-12);
        let l4 = length4(PI / 8.0).unwrap();
        assert!(l4.ideal_target().distance_up_to_phase(&zx(PI / 2.0)) < 1e-12);
        let l5 = length5_default();
        assert!(l5.ideal_target().distance_up_to_phase(&zx(5.0 * theta0())) < 1e-12);
        assert_eq!(l5.physical_1q_count(), 2);
    }

    #[test]
    fn gate_times() {
        let p = CRParams::calibrated();
        assert!((ecr().total_entangling_time(p) * 1e9 - 98.4).abs() < 1e-9);
        assert!((length5_default().total_entangling_time(p) * 1e9 - 270.0).abs() < 0.5);
        let g = clifford_generator_default();
        assert!((g.total_entangling_time(p) * 1e9 - 540.0).abs() < 1.0);
        assert_eq!(g.physical_1q_count(), 4);
    }

    #[test]
    fn nest_of_single_block_is_length2() {
        let inner = single_block(PI / 4.0).unwrap();
        let nested = nest(tq("XZ"), &inner).unwrap();
        let p = CRParams::calibrated();
        let a = compile(&nested, p, None);
        let b = compile(&length2_default(), p, None);
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-15);
        assert_eq!(
            nest(tq("XZ"), &length5_default())
                .unwrap()
                .entangling_blocks(),
            10
        );
    }

    #[test]
    fn generator_is_cnot_equivalent() {
        for axis in ["IZ", "IY"] {
            let g = clifford_generator(tq(axis)).unwrap();
            let (g1, g2) = local_invariants(g.ideal_target());
            assert!(
                g1.norm() < 1e-9 && (g2 - 1.0).abs() < 1e-9,
                "{axis}: {g1} {g2}"
            );
        }
        assert!(clifford_generator(tq("ZI")).is_err());
        assert!(clifford_generator(tq("XX")).is_err());
    }

    #[test]
    fn coherent_infidelity_orders() {
        let p = CRParams::calibrated();
        let l2 = length2_default();
        let r2 = 1.0 - trace_fidelity(l2.ideal_target(), &compile(&l2, p, None));
        assert!((r2 - 4.512e-4).abs() < 1e-6, "{r2}");
        let g = clifford_generator_default();
        let r5 = 1.0 - trace_fidelity(g.ideal_target(), &compile(&g, p, None));
        assert!((r5 - 5.11e-7).abs() < 1e-8, "{r5}");
    }

    #[test]
    fn first_order_cancellation_slopes() {
        let lambdas = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];
        let inject = |labels: &[&str]| -> Vec<(TwoQubitPauli, f64)> {
            labels
                .iter()
                .enumerate()
                .map(|(i, s)| (tq(s), 0.01 * (1.0 + 0.3 * i as f64)))
                .collect()
        };
        let l2 = length2_default();
        let s = residual_scaling_slope(&l2, &inject(&["ZX", "IY"]), &lambdas);
        assert!((s - 1.0).abs() < 0.05, "{s}");
        let l5 = length5_default();
        let s = residual_scaling_slope(&l5, &inject(&["IY", "IZ", "ZY", "ZZ"]), &lambdas);
        assert!((s - 2.0).abs() < 0.05, "{s}");
    }
}
