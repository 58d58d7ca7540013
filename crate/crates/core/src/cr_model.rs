//! Effective cross-resonance Hamiltonian and its exact propagators.
//!
//! The Hamiltonian `½ Σ h_ij σ_ij` over `{ZI, IX, IY, IZ, ZX, ZY, ZZ}` is
//! block-diagonal in the control qubit's Z basis, so every constant-amplitude
//! segment is two independent 2×2 exponentials. Coefficients are angular
//! frequencies in rad/s.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::linalg::{su2_exp_hermitian, Mat4, C64, ZERO};
use crate::pauli::{pauli_matrix, Pauli, TwoQubitPauli, Unitary4};
use crate::sequences;
use crate::units::{mhz_to_rad_per_s, ns};
use crate::{Error, Result};

/// Sign of the cross-resonance drive amplitude Ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DriveSign {
    Positive,
    Negative,
}

impl DriveSign {
    pub fn value(self) -> f64 {
        match self {
            DriveSign::Positive => 1.0,
            DriveSign::Negative => -1.0,
        }
    }
}

/// Device parameters the coefficients were derived for. Informational only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceProvenance {
    pub omega1_ghz: f64,
    pub omega2_ghz: f64,
    pub delta1_ghz: f64,
    pub delta2_ghz: f64,
    pub drive_mhz: f64,
    pub coupling_mhz: f64,
}

impl Default for DeviceProvenance {
    fn default() -> Self {
        DeviceProvenance {
            omega1_ghz: 5.114,
            omega2_ghz: 4.914,
            delta1_ghz: -0.330,
            delta2_ghz: -0.330,
            drive_mhz: 60.0,
            coupling_mhz: 3.8,
        }
    }
}

/// Effective-Hamiltonian coefficients (rad/s).
///
/// With the target-qubit cancellation pulse on, only `h_iz`, `h_zx` and
/// `h_zz` are nonzero. The remaining fields model the uncancelled drive.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CRParams {
    pub h_zi: f64,
    pub h_ix: f64,
    pub h_iy: f64,
    pub h_iz: f64,
    pub h_zx: f64,
    pub h_zy: f64,
    pub h_zz: f64,
    pub provenance: Option<DeviceProvenance>,
}

/// Block duration of the `(π/4)_ZX` building block used to fix `h_zx`.
pub const REFERENCE_QUARTER_BLOCK_NS: f64 = 49.2;

impl CRParams {
    /// Cancellation-pulse regime: only `IZ`, `ZX` and `ZZ` terms.
    pub fn cancellation(h_iz: f64, h_zx: f64, h_zz: f64) -> Self {
        CRParams {
            h_iz,
            h_zx,
            h_zz,
            ..Default::default()
        }
    }

    /// Ideal entangler: `h_zx` only.
    pub fn entangler_only(h_zx: f64) -> Self {
        CRParams {
            h_zx,
            ..Default::default()
        }
    }

    /// Builds parameters from `(Pauli, coefficient)` pairs, rejecting terms
    /// that would break the block-diagonal structure.
    pub fn from_coefficients<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (TwoQubitPauli, f64)>,
    {
        let mut p = CRParams::default();
        for (label, h) in terms {
            let slot = match (label.first, label.second) {
                (Pauli::Z, Pauli::I) => &mut p.h_zi,
                (Pauli::I, Pauli::X) => &mut p.h_ix,
                (Pauli::I, Pauli::Y) => &mut p.h_iy,
                (Pauli::I, Pauli::Z) => &mut p.h_iz,
                (Pauli::Z, Pauli::X) => &mut p.h_zx,
                (Pauli::Z, Pauli::Y) => &mut p.h_zy,
                (Pauli::Z, Pauli::Z) => &mut p.h_zz,
                (Pauli::I, Pauli::I) => continue,
                _ if h == 0.0 => continue,
                _ => return Err(Error::HamiltonianStructure(label)),
            };
            *slot += h;
        }
        Ok(p)
    }

    /// The calibrated default parameter set, computed once.
    pub fn calibrated() -> &'static CRParams {
        static CALIBRATED: OnceLock<CRParams> = OnceLock::new();
        CALIBRATED.get_or_init(|| {
            let mut p = calibrate_h(&CalibrationTarget::default())
                .expect("reference calibration converges");
            p.provenance = Some(DeviceProvenance::default());
            p
        })
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.terms();
        if all.iter().any(|(_, h)| !h.is_finite()) {
            return Err(Error::InvalidParams(
                "non-finite Hamiltonian coefficient".into(),
            ));
        }
        if self.h_zx <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "h_zx must be positive, got {}",
                self.h_zx
            )));
        }
        Ok(())
    }

    pub fn terms(&self) -> [(TwoQubitPauli, f64); 7] {
        let t = |a, b| TwoQubitPauli::new(a, b);
        use Pauli::*;
        [
            (t(Z, I), self.h_zi),
            (t(I, X), self.h_ix),
            (t(I, Y), self.h_iy),
            (t(I, Z), self.h_iz),
            (t(Z, X), self.h_zx),
            (t(Z, Y), self.h_zy),
            (t(Z, Z), self.h_zz),
        ]
    }

    pub fn coefficient(&self, p: TwoQubitPauli) -> f64 {
        self.terms()
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, h)| *h)
            .unwrap_or(0.0)
    }

    /// Reverses the drive: negates the terms linear in Ω (`ZX`, `IX`, `IY`, `ZY`).
    pub fn with_drive(&self, sign: DriveSign) -> CRParams {
        let s = sign.value();
        CRParams {
            h_ix: s * self.h_ix,
            h_iy: s * self.h_iy,
            h_zx: s * self.h_zx,
            h_zy: s * self.h_zy,
            ..self.clone()
        }
    }

    /// Multiplies every term except `h_zx` by `lambda`.
    pub fn scale_perturbations(&self, lambda: f64) -> CRParams {
        CRParams {
            h_zi: lambda * self.h_zi,
            h_ix: lambda * self.h_ix,
            h_iy: lambda * self.h_iy,
            h_iz: lambda * self.h_iz,
            h_zy: lambda * self.h_zy,
            h_zz: lambda * self.h_zz,
            ..self.clone()
        }
    }

    /// Time for a `(θ)_ZX` building block.
    pub fn block_duration(&self, theta: f64) -> f64 {
        theta / self.h_zx.abs()
    }
}

/// `½ Σ h_ij σ_ij`.
pub fn effective_hamiltonian(params: &CRParams) -> Mat4 {
    params.terms().iter().fold(Mat4::zeros(), |acc, (p, h)| {
        acc + pauli_matrix(*p) * C64::new(0.5 * h, 0.0)
    })
}

/// `exp(-i H t)` evaluated block by block; `drive_sign` negates the Ω-linear terms.
pub fn propagator(params: &CRParams, t: f64, drive_sign: DriveSign) -> Unitary4 {
    let p = params.with_drive(drive_sign);
    // control qubit in |0⟩ (upper block) and |1⟩ (lower block)
    let upper = su2_exp_hermitian(
        0.5 * p.h_zi,
        [
            0.5 * (p.h_ix + p.h_zx),
            0.5 * (p.h_iy + p.h_zy),
            0.5 * (p.h_iz + p.h_zz),
        ],
        t,
    );
    let lower = su2_exp_hermitian(
        -0.5 * p.h_zi,
        [
            0.5 * (p.h_ix - p.h_zx),
            0.5 * (p.h_iy - p.h_zy),
            0.5 * (p.h_iz - p.h_zz),
        ],
        t,
    );
    let mut m = Mat4::zeros();
    for r in 0..2 {
        for c in 0..2 {
            m[(r, c)] = upper[(r, c)];
            m[(r + 2, c + 2)] = lower[(r, c)];
        }
    }
    Unitary4::from_matrix_unchecked(m)
}

/// `(θ)_ZX` building block: the propagator at `t = θ / h_zx`.
pub fn building_block(theta: f64, params: &CRParams, drive_sign: DriveSign) -> Unitary4 {
    propagator(params, params.block_duration(theta), drive_sign)
}

/// Pauli decomposition of `δU = U_ideal† U − I`.
///
/// `coefficient(p) = Tr(σ_p δU) / 4`, so `δU = Σ coefficient(p) σ_p`. The
/// identity coefficient is real to leading order and every other coefficient
/// is imaginary; [`ErrorChannelMap::reported`] strips that factor of `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorChannelMap {
    coefficients: [C64; 16],
}

impl ErrorChannelMap {
    pub fn from_delta(delta: &Mat4) -> Self {
        let mut coefficients = [ZERO; 16];
        for p in TwoQubitPauli::all() {
            coefficients[p.index()] = (pauli_matrix(p) * delta).trace() / 4.0;
        }
        ErrorChannelMap { coefficients }
    }

    /// Error of `actual` relative to `ideal`. The relative global phase is
    /// left in place, matching the convention of the factored propagator.
    pub fn between(ideal: &Unitary4, actual: &Unitary4) -> Self {
        let delta = ideal.matrix().adjoint() * actual.matrix() - Mat4::identity();
        Self::from_delta(&delta)
    }

    pub fn coefficient(&self, p: TwoQubitPauli) -> C64 {
        self.coefficients[p.index()]
    }

    /// Real part for `II`, coefficient of `i` for every other channel.
    pub fn reported(&self, p: TwoQubitPauli) -> f64 {
        let c = self.coefficient(p);
        if p.is_identity() {
            c.re
        } else {
            c.im
        }
    }

    pub fn reconstruct(&self) -> Mat4 {
        TwoQubitPauli::all().fold(Mat4::zeros(), |acc, p| {
            acc + pauli_matrix(p) * self.coefficients[p.index()]
        })
    }

    /// Channels whose coefficient magnitude is at least `threshold`.
    pub fn significant(&self, threshold: f64) -> Vec<(TwoQubitPauli, C64)> {
        TwoQubitPauli::all()
            .map(|p| (p, self.coefficient(p)))
            .filter(|(_, c)| c.norm() >= threshold)
            .collect()
    }
}

/// Error channels of a single block evolved for `t`.
pub fn error_channels(params: &CRParams, t: f64) -> ErrorChannelMap {
    let actual = propagator(params, t, DriveSign::Positive);
    let ideal = Unitary4::pauli_rotation(TwoQubitPauli::ZX, t * params.h_zx);
    ErrorChannelMap::between(&ideal, &actual)
}

/// What [`calibrate_h`] matches: the `(π/4)_ZX` block duration and the
/// length-2 composite's `IY` and `IZ` channel coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationTarget {
    pub quarter_block_ns: f64,
    pub eps_iy: f64,
    pub eps_iz: f64,
}

impl Default for CalibrationTarget {
    fn default() -> Self {
        CalibrationTarget {
            quarter_block_ns: REFERENCE_QUARTER_BLOCK_NS,
            eps_iy: 0.015,
            eps_iz: 7.5e-4,
        }
    }
}

impl CalibrationTarget {
    pub fn h_zx(&self) -> f64 {
        PI / (4.0 * ns(self.quarter_block_ns))
    }
}

/// Length-2 (`σ_XZ` echo, θ = π/4) error channels for given `h_iz`, `h_zz`.
fn length2_channels(h_iz: f64, h_zx: f64, h_zz: f64) -> ErrorChannelMap {
    let params = CRParams::cancellation(h_iz, h_zx, h_zz);
    let seq = sequences::length2_default();
    let actual = sequences::compile(&seq, &params, None);
    ErrorChannelMap::between(seq.ideal_target(), &actual)
}

/// Finds `h_iz`, `h_zz` so the simulated length-2 composite reproduces the
/// target `IY` and `IZ` coefficients, with `h_zx` fixed by the block duration.
///
/// Damped Newton iteration with a finite-difference Jacobian, in units of
/// 2π·MHz.
pub fn calibrate_h(target: &CalibrationTarget) -> Result<CRParams> {
    if !(target.quarter_block_ns > 0.0) {
        return Err(Error::InvalidParams(
            "block duration must be positive".into(),
        ));
    }
    let h_zx = target.h_zx();
    let scale = mhz_to_rad_per_s(1.0);
    let goal = [target.eps_iy, target.eps_iz];
    let iy = TwoQubitPauli::new(Pauli::I, Pauli::Y);
    let iz = TwoQubitPauli::new(Pauli::I, Pauli::Z);
    let residual = |x: [f64; 2]| -> [f64; 2] {
        let m = length2_channels(x[0] * scale, h_zx, x[1] * scale);
        [m.reported(iy) - goal[0], m.reported(iz) - goal[1]]
    };
    let tol = 1e-13_f64.max(1e-11 * goal[0].abs().max(goal[1].abs()));
    let mut x = [0.0, 0.0];
    let mut f = residual(x);
    let norm = |v: [f64; 2]| v[0].abs().max(v[1].abs());
    let mut iterations = 0;
    while norm(f) > tol {
        iterations += 1;
        if iterations > 60 {
            return Err(Error::Calibration(format!(
                "no convergence after 60 iterations; residual (IY, IZ) = ({:.3e}, {:.3e})",
                f[0], f[1]
            )));
        }
        let step = 1e-6;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut xp = x;
            xp[j] += step;
            let fp = residual(xp);
            for i in 0..2 {
                jac[i][j] = (fp[i] - f[i]) / step;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::Calibration("singular Jacobian".into()));
        }
        let dx = [
            -(jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
            -(-jac[1][0] * f[0] + jac[0][0] * f[1]) / det,
        ];
        let mut damping = 1.0;
        loop {
            let trial = [x[0] + damping * dx[0], x[1] + damping * dx[1]];
            let ft = residual(trial);
            if norm(ft) < norm(f) || damping < 1e-6 {
                x = trial;
                f = ft;
                break;
            }
            damping *= 0.5;
        }
    }
    let params = CRParams::cancellation(x[0] * scale, h_zx, x[1] * scale);
    if (goal[0] != 0.0 || goal[1] != 0.0) && params.h_iz.abs() >= params.h_zz.abs() {
        return Err(Error::Calibration(format!(
            "solution violates |h_iz| < |h_zz|: h_iz = {:.4e}, h_zz = {:.4e}",
            params.h_iz, params.h_zz
        )));
    }
    Ok(params)
}
