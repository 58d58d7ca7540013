//! Exact two-qubit Pauli algebra, commutation predicates, gate fidelity and
//! local invariants.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{c, kron2, unitarity_defect, Mat2, Mat4, C64, ONE};
use crate::Error;

/// Single-qubit Pauli symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Power of `i` multiplying a Pauli product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn value(self) -> C64 {
        match self.0 {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i & 3]
    }

    pub fn matrix(self) -> Mat2 {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match self {
            Pauli::I => Mat2::new(o, z, z, o),
            Pauli::X => Mat2::new(z, o, o, z),
            Pauli::Y => Mat2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
            Pauli::Z => Mat2::new(o, z, z, -o),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    /// `self · other = phase · result`.
    pub fn product(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, X) => (Phase::I, Y),
            (Y, X) => (Phase::MINUS_I, Z),
            (Z, Y) => (Phase::MINUS_I, X),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_symbol(ch: char) -> Option<Pauli> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Whether two Pauli operators commute or anticommute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Commutation {
    Commute,
    Anticommute,
}

/// `σ_first ⊗ σ_second`, first factor acting on the control qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoQubitPauli {
    pub first: Pauli,
    pub second: Pauli,
}

impl TwoQubitPauli {
    pub const fn new(first: Pauli, second: Pauli) -> Self {
        TwoQubitPauli { first, second }
    }

    pub const II: TwoQubitPauli = TwoQubitPauli::new(Pauli::I, Pauli::I);
    pub const ZX: TwoQubitPauli = TwoQubitPauli::new(Pauli::Z, Pauli::X);

    /// All sixteen products in lexicographic order `II, IX, …, ZZ`.
    pub fn all() -> impl Iterator<Item = TwoQubitPauli> {
        (0..16).map(TwoQubitPauli::from_index)
    }

    pub fn index(self) -> usize {
        4 * self.first.index() + self.second.index()
    }

    pub fn from_index(i: usize) -> Self {
        TwoQubitPauli::new(Pauli::from_index(i >> 2), Pauli::from_index(i & 3))
    }

    pub fn is_identity(self) -> bool {
        self == Self::II
    }

    /// Single-qubit operator on either qubit (one factor is the identity).
    pub fn is_local_single(self) -> bool {
        (self.first == Pauli::I) != (self.second == Pauli::I)
    }

    pub fn matrix(self) -> Mat4 {
        pauli_matrix(self)
    }

    pub fn commutation(self, other: TwoQubitPauli) -> Commutation {
        commutes(self, other)
    }

    pub fn commutes_with(self, other: TwoQubitPauli) -> bool {
        commutes(self, other) == Commutation::Commute
    }

    pub fn product(self, other: TwoQubitPauli) -> (Phase, TwoQubitPauli) {
        let (p1, a) = self.first.product(other.first);
        let (p2, b) = self.second.product(other.second);
        (p1 * p2, TwoQubitPauli::new(a, b))
    }
}

impl fmt::Display for TwoQubitPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first.symbol(), self.second.symbol())
    }
}

impl FromStr for TwoQubitPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let s = s.strip_prefix("sigma_").unwrap_or(s);
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => match (Pauli::from_symbol(a), Pauli::from_symbol(b)) {
                (Some(a), Some(b)) => Ok(TwoQubitPauli::new(a, b)),
                _ => Err(Error::Parse(format!("invalid Pauli label `{s}`"))),
            },
            _ => Err(Error::Parse(format!("invalid Pauli label `{s}`"))),
        }
    }
}

impl Serialize for TwoQubitPauli {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TwoQubitPauli {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A 4×4 matrix that is unitary to within the crate tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary4(Mat4);

impl Unitary4 {
    /// Validates `‖U†U − I‖_max < 1e-10`.
    pub fn new(m: Mat4) -> Result<Self, Error> {
        let defect = unitarity_defect(&m);
        if defect < 1e-10 {
            Ok(Unitary4(m))
        } else {
            Err(Error::NotUnitary(defect))
        }
    }

    /// Wraps a matrix the caller has built from unitary factors.
    pub fn from_matrix_unchecked(m: Mat4) -> Self {
        Unitary4(m)
    }

    pub fn identity() -> Self {
        Unitary4(Mat4::identity())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    pub fn dagger(&self) -> Self {
        Unitary4(self.0.adjoint())
    }

    pub fn local(a: &Mat2, b: &Mat2) -> Self {
        Unitary4(kron2(a, b))
    }

    /// Max-entry distance to `other` modulo a global phase.
    pub fn distance_up_to_phase(&self, other: &Unitary4) -> f64 {
        crate::linalg::phase_distance(&self.0, &other.0)
    }

    /// `exp(-i (angle/2) σ_p)`.
    pub fn pauli_rotation(p: TwoQubitPauli, angle: f64) -> Self {
        let (s, co) = (angle / 2.0).sin_cos();
        Unitary4(Mat4::identity() * c(co, 0.0) + pauli_matrix(p) * c(0.0, -s))
    }
}

impl Mul for Unitary4 {
    type Output = Unitary4;
    fn mul(self, rhs: Unitary4) -> Unitary4 {
        Unitary4(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Unitary4> for &'a Unitary4 {
    type Output = Unitary4;
    fn mul(self, rhs: &Unitary4) -> Unitary4 {
        Unitary4(self.0 * rhs.0)
    }
}

pub fn pauli_matrix(p: TwoQubitPauli) -> Mat4 {
    kron2(&p.first.matrix(), &p.second.matrix())
}

/// Commute iff an even number of the single-qubit factor pairs anticommute.
pub fn commutes(p: TwoQubitPauli, q: TwoQubitPauli) -> Commutation {
    let anti = usize::from(!p.first.commutes_with(q.first))
        + usize::from(!p.second.commutes_with(q.second));
    if anti % 2 == 0 {
        Commutation::Commute
    } else {
        Commutation::Anticommute
    }
}

/// Which sign symbol of the robustness bookkeeping a coefficient stands for:
/// `Xi` relates an echo to the entangler, `Zeta` an echo to an error channel,
/// `Chi` an error channel to the entangler.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignKind {
    Xi,
    Zeta,
    Chi,
}

/// `+1` for commuting operators, `−1` for anticommuting ones.
pub fn sign_coefficient(_kind: SignKind, p: TwoQubitPauli, q: TwoQubitPauli) -> i8 {
    match commutes(p, q) {
        Commutation::Commute => 1,
        Commutation::Anticommute => -1,
    }
}

/// `|Tr(U_ideal† U_actual)|² / 16`.
pub fn trace_fidelity(ideal: &Unitary4, actual: &Unitary4) -> f64 {
    let t = (ideal.0.adjoint() * actual.0).trace();
    t.norm_sqr() / 16.0
}

/// Makhlin local invariants `(G1, G2)` of a two-qubit gate.
///
/// Both are unchanged by `U → (A⊗B) U (C⊗D)` for one-qubit unitaries, so two
/// gates are locally equivalent iff their invariants agree.
pub fn local_invariants(u: &Unitary4) -> (C64, f64) {
    let q = magic_basis();
    let ub = q.adjoint() * u.0 * q;
    let m = ub.transpose() * ub;
    let det = u.0.determinant();
    let tr = m.trace();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - (m * m).trace()) / (det * 4.0);
    (g1, g2.re)
}

fn magic_basis() -> Mat4 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z, i) = (c(h, 0.0), c(0.0, 0.0), c(0.0, h));
    Mat4::new(o, z, z, i, z, i, o, z, z, i, -o, z, o, z, z, -i)
}

/// Identifies a 4×4 matrix as `±σ_p` (Hermitian signed Pauli), if it is one.
pub fn as_signed_pauli(m: &Mat4, tol: f64) -> Option<(i8, TwoQubitPauli)> {
    for p in TwoQubitPauli::all() {
        let overlap = (pauli_matrix(p) * m).trace() / 4.0;
        if (overlap - ONE).norm() < tol {
            return Some((1, p));
        }
        if (overlap + ONE).norm() < tol {
            return Some((-1, p));
        }
    }
    None
}
