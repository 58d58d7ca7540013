//! Two-qubit Clifford tableaux: the images of `X₁, Z₁, X₂, Z₂` under
//! conjugation, with phases.

use crate::linalg::Mat4;
use crate::pauli::{as_signed_pauli, Pauli, TwoQubitPauli};

/// `i^k X^x Z^z`, bit 0 of `x`/`z` for qubit 1 and bit 1 for qubit 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u8,
    pub z: u8,
    pub k: u8,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0, k: 0 };

    /// `self · other`, using `Z^z X^x = (−1)^{z·x} X^x Z^z`.
    pub fn mul(self, other: PauliString) -> PauliString {
        let swap = 2 * (self.z & other.x).count_ones() as u8;
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            k: (self.k + other.k + swap) % 4,
        }
    }

    pub fn from_signed(sign: i8, p: TwoQubitPauli) -> PauliString {
        let mut s = PauliString {
            x: 0,
            z: 0,
            k: if sign < 0 { 2 } else { 0 },
        };
        for (bit, factor) in [(1u8, p.first), (2u8, p.second)] {
            match factor {
                Pauli::I => {}
                Pauli::X => s.x |= bit,
                Pauli::Z => s.z |= bit,
                Pauli::Y => {
                    s.x |= bit;
                    s.z |= bit;
                    s.k = (s.k + 1) % 4;
                }
            }
        }
        s
    }

    /// `±σ_p` if the string is Hermitian.
    pub fn to_signed(self) -> Option<(i8, TwoQubitPauli)> {
        let ys = (self.x & self.z).count_ones() as u8;
        let phase = (self.k + 4 - ys % 4) % 4;
        let sign = match phase {
            0 => 1,
            2 => -1,
            _ => return None,
        };
        let factor = |bit: u8| match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        };
        Some((sign, TwoQubitPauli::new(factor(1), factor(2))))
    }

    fn generators() -> [PauliString; 4] {
        [
            PauliString { x: 1, z: 0, k: 0 },
            PauliString { x: 0, z: 1, k: 0 },
            PauliString { x: 2, z: 0, k: 0 },
            PauliString { x: 0, z: 2, k: 0 },
        ]
    }
}

/// Conjugation action `P ↦ U P U†` of a Clifford, modulo global phase of `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    images: [PauliString; 4],
}

impl Tableau {
    pub fn identity() -> Self {
        Tableau {
            images: PauliString::generators(),
        }
    }

    pub fn images(&self) -> &[PauliString; 4] {
        &self.images
    }

    pub fn apply(&self, p: PauliString) -> PauliString {
        let mut out = PauliString { x: 0, z: 0, k: p.k };
        for (q, bit) in [(0usize, 1u8), (1, 2)] {
            if p.x & bit != 0 {
                out = out.mul(self.images[2 * q]);
            }
            if p.z & bit != 0 {
                out = out.mul(self.images[2 * q + 1]);
            }
        }
        out
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Tableau) -> Tableau {
        Tableau {
            images: self.images.map(|p| next.apply(p)),
        }
    }

    /// Solved generator by generator over the 16 Paulis.
    pub fn inverse(&self) -> Tableau {
        let mut images = [PauliString::IDENTITY; 4];
        for (slot, g) in PauliString::generators().iter().enumerate() {
            images[slot] = (0u8..16)
                .find_map(|bits| {
                    let candidate = PauliString {
                        x: bits & 3,
                        z: bits >> 2,
                        k: 0,
                    };
                    let herm = Self::hermitian(candidate);
                    let img = self.apply(herm);
                    if img.x == g.x && img.z == g.z {
                        let k = (herm.k + 4 - img.k) % 4;
                        Some(PauliString { k, ..herm })
                    } else {
                        None
                    }
                })
                .expect("tableau is invertible");
        }
        Tableau { images }
    }

    fn hermitian(p: PauliString) -> PauliString {
        PauliString {
            k: ((p.x & p.z).count_ones() % 4) as u8,
            ..p
        }
    }

    /// Packs the tableau into 24 bits.
    pub fn key(&self) -> u32 {
        self.images.iter().enumerate().fold(0u32, |acc, (i, p)| {
            acc | ((p.x as u32) | (p.z as u32) << 2 | (p.k as u32) << 4) << (6 * i)
        })
    }

    pub fn from_unitary(u: &Mat4) -> Option<Tableau> {
        let mut images = [PauliString::IDENTITY; 4];
        for (slot, g) in PauliString::generators().iter().enumerate() {
            let (_, p) = g.to_signed()?;
            let conj = u * p.matrix() * u.adjoint();
            let (sign, q) = as_signed_pauli(&conj, 1e-8)?;
            images[slot] = PauliString::from_signed(sign, q);
        }
        Some(Tableau { images })
    }

    /// Images are Hermitian and obey the canonical commutation relations.
    pub fn is_symplectic(&self) -> bool {
        let anticommute = |a: &PauliString, b: &PauliString| {
            ((a.x & b.z).count_ones() + (a.z & b.x).count_ones()) % 2 == 1
        };
        let g = PauliString::generators();
        self.images.iter().all(|p| p.to_signed().is_some())
            && (0..4).all(|i| {
                (0..4).all(|j| {
                    anticommute(&self.images[i], &self.images[j]) == anticommute(&g[i], &g[j])
                })
            })
    }
}
