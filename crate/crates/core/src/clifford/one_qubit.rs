//! The 24-element one-qubit Clifford group in the `{X, Z}` generating set.
//!
//! Each element is written as `Z · X · Z` with at most one physical `X`
//! pulse; identity is index 0.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::linalg::{phase_distance, su2_rotation, Mat2};
use crate::pauli::Pauli;

/// A generator from `{X_{±π/2}, X_π, Z_{±π/2}, Z_π}`, angle in quarter turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    X(i8),
    Z(i8),
}

impl Token {
    pub fn angle(self) -> f64 {
        let q = match self {
            Token::X(q) | Token::Z(q) => q,
        };
        q as f64 * PI / 2.0
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            Token::X(_) => su2_rotation([1.0, 0.0, 0.0], self.angle()),
            Token::Z(_) => su2_rotation([0.0, 0.0, 1.0], self.angle()),
        }
    }

    pub fn is_physical(self) -> bool {
        matches!(self, Token::X(_))
    }
}

#[derive(Clone, Debug)]
pub struct OneQubitClifford {
    /// Generators in time order.
    pub tokens: Vec<Token>,
    pub matrix: Mat2,
    /// The physical pulse, if any.
    pub pulse: Option<Token>,
    /// Product of the tokens that follow the pulse; conjugates the pulse's
    /// error into a pre-error on the whole element.
    pub after_pulse: Mat2,
}

impl OneQubitClifford {
    pub fn physical_pulses(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_physical()).count()
    }
}

pub struct OneQubitGroup {
    elements: Vec<OneQubitClifford>,
    mul: [[u8; 24]; 24],
    inv: [u8; 24],
}

pub const ORDER: usize = 24;

fn product(tokens: &[Token]) -> Mat2 {
    tokens
        .iter()
        .fold(Mat2::identity(), |acc, t| t.matrix() * acc)
}

fn find(elements: &[OneQubitClifford], m: &Mat2) -> Option<usize> {
    elements
        .iter()
        .position(|e| phase_distance(&e.matrix, m) < 1e-9)
}

impl OneQubitGroup {
    fn build() -> Self {
        let zs = [
            None,
            Some(Token::Z(1)),
            Some(Token::Z(-1)),
            Some(Token::Z(2)),
        ];
        let xs = [
            None,
            Some(Token::X(1)),
            Some(Token::X(-1)),
            Some(Token::X(2)),
        ];
        let mut candidates: Vec<Vec<Token>> = Vec::new();
        for x in xs {
            for a in zs {
                for b in zs {
                    candidates.push([a, x, b].into_iter().flatten().collect());
                }
            }
        }
        candidates.sort_by_key(|t| (t.iter().filter(|k| k.is_physical()).count(), t.len()));
        let mut elements: Vec<OneQubitClifford> = Vec::with_capacity(ORDER);
        for tokens in candidates {
            let matrix = product(&tokens);
            if find(&elements, &matrix).is_some() {
                continue;
            }
            let pos = tokens.iter().position(|t| t.is_physical());
            let after_pulse = match pos {
                Some(i) => product(&tokens[i + 1..]),
                None => Mat2::identity(),
            };
            elements.push(OneQubitClifford {
                pulse: pos.map(|i| tokens[i]),
                tokens,
                matrix,
                after_pulse,
            });
        }
        assert_eq!(elements.len(), ORDER);
        let mut mul = [[0u8; 24]; 24];
        let mut inv = [0u8; 24];
        for i in 0..ORDER {
            for j in 0..ORDER {
                // i first, then j
                let m = elements[j].matrix * elements[i].matrix;
                mul[i][j] = find(&elements, &m).expect("group is closed") as u8;
            }
        }
        for i in 0..ORDER {
            inv[i] = (0..ORDER)
                .find(|&j| mul[i][j] == 0)
                .expect("inverse exists") as u8;
        }
        OneQubitGroup { elements, mul, inv }
    }

    pub fn elements(&self) -> &[OneQubitClifford] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &OneQubitClifford {
        &self.elements[i]
    }

    /// Index of "`first`, then `second`".
    pub fn compose(&self, first: usize, second: usize) -> usize {
        self.mul[first][second] as usize
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        find(&self.elements, m)
    }
}

pub fn group() -> &'static OneQubitGroup {
    static GROUP: OnceLock<OneQubitGroup> = OnceLock::new();
    GROUP.get_or_init(OneQubitGroup::build)
}

pub fn index_of_pauli(p: Pauli) -> usize {
    group().index_of(&p.matrix()).expect("Paulis are Cliffords")
}

/// Index of `exp(-i angle/2 X)` when `angle` is a multiple of π/2.
pub fn index_of_x_rotation(angle: f64) -> Option<usize> {
    let quarters = angle / (PI / 2.0);
    if (quarters - quarters.round()).abs() > 1e-12 {
        return None;
    }
    group().index_of(&su2_rotation([1.0, 0.0, 0.0], angle))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_identity() {
        let g = group();
        assert_eq!(g.elements().len(), 24);
        assert!(phase_distance(&g.get(0).matrix, &Mat2::identity()) < 1e-15);
        assert!(g.elements().iter().all(|e| e.physical_pulses() <= 1));
    }

    #[test]
    fn four_noiseless_elements() {
        let free: Vec<_> = group()
            .elements()
            .iter()
            .filter(|e| e.physical_pulses() == 0)
            .collect();
        assert_eq!(free.len(), 4);
        for e in free {
            assert!(e.tokens.iter().all(|t| matches!(t, Token::Z(_))));
        }
    }

    #[test]
    fn closure_and_inverses() {
        let g = group();
        for i in 0..ORDER {
            assert_eq!(g.compose(i, g.inverse(i)), 0);
            assert_eq!(g.compose(0, i), i);
            for j in 0..ORDER {
                let m = g.get(j).matrix * g.get(i).matrix;
                assert!(phase_distance(&g.get(g.compose(i, j)).matrix, &m) < 1e-12);
            }
        }
    }

    #[test]
    fn pulse_frame() {
        for e in group().elements() {
            if let Some(pulse) = e.pulse {
                let i = e.tokens.iter().position(|t| *t == pulse).unwrap();
                let before = product(&e.tokens[..i]);
                let rebuilt = e.after_pulse * pulse.matrix() * before;
                assert!(phase_distance(&rebuilt, &e.matrix) < 1e-14);
            }
        }
    }

    #[test]
    fn lookups() {
        assert_eq!(index_of_x_rotation(0.0), Some(0));
        assert!(index_of_x_rotation(0.3).is_none());
        assert_eq!(index_of_x_rotation(PI), Some(index_of_pauli(Pauli::X)));
    }
}
