//! The 11520-element two-qubit Clifford group (modulo phase), each element
//! decomposed as local layers interleaved with 0–3 applications of a
//! CNOT-equivalent entangling generator.

use std::collections::HashMap;

use rand::Rng;

use super::one_qubit::{self, ORDER};
use super::tableau::Tableau;
use crate::linalg::kron2;
use crate::pauli::Unitary4;
use crate::{Error, Result};

pub const GROUP_ORDER: usize = 11520;

/// Local layer: one-qubit Clifford indices for qubits 1 and 2.
pub type Layer = [u8; 2];

#[derive(Clone, Debug)]
pub struct TwoQubitClifford {
    /// Time-ordered local layers; the generator sits between consecutive layers.
    pub layers: Vec<Layer>,
    pub tableau: Tableau,
    /// Physical one-qubit pulses in the local layers.
    pub pulses: u32,
}

impl TwoQubitClifford {
    pub fn generator_count(&self) -> usize {
        self.layers.len() - 1
    }
}

pub struct TwoQubitTable {
    generator: Tableau,
    entries: Vec<TwoQubitClifford>,
    index: HashMap<u32, u32>,
    class_sizes: [usize; 4],
}

fn local_index(layer: Layer) -> usize {
    layer[0] as usize * ORDER + layer[1] as usize
}

/// Tableaux of all 576 local Cliffords, indexed by `24 · g1 + g2`.
pub fn local_tableaux() -> Vec<Tableau> {
    let g = one_qubit::group();
    let mut out = Vec::with_capacity(ORDER * ORDER);
    for a in 0..ORDER {
        for b in 0..ORDER {
            let m = kron2(&g.get(a).matrix, &g.get(b).matrix);
            out.push(Tableau::from_unitary(&m).expect("local Cliffords are Clifford"));
        }
    }
    out
}

impl TwoQubitTable {
    /// Breadth-first over the number of generator applications, keeping the
    /// decomposition with the fewest physical one-qubit pulses.
    pub fn build(generator: &Unitary4) -> Result<Self> {
        let gen = Tableau::from_unitary(generator.matrix())
            .ok_or_else(|| Error::InvalidParams("entangling generator is not a Clifford".into()))?;
        let group = one_qubit::group();
        let locals = local_tableaux();
        let cost = |l: Layer| {
            (group.get(l[0] as usize).physical_pulses()
                + group.get(l[1] as usize).physical_pulses()) as u32
        };
        let all_layers: Vec<Layer> = (0..ORDER as u8)
            .flat_map(|a| (0..ORDER as u8).map(move |b| [a, b]))
            .collect();

        let mut entries: Vec<TwoQubitClifford> = Vec::with_capacity(GROUP_ORDER);
        let mut index: HashMap<u32, u32> = HashMap::with_capacity(GROUP_ORDER);
        let mut class_sizes = [0usize; 4];

        for &l in &all_layers {
            let t = locals[local_index(l)];
            if index.insert(t.key(), entries.len() as u32).is_none() {
                entries.push(TwoQubitClifford {
                    layers: vec![l],
                    tableau: t,
                    pulses: cost(l),
                });
                class_sizes[0] += 1;
            }
        }
        let mut frontier: Vec<usize> = (0..entries.len()).collect();
        for class in 1..4 {
            // key -> (cost, prefix entry, layer), first-found wins ties
            let mut best: HashMap<u32, (u32, usize, Layer, Tableau)> = HashMap::new();
            let mut order: Vec<u32> = Vec::new();
            for &s in &frontier {
                let through = entries[s].tableau.then(&gen);
                for &l in &all_layers {
                    let t = through.then(&locals[local_index(l)]);
                    let key = t.key();
                    if index.contains_key(&key) {
                        continue;
                    }
                    let c = entries[s].pulses + cost(l);
                    match best.get_mut(&key) {
                        Some(slot) if slot.0 <= c => {}
                        Some(slot) => *slot = (c, s, l, t),
                        None => {
                            best.insert(key, (c, s, l, t));
                            order.push(key);
                        }
                    }
                }
            }
            let mut next = Vec::with_capacity(order.len());
            for key in order {
                let (c, s, l, t) = best[&key];
                let mut layers = entries[s].layers.clone();
                layers.push(l);
                index.insert(key, entries.len() as u32);
                next.push(entries.len());
                entries.push(TwoQubitClifford {
                    layers,
                    tableau: t,
                    pulses: c,
                });
            }
            class_sizes[class] = next.len();
            frontier = next;
        }
        if entries.len() != GROUP_ORDER {
            return Err(Error::InvalidParams(format!(
                "generator produced {} group elements, expected {GROUP_ORDER}; it is not CNOT-equivalent",
                entries.len()
            )));
        }
        Ok(TwoQubitTable {
            generator: gen,
            entries,
            index,
            class_sizes,
        })
    }

    pub fn generator(&self) -> &Tableau {
        &self.generator
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &TwoQubitClifford {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[TwoQubitClifford] {
        &self.entries
    }

    /// Elements using 0, 1, 2 and 3 generator applications.
    pub fn class_sizes(&self) -> [usize; 4] {
        self.class_sizes
    }

    pub fn lookup(&self, t: &Tableau) -> Option<usize> {
        self.index.get(&t.key()).map(|&i| i as usize)
    }

    /// Uniform over the group.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.entries.len())
    }

    /// Recomposes an element's ideal unitary from its layers and `generator`.
    pub fn recompose(&self, i: usize, generator: &Unitary4) -> Unitary4 {
        let g = one_qubit::group();
        let e = &self.entries[i];
        let mut m = crate::linalg::Mat4::identity();
        for (n, layer) in e.layers.iter().enumerate() {
            if n > 0 {
                m = generator.matrix() * m;
            }
            m = kron2(
                &g.get(layer[0] as usize).matrix,
                &g.get(layer[1] as usize).matrix,
            ) * m;
        }
        Unitary4::from_matrix_unchecked(m)
    }
}

/// Closure of `{H₁, H₂, S₁, S₂, CNOT}` by breadth-first search over tableaux.
pub fn enumerate_group_order() -> usize {
    use crate::linalg::{c, Mat2, Mat4};
    let h = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0))
        * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let s = Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let id = Mat2::identity();
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let cnot = Mat4::new(o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z);
    let gens: Vec<Tableau> = [
        kron2(&h, &id),
        kron2(&id, &h),
        kron2(&s, &id),
        kron2(&id, &s),
        cnot,
    ]
    .iter()
    .map(|m| Tableau::from_unitary(m).expect("Clifford generator"))
    .collect();
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(Tableau::identity().key());
    queue.push_back(Tableau::identity());
    while let Some(t) = queue.pop_front() {
        for g in &gens {
            let n = t.then(g);
            if seen.insert(n.key()) {
                queue.push_back(n);
            }
        }
    }
    seen.len()
}
