//! Simulated Clifford randomized benchmarking under coherent one-qubit noise.
//!
//! Each `(length, sequence)` pair gets its own random stream, derived from the
//! master seed, so results do not depend on how work is scheduled.

mod fit;

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::one_qubit::{self, ORDER};
use crate::clifford::{Tableau, TwoQubitTable};
use crate::cr_model::CRParams;
use crate::linalg::{Mat2, Mat4, C64, ONE, ZERO};
use crate::noise::{
    freeze_realization, stream_rng, FreezePolicy, NoiseRealization, OneQubitNoiseModel,
};
use crate::pauli::trace_fidelity;
use crate::sequences::{self, compile, CompositeSequence, Qubit};
use crate::{Error, Result};

pub use fit::{clifford_infidelity, fit_decay, DecayFit, FitOptions};

/// Which composite implements the two-qubit entangling generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// `(π/2)_ZX` from the length-2 sequence.
    Length2,
    /// The CNOT-equivalent generator built from two length-5 sequences.
    Length5,
    /// `(π/2)_ZX` from the echoed cross-resonance sequence.
    Ecr,
}

impl Scheme {
    pub fn sequence(self) -> CompositeSequence {
        match self {
            Scheme::Length2 => sequences::length2_default(),
            Scheme::Length5 => sequences::clifford_generator_default(),
            Scheme::Ecr => sequences::ecr(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Length2 => "length2",
            Scheme::Length5 => "length5",
            Scheme::Ecr => "ecr",
        }
    }

    /// Clifford table decomposed over this scheme's ideal generator, built once.
    pub fn table(self) -> &'static TwoQubitTable {
        static ZX: OnceLock<TwoQubitTable> = OnceLock::new();
        static CLIF: OnceLock<TwoQubitTable> = OnceLock::new();
        let cell = match self {
            Scheme::Length2 | Scheme::Ecr => &ZX,
            Scheme::Length5 => &CLIF,
        };
        cell.get_or_init(|| {
            TwoQubitTable::build(self.sequence().ideal_target())
                .expect("scheme generators are CNOT-equivalent")
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "length2" => Ok(Scheme::Length2),
            "length5" => Ok(Scheme::Length5),
            "ecr" => Ok(Scheme::Ecr),
            _ => Err(Error::Parse(format!(
                "unknown scheme `{s}` (expected length2, length5 or ecr)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RBConfig {
    pub qubit_count: u32,
    pub lengths: Vec<usize>,
    pub sequences_per_length: usize,
    pub noise: OneQubitNoiseModel,
    pub freeze_policy: FreezePolicy,
    pub params: CRParams,
    pub scheme: Scheme,
    pub seed: u64,
}

impl RBConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.qubit_count == 1 || self.qubit_count == 2) {
            return Err(Error::InvalidParams("qubit_count must be 1 or 2".into()));
        }
        if self.lengths.is_empty() || self.lengths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "sequence lengths must be nonempty and strictly increasing".into(),
            ));
        }
        if self.sequences_per_length == 0 {
            return Err(Error::InvalidParams(
                "sequences_per_length must be at least 1".into(),
            ));
        }
        if self.qubit_count == 2 {
            self.params.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub k: usize,
    pub mean_survival: f64,
    pub stderr: f64,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub qubit_count: u32,
    pub points: Vec<DecayPoint>,
}

impl DecayCurve {
    /// Aggregates per-sequence survivals, one row per length.
    pub fn from_samples(qubit_count: u32, lengths: &[usize], samples: &[Vec<f64>]) -> Self {
        let points = lengths
            .iter()
            .zip(samples)
            .map(|(&k, s)| {
                let n = s.len();
                let mean = s.iter().sum::<f64>() / n as f64;
                let var = if n > 1 {
                    s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
                } else {
                    0.0
                };
                DecayPoint {
                    k,
                    mean_survival: mean,
                    stderr: (var / n as f64).sqrt(),
                    n,
                }
            })
            .collect();
        DecayCurve {
            qubit_count,
            points,
        }
    }
}

/// Length grid for an expected Clifford infidelity `r`: a sparse geometric
/// run from 1 to `0.2/(1 − p)`, then two thirds of the points geometric up to
/// `3/(1 − p)`. Stopping near `b + a/e` leaves `b` poorly constrained.
pub fn suggest_lengths(expected_r: f64, qubit_count: u32, points: usize) -> Vec<usize> {
    let d = 2f64.powi(qubit_count as i32);
    let decay = (expected_r * d / (d - 1.0)).max(1e-12);
    let k_mid = (0.2 / decay).max(2.0);
    let k_max = (3.0 / decay).max(8.0);
    let late = (2 * points).div_ceil(3).max(2);
    let early = points.saturating_sub(late).max(1);
    let geometric = |lo: f64, hi: f64, n: usize, include_end: bool| -> Vec<f64> {
        let steps = if include_end {
            n.saturating_sub(1).max(1)
        } else {
            n
        };
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / steps as f64))
            .collect()
    };
    let mut out: Vec<usize> = geometric(1.0, k_mid, early, false)
        .into_iter()
        .chain(geometric(k_mid, k_max, late, true))
        .map(|k| k.round() as usize)
        .collect();
    out.dedup();
    out
}

fn stream_id(length_index: usize, sequence: usize) -> u64 {
    ((length_index as u64) << 32) | sequence as u64
}

/// Survival probability of every sequence, grouped by length.
pub fn rb_samples(config: &RBConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let scheme_seq = config.scheme.sequence();
    let table = if config.qubit_count == 2 {
        Some(config.scheme.table())
    } else {
        None
    };
    let jobs: Vec<(usize, usize)> = (0..config.lengths.len())
        .flat_map(|li| (0..config.sequences_per_length).map(move |s| (li, s)))
        .collect();
    let flat: Vec<f64> = jobs
        .par_iter()
        .map(|&(li, s)| {
            let mut rng = stream_rng(config.seed, stream_id(li, s));
            let noise = freeze_realization(&config.noise, config.freeze_policy, &mut rng);
            let k = config.lengths[li];
            match table {
                None => survival_one_qubit(k, &noise, &mut rng),
                Some(t) => {
                    let g = compile(&scheme_seq, &config.params, Some(&noise)).into_matrix();
                    survival_two_qubit(k, t, &g, &noise, &mut rng)
                }
            }
        })
        .collect();
    Ok(flat
        .chunks(config.sequences_per_length)
        .map(|c| c.to_vec())
        .collect())
}

pub fn rb_run(config: &RBConfig) -> Result<DecayCurve> {
    let samples = rb_samples(config)?;
    Ok(DecayCurve::from_samples(
        config.qubit_count,
        &config.lengths,
        &samples,
    ))
}

/// Trace infidelity `1 − |Tr(U†V)/4|²` of the scheme's noisy generator,
/// averaged over `samples` frozen noise realizations.
pub fn coherent_trace_infidelity(
    scheme: Scheme,
    params: &CRParams,
    noise: &OneQubitNoiseModel,
    policy: FreezePolicy,
    samples: usize,
    seed: u64,
) -> f64 {
    let seq = scheme.sequence();
    let total: f64 = (0..samples.max(1))
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, s as u64);
            let realization = freeze_realization(noise, policy, &mut rng);
            1.0 - trace_fidelity(
                seq.ideal_target(),
                &compile(&seq, params, Some(&realization)),
            )
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    total / samples.max(1) as f64
}

fn apply2(m: &Mat2, v: [C64; 2]) -> [C64; 2] {
    [
        m[(0, 0)] * v[0] + m[(0, 1)] * v[1],
        m[(1, 0)] * v[0] + m[(1, 1)] * v[1],
    ]
}

fn survival_one_qubit<R: rand::Rng>(k: usize, noise: &NoiseRealization, rng: &mut R) -> f64 {
    let group = one_qubit::group();
    let noisy: Vec<Mat2> = (0..ORDER)
        .map(|i| noise.noisy_clifford(Qubit::One, i))
        .collect();
    let mut state = [ONE, ZERO];
    let mut total = 0usize;
    for _ in 0..k {
        let c = rng.random_range(0..ORDER);
        total = group.compose(total, c);
        state = apply2(&noisy[c], state);
    }
    state = apply2(&noisy[group.inverse(total)], state);
    state[0].norm_sqr()
}

fn apply_local(a: &Mat2, b: &Mat2, v: &mut [C64; 4]) {
    // qubit 1 is the high bit of the basis index
    for j in 0..2 {
        let (x, y) = (v[j], v[2 + j]);
        v[j] = a[(0, 0)] * x + a[(0, 1)] * y;
        v[2 + j] = a[(1, 0)] * x + a[(1, 1)] * y;
    }
    for i in 0..2 {
        let (x, y) = (v[2 * i], v[2 * i + 1]);
        v[2 * i] = b[(0, 0)] * x + b[(0, 1)] * y;
        v[2 * i + 1] = b[(1, 0)] * x + b[(1, 1)] * y;
    }
}

fn apply4(m: &Mat4, v: &mut [C64; 4]) {
    let old = *v;
    for (r, out) in v.iter_mut().enumerate() {
        *out = (0..4).map(|c| m[(r, c)] * old[c]).sum();
    }
}

fn apply_clifford(
    idx: usize,
    table: &TwoQubitTable,
    generator: &Mat4,
    noisy: &[[Mat2; ORDER]; 2],
    state: &mut [C64; 4],
) {
    for (n, layer) in table.get(idx).layers.iter().enumerate() {
        if n > 0 {
            apply4(generator, state);
        }
        apply_local(
            &noisy[0][layer[0] as usize],
            &noisy[1][layer[1] as usize],
            state,
        );
    }
}

fn survival_two_qubit<R: rand::Rng>(
    k: usize,
    table: &TwoQubitTable,
    generator: &Mat4,
    noise: &NoiseRealization,
    rng: &mut R,
) -> f64 {
    let noisy: [[Mat2; ORDER]; 2] = [
        std::array::from_fn(|i| noise.noisy_clifford(Qubit::One, i)),
        std::array::from_fn(|i| noise.noisy_clifford(Qubit::Two, i)),
    ];
    let mut state = [ONE, ZERO, ZERO, ZERO];
    let mut total = Tableau::identity();
    for _ in 0..k {
        let c = table.sample(rng);
        total = total.then(&table.get(c).tableau);
        apply_clifford(c, table, generator, &noisy, &mut state);
    }
    let inv = table
        .lookup(&total.inverse())
        .expect("table covers the group");
    apply_clifford(inv, table, generator, &noisy, &mut state);
    state[0].norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(qubits: u32, dt: f64, params: CRParams) -> RBConfig {
        RBConfig {
            qubit_count: qubits,
            lengths: vec![1, 3, 10, 30],
            sequences_per_length: 8,
            noise: OneQubitNoiseModel::new(dt).unwrap(),
            freeze_policy: FreezePolicy::PerClifford,
            params,
            scheme: Scheme::Length2,
            seed: 3,
        }
    }

    #[test]
    fn noiseless_survival_is_one() {
        for scheme in [Scheme::Length2, Scheme::Length5, Scheme::Ecr] {
            let mut c = config(
                2,
                0.0,
                CRParams::entangler_only(CRParams::calibrated().h_zx),
            );
            c.scheme = scheme;
            let curve = rb_run(&c).unwrap();
            for pt in &curve.points {
                assert!((pt.mean_survival - 1.0).abs() < 1e-12, "{scheme:?} {pt:?}");
            }
        }
        let curve = rb_run(&config(1, 0.0, CRParams::default())).unwrap();
        assert!(curve
            .points
            .iter()
            .all(|p| (p.mean_survival - 1.0).abs() < 1e-12));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let c = config(2, 0.05, CRParams::calibrated().clone());
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| rb_run(&c).unwrap());
        let b = four.install(|| rb_run(&c).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let mut c = config(2, 0.0, CRParams::calibrated().clone());
        c.lengths = vec![5, 5];
        assert!(rb_run(&c).is_err());
        c.lengths = vec![1];
        c.qubit_count = 3;
        assert!(rb_run(&c).is_err());
    }

    #[test]
    fn trace_infidelity_without_noise() {
        let p = CRParams::calibrated();
        let quiet = OneQubitNoiseModel::new(0.0).unwrap();
        let r =
            coherent_trace_infidelity(Scheme::Length2, p, &quiet, FreezePolicy::PerClifford, 3, 1);
        assert!((r - 4.512e-4).abs() < 1e-6, "{r}");
        let noisy = OneQubitNoiseModel::new(0.05).unwrap();
        assert!(
            coherent_trace_infidelity(Scheme::Length5, p, &noisy, FreezePolicy::PerClifford, 50, 1)
                > 1e-4
        );
    }

    #[test]
    fn grid_suggestion() {
        let g = suggest_lengths(3e-3, 2, 12);
        assert_eq!(g[0], 1);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(*g.last().unwrap() >= 700);
    }
}
