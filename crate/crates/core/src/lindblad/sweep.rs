//! T1/T2 sweep of the length-2 and length-5 Clifford generators and the
//! equal-infidelity contour.

use rayon::prelude::*;
use serde::Serialize;

use super::{average_infidelity, sequence_channel, DecoherenceParams};
use crate::cr_model::CRParams;
use crate::sequences::{clifford_generator_default, length2_default};
use crate::units::ns;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub t1_grid: Vec<f64>,
    pub t2_grid: Vec<f64>,
    pub one_qubit_gate_time: f64,
    pub params: CRParams,
}

impl SweepConfig {
    /// `n × n` log-spaced grid over `[lo, hi]` seconds on both axes.
    pub fn square(lo: f64, hi: f64, n: usize, params: CRParams) -> Self {
        SweepConfig {
            t1_grid: log_grid(lo, hi, n),
            t2_grid: log_grid(lo, hi, n),
            one_qubit_gate_time: ns(30.0),
            params,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "T1_s")]
    pub t1: f64,
    #[serde(rename = "T2_s")]
    pub t2: f64,
    pub infid_length2: f64,
    pub infid_length5: f64,
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Row-major: `T1` index outer, `T2` index inner.
    pub points: Vec<SweepPoint>,
    pub n_t1: usize,
    pub n_t2: usize,
    /// Equal-infidelity polyline `(T1, T2)` in seconds.
    pub contour: Vec<(f64, f64)>,
}

impl SweepResult {
    pub fn at(&self, i1: usize, i2: usize) -> &SweepPoint {
        &self.points[i1 * self.n_t2 + i2]
    }

    /// Where the contour crosses `T1 = T2`, interpolated in log space.
    pub fn diagonal_intersection(&self) -> Option<f64> {
        self.contour.windows(2).find_map(|w| {
            let d0 = w[0].1.ln() - w[0].0.ln();
            let d1 = w[1].1.ln() - w[1].0.ln();
            if d0 == 0.0 {
                return Some(w[0].0);
            }
            if d0.signum() != d1.signum() && d1 != 0.0 {
                let f = d0 / (d0 - d1);
                Some((w[0].0.ln() + f * (w[1].0.ln() - w[0].0.ln())).exp())
            } else {
                None
            }
        })
    }
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Average infidelity of the length-2 `(π/2)_ZX` gate and the length-5
/// Clifford generator at one decoherence point.
pub fn scheme_infidelities(params: &CRParams, dec: &DecoherenceParams) -> (f64, f64) {
    let l2 = length2_default();
    let l5 = clifford_generator_default();
    let r2 = average_infidelity(l2.ideal_target(), &sequence_channel(&l2, params, dec));
    let r5 = average_infidelity(l5.ideal_target(), &sequence_channel(&l5, params, dec));
    (r2, r5)
}

pub fn sweep(config: &SweepConfig) -> SweepResult {
    let (n1, n2) = (config.t1_grid.len(), config.t2_grid.len());
    let points: Vec<SweepPoint> = (0..n1 * n2)
        .into_par_iter()
        .map(|idx| {
            let (t1, t2) = (config.t1_grid[idx / n2], config.t2_grid[idx % n2]);
            let dec = DecoherenceParams {
                t1,
                t2,
                one_qubit_gate_time: config.one_qubit_gate_time,
            };
            if !dec.is_physical() {
                return SweepPoint {
                    t1,
                    t2,
                    infid_length2: f64::NAN,
                    infid_length5: f64::NAN,
                    excluded: true,
                };
            }
            let (r2, r5) = scheme_infidelities(&config.params, &dec);
            SweepPoint {
                t1,
                t2,
                infid_length2: r2,
                infid_length5: r5,
                excluded: false,
            }
        })
        .collect();
    let diff: Vec<f64> = points
        .iter()
        .map(|p| p.infid_length5 - p.infid_length2)
        .collect();
    let contour = extract_contour(&config.t1_grid, &config.t2_grid, &diff);
    SweepResult {
        points,
        n_t1: n1,
        n_t2: n2,
        contour,
    }
}

/// Grid-edge identifier: `(i1, i2, horizontal)` where horizontal edges run
/// along the `T1` axis.
type Edge = (usize, usize, bool);

/// Zero level set of `values` (row-major, `T1` outer) by marching squares in
/// log coordinates. Cells touching a NaN are skipped. Returns the longest
/// connected polyline.
pub fn extract_contour(t1: &[f64], t2: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let n2 = t2.len();
    let v = |i: usize, j: usize| values[i * n2 + j];
    let point = |e: Edge| -> (f64, f64) {
        let (i, j, along_t1) = e;
        let (a, b) = if along_t1 {
            (v(i, j), v(i + 1, j))
        } else {
            (v(i, j), v(i, j + 1))
        };
        let f = a / (a - b);
        if along_t1 {
            (
                (t1[i].ln() + f * (t1[i + 1].ln() - t1[i].ln())).exp(),
                t2[j],
            )
        } else {
            (
                t1[i],
                (t2[j].ln() + f * (t2[j + 1].ln() - t2[j].ln())).exp(),
            )
        }
    };
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for i in 0..t1.len().saturating_sub(1) {
        for j in 0..n2.saturating_sub(1) {
            let corners = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
            if corners.iter().any(|x| x.is_nan()) {
                continue;
            }
            // cell edges in cyclic order: bottom, right, top, left
            let edges: [Edge; 4] = [
                (i, j, true),
                (i + 1, j, false),
                (i, j + 1, true),
                (i, j, false),
            ];
            let crossed: Vec<Edge> = (0..4)
                .filter(|&k| (corners[k] > 0.0) != (corners[(k + 1) % 4] > 0.0))
                .map(|k| edges[k])
                .collect();
            match crossed.len() {
                2 => segments.push((crossed[0], crossed[1])),
                4 => {
                    let center = corners.iter().sum::<f64>() / 4.0;
                    if (center > 0.0) == (corners[0] > 0.0) {
                        segments.push((crossed[0], crossed[3]));
                        segments.push((crossed[1], crossed[2]));
                    } else {
                        segments.push((crossed[0], crossed[1]));
                        segments.push((crossed[2], crossed[3]));
                    }
                }
                _ => {}
            }
        }
    }
    chain(&segments).into_iter().map(point).collect()
}

fn chain(segments: &[(Edge, Edge)]) -> Vec<Edge> {
    let mut used = vec![false; segments.len()];
    let mut best: Vec<Edge> = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line = std::collections::VecDeque::from([segments[start].0, segments[start].1]);
        loop {
            let mut extended = false;
            for (k, (a, b)) in segments.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let (front, back) = (*line.front().unwrap(), *line.back().unwrap());
                let next = if *a == back {
                    Some((false, *b))
                } else if *b == back {
                    Some((false, *a))
                } else if *a == front {
                    Some((true, *b))
                } else if *b == front {
                    Some((true, *a))
                } else {
                    None
                };
                if let Some((at_front, e)) = next {
                    if at_front {
                        line.push_front(e);
                    } else {
                        line.push_back(e);
                    }
                    used[k] = true;
                    extended = true;
                }
            }
            if !extended {
                break;
            }
        }
        if line.len() > best.len() {
            best = line.into_iter().collect();
        }
    }
    // orient with increasing T1
    if let (Some(f), Some(l)) = (best.first(), best.last()) {
        if (f.0, f.1) > (l.0, l.1) {
            best.reverse();
        }
    }
    best
}

/// `T` on the diagonal `T1 = T2 = T` where the two schemes have equal
/// infidelity, by bisection in `ln T` over `[lo, hi]`.
pub fn diagonal_crossing(
    params: &CRParams,
    one_qubit_gate_time: f64,
    lo: f64,
    hi: f64,
) -> Option<f64> {
    let diff = |t: f64| {
        let dec = DecoherenceParams {
            t1: t,
            t2: t,
            one_qubit_gate_time,
        };
        let (r2, r5) = scheme_infidelities(params, &dec);
        r5 - r2
    };
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (mut fa, fb) = (diff(lo), diff(hi));
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = diff(m.exp());
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a < 1e-6 {
            break;
        }
    }
    Some((0.5 * (a + b)).exp())
}
