//! Weighted Levenberg–Marquardt fit of `a p^k + b`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::DecayCurve;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    /// Points with mean survival above this are dropped before fitting.
    pub exclude_above: f64,
    pub min_points: usize,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            exclude_above: 0.9,
            min_points: 4,
            max_iterations: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub a: f64,
    pub p: f64,
    pub b: f64,
    /// Parameter order `(a, p, b)`.
    pub covariance: [[f64; 3]; 3],
    pub reduced_chi2: f64,
    pub points_used: usize,
}

impl DecayFit {
    pub fn stderr_p(&self) -> f64 {
        self.covariance[1][1].max(0.0).sqrt()
    }

    pub fn model(&self, k: f64) -> f64 {
        self.a * self.p.powf(k) + self.b
    }
}

/// `r = (1 − p)(d − 1)/d` with `d = 2^qubits`.
pub fn clifford_infidelity(p: f64, qubit_count: u32) -> f64 {
    let d = 2f64.powi(qubit_count as i32);
    (1.0 - p) * (d - 1.0) / d
}

pub fn fit_decay(curve: &DecayCurve, options: &FitOptions) -> Result<DecayFit> {
    let kept: Vec<_> = curve
        .points
        .iter()
        .filter(|pt| pt.mean_survival <= options.exclude_above)
        .collect();
    let fail = |message: String, residuals: Vec<f64>| Error::Fit { message, residuals };
    if kept.len() < options.min_points {
        return Err(fail(
            format!(
                "{} points at or below survival {}, need {}",
                kept.len(),
                options.exclude_above,
                options.min_points
            ),
            vec![],
        ));
    }
    let ks: Vec<f64> = kept.iter().map(|pt| pt.k as f64).collect();
    let ys: Vec<f64> = kept.iter().map(|pt| pt.mean_survival).collect();
    let min_se = kept
        .iter()
        .map(|pt| pt.stderr)
        .filter(|s| *s > 0.0)
        .fold(f64::INFINITY, f64::min);
    let weighted = min_se.is_finite();
    let ws: Vec<f64> = kept
        .iter()
        .map(|pt| {
            if weighted {
                1.0 / pt.stderr.max(min_se).powi(2)
            } else {
                1.0
            }
        })
        .collect();

    let b0 = 1.0 / 2f64.powi(curve.qubit_count as i32);
    let (mut a, mut p, mut b) = initial_guess(&ks, &ys, b0);

    let residuals = |a: f64, p: f64, b: f64| -> Vec<f64> {
        ks.iter()
            .zip(&ys)
            .map(|(k, y)| y - (a * p.powf(*k) + b))
            .collect()
    };
    let chi2 = |r: &[f64]| r.iter().zip(&ws).map(|(r, w)| w * r * r).sum::<f64>();
    let normal = |a: f64, p: f64, r: &[f64]| -> (Matrix3<f64>, Vector3<f64>) {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for ((k, w), res) in ks.iter().zip(&ws).zip(r) {
            let j = Vector3::new(p.powf(*k), a * k * p.powf(k - 1.0), 1.0);
            jtj += j * j.transpose() * *w;
            jtr += j * (*w * res);
        }
        (jtj, jtr)
    };

    let mut r = residuals(a, p, b);
    let mut current = chi2(&r);
    let mut lambda = 1e-3;
    let mut converged = false;
    for _ in 0..options.max_iterations {
        let (jtj, jtr) = normal(a, p, &r);
        let mut damped = jtj;
        for i in 0..3 {
            damped[(i, i)] *= 1.0 + lambda;
        }
        let Some(step) = damped.lu().solve(&jtr) else {
            lambda *= 10.0;
            continue;
        };
        let (na, np, nb) = (a + step[0], p + step[1], b + step[2]);
        if !(np > 0.0 && np < 1.0) {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
            continue;
        }
        let nr = residuals(na, np, nb);
        let trial = chi2(&nr);
        if trial <= current {
            let small = step[0].abs() <= 1e-13 * (1.0 + a.abs())
                && step[1].abs() <= 1e-15 * (1.0 + p.abs())
                && step[2].abs() <= 1e-13 * (1.0 + b.abs());
            let flat = current - trial <= 1e-15 * current.max(1e-300);
            (a, p, b, r, current) = (na, np, nb, nr, trial);
            lambda = (lambda / 10.0).max(1e-15);
            if small || flat {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                converged = current.is_finite();
                break;
            }
        }
    }
    if !converged {
        return Err(fail("Levenberg–Marquardt did not converge".into(), r));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(fail(format!("fitted p = {p} outside (0, 1)"), r));
    }
    let dof = kept.len().saturating_sub(3).max(1) as f64;
    let reduced_chi2 = current / dof;
    let (jtj, _) = normal(a, p, &r);
    let inv = jtj
        .try_inverse()
        .ok_or_else(|| fail("singular normal matrix at the optimum".into(), r.clone()))?;
    let scale = if weighted {
        reduced_chi2.max(1.0)
    } else {
        reduced_chi2
    };
    let cov = inv * scale;
    let mut covariance = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            covariance[i][j] = cov[(i, j)];
        }
    }
    Ok(DecayFit {
        a,
        p,
        b,
        covariance,
        reduced_chi2,
        points_used: kept.len(),
    })
}

/// Log-linear fit of `y − b0` for `p` and `a`.
fn initial_guess(ks: &[f64], ys: &[f64], b0: f64) -> (f64, f64, f64) {
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y > b0 + 1e-9)
        .map(|(k, y)| (*k, (y - b0).ln()))
        .collect();
    if pts.len() < 2 {
        return (1.0 - b0, 0.99, b0);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { -0.01 };
    let p = slope.exp().clamp(1e-6, 1.0 - 1e-9);
    let a = (my - slope * mx).exp();
    (a, p, b0)
}
