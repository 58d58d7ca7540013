//! Experiment drivers: load a config, run it on a sized worker pool, write
//! CSVs and a `<experiment>.meta.toml` sidecar.
//!
//! The sidecar is itself a valid config holding the fully resolved inputs,
//! plus a `[run]` table (version, wall time, outputs, headline numbers) that
//! is ignored when it is read back. Re-running a sidecar reproduces the CSVs
//! byte for byte.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::cr_model::{calibrate_h, ErrorChannelMap};
use crate::lindblad::{diagonal_crossing, sweep, SweepConfig};
use crate::noise::rb_infidelity_analytic;
use crate::pauli::{local_invariants, trace_fidelity};
use crate::rb::{
    clifford_infidelity, coherent_trace_infidelity, fit_decay, rb_run, suggest_lengths, DecayCurve,
    FitOptions, RBConfig, Scheme,
};
use crate::sequences::{
    self, compile, hamiltonian_scaling_slope, parse_sequence, RobustnessPattern,
};
use crate::units::{ms, ns, pi_units, rad_per_s_to_mhz};
use crate::{CRParams, CompositeSequence, Error, Result, TwoQubitPauli};

pub use config::{builtin_sequence, ExperimentConfig, ExperimentKind, BUILTIN_SEQUENCES};
use output::*;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses the machine's parallelism.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub experiment: ExperimentKind,
    /// CSV files written, in order.
    pub outputs: Vec<PathBuf>,
    pub sidecar: PathBuf,
    /// Headline numbers, also stored in the sidecar.
    pub summary: toml::Table,
    pub wall_time_s: f64,
}

/// What a driver produced. A numerical failure after some outputs were
/// written is carried in `error` so the sidecar still gets written.
#[derive(Default)]
struct Outcome {
    outputs: Vec<String>,
    summary: toml::Table,
    error: Option<Error>,
}

impl Outcome {
    fn note(&mut self, key: impl Into<String>, value: impl Into<toml::Value>) {
        self.summary.insert(key.into(), value.into());
    }

    fn defer(&mut self, e: Error) {
        if self.error.is_none() {
            self.error = Some(e);
        }
    }
}

pub fn sidecar_path(out_dir: &Path, kind: ExperimentKind) -> PathBuf {
    out_dir.join(format!("{}.meta.toml", kind.name()))
}

/// Runs a resolved config. On a numerical failure the outputs written so far
/// and the sidecar are kept, and the error is returned.
pub fn run(config: &ExperimentConfig, options: &RunOptions) -> Result<RunReport> {
    let kind = config
        .experiment
        .ok_or_else(|| Error::Config("config does not name an experiment".into()))?;
    std::fs::create_dir_all(&options.out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let dir = options.out_dir.as_path();
    let outcome = pool.install(|| match kind {
        ExperimentKind::Rb => run_rb(config, dir),
        ExperimentKind::DeltaU => run_delta_u(config, dir),
        ExperimentKind::Sweep => run_sweep(config, dir),
        ExperimentKind::Verify => run_verify(config, dir),
        ExperimentKind::FidelityScan => run_fidelity_scan(config, dir),
        ExperimentKind::Calibrate => run_calibrate(config, dir),
    })?;
    let wall_time_s = start.elapsed().as_secs_f64();

    let mut run_table = toml::Table::new();
    run_table.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    run_table.insert("experiment".into(), kind.name().into());
    run_table.insert("seed".into(), toml::Value::Integer(config.seed as i64));
    run_table.insert(
        "workers".into(),
        toml::Value::Integer(pool.current_num_threads() as i64),
    );
    run_table.insert("wall_time_s".into(), wall_time_s.into());
    run_table.insert(
        "outputs".into(),
        toml::Value::Array(outcome.outputs.iter().map(|s| s.as_str().into()).collect()),
    );
    if let Some(e) = &outcome.error {
        run_table.insert("error".into(), e.to_string().into());
        if let Error::Fit { residuals, .. } = e {
            run_table.insert(
                "fit_residuals".into(),
                toml::Value::Array(residuals.iter().map(|r| (*r).into()).collect()),
            );
        }
    }
    run_table.insert(
        "summary".into(),
        toml::Value::Table(outcome.summary.clone()),
    );
    let mut sidecar_config = config.clone();
    sidecar_config.run = Some(run_table);
    let sidecar = sidecar_path(dir, kind);
    std::fs::write(&sidecar, sidecar_config.to_toml()?)?;

    if let Some(e) = outcome.error {
        return Err(e);
    }
    Ok(RunReport {
        experiment: kind,
        outputs: outcome.outputs.iter().map(|f| dir.join(f)).collect(),
        sidecar,
        summary: outcome.summary,
        wall_time_s,
    })
}

fn write<T: serde::Serialize>(
    dir: &Path,
    name: String,
    rows: &[T],
    outcome: &mut Outcome,
) -> Result<()> {
    write_rows(&dir.join(&name), rows)?;
    outcome.outputs.push(name);
    Ok(())
}

fn fit_row(curve: &DecayCurve, options: &FitOptions) -> Result<FitRow> {
    let f = fit_decay(curve, options)?;
    Ok(FitRow {
        a: f.a,
        p: f.p,
        b: f.b,
        r_clifford: clifford_infidelity(f.p, curve.qubit_count),
        stderr_p: f.stderr_p(),
    })
}

fn run_rb(config: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let rb = config.rb.as_ref().expect("resolved rb block");
    let noise_block = config.noise.as_ref().expect("resolved noise block");
    let noise = noise_block.model()?;
    let params = config.model.params()?;
    let lengths = rb.lengths.clone().expect("resolved lengths");
    let fit_options = FitOptions {
        exclude_above: rb.exclude_above,
        ..FitOptions::default()
    };
    let runs: Vec<(String, Scheme)> = if rb.qubit_count == 1 {
        vec![("one_qubit".to_string(), Scheme::Length2)]
    } else {
        rb.schemes
            .iter()
            .map(|s| (s.name().to_string(), *s))
            .collect()
    };
    let mut out = Outcome::default();
    out.note("delta_theta", noise.delta_theta);
    out.note(
        "one_qubit_infidelity_analytic",
        rb_infidelity_analytic(noise.delta_theta),
    );
    for (label, scheme) in runs {
        let cfg = RBConfig {
            qubit_count: rb.qubit_count,
            lengths: lengths.clone(),
            sequences_per_length: rb.sequences_per_length,
            noise,
            freeze_policy: noise_block.freeze_policy,
            params: params.clone(),
            scheme,
            seed: config.seed,
        };
        let curve = rb_run(&cfg)?;
        write(
            dir,
            format!("rb_decay_{label}.csv"),
            &curve.points,
            &mut out,
        )?;
        match fit_row(&curve, &fit_options) {
            Ok(row) => {
                out.note(format!("r_clifford_{label}"), row.r_clifford);
                write(dir, format!("rb_fit_{label}.csv"), &[row], &mut out)?;
            }
            Err(e) => {
                out.note(format!("fit_error_{label}"), e.to_string());
                out.defer(e);
            }
        }
    }
    Ok(out)
}

fn delta_u_rows(name: &str, seq: &CompositeSequence, params: &CRParams) -> Vec<DeltaURow> {
    let m = ErrorChannelMap::between(seq.ideal_target(), &compile(seq, params, None));
    TwoQubitPauli::all()
        .map(|p| {
            let c = m.coefficient(p);
            DeltaURow {
                sequence: name.to_string(),
                channel: p.to_string(),
                coefficient: m.reported(p),
                re: c.re,
                im: c.im,
            }
        })
        .collect()
}

fn delta_u_tables(
    names: &[String],
    params: &CRParams,
    out: &mut Outcome,
) -> Result<Vec<DeltaURow>> {
    let mut rows = Vec::new();
    for name in names {
        let seq = builtin_sequence(name, None)?;
        let r = 1.0 - trace_fidelity(seq.ideal_target(), &compile(&seq, params, None));
        out.note(format!("trace_infidelity_{name}"), r);
        rows.extend(delta_u_rows(name, &seq, params));
    }
    Ok(rows)
}

fn run_delta_u(config: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let block = config.delta_u.as_ref().expect("resolved delta_u block");
    let params = config.model.params()?;
    let mut out = Outcome::default();
    let rows = delta_u_tables(&block.sequences, &params, &mut out)?;
    write(dir, "delta_u.csv".into(), &rows, &mut out)?;
    Ok(out)
}

fn run_sweep(config: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let s = config.sweep.as_ref().expect("resolved sweep block");
    let params = config.model.params()?;
    let cfg = SweepConfig {
        t1_grid: crate::lindblad::log_grid(ms(s.t1_min_ms), ms(s.t1_max_ms), s.t1_points),
        t2_grid: crate::lindblad::log_grid(ms(s.t2_min_ms), ms(s.t2_max_ms), s.t2_points),
        one_qubit_gate_time: ns(s.one_qubit_gate_ns),
        params: params.clone(),
    };
    let result = sweep(&cfg);
    let mut out = Outcome::default();
    write(dir, "sweep.csv".into(), &result.points, &mut out)?;
    let contour: Vec<ContourRow> = result
        .contour
        .iter()
        .map(|&(t1, t2)| ContourRow { t1, t2 })
        .collect();
    write(dir, "contour.csv".into(), &contour, &mut out)?;
    if let Some(t) = result.diagonal_intersection() {
        out.note("contour_diagonal_s", t);
    }
    let lo = ms(s.t1_min_ms.max(s.t2_min_ms));
    let hi = ms(s.t1_max_ms.min(s.t2_max_ms));
    if lo < hi {
        if let Some(t) = diagonal_crossing(&params, cfg.one_qubit_gate_time, lo, hi) {
            out.note("diagonal_crossing_s", t);
        }
    }
    Ok(out)
}

fn run_verify(config: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let v = config.verify.as_ref().expect("resolved verify block");
    let params = config.model.params()?;
    let (seq, default_pattern) = match &v.sequence_text {
        Some(text) => (parse_sequence(text)?, None),
        None => {
            let seq = builtin_sequence(&v.sequence, v.theta_pi)?;
            let pattern = match v.sequence.as_str() {
                "length5" => Some(RobustnessPattern::length5(
                    v.theta_pi.map_or_else(sequences::theta0, pi_units),
                )),
                "length2" => Some(RobustnessPattern::alternating_commuting(
                    2,
                    v.theta_pi.map_or(std::f64::consts::FRAC_PI_4, pi_units),
                )),
                _ => None,
            };
            (seq, pattern)
        }
    };
    let pattern = match &v.pattern {
        Some(p) => {
            let theta = v.theta_pi.map_or_else(sequences::theta0, pi_units);
            Some(RobustnessPattern::new(
                p.zeta.clone(),
                p.xi.clone(),
                p.chi,
                theta,
            )?)
        }
        None => default_pattern,
    };
    let (g1, g2) = local_invariants(seq.ideal_target());
    let mut rows = vec![
        ("entangling_blocks", seq.entangling_blocks() as f64),
        ("physical_1q_pulses", seq.physical_1q_count() as f64),
        (
            "total_entangling_angle_pi",
            seq.total_entangling_angle() / std::f64::consts::PI,
        ),
        (
            "entangling_time_ns",
            seq.total_entangling_time(&params) * 1e9,
        ),
        (
            "trace_infidelity",
            1.0 - trace_fidelity(seq.ideal_target(), &compile(&seq, &params, None)),
        ),
        (
            "residual_scaling_slope",
            hamiltonian_scaling_slope(&seq, &params, &v.lambdas),
        ),
        ("local_invariant_g1_re", g1.re),
        ("local_invariant_g1_im", g1.im),
        ("local_invariant_g2", g2),
    ];
    let mut out = Outcome::default();
    if let Some(p) = &pattern {
        let r = sequences::robustness_residual(p);
        rows.push(("robustness_residual", r));
        out.note("robustness_residual", r);
    }
    out.note("sequence", sequences::format_sequence(&seq));
    let rows: Vec<VerifyRow> = rows
        .into_iter()
        .map(|(q, value)| VerifyRow {
            quantity: q.to_string(),
            value,
        })
        .collect();
    write(dir, "verify.csv".into(), &rows, &mut out)?;
    Ok(out)
}

fn run_fidelity_scan(config: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let f = config
        .fidelity_scan
        .as_ref()
        .expect("resolved fidelity_scan block");
    let noise_block = config.noise.as_ref().expect("resolved noise block");
    let params = config.model.params()?;
    let fit_options = FitOptions {
        exclude_above: f.exclude_above,
        ..FitOptions::default()
    };
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for &r1q in &f.one_qubit_infidelities {
        let noise = crate::noise::OneQubitNoiseModel::from_infidelity(r1q)?;
        let mut rb = [f64::NAN; 2];
        let mut trace = [0.0; 2];
        for (i, scheme) in [Scheme::Length2, Scheme::Length5].into_iter().enumerate() {
            let expected = config::expected_two_qubit_infidelity(&params, &[scheme], r1q);
            let cfg = RBConfig {
                qubit_count: 2,
                lengths: suggest_lengths(expected, 2, f.length_points.max(4)),
                sequences_per_length: f.sequences_per_length,
                noise,
                freeze_policy: noise_block.freeze_policy,
                params: params.clone(),
                scheme,
                seed: config.seed,
            };
            match fit_row(&rb_run(&cfg)?, &fit_options) {
                Ok(row) => rb[i] = row.r_clifford,
                Err(e) => {
                    out.note(
                        format!("fit_error_{}_{r1q:e}", scheme.name()),
                        e.to_string(),
                    );
                    out.defer(e);
                }
            }
            trace[i] = coherent_trace_infidelity(
                scheme,
                &params,
                &noise,
                noise_block.freeze_policy,
                f.trace_samples,
                config.seed,
            );
        }
        rows.push(ScanRow {
            r_1q: r1q,
            r_rb_l2: rb[0],
            r_rb_l5: rb[1],
            r_trace_l2: trace[0],
            r_trace_l5: trace[1],
        });
    }
    if let Some(x) = trace_crossing(&rows) {
        out.note("trace_crossing_r_1Q", x);
    }
    write(dir, "fidelity_scan.csv".into(), &rows, &mut out)?;
    Ok(out)
}

/// One-qubit infidelity where the length-2 and length-5 trace infidelities
/// cross, interpolated in log–log space between scan points.
pub fn trace_crossing(rows: &[ScanRow]) -> Option<f64> {
    rows.windows(2).find_map(|w| {
        let d = |r: &ScanRow| r.r_trace_l5.ln() - r.r_trace_l2.ln();
        let (d0, d1) = (d(&w[0]), d(&w[1]));
        if d0 == 0.0 {
            return Some(w[0].r_1q);
        }
        if d0.signum() != d1.signum() {
            let t = d0 / (d0 - d1);
            Some((w[0].r_1q.ln() + t * (w[1].r_1q.ln() - w[0].r_1q.ln())).exp())
        } else {
            None
        }
    })
}

fn run_calibrate(config: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let target = config
        .calibration
        .clone()
        .expect("resolved calibration block");
    let params = calibrate_h(&target)?;
    let mut out = Outcome::default();
    let row = CalibrationRow {
        quarter_block_ns: target.quarter_block_ns,
        eps_iy: target.eps_iy,
        eps_iz: target.eps_iz,
        h_iz_mhz: rad_per_s_to_mhz(params.h_iz),
        h_zx_mhz: rad_per_s_to_mhz(params.h_zx),
        h_zz_mhz: rad_per_s_to_mhz(params.h_zz),
    };
    out.note("h_iz_mhz", row.h_iz_mhz);
    out.note("h_zx_mhz", row.h_zx_mhz);
    out.note("h_zz_mhz", row.h_zz_mhz);
    write(dir, "calibration.csv".into(), &[row], &mut out)?;
    let rows = delta_u_tables(&["length2".into(), "length5".into()], &params, &mut out)?;
    write(dir, "delta_u.csv".into(), &rows, &mut out)?;
    Ok(out)
}
