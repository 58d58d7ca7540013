//! Experiment configuration files.
//!
//! A config is a TOML document. Keys carry their unit (`*_mhz` is `value/2π`
//! in MHz, `*_ns` and `*_ms` are times) and angles are in units of π. Unknown
//! keys are rejected, and every block an experiment does not use is an error.
//!
//! ```toml
//! experiment = "rb"
//! seed = 7
//!
//! [noise]
//! one_qubit_infidelity = 3e-4
//!
//! [rb]
//! schemes = ["length2", "length5"]
//! sequences_per_length = 200
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cr_model::{CalibrationTarget, DeviceProvenance};
use crate::noise::{rb_infidelity_analytic, FreezePolicy, OneQubitNoiseModel};
use crate::pauli::trace_fidelity;
use crate::rb::{suggest_lengths, Scheme};
use crate::sequences::compile;
use crate::units::mhz_to_rad_per_s;
use crate::{CRParams, Error, Result};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Rb,
    DeltaU,
    Sweep,
    Verify,
    FidelityScan,
    Calibrate,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Rb,
        ExperimentKind::DeltaU,
        ExperimentKind::Sweep,
        ExperimentKind::Verify,
        ExperimentKind::FidelityScan,
        ExperimentKind::Calibrate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Rb => "rb",
            ExperimentKind::DeltaU => "delta-u",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Verify => "verify",
            ExperimentKind::FidelityScan => "fidelity-scan",
            ExperimentKind::Calibrate => "calibrate",
        }
    }

    /// Config blocks this experiment reads.
    fn blocks(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Rb => &["model", "noise", "rb"],
            ExperimentKind::DeltaU => &["model", "delta_u"],
            ExperimentKind::Sweep => &["model", "sweep"],
            ExperimentKind::Verify => &["model", "verify"],
            ExperimentKind::FidelityScan => &["model", "noise", "fidelity_scan"],
            ExperimentKind::Calibrate => &["calibration"],
        }
    }

    /// The block a config file must contain for this experiment.
    fn required_block(self) -> Option<&'static str> {
        match self {
            ExperimentKind::Rb => Some("rb"),
            ExperimentKind::Sweep => Some("sweep"),
            ExperimentKind::Verify => Some("verify"),
            ExperimentKind::FidelityScan => Some("fidelity_scan"),
            ExperimentKind::DeltaU | ExperimentKind::Calibrate => None,
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Effective-Hamiltonian coefficients. With none given, the calibrated
/// default set is used; otherwise missing coefficients are zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_zi_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_ix_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_iy_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_iz_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_zx_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_zy_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_zz_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<DeviceProvenance>,
}

impl ModelBlock {
    fn coefficients(&self) -> [Option<f64>; 7] {
        [
            self.h_zi_mhz,
            self.h_ix_mhz,
            self.h_iy_mhz,
            self.h_iz_mhz,
            self.h_zx_mhz,
            self.h_zy_mhz,
            self.h_zz_mhz,
        ]
    }

    pub fn is_calibrated_default(&self) -> bool {
        self.coefficients().iter().all(Option::is_none)
    }

    pub fn params(&self) -> Result<CRParams> {
        let mut p = if self.is_calibrated_default() {
            CRParams::calibrated().clone()
        } else {
            let [zi, ix, iy, iz, zx, zy, zz] = self
                .coefficients()
                .map(|c| mhz_to_rad_per_s(c.unwrap_or(0.0)));
            CRParams {
                h_zi: zi,
                h_ix: ix,
                h_iy: iy,
                h_iz: iz,
                h_zx: zx,
                h_zy: zy,
                h_zz: zz,
                provenance: None,
            }
        };
        if let Some(prov) = &self.provenance {
            p.provenance = Some(prov.clone());
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    /// Target one-qubit RB infidelity; converted to `δθ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_qubit_infidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_theta: Option<f64>,
    #[serde(default)]
    pub freeze_policy: FreezePolicy,
}

pub const DEFAULT_ONE_QUBIT_INFIDELITY: f64 = 3e-4;

impl NoiseBlock {
    pub fn model(&self) -> Result<OneQubitNoiseModel> {
        match (self.one_qubit_infidelity, self.delta_theta) {
            (Some(_), Some(_)) => Err(Error::Config(
                "give either one_qubit_infidelity or delta_theta, not both".into(),
            )),
            (Some(r), None) => OneQubitNoiseModel::from_infidelity(r),
            (None, Some(dt)) => OneQubitNoiseModel::new(dt),
            (None, None) => OneQubitNoiseModel::from_infidelity(DEFAULT_ONE_QUBIT_INFIDELITY),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RbBlock {
    pub qubit_count: u32,
    pub sequences_per_length: usize,
    /// Number of lengths when `lengths` is not given.
    pub length_points: usize,
    pub exclude_above: f64,
    pub schemes: Vec<Scheme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<usize>>,
}

impl Default for RbBlock {
    fn default() -> Self {
        RbBlock {
            qubit_count: 2,
            sequences_per_length: 200,
            length_points: 14,
            exclude_above: 0.9,
            schemes: vec![Scheme::Length2, Scheme::Length5],
            lengths: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepBlock {
    pub t1_min_ms: f64,
    pub t1_max_ms: f64,
    pub t1_points: usize,
    pub t2_min_ms: f64,
    pub t2_max_ms: f64,
    pub t2_points: usize,
    pub one_qubit_gate_ns: f64,
}

impl Default for SweepBlock {
    fn default() -> Self {
        SweepBlock {
            t1_min_ms: 0.01,
            t1_max_ms: 100.0,
            t1_points: 40,
            t2_min_ms: 0.01,
            t2_max_ms: 100.0,
            t2_points: 40,
            one_qubit_gate_ns: 30.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeltaUBlock {
    /// Built-in sequence names.
    pub sequences: Vec<String>,
}

impl Default for DeltaUBlock {
    fn default() -> Self {
        DeltaUBlock {
            sequences: vec!["length2".into(), "length5".into()],
        }
    }
}

/// Sign pattern for the robustness residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternBlock {
    pub zeta: Vec<i8>,
    pub xi: Vec<i8>,
    pub chi: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyBlock {
    /// Built-in sequence name; ignored when `sequence_text` is given.
    pub sequence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence_text: Option<String>,
    /// Block angle for length-2/4/5, in units of π.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_pi: Option<f64>,
    /// Perturbation scales for the residual scaling slope.
    pub lambdas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternBlock>,
}

impl Default for VerifyBlock {
    fn default() -> Self {
        VerifyBlock {
            sequence: "length5".into(),
            sequence_text: None,
            theta_pi: None,
            lambdas: vec![1e-3, 3e-3, 1e-2, 3e-2, 1e-1],
            pattern: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FidelityScanBlock {
    pub sequences_per_length: usize,
    pub length_points: usize,
    pub exclude_above: f64,
    /// Noise realizations averaged for the trace infidelity.
    pub trace_samples: usize,
    pub one_qubit_infidelities: Vec<f64>,
}

impl Default for FidelityScanBlock {
    fn default() -> Self {
        FidelityScanBlock {
            sequences_per_length: 200,
            length_points: 12,
            exclude_above: 0.9,
            trace_samples: 2000,
            one_qubit_infidelities: vec![1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "is_default_model")]
    pub model: ModelBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rb: Option<RbBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_u: Option<DeltaUBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity_scan: Option<FidelityScanBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationTarget>,
    /// Run metadata written to sidecars; ignored on input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<toml::Table>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn is_default_model(m: &ModelBlock) -> bool {
    *m == ModelBlock::default()
}

impl ExperimentConfig {
    /// Config with every block for `kind` at its defaults.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let mut c = ExperimentConfig {
            experiment: Some(kind),
            seed: DEFAULT_SEED,
            model: ModelBlock::default(),
            noise: None,
            rb: None,
            sweep: None,
            delta_u: None,
            verify: None,
            fidelity_scan: None,
            calibration: None,
            run: None,
        };
        c.fill_defaults(kind);
        c
    }

    fn fill_defaults(&mut self, kind: ExperimentKind) {
        for block in kind.blocks() {
            match *block {
                "noise" => {
                    self.noise.get_or_insert_with(NoiseBlock::default);
                }
                "rb" => {
                    self.rb.get_or_insert_with(RbBlock::default);
                }
                "sweep" => {
                    self.sweep.get_or_insert_with(SweepBlock::default);
                }
                "delta_u" => {
                    self.delta_u.get_or_insert_with(DeltaUBlock::default);
                }
                "verify" => {
                    self.verify.get_or_insert_with(VerifyBlock::default);
                }
                "fidelity_scan" => {
                    self.fidelity_scan
                        .get_or_insert_with(FidelityScanBlock::default);
                }
                "calibration" => {
                    self.calibration
                        .get_or_insert_with(CalibrationTarget::default);
                }
                _ => {}
            }
        }
    }

    fn present_blocks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !is_default_model(&self.model) {
            out.push("model");
        }
        let flags = [
            ("noise", self.noise.is_some()),
            ("rb", self.rb.is_some()),
            ("sweep", self.sweep.is_some()),
            ("delta_u", self.delta_u.is_some()),
            ("verify", self.verify.is_some()),
            ("fidelity_scan", self.fidelity_scan.is_some()),
            ("calibration", self.calibration.is_some()),
        ];
        out.extend(flags.iter().filter(|(_, on)| *on).map(|(name, _)| *name));
        out
    }

    /// Loads a config for `kind`. Without a file every block takes its
    /// defaults. Overrides are `dotted.key=value` with TOML values; a bare
    /// word is taken as a string.
    pub fn load(
        kind: ExperimentKind,
        path: Option<&Path>,
        overrides: &[String],
        seed: Option<u64>,
    ) -> Result<Self> {
        let (source, origin) = match path {
            Some(p) => (
                std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
                p.display().to_string(),
            ),
            None => (String::new(), "<defaults>".to_string()),
        };
        Self::from_source(kind, &source, &origin, path.is_some(), overrides, seed)
    }

    /// As [`ExperimentConfig::load`] but from text; `origin` prefixes
    /// diagnostics.
    pub fn from_source(
        kind: ExperimentKind,
        source: &str,
        origin: &str,
        strict: bool,
        overrides: &[String],
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut config: ExperimentConfig =
            toml::from_str(source).map_err(|e| anchored(origin, source, &e))?;
        if !overrides.is_empty() {
            let mut table: toml::Table =
                toml::from_str(source).map_err(|e| anchored(origin, source, &e))?;
            for o in overrides {
                apply_override(&mut table, o)?;
            }
            config = toml::Value::Table(table)
                .try_into()
                .map_err(|e: toml::de::Error| {
                    Error::Config(format!("after overrides: {}", e.message()))
                })?;
        }
        if let Some(s) = seed {
            config.seed = s;
        }
        config.run = None;
        if let Some(k) = config.experiment {
            if k != kind {
                let line = locate(source, None, Some("experiment"));
                return Err(Error::Config(at(
                    origin,
                    line,
                    &format!("config is for `{k}` but `{kind}` was requested"),
                )));
            }
        }
        config.experiment = Some(kind);
        for block in config.present_blocks() {
            if !kind.blocks().contains(&block) {
                let line = locate(source, Some(block), None);
                return Err(Error::Config(at(
                    origin,
                    line,
                    &format!("block [{block}] is not used by `{kind}`"),
                )));
            }
        }
        if strict {
            if let Some(req) = kind.required_block() {
                if !config.present_blocks().contains(&req) {
                    return Err(Error::Config(format!(
                        "{origin}: `{kind}` needs a [{req}] block"
                    )));
                }
            }
        }
        config.fill_defaults(kind);
        config.resolve(source, origin)?;
        Ok(config)
    }

    /// Validates values and fills derived defaults, such as RB lengths.
    fn resolve(&mut self, source: &str, origin: &str) -> Result<()> {
        let fail = |block: &str, key: &str, msg: String| -> Error {
            Error::Config(at(
                origin,
                locate(source, Some(block), Some(key)),
                &format!("{block}.{key}: {msg}"),
            ))
        };
        let params = self.model.params().map_err(|e| {
            Error::Config(at(
                origin,
                locate(source, Some("model"), None),
                &e.to_string(),
            ))
        })?;
        let noise = match &self.noise {
            Some(n) => Some(
                n.model()
                    .map_err(|e| fail("noise", "one_qubit_infidelity", e.to_string()))?,
            ),
            None => None,
        };
        if let Some(rb) = &mut self.rb {
            if !(rb.qubit_count == 1 || rb.qubit_count == 2) {
                return Err(fail("rb", "qubit_count", "must be 1 or 2".into()));
            }
            if rb.sequences_per_length == 0 {
                return Err(fail(
                    "rb",
                    "sequences_per_length",
                    "must be at least 1".into(),
                ));
            }
            if rb.schemes.is_empty() {
                return Err(fail("rb", "schemes", "needs at least one scheme".into()));
            }
            if !(rb.exclude_above > 0.0 && rb.exclude_above <= 1.0) {
                return Err(fail("rb", "exclude_above", "must be in (0, 1]".into()));
            }
            match &rb.lengths {
                Some(l) if l.is_empty() || l[0] == 0 || l.windows(2).any(|w| w[0] >= w[1]) => {
                    return Err(fail(
                        "rb",
                        "lengths",
                        "must be positive and strictly increasing".into(),
                    ));
                }
                Some(_) => {}
                None => {
                    let noise = noise.expect("rb reads the noise block");
                    let r = if rb.qubit_count == 1 {
                        rb_infidelity_analytic(noise.delta_theta)
                    } else {
                        expected_two_qubit_infidelity(
                            &params,
                            &rb.schemes,
                            rb_infidelity_analytic(noise.delta_theta),
                        )
                    };
                    rb.lengths = Some(suggest_lengths(r, rb.qubit_count, rb.length_points.max(4)));
                }
            }
        }
        if let Some(s) = &self.sweep {
            for (key, v) in [
                ("t1_min_ms", s.t1_min_ms),
                ("t1_max_ms", s.t1_max_ms),
                ("t2_min_ms", s.t2_min_ms),
                ("t2_max_ms", s.t2_max_ms),
            ] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(fail("sweep", key, "must be positive".into()));
                }
            }
            if s.t1_min_ms > s.t1_max_ms || s.t2_min_ms > s.t2_max_ms {
                return Err(fail(
                    "sweep",
                    "t1_min_ms",
                    "grid minimum exceeds maximum".into(),
                ));
            }
            if s.t1_points == 0 || s.t2_points == 0 {
                return Err(fail(
                    "sweep",
                    "t1_points",
                    "grids need at least one point".into(),
                ));
            }
            if !(s.one_qubit_gate_ns >= 0.0) {
                return Err(fail(
                    "sweep",
                    "one_qubit_gate_ns",
                    "must be non-negative".into(),
                ));
            }
        }
        if let Some(d) = &self.delta_u {
            for name in &d.sequences {
                builtin_sequence(name, None)
                    .map_err(|e| fail("delta_u", "sequences", e.to_string()))?;
            }
        }
        if let Some(v) = &self.verify {
            if v.sequence_text.is_none() {
                builtin_sequence(&v.sequence, v.theta_pi)
                    .map_err(|e| fail("verify", "sequence", e.to_string()))?;
            }
            if v.lambdas.len() < 2 || v.lambdas.iter().any(|l| !(*l > 0.0)) {
                return Err(fail(
                    "verify",
                    "lambdas",
                    "needs two or more positive scales".into(),
                ));
            }
        }
        if let Some(f) = &self.fidelity_scan {
            if f.one_qubit_infidelities.is_empty()
                || f.one_qubit_infidelities
                    .iter()
                    .any(|r| !(*r > 0.0 && *r < 5.0 / 18.0))
            {
                return Err(fail(
                    "fidelity_scan",
                    "one_qubit_infidelities",
                    "values must lie in (0, 5/18)".into(),
                ));
            }
            if f.sequences_per_length == 0 || f.trace_samples == 0 {
                return Err(fail(
                    "fidelity_scan",
                    "sequences_per_length",
                    "sample counts must be positive".into(),
                ));
            }
        }
        if let Some(c) = &self.calibration {
            if !(c.quarter_block_ns > 0.0) {
                return Err(fail(
                    "calibration",
                    "quarter_block_ns",
                    "must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// TOML text of the resolved config.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }
}

/// Rough two-qubit Clifford infidelity used to pick RB lengths: ten times
/// the one-qubit figure plus the coherent error of the worst scheme.
pub fn expected_two_qubit_infidelity(params: &CRParams, schemes: &[Scheme], r1q: f64) -> f64 {
    let coherent = schemes
        .iter()
        .map(|s| {
            let seq = s.sequence();
            1.0 - trace_fidelity(seq.ideal_target(), &compile(&seq, params, None))
        })
        .fold(0.0, f64::max);
    (10.0 * r1q + 1.5 * coherent).max(1e-5)
}

/// Named sequences accepted in configs.
pub const BUILTIN_SEQUENCES: [&str; 5] =
    ["length2", "length4", "length5", "ecr", "clifford-generator"];

pub fn builtin_sequence(name: &str, theta_pi: Option<f64>) -> Result<crate::CompositeSequence> {
    use crate::sequences as s;
    let theta = theta_pi.map(crate::units::pi_units);
    let fixed = |seq: crate::CompositeSequence| -> Result<crate::CompositeSequence> {
        if theta.is_some() {
            Err(Error::Config(format!("`{name}` has a fixed block angle")))
        } else {
            Ok(seq)
        }
    };
    match name {
        "length2" => s::length2(
            "XZ".parse().expect("valid label"),
            theta.unwrap_or(std::f64::consts::FRAC_PI_4),
        ),
        "length4" => s::length4(theta.unwrap_or(std::f64::consts::FRAC_PI_4)),
        "length5" => s::length5(theta.unwrap_or_else(s::theta0)),
        "ecr" => fixed(s::ecr()),
        "clifford-generator" => fixed(s::clifford_generator_default()),
        _ => Err(Error::Config(format!(
            "unknown sequence `{name}` (expected one of {})",
            BUILTIN_SEQUENCES.join(", ")
        ))),
    }
}

fn at(origin: &str, line: Option<usize>, msg: &str) -> String {
    match line {
        Some(l) => format!("{origin}:{l}: {msg}"),
        None => format!("{origin}: {msg}"),
    }
}

fn anchored(origin: &str, source: &str, e: &toml::de::Error) -> Error {
    let msg = e.message().trim();
    match e.span() {
        Some(span) => {
            let before = &source[..span.start.min(source.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            Error::Config(format!("{origin}:{line}:{col}: {msg}"))
        }
        None => Error::Config(format!("{origin}: {msg}")),
    }
}

/// 1-based line of `key` inside `[table]` (top level when `table` is
/// `None`), or of the table header when `key` is `None`.
pub fn locate(source: &str, table: Option<&str>, key: Option<&str>) -> Option<usize> {
    let mut current: Option<String> = None;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            let name = line
                .trim_matches(|c| c == '[' || c == ']')
                .trim()
                .to_string();
            if key.is_none() && Some(name.as_str()) == table {
                return Some(i + 1);
            }
            current = Some(name);
            continue;
        }
        if let Some(k) = key {
            let in_table = current.as_deref() == table;
            let rest = line.strip_prefix(k).map(str::trim_start);
            if in_table && rest.is_some_and(|r| r.starts_with('=')) {
                return Some(i + 1);
            }
        }
    }
    None
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(Error::Config(format!("override `{item}` has an empty key")));
    }
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = table;
    for part in &parts[..parts.len() - 1] {
        let entry = node
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}`: `{part}` is not a table")))?;
    }
    node.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(kind: ExperimentKind, src: &str, overrides: &[&str]) -> Result<ExperimentConfig> {
        let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        ExperimentConfig::from_source(kind, src, "test.toml", true, &o, None)
    }

    #[test]
    fn defaults_resolve_lengths() {
        let c = ExperimentConfig::load(ExperimentKind::Rb, None, &[], None).unwrap();
        let rb = c.rb.unwrap();
        let l = rb.lengths.unwrap();
        assert_eq!(l[0], 1);
        assert!(l.len() >= 10 && *l.last().unwrap() > 300);
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_key_is_line_anchored() {
        let src = "experiment = \"rb\"\n\n[rb]\nsequences = 3\n";
        let e = load(ExperimentKind::Rb, src, &[]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("test.toml:4"), "{e}");
    }

    #[test]
    fn semantic_error_is_line_anchored() {
        let src = "[rb]\nqubit_count = 2\nlengths = [5, 3]\n";
        let e = load(ExperimentKind::Rb, src, &[]).unwrap_err();
        assert!(e.to_string().contains("test.toml:3"), "{e}");
    }

    #[test]
    fn wrong_experiment_and_stray_block() {
        assert!(load(ExperimentKind::Sweep, "experiment = \"rb\"\n[sweep]\n", &[]).is_err());
        let e = load(ExperimentKind::Rb, "[rb]\n[sweep]\nt1_points = 3\n", &[]).unwrap_err();
        assert!(e.to_string().contains(":2:"), "{e}");
        assert!(load(ExperimentKind::Rb, "seed = 3\n", &[]).is_err());
    }

    #[test]
    fn overrides_apply() {
        let c = load(
            ExperimentKind::Rb,
            "[rb]\n",
            &[
                "rb.sequences_per_length=7",
                "noise.freeze_policy=per-gate-kind",
                "seed=9",
            ],
        )
        .unwrap();
        assert_eq!(c.rb.unwrap().sequences_per_length, 7);
        assert_eq!(c.noise.unwrap().freeze_policy, FreezePolicy::PerGateKind);
        assert_eq!(c.seed, 9);
        assert!(load(ExperimentKind::Rb, "[rb]\n", &["rb.bogus=1"]).is_err());
        assert!(load(ExperimentKind::Rb, "[rb]\n", &["noequals"]).is_err());
    }

    #[test]
    fn resolved_config_round_trips() {
        for kind in ExperimentKind::ALL {
            let c = ExperimentConfig::defaults(kind);
            let mut resolved = c.clone();
            resolved.resolve("", "x").unwrap();
            let text = resolved.to_toml().unwrap();
            let back = ExperimentConfig::from_source(kind, &text, "x", true, &[], None).unwrap();
            assert_eq!(back, resolved, "{kind}\n{text}");
        }
    }

    #[test]
    fn explicit_model_block() {
        let src = "[model]\nh_zx_mhz = 2.5\nh_zz_mhz = 0.1\n[delta_u]\n";
        let c = load(ExperimentKind::DeltaU, src, &[]).unwrap();
        let p = c.model.params().unwrap();
        assert!((p.h_zx - mhz_to_rad_per_s(2.5)).abs() < 1e-6);
        assert_eq!(p.h_iz, 0.0);
        assert!(load(ExperimentKind::DeltaU, "[model]\nh_zz_mhz = 0.1\n", &[]).is_err());
    }

    #[test]
    fn noise_block_exclusive() {
        let src = "[rb]\n[noise]\none_qubit_infidelity = 1e-4\ndelta_theta = 0.01\n";
        assert!(load(ExperimentKind::Rb, src, &[]).is_err());
        let src = "[rb]\n[noise]\none_qubit_infidelity = 0.5\n";
        let e = load(ExperimentKind::Rb, src, &[]).unwrap_err();
        assert!(e.to_string().contains("test.toml:3"), "{e}");
    }

    #[test]
    fn locate_finds_keys() {
        let src = "seed = 1\n[rb]\nlengths = [1]\n[sweep]\nlengths = 2\n";
        assert_eq!(locate(src, None, Some("seed")), Some(1));
        assert_eq!(locate(src, Some("sweep"), Some("lengths")), Some(5));
        assert_eq!(locate(src, Some("sweep"), None), Some(4));
        assert_eq!(locate(src, Some("rb"), Some("seed")), None);
    }
}
