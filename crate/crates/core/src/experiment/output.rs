//! CSV row types and writers. Column names are part of the interface read
//! by downstream plotting.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::Result;

pub const RB_DECAY_COLUMNS: [&str; 4] = ["k", "mean_survival", "stderr", "n"];
pub const RB_FIT_COLUMNS: [&str; 5] = ["a", "p", "b", "r_clifford", "stderr_p"];
pub const SWEEP_COLUMNS: [&str; 5] = ["T1_s", "T2_s", "infid_length2", "infid_length5", "excluded"];
pub const CONTOUR_COLUMNS: [&str; 2] = ["T1_s", "T2_s"];
pub const SCAN_COLUMNS: [&str; 5] = ["r_1Q", "r_RB_L2", "r_RB_L5", "r_trace_L2", "r_trace_L5"];
pub const DELTA_U_COLUMNS: [&str; 5] = ["sequence", "channel", "coefficient", "re", "im"];
pub const VERIFY_COLUMNS: [&str; 2] = ["quantity", "value"];
pub const CALIBRATION_COLUMNS: [&str; 6] = [
    "quarter_block_ns",
    "eps_iy",
    "eps_iz",
    "h_iz_mhz",
    "h_zx_mhz",
    "h_zz_mhz",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub a: f64,
    pub p: f64,
    pub b: f64,
    pub r_clifford: f64,
    pub stderr_p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourRow {
    #[serde(rename = "T1_s")]
    pub t1: f64,
    #[serde(rename = "T2_s")]
    pub t2: f64,
}

/// Mirror of [`crate::lindblad::SweepPoint`] for reading sweep CSVs back.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T1_s")]
    pub t1: f64,
    #[serde(rename = "T2_s")]
    pub t2: f64,
    pub infid_length2: f64,
    pub infid_length5: f64,
    pub excluded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "r_1Q")]
    pub r_1q: f64,
    #[serde(rename = "r_RB_L2")]
    pub r_rb_l2: f64,
    #[serde(rename = "r_RB_L5")]
    pub r_rb_l5: f64,
    #[serde(rename = "r_trace_L2")]
    pub r_trace_l2: f64,
    #[serde(rename = "r_trace_L5")]
    pub r_trace_l5: f64,
}

/// One channel of a sequence's `δU`. `coefficient` is the reported value:
/// the real part for `II`, the coefficient of `i` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaURow {
    pub sequence: String,
    pub channel: String,
    pub coefficient: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub quantity: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub quarter_block_ns: f64,
    pub eps_iy: f64,
    pub eps_iz: f64,
    pub h_iz_mhz: f64,
    pub h_zx_mhz: f64,
    pub h_zz_mhz: f64,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// Header line of a CSV file.
pub fn read_header(path: &Path) -> Result<Vec<String>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.headers()?.iter().map(str::to_string).collect())
}
