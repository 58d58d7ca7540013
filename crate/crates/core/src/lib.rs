//! Dynamically corrected cross-resonance gates.
//!
//! The crate builds composite pulse sequences out of a noisy cross-resonance
//! entangling block, checks which error channels they cancel to first order,
//! and measures how well they perform under two noise models:
//!
//! * coherent one-qubit gate errors, through simulated Clifford randomized
//!   benchmarking ([`rb`]);
//! * relaxation and dephasing, through piecewise-exact Lindblad evolution
//!   ([`lindblad`]).
//!
//! Module map:
//!
//! | module | contents |
//! |---|---|
//! | [`pauli`] | two-qubit Pauli algebra, trace fidelity, local invariants |
//! | [`cr_model`] | effective Hamiltonian, exact propagators, error channels, calibration |
//! | [`sequences`] | length-2/4/5, ECR, nesting, Clifford generator, echo search |
//! | [`noise`] | quasistatic one-qubit noise and the analytic RB fidelity |
//! | [`clifford`] | one- and two-qubit Clifford groups with generator decompositions |
//! | [`rb`] | randomized benchmarking runs and decay fitting |
//! | [`lindblad`] | superoperators, sequence channels, T1/T2 sweeps |
//! | [`experiment`] | configuration files, experiment drivers and CSV output |

pub mod clifford;
pub mod cr_model;
pub mod experiment;
pub mod linalg;
pub mod lindblad;
pub mod noise;
pub mod pauli;
pub mod rb;
pub mod sequences;
pub mod units;

pub use cr_model::{CRParams, ErrorChannelMap};
pub use pauli::{Pauli, TwoQubitPauli, Unitary4};
pub use sequences::{CompositeSequence, SequenceElement};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("Hamiltonian term {0} is outside the block-diagonal {{ZI, Ij, Zj}} family")]
    HamiltonianStructure(TwoQubitPauli),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("echo {echo} rejected: {reason}")]
    InvalidEcho { echo: TwoQubitPauli, reason: String },

    #[error("calibration did not converge: {0}")]
    Calibration(String),

    #[error("one-qubit infidelity {0} is not reachable by the noise model (must be in [0, 5/18))")]
    UnreachableInfidelity(f64),

    #[error("decay fit failed: {message}")]
    Fit {
        message: String,
        residuals: Vec<f64>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_)
            | Error::Parse(_)
            | Error::InvalidParams(_)
            | Error::InvalidEcho { .. } => 2,
            Error::UnreachableInfidelity(_) | Error::HamiltonianStructure(_) => 2,
            Error::Calibration(_) | Error::Fit { .. } => 3,
            Error::NotUnitary(_) | Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
