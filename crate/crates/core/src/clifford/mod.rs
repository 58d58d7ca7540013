//! Clifford groups for randomized benchmarking.

pub mod one_qubit;
pub mod tableau;
pub mod two_qubit;

pub use one_qubit::{OneQubitClifford, OneQubitGroup, Token};
pub use tableau::{PauliString, Tableau};
pub use two_qubit::{enumerate_group_order, TwoQubitClifford, TwoQubitTable, GROUP_ORDER};
