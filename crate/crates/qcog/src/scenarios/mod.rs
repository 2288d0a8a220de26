//! The three decision scenarios: the two-stage gamble with a rotating
//! reference state, the absent-minded driver, and the three-door maze.
//!
//! Each scenario pairs a classical strategy with a quantum one and exposes
//! the analytic values the Monte Carlo engine in [`crate::sim`] verifies
//! empirically.

mod driver;
mod gamble;
mod maze;

pub use driver::{quantum_strategy_state, DriverSpec};
pub use gamble::{
    empirical_acceptance_rates, fit_rotation_angle, win_probability_rule, AcceptanceRates,
    GambleSpec, ReferenceState,
};
pub use maze::{
    maze_classical_expected, maze_classical_pmf, maze_coding_state, maze_minority_protocol,
    maze_minority_protocol_with_state, maze_quantum_run, maze_quantum_run_with_state, MazeRun,
    MazeSpec,
};

use thiserror::Error;

use crate::qstate::StateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("gamble is degenerate: win and loss amounts are equal")]
    DegenerateGamble,
    #[error("reference state must have at least one nonzero finite amplitude")]
    DegenerateReference,
    #[error("target acceptance {target} is outside the attainable range of the rule")]
    Unreachable { target: f64 },
    #[error("walked every door without observing a 1; the coding state marks no door")]
    ProtocolExhausted,
    #[error("collapsed register `{label}` has no unique minority bit")]
    NoMinority { label: String },
    #[error(transparent)]
    State(#[from] StateError),
}
