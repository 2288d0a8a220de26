//! Classical and quantum models of question order effects and small
//! decision scenarios, with seeded Monte Carlo verification.
//!
//! The library models a family of situations where an agent's responses
//! depend on the order in which questions or options are presented:
//!
//! - [`qstate`] — a minimal statevector engine for registers of 1–4
//!   two-level systems: construction, Born-rule probabilities, and
//!   projective single-position measurement with collapse.
//! - [`belief`] — two-question belief states whose squared amplitudes give
//!   order-dependent response probabilities, next to the two classical
//!   baselines (independent events and bigram branch probabilities) and
//!   fitting from observed frequencies.
//! - [`scenarios`] — the two-stage gamble with its rotating zero-utility
//!   reference state, the absent-minded driver, and the three-door maze;
//!   each pairs a classical strategy with a quantum one and carries its
//!   analytic values.
//! - [`sim`] — a seeded, substream-partitioned Monte Carlo engine that runs
//!   any scenario protocol and summarizes trials with confidence intervals.
//! - [`survey`] — ingestion of two-ordering contingency tables, shift
//!   metrics with a two-proportion z-test, and belief-state fitting from
//!   survey marginals.
//! - [`verify`] — the library's headline claims bundled as a reproducible
//!   pass/fail batch.
//!
//! # Example
//!
//! ```
//! use qcog::scenarios::{DriverSpec, MazeSpec};
//! use qcog::sim::{compare_to_analytic, run_trials, Protocol, RngStream};
//!
//! // The entangled driver strategy beats the best classical mixture.
//! let driver = DriverSpec::default();
//! let (alpha, classical) = driver.optimize();
//! assert!((alpha - 1.0 / 3.0).abs() < 1e-9);
//! assert!(driver.quantum_payoff() > classical);
//!
//! // And the Monte Carlo estimate agrees with the analytic payoff.
//! let protocol = Protocol::DriverQuantum(driver);
//! let stats = run_trials(&protocol, 100_000, RngStream::new(42)).unwrap();
//! assert!(compare_to_analytic(&stats, driver.quantum_payoff()).pass);
//! ```

pub mod belief;
pub mod qstate;
pub mod scenarios;
pub mod sim;
pub mod survey;
pub mod verify;

mod book;

pub use belief::{BeliefError, BigramModel, CognitionTable, TwoQuestionBeliefState};
pub use qstate::{MeasurementRecord, StateError, StateVector};
pub use scenarios::{DriverSpec, GambleSpec, MazeSpec, ReferenceState, ScenarioError};
pub use sim::{run_trials, Protocol, RngStream, SimError, SummaryStats};
pub use survey::{OrderedContingencyTable, SurveyError};
