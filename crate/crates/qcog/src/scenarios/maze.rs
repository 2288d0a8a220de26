//! The circular room with three doors.
//!
//! Two doors lead back into the room through a maze and one leads out; the
//! walker retains no memory of which doors were already tried. Classically
//! each attempt succeeds with probability `p = 1/3`, the number of tries is
//! geometric with pmf `(1−p)^{k−1}·p`, and the expected number of tries is
//! `1/p = 3`.
//!
//! With a qubit on each door, jointly prepared in `(1/√2)(|001⟩ + |110⟩)`
//! where a 1 marks a productive door, the walker reads door qubits in order
//! and stops at the first 1. One branch stops at door 0 immediately; the
//! other walks all three doors; the expected number of inspections is 2.
//!
//! The coding carries a quirk worth knowing: branch `|110⟩` marks doors 0
//! and 1 even though the room has a single exit, while door 2 is the one
//! position whose bit differs from the other two in *both* branches. The
//! minority-bit protocol reads the whole register once and walks straight to
//! that door, finding it with a single inspection either way. Both protocols
//! are implemented exactly as stated; reconciling their physics is not this
//! module's job.

use serde::Serialize;

use super::ScenarioError;
use crate::qstate::StateVector;

/// Fixed geometry of the maze scenario plus a simulation guard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MazeSpec {
    num_doors: usize,
    exit_prob: f64,
    /// A classical run that reaches this many tries aborts with
    /// `CapExceeded` instead of silently truncating.
    pub max_tries_cap: u64,
}

impl Default for MazeSpec {
    fn default() -> Self {
        MazeSpec {
            num_doors: 3,
            exit_prob: 1.0 / 3.0,
            max_tries_cap: 1_000_000,
        }
    }
}

impl MazeSpec {
    pub fn with_cap(max_tries_cap: u64) -> Self {
        MazeSpec {
            max_tries_cap,
            ..MazeSpec::default()
        }
    }

    pub fn num_doors(&self) -> usize {
        self.num_doors
    }

    pub fn exit_prob(&self) -> f64 {
        self.exit_prob
    }
}

/// One quantum walk through the doors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MazeRun {
    /// Door inspections performed, counting the one that succeeded.
    pub tries: u64,
    /// Index of the door whose qubit showed 1.
    pub door_found: usize,
}

/// Probability of first escaping on try `k`: `(1−p)^{k−1}·p`.
pub fn maze_classical_pmf(k: u64, p: f64) -> Result<f64, ScenarioError> {
    if k < 1 {
        return Err(ScenarioError::OutOfRange {
            what: "k",
            value: k as f64,
        });
    }
    check_probability(p)?;
    Ok((1.0 - p).powi((k - 1) as i32) * p)
}

/// Expected number of classical tries, `1/p`.
pub fn maze_classical_expected(p: f64) -> Result<f64, ScenarioError> {
    check_probability(p)?;
    Ok(1.0 / p)
}

fn check_probability(p: f64) -> Result<(), ScenarioError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(ScenarioError::OutOfRange { what: "p", value: p });
    }
    Ok(())
}

/// The entangled door register `(1/√2)(|001⟩ + |110⟩)`, with a 1 marking a
/// productive door.
pub fn maze_coding_state() -> StateVector {
    StateVector::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0])
        .expect("fixed coding amplitudes")
}

/// Walks the doors in order, reading each door's qubit and stopping at the
/// first 1. `draw` decides the first (only genuinely random) collapse;
/// branch `|110⟩` stops after one inspection, branch `|001⟩` after three.
pub fn maze_quantum_run(_spec: &MazeSpec, draw: f64) -> Result<MazeRun, ScenarioError> {
    maze_quantum_run_with_state(&maze_coding_state(), draw)
}

/// The door walk over a caller-supplied register. After each 0 the walker
/// moves on with the collapsed state; the same draw is reused for every
/// subsequent read, which is immaterial for states whose first collapse
/// leaves a basis state. A register that never shows a 1 is a malformed
/// coding state and yields `ProtocolExhausted`.
pub fn maze_quantum_run_with_state(
    state: &StateVector,
    draw: f64,
) -> Result<MazeRun, ScenarioError> {
    let mut current = state.clone();
    for door in 0..state.num_positions() {
        let record = current.measure_position(door, draw)?;
        if record.outcome == 1 {
            return Ok(MazeRun {
                tries: door as u64 + 1,
                door_found: door,
            });
        }
        current = record.post_state;
    }
    Err(ScenarioError::ProtocolExhausted)
}

/// Collapses the whole register once and walks straight to the door whose
/// bit differs from all the others — both coding branches name door 2, so a
/// single inspection suffices.
pub fn maze_minority_protocol(_spec: &MazeSpec, draw: f64) -> Result<usize, ScenarioError> {
    maze_minority_protocol_with_state(&maze_coding_state(), draw)
}

/// The minority-bit read over a caller-supplied register. Errors with
/// `NoMinority` when the collapsed bitstring has no single differing bit
/// (for example all zeros).
pub fn maze_minority_protocol_with_state(
    state: &StateVector,
    draw: f64,
) -> Result<usize, ScenarioError> {
    let (index, _) = state.sample_index(draw)?;
    let n = state.num_positions();
    let ones = (0..n).filter(|pos| bit(index, *pos, n) == 1).count();
    let minority_value = match (ones, n - ones) {
        (1, _) => 1,
        (_, 1) => 0,
        _ => {
            return Err(ScenarioError::NoMinority {
                label: state.label(index),
            })
        }
    };
    Ok((0..n)
        .find(|pos| bit(index, *pos, n) == minority_value)
        .expect("a minority bit exists"))
}

fn bit(index: usize, position: usize, num_positions: usize) -> u8 {
    ((index >> (num_positions - 1 - position)) & 1) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pmf_examples() {
        assert_abs_diff_eq!(
            maze_classical_pmf(1, 1.0 / 3.0).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            maze_classical_pmf(2, 1.0 / 3.0).unwrap(),
            2.0 / 9.0,
            epsilon = 1e-15
        );
        assert_eq!(maze_classical_pmf(1, 1.0).unwrap(), 1.0);
        assert_eq!(maze_classical_pmf(5, 1.0).unwrap(), 0.0);
        assert!(matches!(
            maze_classical_pmf(0, 0.5),
            Err(ScenarioError::OutOfRange { .. })
        ));
        assert!(matches!(
            maze_classical_pmf(1, 0.0),
            Err(ScenarioError::OutOfRange { .. })
        ));
    }

    #[test]
    fn expected_tries_examples() {
        assert_abs_diff_eq!(maze_classical_expected(1.0 / 3.0).unwrap(), 3.0, epsilon = 1e-15);
        assert_eq!(maze_classical_expected(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(maze_classical_expected(0.25).unwrap(), 4.0, epsilon = 1e-15);
    }

    // Truncated-series oracle: E(k) must match Σ k·(1−p)^{k−1}·p once the
    // tail (1−p)^K is below 1e-12.
    #[test]
    fn expected_tries_matches_truncated_series() {
        for p in [0.25, 1.0 / 3.0, 0.5, 0.9] {
            let cutoff = ((-12.0 * std::f64::consts::LN_10) / (1.0 - p).ln()).ceil() as u64 + 1;
            let series: f64 = (1..=cutoff)
                .map(|k| k as f64 * maze_classical_pmf(k, p).unwrap())
                .sum();
            assert_abs_diff_eq!(maze_classical_expected(p).unwrap(), series, epsilon = 1e-9);
        }
    }

    #[test]
    fn pmf_mass_accumulates_to_one() {
        let p = 1.0 / 3.0;
        for cap in [10u64, 40, 80] {
            let mass: f64 = (1..=cap).map(|k| maze_classical_pmf(k, p).unwrap()).sum();
            let tail = (1.0 - p).powi(cap as i32);
            assert!((1.0 - mass) <= tail + 1e-12);
        }
    }

    #[test]
    fn coding_state_is_the_two_term_register() {
        let s = maze_coding_state();
        assert_abs_diff_eq!(s.basis_probability("001").unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.basis_probability("110").unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn quantum_run_branches() {
        let spec = MazeSpec::default();
        // draw < P(bit₀ = 1) = 0.5 selects branch |110⟩.
        let run = maze_quantum_run(&spec, 0.4).unwrap();
        assert_eq!(run, MazeRun { tries: 1, door_found: 0 });
        let run = maze_quantum_run(&spec, 0.7).unwrap();
        assert_eq!(run, MazeRun { tries: 3, door_found: 2 });
    }

    #[test]
    fn quantum_run_expectation_over_branches() {
        let spec = MazeSpec::default();
        let fast = maze_quantum_run(&spec, 0.25).unwrap().tries;
        let slow = maze_quantum_run(&spec, 0.75).unwrap().tries;
        assert_eq!((fast + slow) as f64 / 2.0, 2.0);
    }

    #[test]
    fn exhausted_when_no_door_is_marked() {
        let all_zero = StateVector::basis("000").unwrap();
        assert_eq!(
            maze_quantum_run_with_state(&all_zero, 0.5),
            Err(ScenarioError::ProtocolExhausted)
        );
    }

    #[test]
    fn minority_protocol_names_door_two_in_both_branches() {
        let spec = MazeSpec::default();
        assert_eq!(maze_minority_protocol(&spec, 0.1).unwrap(), 2);
        assert_eq!(maze_minority_protocol(&spec, 0.9).unwrap(), 2);
    }

    #[test]
    fn minority_protocol_rejects_uniform_strings() {
        let all_zero = StateVector::basis("000").unwrap();
        assert_eq!(
            maze_minority_protocol_with_state(&all_zero, 0.5),
            Err(ScenarioError::NoMinority {
                label: "000".to_string()
            })
        );
        let all_one = StateVector::basis("111").unwrap();
        assert!(matches!(
            maze_minority_protocol_with_state(&all_one, 0.5),
            Err(ScenarioError::NoMinority { .. })
        ));
    }

    #[test]
    fn minority_protocol_general_positions() {
        let s = StateVector::basis("010").unwrap();
        assert_eq!(maze_minority_protocol_with_state(&s, 0.3).unwrap(), 1);
        let s = StateVector::basis("101").unwrap();
        assert_eq!(maze_minority_protocol_with_state(&s, 0.3).unwrap(), 1);
        // Four positions with a 2-2 split: no unique minority.
        let s = StateVector::basis("0011").unwrap();
        assert!(matches!(
            maze_minority_protocol_with_state(&s, 0.3),
            Err(ScenarioError::NoMinority { .. })
        ));
    }
}
