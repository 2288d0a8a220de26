//! Seeded Monte Carlo engine for the scenario protocols.
//!
//! Randomness comes from ChaCha12 keyed by a 64-bit seed, with the ChaCha
//! stream number carrying the substream id. Streams with distinct ids never
//! overlap for at least 2⁶⁴ draws, which is the substream-independence
//! contract the engine relies on.
//!
//! [`run_trials`] splits the requested trials into fixed-size blocks and
//! gives block `j` the substream `stream_id + j`. Block results are folded
//! in block order, so the outcome is a pure function of
//! `(seed, stream_id, n)` — any executor may run blocks concurrently without
//! changing a single bit of the answer.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use thiserror::Error;

use crate::qstate::StateVector;
use crate::scenarios::{
    maze_classical_expected, maze_coding_state, maze_minority_protocol,
    maze_minority_protocol_with_state, maze_quantum_run, maze_quantum_run_with_state, DriverSpec,
    GambleSpec, MazeSpec, ReferenceState, ScenarioError,
};

/// Trials per substream block; fixed so that results do not depend on how
/// blocks are scheduled.
pub const TRIALS_PER_BLOCK: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
    #[error("classical maze run exceeded the cap of {cap} tries")]
    CapExceeded { cap: u64 },
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

impl From<crate::qstate::StateError> for SimError {
    fn from(e: crate::qstate::StateError) -> Self {
        SimError::Scenario(e.into())
    }
}

/// A deterministic draw source: a 64-bit seed plus a substream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream_id: 0 }
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// The substream `offset` steps after this one (wrapping).
    pub fn substream(&self, offset: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(offset),
        }
    }

    /// Instantiates the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Summary of a batch of trial values with a 95% normal-approximation
/// confidence interval (approximate for heavy-tailed small-n runs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStats {
    pub n: u64,
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub min: f64,
    pub max: f64,
}

/// The stochastic protocols the engine can run. Each trial reduces to a
/// single number: tries for the maze protocols (door index for the minority
/// read), realized payoff for the driver, and a 0/1 acceptance indicator for
/// the gamble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Classical door guessing; geometric number of tries.
    MazeClassical(MazeSpec),
    /// Sequential qubit reads over the entangled door register.
    MazeQuantum(MazeSpec),
    /// One full-register collapse, then the minority-bit door.
    MazeMinority(MazeSpec),
    /// Exit with probability `alpha` at each ramp.
    DriverClassical { spec: DriverSpec, alpha: f64 },
    /// One ramp per position of the entangled strategy pair.
    DriverQuantum(DriverSpec),
    /// Accept one play from the reset reference rotated clockwise by
    /// `theta`; accepts with probability `amp_win²`.
    GamblePlay { gamble: GambleSpec, theta: f64 },
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::MazeClassical(_) => "maze_classical",
            Protocol::MazeQuantum(_) => "maze_quantum",
            Protocol::MazeMinority(_) => "maze_minority",
            Protocol::DriverClassical { .. } => "driver_classical",
            Protocol::DriverQuantum(_) => "driver_quantum",
            Protocol::GamblePlay { .. } => "gamble_play",
        }
    }

    /// The closed-form expectation of a single trial value.
    ///
    /// The quantum maze protocols are evaluated by branch enumeration over
    /// the coding register: every basis label with nonzero mass is walked
    /// deterministically and weighted by its share of the total mass, so
    /// the even split of the two-term state contributes exactly 1/2 each.
    pub fn analytic(&self) -> Result<f64, SimError> {
        match self {
            Protocol::MazeClassical(spec) => Ok(maze_classical_expected(spec.exit_prob())?),
            Protocol::MazeQuantum(_) => enumerate_branches(|state, draw| {
                Ok(maze_quantum_run_with_state(state, draw)?.tries as f64)
            }),
            Protocol::MazeMinority(_) => enumerate_branches(|state, draw| {
                Ok(maze_minority_protocol_with_state(state, draw)? as f64)
            }),
            Protocol::DriverClassical { spec, alpha } => Ok(spec.expected_payoff(*alpha)?),
            Protocol::DriverQuantum(spec) => Ok(spec.quantum_payoff()),
            Protocol::GamblePlay { gamble, theta } => {
                let rotated = ReferenceState::reset(gamble)?.rotated(*theta);
                Ok(rotated.amp_win() * rotated.amp_win())
            }
        }
    }

    fn run_one(&self, rng: &mut ChaCha12Rng) -> Result<f64, SimError> {
        match self {
            Protocol::MazeClassical(spec) => {
                let p = spec.exit_prob();
                let mut tries = 1u64;
                while rng.random::<f64>() >= p {
                    tries += 1;
                    if tries > spec.max_tries_cap {
                        return Err(SimError::CapExceeded {
                            cap: spec.max_tries_cap,
                        });
                    }
                }
                Ok(tries as f64)
            }
            Protocol::MazeQuantum(spec) => {
                Ok(maze_quantum_run(spec, rng.random::<f64>())?.tries as f64)
            }
            Protocol::MazeMinority(spec) => {
                Ok(maze_minority_protocol(spec, rng.random::<f64>())? as f64)
            }
            Protocol::DriverClassical { spec, alpha } => {
                if rng.random::<f64>() < *alpha {
                    Ok(spec.payoff_exit_first)
                } else if rng.random::<f64>() < *alpha {
                    Ok(spec.payoff_exit_second)
                } else {
                    Ok(spec.payoff_continue)
                }
            }
            Protocol::DriverQuantum(spec) => {
                let state = crate::scenarios::quantum_strategy_state();
                let first = state.measure_position(0, rng.random::<f64>())?;
                if first.outcome == 1 {
                    return Ok(spec.payoff_exit_first);
                }
                let second = first.post_state.measure_position(1, rng.random::<f64>())?;
                if second.outcome == 1 {
                    Ok(spec.payoff_exit_second)
                } else {
                    Ok(spec.payoff_continue)
                }
            }
            Protocol::GamblePlay { gamble, theta } => {
                let rotated = ReferenceState::reset(gamble)?.rotated(*theta);
                let accept_prob = rotated.amp_win() * rotated.amp_win();
                Ok(if rng.random::<f64>() < accept_prob {
                    1.0
                } else {
                    0.0
                })
            }
        }
    }
}

/// Expectation of `value_of` over the nonzero basis branches of the coding
/// register. Each branch is a basis state, so the walk inside it is
/// deterministic and any draw works.
fn enumerate_branches<F>(value_of: F) -> Result<f64, SimError>
where
    F: Fn(&StateVector, f64) -> Result<f64, SimError>,
{
    let coding = maze_coding_state();
    let masses: Vec<f64> = coding.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = masses.iter().sum();
    let mut expectation = 0.0;
    for (index, mass) in masses.iter().enumerate() {
        if *mass > 0.0 {
            let branch = StateVector::basis(&coding.label(index)).map_err(ScenarioError::from)?;
            expectation += mass / total * value_of(&branch, 0.0)?;
        }
    }
    Ok(expectation)
}

/// Runs `n` independent trials of `protocol` on the given stream.
pub fn run_trials(protocol: &Protocol, n: u64, stream: RngStream) -> Result<SummaryStats, SimError> {
    if n == 0 {
        return Err(SimError::NoTrials);
    }
    let blocks = n.div_ceil(TRIALS_PER_BLOCK);
    let mut count = 0u64;
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for block in 0..blocks {
        let block_trials = TRIALS_PER_BLOCK.min(n - block * TRIALS_PER_BLOCK);
        let mut rng = stream.substream(block).rng();
        for _ in 0..block_trials {
            let value = protocol.run_one(&mut rng)?;
            count += 1;
            sum += value;
            sum_sq += value * value;
            min = min.min(value);
            max = max.max(value);
        }
    }
    let mean = sum / count as f64;
    let std_error = if count > 1 {
        let variance = ((sum_sq - count as f64 * mean * mean) / (count - 1) as f64).max(0.0);
        (variance / count as f64).sqrt()
    } else {
        0.0
    };
    let half_width = 1.96 * std_error;
    Ok(SummaryStats {
        n: count,
        mean,
        std_error,
        ci_low: mean - half_width,
        ci_high: mean + half_width,
        min,
        max,
    })
}

/// Outcome of checking a Monte Carlo estimate against its analytic value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub analytic: f64,
    pub z_score: f64,
    /// True when `|mean − analytic| ≤ 3·std_error` (or, for a
    /// zero-variance run, when the mean equals the analytic value exactly).
    pub pass: bool,
}

/// Three-sigma agreement check between an estimate and its analytic value.
pub fn compare_to_analytic(stats: &SummaryStats, analytic: f64) -> Verdict {
    let difference = stats.mean - analytic;
    if stats.std_error == 0.0 {
        let exact = difference == 0.0;
        return Verdict {
            analytic,
            z_score: if exact { 0.0 } else { f64::INFINITY.copysign(difference) },
            pass: exact,
        };
    }
    let z_score = difference / stats.std_error;
    Verdict {
        analytic,
        z_score,
        pass: z_score.abs() <= 3.0,
    }
}
