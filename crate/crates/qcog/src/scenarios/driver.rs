//! The absent-minded driver: a one-player game of imperfect recall.
//!
//! The driver passes two exit ramps but cannot tell them apart, so a
//! classical strategy is a single exit probability `alpha` applied at both.
//! Exiting at the first ramp, exiting at the second, and driving past both
//! pay different amounts; with the standard payoffs (0, 4, 1) the best
//! classical mixture is `alpha = 1/3` for an expected payoff of 4/3.
//!
//! A driver holding the entangled pair `(1/√2)(|01⟩ + |10⟩)` and reading one
//! position per ramp (0 = stay, 1 = exit) never exits first and never drives
//! past both: the two branches split evenly between the first-exit and
//! second-exit payoffs, lifting the expectation to 2.

use serde::Serialize;

use super::ScenarioError;
use crate::qstate::StateVector;

/// Grid resolution used by [`DriverSpec::grid_optimize`].
pub const GRID_STEP_COUNT: u64 = 10_000;

/// Payoffs of the three terminal outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriverSpec {
    /// Paid when the driver exits at the first ramp.
    pub payoff_exit_first: f64,
    /// Paid when the driver stays once, then exits at the second ramp.
    pub payoff_exit_second: f64,
    /// Paid when the driver stays at both ramps.
    pub payoff_continue: f64,
}

impl Default for DriverSpec {
    fn default() -> Self {
        DriverSpec {
            payoff_exit_first: 0.0,
            payoff_exit_second: 4.0,
            payoff_continue: 1.0,
        }
    }
}

impl DriverSpec {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (what, value) in [
            ("payoff_exit_first", self.payoff_exit_first),
            ("payoff_exit_second", self.payoff_exit_second),
            ("payoff_continue", self.payoff_continue),
        ] {
            if !value.is_finite() {
                return Err(ScenarioError::OutOfRange { what, value });
            }
        }
        Ok(())
    }

    /// Expected payoff of exiting with probability `alpha` at each ramp:
    /// `α·u₁ + (1−α)·α·u₂ + (1−α)²·u₃`.
    pub fn expected_payoff(&self, alpha: f64) -> Result<f64, ScenarioError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(ScenarioError::OutOfRange {
                what: "alpha",
                value: alpha,
            });
        }
        Ok(self.payoff_at(alpha))
    }

    fn payoff_at(&self, alpha: f64) -> f64 {
        let stay = 1.0 - alpha;
        alpha * self.payoff_exit_first
            + stay * alpha * self.payoff_exit_second
            + stay * stay * self.payoff_continue
    }

    /// Maximizes the expected payoff over `alpha ∈ [0, 1]` in closed form.
    ///
    /// The payoff is quadratic in `alpha`, so the maximum is at an endpoint
    /// or at the vertex; ties break toward the smaller `alpha`.
    pub fn optimize(&self) -> (f64, f64) {
        // payoff(α) = quad·α² + lin·α + payoff_continue
        let quad = self.payoff_continue - self.payoff_exit_second;
        let lin = self.payoff_exit_first + self.payoff_exit_second - 2.0 * self.payoff_continue;
        let mut candidates = vec![0.0];
        if quad < 0.0 {
            let vertex = -lin / (2.0 * quad);
            if vertex > 0.0 && vertex < 1.0 {
                candidates.push(vertex);
            }
        }
        candidates.push(1.0);
        self.best_of(candidates.into_iter())
    }

    /// Maximizes the expected payoff over the `10⁻⁴`-step grid; an
    /// independent route used to cross-check [`DriverSpec::optimize`].
    pub fn grid_optimize(&self) -> (f64, f64) {
        self.best_of((0..=GRID_STEP_COUNT).map(|i| i as f64 / GRID_STEP_COUNT as f64))
    }

    /// First strict maximum over candidates in ascending `alpha` order.
    fn best_of(&self, candidates: impl Iterator<Item = f64>) -> (f64, f64) {
        let mut best = (0.0, f64::NEG_INFINITY);
        for alpha in candidates {
            let payoff = self.payoff_at(alpha);
            if payoff > best.1 {
                best = (alpha, payoff);
            }
        }
        best
    }

    /// Expected payoff of the entangled strategy, computed analytically from
    /// the basis probabilities of the strategy state: a 1 at position 0
    /// exits at the first ramp, otherwise a 1 at position 1 exits at the
    /// second, otherwise the driver continues past both.
    ///
    /// Branch weights are renormalized by their total so that the equal
    /// split of the strategy pair is exactly 1/2 each despite the rounding
    /// in `|1/√2|²`.
    pub fn quantum_payoff(&self) -> f64 {
        let state = quantum_strategy_state();
        let p = |label: &str| state.basis_probability(label).expect("two-position label");
        let total = p("00") + p("01") + p("10") + p("11");
        (p("10") + p("11")) / total * self.payoff_exit_first
            + p("01") / total * self.payoff_exit_second
            + p("00") / total * self.payoff_continue
    }
}

/// The entangled strategy pair `(1/√2)(|01⟩ + |10⟩)`, with bit 0 meaning
/// "stay on the highway" and bit 1 meaning "take the exit".
pub fn quantum_strategy_state() -> StateVector {
    StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).expect("fixed Bell amplitudes")
}
