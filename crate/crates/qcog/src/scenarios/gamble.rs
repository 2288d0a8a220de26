//! The two-stage gamble and its rotating reference state.
//!
//! A prospect with one winning and one losing outcome is anchored by a
//! *reference state*: the superposition of `|lose⟩` and `|win⟩` whose
//! expected utility is exactly zero. For the standard +200/−100 gamble that
//! state is `√(2/3)|lose⟩ + √(1/3)|win⟩`. Playing without learning the
//! outcome rotates the reference clockwise in the lose/win plane; learning
//! the outcome resets it to the zero-utility anchor.

use serde::Serialize;

use super::ScenarioError;

/// A gamble with one winning and one losing outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GambleSpec {
    /// Payout of the winning branch; positive.
    pub win_amount: f64,
    /// Payout of the losing branch; negative.
    pub loss_amount: f64,
    /// Advertised chance of winning a single play.
    pub nominal_win_prob: f64,
}

impl Default for GambleSpec {
    fn default() -> Self {
        GambleSpec {
            win_amount: 200.0,
            loss_amount: -100.0,
            nominal_win_prob: 0.5,
        }
    }
}

impl GambleSpec {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.win_amount.is_finite() && self.win_amount > 0.0) {
            return Err(ScenarioError::OutOfRange {
                what: "win_amount",
                value: self.win_amount,
            });
        }
        if !(self.loss_amount.is_finite() && self.loss_amount < 0.0) {
            return Err(ScenarioError::OutOfRange {
                what: "loss_amount",
                value: self.loss_amount,
            });
        }
        if !(self.nominal_win_prob > 0.0 && self.nominal_win_prob < 1.0) {
            return Err(ScenarioError::OutOfRange {
                what: "nominal_win_prob",
                value: self.nominal_win_prob,
            });
        }
        Ok(())
    }
}

/// A unit vector in the lose/win plane: `amp_lose·|lose⟩ + amp_win·|win⟩`.
/// Squared components are the probabilities the prospect assigns to the two
/// outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceState {
    amp_lose: f64,
    amp_win: f64,
}

impl Default for ReferenceState {
    /// The zero-utility anchor of the default gamble, `(√(2/3), √(1/3))`.
    fn default() -> Self {
        ReferenceState::reset(&GambleSpec::default()).expect("default gamble is non-degenerate")
    }
}

impl ReferenceState {
    /// Builds a reference state, normalizing the pair to unit length.
    pub fn new(amp_lose: f64, amp_win: f64) -> Result<Self, ScenarioError> {
        if !amp_lose.is_finite() || !amp_win.is_finite() {
            return Err(ScenarioError::DegenerateReference);
        }
        let norm = amp_lose.hypot(amp_win);
        if norm == 0.0 {
            return Err(ScenarioError::DegenerateReference);
        }
        Ok(ReferenceState {
            amp_lose: amp_lose / norm,
            amp_win: amp_win / norm,
        })
    }

    /// The reset point: the unique non-negative superposition whose utility
    /// under `gamble` is zero, `amp_lose² = win/(win − loss)`.
    pub fn reset(gamble: &GambleSpec) -> Result<Self, ScenarioError> {
        if gamble.win_amount == gamble.loss_amount {
            return Err(ScenarioError::DegenerateGamble);
        }
        let span = gamble.win_amount - gamble.loss_amount;
        ReferenceState::new(
            (gamble.win_amount / span).sqrt(),
            (-gamble.loss_amount / span).sqrt(),
        )
    }

    pub fn amp_lose(&self) -> f64 {
        self.amp_lose
    }

    pub fn amp_win(&self) -> f64 {
        self.amp_win
    }

    /// `(P(lose), P(win))` — the squared amplitudes.
    pub fn probabilities(&self) -> (f64, f64) {
        (self.amp_lose * self.amp_lose, self.amp_win * self.amp_win)
    }

    /// Expected utility of the prospect under this reference:
    /// `amp_lose²·loss + amp_win²·win`.
    pub fn utility(&self, gamble: &GambleSpec) -> f64 {
        let (p_lose, p_win) = self.probabilities();
        p_lose * gamble.loss_amount + p_win * gamble.win_amount
    }

    /// Rotates the state clockwise by `theta` radians in the lose/win plane
    /// (counterclockwise for negative `theta`). Normalization is preserved.
    pub fn rotated(&self, theta: f64) -> ReferenceState {
        let (sin, cos) = theta.sin_cos();
        let amp_lose = self.amp_lose * cos + self.amp_win * sin;
        let amp_win = -self.amp_lose * sin + self.amp_win * cos;
        // sin/cos keep the norm within a few ulp; renormalize anyway so long
        // chains of rotations cannot drift.
        let norm = amp_lose.hypot(amp_win);
        ReferenceState {
            amp_lose: amp_lose / norm,
            amp_win: amp_win / norm,
        }
    }
}

/// Observed second-play acceptance rates for the two-stage gamble: 69% after
/// a known win, 59% after a known loss, 36% when the first outcome is
/// unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceptanceRates {
    pub after_win: f64,
    pub after_loss: f64,
    pub when_unknown: f64,
}

/// The reference acceptance rates used for comparison and angle fitting.
pub fn empirical_acceptance_rates() -> AcceptanceRates {
    AcceptanceRates {
        after_win: 0.69,
        after_loss: 0.59,
        when_unknown: 0.36,
    }
}

/// The default acceptance rule: accept the next gamble with probability
/// `amp_win²`.
pub fn win_probability_rule(state: &ReferenceState) -> f64 {
    state.amp_win * state.amp_win
}

/// Angle fitted by [`fit_rotation_angle`] is searched on the clockwise
/// quarter turn `[0, π/2]` from the start state.
pub const MAX_FIT_ANGLE: f64 = std::f64::consts::FRAC_PI_2;

const FIT_SCAN_CELLS: usize = 4096;
const FIT_TOLERANCE: f64 = 1e-9;

/// Finds the clockwise angle at which one unresolved play moves `start` to
/// the target acceptance under `rule`.
///
/// The acceptance profile along the clockwise sweep is scanned over
/// `[0, π/2]` and the first crossing of `target` is refined by bisection, so
/// the fitted angle is the earliest point of the sweep that reaches the
/// target. For the default rule and the default reset state the attainable
/// range is `[0, 2/3]`: acceptance falls from 1/3 to 0 as the state aligns
/// with `|lose⟩`, then climbs as the sweep continues past it.
pub fn fit_rotation_angle<F>(
    start: &ReferenceState,
    target: f64,
    rule: F,
) -> Result<f64, ScenarioError>
where
    F: Fn(&ReferenceState) -> f64,
{
    if !(target > 0.0 && target < 1.0) {
        return Err(ScenarioError::OutOfRange {
            what: "target_acceptance",
            value: target,
        });
    }
    let acceptance = |theta: f64| rule(&start.rotated(theta));
    if (acceptance(0.0) - target).abs() <= FIT_TOLERANCE {
        return Ok(0.0);
    }
    let step = MAX_FIT_ANGLE / FIT_SCAN_CELLS as f64;
    let mut lo = 0.0;
    let mut lo_sign = acceptance(0.0) - target;
    for cell in 1..=FIT_SCAN_CELLS {
        let hi = cell as f64 * step;
        let hi_sign = acceptance(hi) - target;
        if hi_sign.abs() <= FIT_TOLERANCE {
            return Ok(hi);
        }
        if lo_sign * hi_sign < 0.0 {
            return Ok(bisect(&acceptance, target, lo, hi));
        }
        lo = hi;
        lo_sign = hi_sign;
    }
    Err(ScenarioError::Unreachable { target })
}

fn bisect<F: Fn(f64) -> f64>(acceptance: &F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = acceptance(lo) - target;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let mid_sign = acceptance(mid) - target;
        if mid_sign.abs() <= FIT_TOLERANCE {
            return mid;
        }
        if lo_sign * mid_sign < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
