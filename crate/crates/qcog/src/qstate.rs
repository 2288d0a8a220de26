//! Minimal statevector engine for registers of 1–4 two-level systems.
//!
//! A [`StateVector`] holds one normalized complex amplitude per basis label.
//! Basis labels are bitstrings of length `num_positions` in lexicographic
//! order, so index `i` carries the label `format!("{:0n$b}", i)` and the
//! *leftmost* character of a label is position 0. Measurement follows the
//! Born rule and collapses the register projectively: amplitudes
//! inconsistent with the observed bit are zeroed and the remainder is
//! renormalized.
//!
//! Every value is immutable after construction and every operation is a pure
//! function of its inputs; the random draw that decides a measurement is an
//! explicit `[0, 1)` parameter supplied by the caller.

use num_complex::Complex64;
use thiserror::Error;

/// Largest supported register. The library's decision scenarios never need
/// more than three positions, so dense vectors are plenty.
pub const MAX_POSITIONS: usize = 4;

/// Tolerance for the `Σ|aᵢ|² = 1` normalization invariant.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    /// Every supplied amplitude was zero; there is nothing to normalize.
    #[error("state vector has no nonzero amplitude")]
    ZeroVector,
    /// Amplitude count must be 2, 4, 8 or 16 (1–4 positions).
    #[error("amplitude count {0} is not a power of two in 2..=16")]
    BadDimension(usize),
    /// Amplitudes must have finite real and imaginary parts.
    #[error("amplitude at index {0} is not finite")]
    NonFinite(usize),
    #[error("label `{label}` is not a bitstring of length {expected}")]
    BadLabel { label: String, expected: usize },
    #[error("position {position} out of range for a {num_positions}-position register")]
    BadPosition {
        position: usize,
        num_positions: usize,
    },
    #[error("bit value {0} is neither 0 nor 1")]
    BadBit(u8),
    #[error("random draw {0} is outside [0, 1)")]
    BadDraw(f64),
}

/// A normalized pure state over the computational basis of a small register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    num_positions: usize,
}

/// Outcome of measuring a single position, together with the collapsed state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Which position was read.
    pub position: usize,
    /// The observed bit, 0 or 1.
    pub outcome: u8,
    /// Born probability of the outcome that was actually observed.
    pub outcome_probability: f64,
    /// The renormalized post-measurement state.
    pub post_state: StateVector,
}

impl StateVector {
    /// Builds a state from raw amplitudes, scaling them so `Σ|aᵢ|² = 1`.
    /// Relative phases are preserved.
    pub fn new(raw: Vec<Complex64>) -> Result<Self, StateError> {
        let len = raw.len();
        if !(2..=1 << MAX_POSITIONS).contains(&len) || !len.is_power_of_two() {
            return Err(StateError::BadDimension(len));
        }
        for (i, a) in raw.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(StateError::NonFinite(i));
            }
        }
        let total: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
        if total == 0.0 {
            return Err(StateError::ZeroVector);
        }
        let scale = total.sqrt().recip();
        Ok(StateVector {
            amplitudes: raw.into_iter().map(|a| a * scale).collect(),
            num_positions: len.trailing_zeros() as usize,
        })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(raw: &[f64]) -> Result<Self, StateError> {
        Self::new(raw.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// The basis state `|label⟩` for the given bitstring.
    pub fn basis(label: &str) -> Result<Self, StateError> {
        let num_positions = label.len();
        if !(1..=MAX_POSITIONS).contains(&num_positions) {
            return Err(StateError::BadDimension(
                1usize.checked_shl(num_positions as u32).unwrap_or(0),
            ));
        }
        let index = parse_label(label, num_positions)?;
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_positions];
        amplitudes[index] = Complex64::ONE;
        Ok(StateVector {
            amplitudes,
            num_positions,
        })
    }

    pub fn num_positions(&self) -> usize {
        self.num_positions
    }

    /// Number of basis labels, `2^num_positions`.
    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The bitstring label of basis index `index`.
    pub fn label(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.num_positions)
    }

    /// Born probability of observing the full register in state `|label⟩`.
    pub fn basis_probability(&self, label: &str) -> Result<f64, StateError> {
        let index = parse_label(label, self.num_positions)?;
        Ok(self.amplitudes[index].norm_sqr())
    }

    /// Born probability that reading `position` yields `bit`.
    pub fn bit_probability(&self, position: usize, bit: u8) -> Result<f64, StateError> {
        if bit > 1 {
            return Err(StateError::BadBit(bit));
        }
        let (mass_zero, mass_one) = self.position_masses(position)?;
        Ok(if bit == 1 { mass_one } else { mass_zero })
    }

    /// Reads one position and collapses the register.
    ///
    /// The outcome is 1 iff `draw < P(bit = 1)`; with `draw` in `[0, 1)`
    /// this makes probability-0 outcomes unreachable, because a branch whose
    /// amplitudes are all exactly zero is short-circuited to the opposite
    /// outcome before the comparison.
    pub fn measure_position(
        &self,
        position: usize,
        draw: f64,
    ) -> Result<MeasurementRecord, StateError> {
        if !(0.0..1.0).contains(&draw) {
            return Err(StateError::BadDraw(draw));
        }
        let (mass_zero, mass_one) = self.position_masses(position)?;
        let outcome: u8 = if mass_zero == 0.0 {
            1
        } else if draw < mass_one {
            1
        } else {
            0
        };
        let keep = |index: usize| bit_at(index, position, self.num_positions) == outcome;
        let survivors: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| if keep(i) { a } else { Complex64::ZERO })
            .collect();
        let surviving_mass: f64 = survivors.iter().map(|a| a.norm_sqr()).sum();
        let scale = surviving_mass.sqrt().recip();
        let post_state = StateVector {
            amplitudes: survivors.into_iter().map(|a| a * scale).collect(),
            num_positions: self.num_positions,
        };
        Ok(MeasurementRecord {
            position,
            outcome,
            outcome_probability: if outcome == 1 { mass_one } else { mass_zero },
            post_state,
        })
    }

    /// Collapses the full register in one shot, returning the observed basis
    /// index and its Born probability.
    ///
    /// The draw is compared against the running prefix sum of basis
    /// probabilities in lexicographic label order: the observed index is the
    /// first whose cumulative probability exceeds `draw`.
    pub fn sample_index(&self, draw: f64) -> Result<(usize, f64), StateError> {
        if !(0.0..1.0).contains(&draw) {
            return Err(StateError::BadDraw(draw));
        }
        let mut cumulative = 0.0;
        let mut last_nonzero = None;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = Some((i, p));
            }
            cumulative += p;
            if draw < cumulative && p > 0.0 {
                return Ok((i, p));
            }
        }
        // Rounding can leave the prefix sum a hair below 1; fall back to the
        // last label with any mass.
        Ok(last_nonzero.expect("normalized state has nonzero mass"))
    }

    /// Probability masses `(P(bit = 0), P(bit = 1))` at `position`, summed
    /// directly from the amplitudes so that an empty branch is exactly zero.
    fn position_masses(&self, position: usize) -> Result<(f64, f64), StateError> {
        if position >= self.num_positions {
            return Err(StateError::BadPosition {
                position,
                num_positions: self.num_positions,
            });
        }
        let mut masses = [0.0f64; 2];
        for (i, a) in self.amplitudes.iter().enumerate() {
            masses[bit_at(i, position, self.num_positions) as usize] += a.norm_sqr();
        }
        Ok((masses[0], masses[1]))
    }
}

/// Bit of basis index `index` at `position`, with position 0 the leftmost
/// character of the label.
fn bit_at(index: usize, position: usize, num_positions: usize) -> u8 {
    ((index >> (num_positions - 1 - position)) & 1) as u8
}

fn parse_label(label: &str, num_positions: usize) -> Result<usize, StateError> {
    let bad = || StateError::BadLabel {
        label: label.to_string(),
        expected: num_positions,
    };
    if label.len() != num_positions || !label.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(bad());
    }
    usize::from_str_radix(label, 2).map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The three-door coding state `(1/√2)(|001⟩ + |110⟩)`.
    fn two_term_three_position() -> StateVector {
        StateVector::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn uniform_pair_normalizes_to_inverse_sqrt_two() {
        let s = StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, r, epsilon = 1e-15);
    }

    #[test]
    fn two_term_state_splits_mass_evenly() {
        let s = two_term_three_position();
        assert_eq!(s.num_positions(), 3);
        assert_abs_diff_eq!(s.basis_probability("001").unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.basis_probability("110").unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(s.basis_probability("111").unwrap(), 0.0);
    }

    #[test]
    fn rejects_all_zero_input() {
        assert_eq!(
            StateVector::new(vec![c(0.0, 0.0), c(0.0, 0.0)]),
            Err(StateError::ZeroVector)
        );
    }

    #[test]
    fn rejects_bad_dimensions() {
        for len in [0usize, 1, 3, 6, 32] {
            let raw = vec![c(1.0, 0.0); len];
            assert_eq!(StateVector::new(raw), Err(StateError::BadDimension(len)));
        }
    }

    #[test]
    fn rejects_non_finite_amplitudes() {
        let raw = vec![c(1.0, 0.0), c(f64::NAN, 0.0)];
        assert_eq!(StateVector::new(raw), Err(StateError::NonFinite(1)));
        let raw = vec![c(1.0, f64::INFINITY), c(0.0, 0.0)];
        assert_eq!(StateVector::new(raw), Err(StateError::NonFinite(0)));
    }

    #[test]
    fn single_position_win_lose_probabilities() {
        // √(2/3)|0⟩ + √(1/3)|1⟩ has basis probabilities 2/3 and 1/3.
        let s = StateVector::from_real(&[(2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()]).unwrap();
        assert_abs_diff_eq!(
            s.basis_probability("0").unwrap(),
            2.0 / 3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            s.basis_probability("1").unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn label_errors() {
        let s = two_term_three_position();
        assert!(matches!(
            s.basis_probability("01"),
            Err(StateError::BadLabel { .. })
        ));
        assert!(matches!(
            s.basis_probability("0a1"),
            Err(StateError::BadLabel { .. })
        ));
    }

    // Hand enumeration of the two-term state: reading position 0 sees bit 1
    // with probability |a(110)|² = 1/2, and the two possible post-states are
    // exactly the two basis terms.
    #[test]
    fn collapse_of_two_term_state_low_draw() {
        let s = two_term_three_position();
        let rec = s.measure_position(0, 0.4).unwrap();
        assert_eq!(rec.outcome, 1);
        assert_abs_diff_eq!(rec.outcome_probability, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            rec.post_state.basis_probability("110").unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn collapse_of_two_term_state_high_draw() {
        let s = two_term_three_position();
        let rec = s.measure_position(0, 0.7).unwrap();
        assert_eq!(rec.outcome, 0);
        assert_abs_diff_eq!(rec.outcome_probability, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            rec.post_state.basis_probability("001").unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn deterministic_basis_state_is_unchanged_by_measurement() {
        let s = StateVector::basis("0").unwrap();
        for draw in [0.0, 0.3, 0.999_999] {
            let rec = s.measure_position(0, draw).unwrap();
            assert_eq!(rec.outcome, 0);
            assert_eq!(rec.outcome_probability, 1.0);
            assert_eq!(rec.post_state, s);
        }
    }

    #[test]
    fn empty_branch_is_unreachable_even_at_extreme_draws() {
        // Both nonzero terms (|01⟩ and |11⟩) carry bit 1 at position 1, so
        // even if the recomputed mass sits a hair below 1 the zero-mass
        // branch must never be selected.
        let s = StateVector::from_real(&[0.0, 1e-8, 0.0, 1.0]).unwrap();
        let rec = s.measure_position(1, 0.999_999_999).unwrap();
        assert_eq!(rec.outcome, 1);
    }

    #[test]
    fn position_and_bit_errors() {
        let s = two_term_three_position();
        assert!(matches!(
            s.measure_position(3, 0.1),
            Err(StateError::BadPosition { .. })
        ));
        assert!(matches!(s.bit_probability(0, 2), Err(StateError::BadBit(2))));
        assert!(matches!(
            s.measure_position(0, 1.0),
            Err(StateError::BadDraw(_))
        ));
        assert!(matches!(
            s.measure_position(0, -0.1),
            Err(StateError::BadDraw(_))
        ));
    }

    #[test]
    fn sample_index_walks_the_cumulative_distribution() {
        let s = two_term_three_position();
        assert_eq!(s.sample_index(0.0).unwrap().0, 1); // |001⟩
        assert_eq!(s.sample_index(0.499_999).unwrap().0, 1);
        assert_eq!(s.sample_index(0.5).unwrap().0, 6); // |110⟩
        assert_eq!(s.sample_index(0.999_999).unwrap().0, 6);
    }

    #[test]
    fn repeated_measurement_is_stable() {
        let s = StateVector::new(vec![c(0.3, 0.1), c(0.2, -0.4), c(0.5, 0.0), c(0.1, 0.7)])
            .unwrap();
        for position in 0..2 {
            let first = s.measure_position(position, 0.37).unwrap();
            for draw in [0.0, 0.5, 0.999] {
                let again = first.post_state.measure_position(position, draw).unwrap();
                assert_eq!(again.outcome, first.outcome);
                assert_eq!(again.outcome_probability, 1.0);
            }
        }
    }

    #[test]
    fn phases_are_preserved_by_normalization() {
        let s = StateVector::new(vec![c(0.0, 2.0), c(-2.0, 0.0)]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].im, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, -r, epsilon = 1e-15);
    }
}
