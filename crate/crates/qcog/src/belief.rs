//! Two-question belief states and the classical order-effect baselines.
//!
//! The quantum model keeps a normalized four-amplitude state over the joint
//! answer patterns `AA, AB, BA, BB` of a two-stage experiment. The squared
//! moduli of the middle amplitudes are the probabilities of seeing pattern
//! `AB` versus `BA`, and nothing forces them to be equal — that asymmetry is
//! the order effect.
//!
//! Two classical baselines live alongside it: independent events, whose
//! joint probability is the same in either order, and a bigram (first-order
//! Markov) model, which produces order asymmetry classically through
//! unequal branch probabilities.

use std::collections::HashMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::qstate::StateVector;

/// Tolerance accepted on the sum of observed frequencies handed to
/// [`TwoQuestionBeliefState::from_frequencies`].
pub const FREQUENCY_TOLERANCE: f64 = 1e-6;

const STATE_NORM_TOLERANCE: f64 = 1e-9;
const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeliefError {
    #[error("belief amplitudes square-sum to {sum_sq} (must be 1 within 1e-9)")]
    NotNormalized { sum_sq: f64 },
    #[error("belief amplitude is not finite")]
    NonFinite,
    #[error("bad frequencies: {reason}")]
    BadFrequencies { reason: String },
    #[error("cognition value {value} outside [0, 1]")]
    ValueOutOfRange { value: f64 },
    #[error("no cognition entry for stimulus `{stimulus}` preceded by `{preceding}`")]
    MissingEntry { stimulus: String, preceding: String },
    #[error("probability {value} outside [0, 1]")]
    OutOfRange { value: f64 },
    #[error("symbol `{0}` is not in the model alphabet")]
    UnknownSymbol(String),
    #[error("sequence is empty")]
    EmptySequence,
    #[error("{which} of bigram model sums to {sum} (must be 1 within 1e-9)")]
    NotStochastic { which: String, sum: f64 },
    #[error("bigram model has a negative probability entry")]
    NegativeEntry,
    #[error("bigram model shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Normalized amplitudes over the joint answer patterns of two questions,
/// in basis order `AA, AB, BA, BB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQuestionBeliefState {
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
}

impl TwoQuestionBeliefState {
    /// Builds a state from complex amplitudes, which must already satisfy
    /// `|α|²+|β|²+|γ|²+|δ|² = 1` within 1e-9.
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> Result<Self, BeliefError> {
        for a in [alpha, beta, gamma, delta] {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(BeliefError::NonFinite);
            }
        }
        let sum_sq =
            alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr() + delta.norm_sqr();
        if (sum_sq - 1.0).abs() > STATE_NORM_TOLERANCE {
            return Err(BeliefError::NotNormalized { sum_sq });
        }
        Ok(TwoQuestionBeliefState {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self, BeliefError> {
        Self::new(
            Complex64::new(alpha, 0.0),
            Complex64::new(beta, 0.0),
            Complex64::new(gamma, 0.0),
            Complex64::new(delta, 0.0),
        )
    }

    /// Fits a belief state to observed pattern frequencies by taking real
    /// non-negative amplitudes `√freq`.
    ///
    /// The four frequencies must be non-negative and sum to 1 within 1e-6;
    /// any small deviation is renormalized away exactly. Phases are not
    /// identifiable from order frequencies alone, so the fitted amplitudes
    /// are always real and non-negative.
    pub fn from_frequencies(
        freq_aa: f64,
        freq_ab: f64,
        freq_ba: f64,
        freq_bb: f64,
    ) -> Result<Self, BeliefError> {
        let freqs = [freq_aa, freq_ab, freq_ba, freq_bb];
        for f in freqs {
            if !f.is_finite() {
                return Err(BeliefError::BadFrequencies {
                    reason: format!("frequency {f} is not finite"),
                });
            }
            if f < 0.0 {
                return Err(BeliefError::BadFrequencies {
                    reason: format!("frequency {f} is negative"),
                });
            }
        }
        let sum: f64 = freqs.iter().sum();
        if (sum - 1.0).abs() > FREQUENCY_TOLERANCE {
            return Err(BeliefError::BadFrequencies {
                reason: format!("frequencies sum to {sum}, outside 1 ± 1e-6"),
            });
        }
        let amp = |f: f64| Complex64::new((f / sum).sqrt(), 0.0);
        Ok(TwoQuestionBeliefState {
            alpha: amp(freq_aa),
            beta: amp(freq_ab),
            gamma: amp(freq_ba),
            delta: amp(freq_bb),
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// Probabilities of the four patterns `AA, AB, BA, BB`.
    pub fn pattern_probabilities(&self) -> [f64; 4] {
        [
            self.alpha.norm_sqr(),
            self.beta.norm_sqr(),
            self.gamma.norm_sqr(),
            self.delta.norm_sqr(),
        ]
    }

    /// `(prob(AB), prob(BA)) = (|β|², |γ|²)`.
    pub fn order_probabilities(&self) -> (f64, f64) {
        (self.beta.norm_sqr(), self.gamma.norm_sqr())
    }

    /// Signed order effect `prob(AB) − prob(BA)`, always in `[-1, 1]`.
    pub fn order_effect_magnitude(&self) -> f64 {
        let (p_ab, p_ba) = self.order_probabilities();
        p_ab - p_ba
    }

    /// Probability that the first-slot answer is `A`: `|α|² + |β|²`.
    pub fn first_marginal(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// Probability that the second-slot answer is `A`: `|α|² + |γ|²`.
    pub fn second_marginal(&self) -> f64 {
        self.alpha.norm_sqr() + self.gamma.norm_sqr()
    }

    /// The same state as a two-position register, mapping answer `A` to bit
    /// 0 and `B` to bit 1 (so `AA ↦ |00⟩`, `AB ↦ |01⟩`, …).
    pub fn to_state_vector(&self) -> StateVector {
        StateVector::new(vec![self.alpha, self.beta, self.gamma, self.delta])
            .expect("belief state is normalized")
    }
}

/// Conditioned recognition values `C(stimulus | preceding)`, supplied as
/// data. The table is an interface for observed or hypothesized values; it
/// does not generate them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CognitionTable {
    entries: HashMap<(String, String), f64>,
}

impl CognitionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `C(stimulus | preceding) = value`; values live in `[0, 1]`.
    pub fn insert(
        &mut self,
        stimulus: &str,
        preceding: &str,
        value: f64,
    ) -> Result<(), BeliefError> {
        if !(0.0..=1.0).contains(&value) {
            return Err(BeliefError::ValueOutOfRange { value });
        }
        self.entries
            .insert((stimulus.to_string(), preceding.to_string()), value);
        Ok(())
    }

    pub fn get(&self, stimulus: &str, preceding: &str) -> Option<f64> {
        self.entries
            .get(&(stimulus.to_string(), preceding.to_string()))
            .copied()
    }

    /// `C(a|b) − C(b|a)`; nonzero asymmetry is the order-sensitivity this
    /// table exists to expose.
    pub fn asymmetry(&self, a: &str, b: &str) -> Result<f64, BeliefError> {
        let forward = self.get(a, b).ok_or_else(|| BeliefError::MissingEntry {
            stimulus: a.to_string(),
            preceding: b.to_string(),
        })?;
        let backward = self.get(b, a).ok_or_else(|| BeliefError::MissingEntry {
            stimulus: b.to_string(),
            preceding: a.to_string(),
        })?;
        Ok(forward - backward)
    }
}

/// Joint probability of two independent events, in both orders. The two
/// components are always equal — this is the classical null model against
/// which order effects are measured.
pub fn independent_joint(p_a: f64, p_b: f64) -> Result<(f64, f64), BeliefError> {
    for value in [p_a, p_b] {
        if !(0.0..=1.0).contains(&value) {
            return Err(BeliefError::OutOfRange { value });
        }
    }
    Ok((p_a * p_b, p_b * p_a))
}

/// First-order Markov model over a finite alphabet: an initial distribution
/// plus a row-stochastic transition matrix. Sequence probabilities factor as
/// branch probabilities down the tree of symbols, which is enough to produce
/// order asymmetry (`prob(qu) ≠ prob(uq)`) with purely classical machinery.
#[derive(Debug, Clone, PartialEq)]
pub struct BigramModel {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
    initial: Vec<f64>,
    transitions: Vec<Vec<f64>>,
}

impl BigramModel {
    pub fn new(
        symbols: &[&str],
        initial: Vec<f64>,
        transitions: Vec<Vec<f64>>,
    ) -> Result<Self, BeliefError> {
        let n = symbols.len();
        if n == 0 {
            return Err(BeliefError::ShapeMismatch("empty alphabet".to_string()));
        }
        if initial.len() != n {
            return Err(BeliefError::ShapeMismatch(format!(
                "initial distribution has {} entries for {} symbols",
                initial.len(),
                n
            )));
        }
        if transitions.len() != n || transitions.iter().any(|row| row.len() != n) {
            return Err(BeliefError::ShapeMismatch(format!(
                "transition matrix is not {n}x{n}"
            )));
        }
        if initial.iter().chain(transitions.iter().flatten()).any(|&p| p < 0.0) {
            return Err(BeliefError::NegativeEntry);
        }
        check_sums_to_one("initial distribution", &initial)?;
        for (i, row) in transitions.iter().enumerate() {
            check_sums_to_one(&format!("transition row for `{}`", symbols[i]), row)?;
        }
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.to_string(), i))
            .collect();
        Ok(BigramModel {
            symbols: symbols.iter().map(|s| s.to_string()).collect(),
            index,
            initial,
            transitions,
        })
    }

    /// Uniform initial distribution and uniform transitions: the fully
    /// symmetric model, under which every ordering of a multiset of symbols
    /// is equally likely.
    pub fn uniform(symbols: &[&str]) -> Result<Self, BeliefError> {
        let n = symbols.len();
        if n == 0 {
            return Err(BeliefError::ShapeMismatch("empty alphabet".to_string()));
        }
        let p = 1.0 / n as f64;
        Self::new(symbols, vec![p; n], vec![vec![p; n]; n])
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// `initial(seq₀) · Π transitions(seqᵢ → seqᵢ₊₁)`.
    pub fn sequence_probability(&self, seq: &[&str]) -> Result<f64, BeliefError> {
        let first = *seq.first().ok_or(BeliefError::EmptySequence)?;
        let mut current = self.index_of(first)?;
        let mut prob = self.initial[current];
        for symbol in &seq[1..] {
            let next = self.index_of(symbol)?;
            prob *= self.transitions[current][next];
            current = next;
        }
        Ok(prob)
    }

    fn index_of(&self, symbol: &str) -> Result<usize, BeliefError> {
        self.index
            .get(symbol)
            .copied()
            .ok_or_else(|| BeliefError::UnknownSymbol(symbol.to_string()))
    }
}

fn check_sums_to_one(which: &str, values: &[f64]) -> Result<(), BeliefError> {
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(BeliefError::NotStochastic {
            which: which.to_string(),
            sum,
        });
    }
    Ok(())
}

/// The letter-pair model from the bigram discussion: `q` is almost always
/// followed by `u`, while `u` is rarely followed by `q`.
pub fn letter_pair_example() -> BigramModel {
    BigramModel::new(
        &["q", "u"],
        vec![0.5, 0.5],
        vec![vec![0.01, 0.99], vec![0.05, 0.95]],
    )
    .expect("example model is stochastic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetric_two_term_state_has_no_order_effect() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let b = TwoQuestionBeliefState::from_real(0.0, r, r, 0.0).unwrap();
        let (p_ab, p_ba) = b.order_probabilities();
        assert_abs_diff_eq!(p_ab, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p_ba, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.order_effect_magnitude(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_state_orders_differ() {
        let b =
            TwoQuestionBeliefState::from_real(0.0, 0.3f64.sqrt(), 0.7f64.sqrt(), 0.0).unwrap();
        let (p_ab, p_ba) = b.order_probabilities();
        assert_abs_diff_eq!(p_ab, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(p_ba, 0.7, epsilon = 1e-12);
    }

    #[test]
    fn uniform_state_gives_quarter_each() {
        let b = TwoQuestionBeliefState::from_real(0.5, 0.5, 0.5, 0.5).unwrap();
        assert_eq!(b.order_probabilities(), (0.25, 0.25));
    }

    #[test]
    fn magnitude_example() {
        let b = TwoQuestionBeliefState::from_real(
            0.5f64.sqrt(),
            0.3f64.sqrt(),
            0.2f64.sqrt(),
            0.0,
        )
        .unwrap();
        assert_abs_diff_eq!(b.order_effect_magnitude(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        assert!(matches!(
            TwoQuestionBeliefState::from_real(1.0, 1.0, 0.0, 0.0),
            Err(BeliefError::NotNormalized { .. })
        ));
    }

    #[test]
    fn fit_uniform_frequencies() {
        let b = TwoQuestionBeliefState::from_frequencies(0.25, 0.25, 0.25, 0.25).unwrap();
        for a in [b.alpha(), b.beta(), b.gamma(), b.delta()] {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn fit_two_term_symmetric() {
        let b = TwoQuestionBeliefState::from_frequencies(0.0, 0.5, 0.5, 0.0).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(b.beta().re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(b.gamma().re, r, epsilon = 1e-15);
        assert_eq!(b.alpha().re, 0.0);
        assert_eq!(b.delta().re, 0.0);
    }

    #[test]
    fn fit_round_trips_frequencies() {
        let b = TwoQuestionBeliefState::from_frequencies(0.1, 0.3, 0.2, 0.4).unwrap();
        let probs = b.pattern_probabilities();
        for (observed, expected) in probs.iter().zip([0.1, 0.3, 0.2, 0.4]) {
            assert_abs_diff_eq!(observed, &expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(b.order_effect_magnitude(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn fit_rejects_bad_frequencies() {
        assert!(matches!(
            TwoQuestionBeliefState::from_frequencies(-0.1, 0.5, 0.3, 0.3),
            Err(BeliefError::BadFrequencies { .. })
        ));
        assert!(matches!(
            TwoQuestionBeliefState::from_frequencies(0.2, 0.2, 0.2, 0.2),
            Err(BeliefError::BadFrequencies { .. })
        ));
    }

    #[test]
    fn fit_renormalizes_within_tolerance() {
        let b =
            TwoQuestionBeliefState::from_frequencies(0.25, 0.25, 0.25, 0.25 + 5e-7).unwrap();
        let sum: f64 = b.pattern_probabilities().iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cognition_asymmetry_lookup() {
        let mut t = CognitionTable::new();
        t.insert("clear", "blind", 0.9).unwrap();
        t.insert("blind", "clear", 0.5).unwrap();
        assert_abs_diff_eq!(t.asymmetry("clear", "blind").unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(
            t.asymmetry("blind", "clear").unwrap(),
            -0.4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn cognition_symmetric_table_zero() {
        let mut t = CognitionTable::new();
        t.insert("a", "b", 0.4).unwrap();
        t.insert("b", "a", 0.4).unwrap();
        assert_eq!(t.asymmetry("a", "b").unwrap(), 0.0);
    }

    #[test]
    fn cognition_missing_entry_is_named() {
        let mut t = CognitionTable::new();
        t.insert("a", "b", 0.4).unwrap();
        match t.asymmetry("a", "b") {
            Err(BeliefError::MissingEntry {
                stimulus,
                preceding,
            }) => {
                assert_eq!(stimulus, "b");
                assert_eq!(preceding, "a");
            }
            other => panic!("expected MissingEntry, got {other:?}"),
        }
        assert!(matches!(
            t.insert("x", "y", 1.5),
            Err(BeliefError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn independent_joint_is_symmetric() {
        assert_eq!(independent_joint(0.5, 0.5).unwrap(), (0.25, 0.25));
        assert_eq!(independent_joint(1.0, 0.3).unwrap(), (0.3, 0.3));
        let (ab, ba) = independent_joint(0.2, 0.7).unwrap();
        assert_abs_diff_eq!(ab, 0.14, epsilon = 1e-15);
        assert_eq!(ab, ba);
        assert!(matches!(
            independent_joint(1.2, 0.5),
            Err(BeliefError::OutOfRange { .. })
        ));
    }

    #[test]
    fn letter_pair_probabilities() {
        let m = letter_pair_example();
        assert_abs_diff_eq!(
            m.sequence_probability(&["q", "u"]).unwrap(),
            0.495,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            m.sequence_probability(&["u", "q"]).unwrap(),
            0.025,
            epsilon = 1e-12
        );
    }

    #[test]
    fn single_symbol_sequence_is_initial_probability() {
        let m = letter_pair_example();
        assert_abs_diff_eq!(m.sequence_probability(&["q"]).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn uniform_model_is_order_blind() {
        let m = BigramModel::uniform(&["q", "u"]).unwrap();
        let qu = m.sequence_probability(&["q", "u"]).unwrap();
        let uq = m.sequence_probability(&["u", "q"]).unwrap();
        assert_abs_diff_eq!(qu, uq, epsilon = 1e-15);
    }

    #[test]
    fn bigram_errors() {
        let m = letter_pair_example();
        assert!(matches!(
            m.sequence_probability(&["q", "z"]),
            Err(BeliefError::UnknownSymbol(_))
        ));
        assert!(matches!(
            m.sequence_probability(&[]),
            Err(BeliefError::EmptySequence)
        ));
        assert!(matches!(
            BigramModel::new(&["a"], vec![0.9], vec![vec![1.0]]),
            Err(BeliefError::NotStochastic { .. })
        ));
        assert!(matches!(
            BigramModel::new(&["a", "b"], vec![1.5, -0.5], vec![vec![0.5, 0.5]; 2]),
            Err(BeliefError::NegativeEntry)
        ));
    }

    // Brute-force check that sequence probabilities of a fixed length sum
    // to one: enumerate every sequence over the alphabet.
    fn total_mass_of_length(m: &BigramModel, k: usize) -> f64 {
        let symbols: Vec<&str> = m.symbols().iter().map(|s| s.as_str()).collect();
        let n = symbols.len();
        let mut total = 0.0;
        for code in 0..n.pow(k as u32) {
            let mut seq = Vec::with_capacity(k);
            let mut rest = code;
            for _ in 0..k {
                seq.push(symbols[rest % n]);
                rest /= n;
            }
            total += m.sequence_probability(&seq).unwrap();
        }
        total
    }

    #[test]
    fn sequence_probabilities_sum_to_one() {
        let three = BigramModel::new(
            &["a", "b", "c"],
            vec![0.2, 0.3, 0.5],
            vec![
                vec![0.1, 0.6, 0.3],
                vec![0.25, 0.25, 0.5],
                vec![0.9, 0.05, 0.05],
            ],
        )
        .unwrap();
        for m in [&letter_pair_example(), &three] {
            for k in 1..=4 {
                assert_abs_diff_eq!(total_mass_of_length(m, k), 1.0, epsilon = 1e-9);
            }
        }
    }

    // A belief state can carry an order effect that no independence model
    // with the same marginals can produce.
    #[test]
    fn quantum_witness_beats_classical_null() {
        let b = TwoQuestionBeliefState::from_frequencies(0.5, 0.3, 0.2, 0.0).unwrap();
        assert_abs_diff_eq!(b.order_effect_magnitude(), 0.1, epsilon = 1e-12);
        let (ab, ba) = independent_joint(b.first_marginal(), b.second_marginal()).unwrap();
        assert_eq!(ab, ba);
    }
}
