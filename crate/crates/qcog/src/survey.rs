//! Ingestion and analysis of two-ordering survey contingency tables.
//!
//! A survey question asked in two different positions yields one
//! [`OrderedContingencyTable`] per position. [`order_shift`] quantifies how
//! the response distribution moved between positions and attaches a
//! two-proportion z-test to the dominant shift; [`fit_survey_belief`] maps a
//! table pair onto a two-question belief state.
//!
//! Tables arrive as CSV with one row per category:
//!
//! ```csv
//! question_id,position,category,value,value_kind,sample_size
//! satisfaction,first,Satisfied,17,percent,766
//! ```
//!
//! where `position` is `first` or `second` and `value_kind` is `percent` or
//! `count`. The classic satisfaction/approval table ships with the crate as
//! [`bundled_table1`]. Its companion acquiescence-bias panel (agree/disagree
//! versus forced choice) is stored alongside as a fixture only; no model is
//! attached to it here.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::belief::TwoQuestionBeliefState;

/// Rounding slack allowed on a percent column: the entries must sum to 100
/// within half a point.
pub const PERCENT_TOLERANCE: f64 = 0.5;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("parse error at line {line}: {message}")]
    ParseError { line: u64, message: String },
    #[error(
        "invariant violated for {question_id}/{position}: values sum to {sum}, expected {expected}"
    )]
    InvariantError {
        question_id: String,
        position: AskPosition,
        sum: f64,
        expected: f64,
    },
    #[error("tables do not form a first/second pair: {detail}")]
    MismatchedTables { detail: String },
    #[error("bad category mapping: {detail}")]
    MappingError { detail: String },
    #[error("table for {question_id} collapses to a single category after exclusion")]
    DegenerateAfterExclusion { question_id: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Belief(#[from] crate::belief::BeliefError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AskPosition {
    First,
    Second,
}

impl fmt::Display for AskPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AskPosition::First => write!(f, "first"),
            AskPosition::Second => write!(f, "second"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Percent,
    Count,
}

/// One question's category breakdown under a given ask position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderedContingencyTable {
    pub question_id: String,
    pub position: AskPosition,
    /// Category labels with their percent or count values, in file order.
    pub categories: Vec<(String, f64)>,
    pub value_kind: ValueKind,
    pub sample_size: u64,
}

impl OrderedContingencyTable {
    /// Validates the column-sum invariant: percents total 100 within half a
    /// point, counts total the sample size exactly.
    pub fn new(
        question_id: String,
        position: AskPosition,
        categories: Vec<(String, f64)>,
        value_kind: ValueKind,
        sample_size: u64,
    ) -> Result<Self, SurveyError> {
        let sum: f64 = categories.iter().map(|(_, v)| v).sum();
        let expected = match value_kind {
            ValueKind::Percent => 100.0,
            ValueKind::Count => sample_size as f64,
        };
        let tolerance = match value_kind {
            ValueKind::Percent => PERCENT_TOLERANCE,
            ValueKind::Count => 0.0,
        };
        if (sum - expected).abs() > tolerance {
            return Err(SurveyError::InvariantError {
                question_id,
                position,
                sum,
                expected,
            });
        }
        Ok(OrderedContingencyTable {
            question_id,
            position,
            categories,
            value_kind,
            sample_size,
        })
    }

    /// The category's share as a percent, whatever the stored kind.
    pub fn percent(&self, category: &str) -> Option<f64> {
        let (_, value) = self.categories.iter().find(|(c, _)| c == category)?;
        Some(match self.value_kind {
            ValueKind::Percent => *value,
            ValueKind::Count => 100.0 * value / self.sample_size as f64,
        })
    }

    /// The category's share as a proportion in `[0, 1]`.
    pub fn proportion(&self, category: &str) -> Option<f64> {
        self.percent(category).map(|p| p / 100.0)
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    question_id: String,
    position: String,
    category: String,
    value: f64,
    value_kind: String,
    sample_size: u64,
}

/// Parses tables from a CSV file.
pub fn ingest_tables(path: impl AsRef<Path>) -> Result<Vec<OrderedContingencyTable>, SurveyError> {
    ingest_tables_from_reader(File::open(path)?)
}

/// Parses tables from any CSV reader. Rows sharing `(question_id, position)`
/// form one table and must agree on `value_kind` and `sample_size`.
pub fn ingest_tables_from_reader(
    reader: impl Read,
) -> Result<Vec<OrderedContingencyTable>, SurveyError> {
    let mut csv_reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = csv_reader.headers().map_err(csv_to_parse_error)?.clone();
    let mut groups: Vec<(String, AskPosition, ValueKind, u64, Vec<(String, f64)>)> = Vec::new();
    let mut saw_row = false;
    for result in csv_reader.records() {
        let record = result.map_err(csv_to_parse_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: CsvRow = record
            .deserialize(Some(&headers))
            .map_err(|e| SurveyError::ParseError {
                line,
                message: e.to_string(),
            })?;
        saw_row = true;
        let position = parse_position(&row.position, line)?;
        let value_kind = parse_value_kind(&row.value_kind, line)?;
        if !row.value.is_finite() || row.value < 0.0 {
            return Err(SurveyError::ParseError {
                line,
                message: format!("value {} must be a non-negative number", row.value),
            });
        }
        match groups
            .iter_mut()
            .find(|(q, p, ..)| *q == row.question_id && *p == position)
        {
            Some((q, _, kind, size, categories)) => {
                if *kind != value_kind || *size != row.sample_size {
                    return Err(SurveyError::ParseError {
                        line,
                        message: format!(
                            "rows of table {q}/{position} disagree on value_kind or sample_size"
                        ),
                    });
                }
                categories.push((row.category, row.value));
            }
            None => groups.push((
                row.question_id,
                position,
                value_kind,
                row.sample_size,
                vec![(row.category, row.value)],
            )),
        }
    }
    if !saw_row {
        return Err(SurveyError::ParseError {
            line: 1,
            message: "no data rows".to_string(),
        });
    }
    groups
        .into_iter()
        .map(|(question_id, position, value_kind, sample_size, categories)| {
            OrderedContingencyTable::new(question_id, position, categories, value_kind, sample_size)
        })
        .collect()
}

fn csv_to_parse_error(err: csv::Error) -> SurveyError {
    let line = err
        .position()
        .map(|p| p.line())
        .unwrap_or(0);
    SurveyError::ParseError {
        line,
        message: err.to_string(),
    }
}

fn parse_position(raw: &str, line: u64) -> Result<AskPosition, SurveyError> {
    match raw {
        "first" => Ok(AskPosition::First),
        "second" => Ok(AskPosition::Second),
        other => Err(SurveyError::ParseError {
            line,
            message: format!("position `{other}` is neither `first` nor `second`"),
        }),
    }
}

fn parse_value_kind(raw: &str, line: u64) -> Result<ValueKind, SurveyError> {
    match raw {
        "percent" => Ok(ValueKind::Percent),
        "count" => Ok(ValueKind::Count),
        other => Err(SurveyError::ParseError {
            line,
            message: format!("value_kind `{other}` is neither `percent` nor `count`"),
        }),
    }
}

/// The bundled satisfaction/approval table: each question asked first on one
/// survey form (N = 766 with satisfaction first) and second on the other
/// (N = 723 with approval first).
pub fn bundled_table1() -> Vec<OrderedContingencyTable> {
    ingest_tables_from_reader(TABLE1_CSV.as_bytes()).expect("bundled fixture parses")
}

/// Raw CSV of the bundled Table 1 fixture.
pub const TABLE1_CSV: &str = include_str!("../fixtures/table1.csv");

/// Raw CSV of the acquiescence-bias panel (agree/disagree versus forced
/// choice). Stored for reporting only; the library attaches no model to it.
pub const ACQUIESCENCE_CSV: &str = include_str!("../fixtures/acquiescence.csv");

/// Per-category movement between ask positions, in percentage points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEffectReport {
    pub question_id: String,
    /// `(category, percent asked second − percent asked first)` over the
    /// categories present in both tables, in first-table order.
    pub shifts: Vec<(String, f64)>,
    pub dominant_category: String,
    pub dominant_shift: f64,
    /// Two-proportion z statistic for the dominant shift.
    pub z_score: f64,
    /// Two-sided normal p-value for the dominant shift.
    pub p_value: f64,
}

/// Compares one question's two ask positions category by category.
pub fn order_shift(
    first: &OrderedContingencyTable,
    second: &OrderedContingencyTable,
) -> Result<OrderEffectReport, SurveyError> {
    if first.question_id != second.question_id {
        return Err(SurveyError::MismatchedTables {
            detail: format!(
                "question ids differ: `{}` vs `{}`",
                first.question_id, second.question_id
            ),
        });
    }
    if first.position != AskPosition::First || second.position != AskPosition::Second {
        return Err(SurveyError::MismatchedTables {
            detail: "arguments must be the asked-first then asked-second table".to_string(),
        });
    }
    let mut shifts = Vec::new();
    for (category, _) in &first.categories {
        if let Some(second_percent) = second.percent(category) {
            let first_percent = first.percent(category).expect("category from first table");
            shifts.push((category.clone(), second_percent - first_percent));
        }
    }
    if shifts.is_empty() {
        return Err(SurveyError::MismatchedTables {
            detail: "tables share no category labels".to_string(),
        });
    }
    let (dominant_category, dominant_shift) = shifts
        .iter()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(c, s)| (c.clone(), *s))
        .expect("shifts is non-empty");
    let p1 = first.proportion(&dominant_category).expect("dominant category");
    let p2 = second.proportion(&dominant_category).expect("dominant category");
    let (z_score, p_value) =
        two_proportion_z(p1, first.sample_size, p2, second.sample_size);
    Ok(OrderEffectReport {
        question_id: first.question_id.clone(),
        shifts,
        dominant_category,
        dominant_shift,
        z_score,
        p_value,
    })
}

/// Pooled two-proportion z statistic for `p2 − p1` and its two-sided normal
/// p-value.
pub fn two_proportion_z(p1: f64, n1: u64, p2: f64, n2: u64) -> (f64, f64) {
    let (n1, n2) = (n1 as f64, n2 as f64);
    let pooled = (p1 * n1 + p2 * n2) / (n1 + n2);
    let variance = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
    if variance <= 0.0 {
        let z = if p2 == p1 { 0.0 } else { f64::INFINITY.copysign(p2 - p1) };
        return (z, if p2 == p1 { 1.0 } else { 0.0 });
    }
    let z = (p2 - p1) / variance.sqrt();
    let normal = Normal::standard();
    let p_value = 2.0 * (1.0 - normal.cdf(z.abs()));
    (z, p_value)
}

/// Maps table categories onto the binary answer the belief basis needs.
/// Unmapped categories ("don't know" and friends) are excluded and the
/// remaining two groups renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryMapping {
    pub yes: Vec<String>,
    pub no: Vec<String>,
}

impl CategoryMapping {
    pub fn new(yes: &[&str], no: &[&str]) -> Self {
        CategoryMapping {
            yes: yes.iter().map(|s| s.to_string()).collect(),
            no: no.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A belief state fitted to a pair of ordering marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyBeliefFit {
    pub state: TwoQuestionBeliefState,
    /// P(yes) when the question was asked first, after exclusion.
    pub first_marginal: f64,
    /// P(yes) when the question was asked second, after exclusion.
    pub second_marginal: f64,
    /// Standing caveat attached to every fit; see [`fit_survey_belief`].
    pub approximation_note: &'static str,
}

/// The caveat carried by every [`SurveyBeliefFit`].
pub const JOINT_RECONSTRUCTION_NOTE: &str = "joint pattern frequencies reconstructed from \
marginals assuming independence within each ordering; published tables report marginals only";

/// Fits a two-question belief state to a question's asked-first and
/// asked-second tables.
///
/// Each table is collapsed to a binary yes/no outcome under `mapping`,
/// giving the two ordering marginals. Published tables carry no joint
/// pattern counts, so the four pattern frequencies are reconstructed as the
/// product measure of the marginals before delegating to the belief fit; the
/// returned state reproduces both marginals, and the fit is labeled with
/// [`JOINT_RECONSTRUCTION_NOTE`].
pub fn fit_survey_belief(
    first: &OrderedContingencyTable,
    second: &OrderedContingencyTable,
    mapping: &CategoryMapping,
) -> Result<SurveyBeliefFit, SurveyError> {
    if first.question_id != second.question_id
        || first.position != AskPosition::First
        || second.position != AskPosition::Second
    {
        return Err(SurveyError::MismatchedTables {
            detail: "arguments must be one question's asked-first and asked-second tables"
                .to_string(),
        });
    }
    if mapping.yes.iter().any(|c| mapping.no.contains(c)) {
        return Err(SurveyError::MappingError {
            detail: "a category is mapped to both yes and no".to_string(),
        });
    }
    let first_marginal = binary_share(first, mapping)?;
    let second_marginal = binary_share(second, mapping)?;
    let state = TwoQuestionBeliefState::from_frequencies(
        first_marginal * second_marginal,
        first_marginal * (1.0 - second_marginal),
        (1.0 - first_marginal) * second_marginal,
        (1.0 - first_marginal) * (1.0 - second_marginal),
    )?;
    Ok(SurveyBeliefFit {
        state,
        first_marginal,
        second_marginal,
        approximation_note: JOINT_RECONSTRUCTION_NOTE,
    })
}

fn binary_share(
    table: &OrderedContingencyTable,
    mapping: &CategoryMapping,
) -> Result<f64, SurveyError> {
    let mass = |labels: &[String]| -> f64 {
        labels
            .iter()
            .filter_map(|label| table.percent(label))
            .sum()
    };
    let yes = mass(&mapping.yes);
    let no = mass(&mapping.no);
    if yes + no == 0.0 {
        return Err(SurveyError::MappingError {
            detail: format!(
                "no category of table {}/{} matches the mapping",
                table.question_id, table.position
            ),
        });
    }
    if yes == 0.0 || no == 0.0 {
        return Err(SurveyError::DegenerateAfterExclusion {
            question_id: table.question_id.clone(),
        });
    }
    Ok(yes / (yes + no))
}
