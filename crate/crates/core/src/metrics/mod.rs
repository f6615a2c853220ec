//! Scoring answers and aggregating accuracy.
//!
//! Every table row counts the score records that match its key columns,
//! where `*` in a key column matches any value. That makes each row
//! reproducible by filtering `scores.jsonl` and counting.

mod report;
mod tables;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fault_injector::FaultKind;
use crate::gateway::{AnswerStatus, FaultLocTask, ModelAnswer, TaskPhase};
use crate::language::SubjectLanguage;
use crate::source_model::Quartile;
use crate::spm::{SpmKind, SpmStep};

pub use report::{emit_report, ReportInputs, ReportSummary};
pub use tables::{
    baseline_accuracy, location_heatmap, longitudinal, robustness_failure_rate, spm_type_accuracy, strength_curve,
    strength_curves, ols_slope, RobustnessSummary, StrengthCurve,
};

/// Key value that matches every record.
pub const ANY: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub task_id: String,
    pub model_name: String,
    pub phase: TaskPhase,
    pub subject_language: SubjectLanguage,
    pub seed_id: String,
    pub fault_id: String,
    pub mutant_id: Option<String>,
    pub fault_kind: FaultKind,
    pub fault_quartile: Quartile,
    pub spm_label: Option<String>,
    #[serde(default)]
    pub spm_steps: Vec<SpmStep>,
    pub ground_truth_line: usize,
    pub predicted_line: Option<usize>,
    /// Exact match with the ground truth.
    pub correct: bool,
    /// No line could be extracted; always also incorrect.
    pub unparsed: bool,
    /// The prompt was never sent (context limit); also unparsed.
    pub skipped: bool,
}

/// Scores one answer by exact line match.
pub fn score(task: &FaultLocTask, answer: &ModelAnswer) -> ScoreRecord {
    ScoreRecord {
        task_id: task.task_id.clone(),
        model_name: answer.model_name.clone(),
        phase: task.phase,
        subject_language: task.subject_language,
        seed_id: task.seed_id.clone(),
        fault_id: task.fault_id.clone(),
        mutant_id: task.mutant_id.clone(),
        fault_kind: task.fault_kind,
        fault_quartile: task.fault_quartile,
        spm_label: task.spm_label.clone(),
        spm_steps: task.spm_steps.clone(),
        ground_truth_line: task.ground_truth_line,
        predicted_line: answer.predicted_line,
        correct: answer.predicted_line == Some(task.ground_truth_line),
        unparsed: answer.predicted_line.is_none(),
        skipped: answer.status == AnswerStatus::Skipped,
    }
}

impl ScoreRecord {
    /// Whether the prediction lies within `k` lines of the ground truth.
    pub fn within(&self, k: usize) -> bool {
        self.predicted_line.is_some_and(|p| p.abs_diff(self.ground_truth_line) <= k)
    }

    /// The mutation kind of a single-operator plan.
    pub fn single_spm_kind(&self) -> Option<SpmKind> {
        match self.spm_steps.as_slice() {
            [step] => Some(step.kind),
            _ => None,
        }
    }

    pub fn strength(&self) -> Option<u8> {
        self.spm_steps.first().map(|s| s.strength)
    }
}

/// A grouping column of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Model,
    Phase,
    FaultKind,
    Language,
    FaultQuartile,
    SpmLabel,
    Strength,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::Model => "model",
            Axis::Phase => "phase",
            Axis::FaultKind => "fault_kind",
            Axis::Language => "language",
            Axis::FaultQuartile => "quartile",
            Axis::SpmLabel => "spm_label",
            Axis::Strength => "strength",
        }
    }

    pub fn value(self, s: &ScoreRecord) -> String {
        match self {
            Axis::Model => s.model_name.clone(),
            Axis::Phase => s.phase.to_string(),
            Axis::FaultKind => s.fault_kind.to_string(),
            Axis::Language => s.subject_language.to_string(),
            Axis::FaultQuartile => s.fault_quartile.to_string(),
            Axis::SpmLabel => s.spm_label.clone().unwrap_or_else(|| "none".into()),
            Axis::Strength => s.strength().map_or_else(|| "0".into(), |v| v.to_string()),
        }
    }
}

/// Counts for one table cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub correct: usize,
    pub unparsed: usize,
    pub total: usize,
    /// Predictions within the configured tolerance.
    pub within_tolerance: usize,
}

impl Cell {
    pub fn add(&mut self, s: &ScoreRecord, tolerance: usize) {
        self.total += 1;
        self.correct += usize::from(s.correct);
        self.unparsed += usize::from(s.unparsed);
        self.within_tolerance += usize::from(s.within(tolerance));
    }

    pub fn incorrect(&self) -> usize {
        self.total - self.correct
    }

    /// Percentage correct; `None` for an empty cell.
    pub fn accuracy(&self) -> Option<f64> {
        pct(self.correct, self.total)
    }

    pub fn failure_rate(&self) -> Option<f64> {
        pct(self.incorrect(), self.total)
    }
}

pub fn pct(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| 100.0 * part as f64 / whole as f64)
}

/// A value in a report table.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Count(usize),
    /// A percentage or rate; `None` renders as an empty CSV field and JSON null.
    Number(Option<f64>),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Text(s) => s.clone(),
            Field::Count(n) => n.to_string(),
            Field::Number(Some(x)) => format!("{x:.4}"),
            Field::Number(None) => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Field::Text(s) => s.clone().into(),
            Field::Count(n) => (*n).into(),
            Field::Number(Some(x)) => serde_json::Number::from_f64((x * 1e4).round() / 1e4).map_or(serde_json::Value::Null, Into::into),
            Field::Number(None) => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Field::csv))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.rows
            .iter()
            .map(|row| {
                self.header
                    .iter()
                    .zip(row)
                    .map(|(h, f)| (h.to_string(), f.json()))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            })
            .collect::<Vec<serde_json::Value>>()
            .into()
    }

    /// Looks a row up by its leading key columns.
    pub fn row(&self, keys: &[&str]) -> Option<&[Field]> {
        self.rows
            .iter()
            .find(|r| keys.iter().zip(r.iter()).all(|(k, f)| matches!(f, Field::Text(t) if t == k)))
            .map(Vec::as_slice)
    }

    /// Plain-text rendering for terminals.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = std::iter::once(self.header.iter().map(|h| h.to_string()).collect())
            .chain(self.rows.iter().map(|r| r.iter().map(Field::csv).collect()))
            .collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| cells.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("strength curve for {0} has fewer than two populated strengths")]
    InsufficientStrengths(String),
    #[error("model pair {0} -> {1} has no baseline scores for one side")]
    UnknownModelPair(String, String),
}

/// Counts records per key. `patterns` choose which axes keep their value;
/// a `false` entry rolls that axis up into `*`.
pub fn group<'a>(
    records: impl IntoIterator<Item = &'a ScoreRecord>,
    axes: &[Axis],
    patterns: &[Vec<bool>],
    tolerance: usize,
) -> BTreeMap<Vec<String>, Cell> {
    let mut cells: BTreeMap<Vec<String>, Cell> = BTreeMap::new();
    for s in records {
        let values: Vec<String> = axes.iter().map(|a| a.value(s)).collect();
        for pattern in patterns {
            let key = values
                .iter()
                .zip(pattern)
                .map(|(v, keep)| if *keep { v.clone() } else { ANY.to_string() })
                .collect();
            cells.entry(key).or_default().add(s, tolerance);
        }
    }
    cells
}

/// Baseline scores of retained tasks, plus the set of (model, fault)
/// pairs each model localized, which gates the mutation phase.
pub struct Population<'a> {
    pub baseline: Vec<&'a ScoreRecord>,
    pub spm: Vec<&'a ScoreRecord>,
}

impl<'a> Population<'a> {
    /// Splits scores into the two scored populations.
    ///
    /// Baseline scores count only for retained tasks. Mutation-phase scores
    /// count only where the same model localized the parent fault.
    pub fn new(scores: &'a [ScoreRecord], retained: &HashSet<String>) -> Self {
        let baseline: Vec<&ScoreRecord> = scores
            .iter()
            .filter(|s| s.phase == TaskPhase::Baseline && retained.contains(&s.task_id))
            .collect();
        let solved: HashMap<(&str, &str), bool> = baseline
            .iter()
            .map(|s| ((s.model_name.as_str(), s.fault_id.as_str()), s.correct))
            .collect();
        let spm = scores
            .iter()
            .filter(|s| {
                s.phase == TaskPhase::Spm
                    && solved.get(&(s.model_name.as_str(), s.fault_id.as_str())).copied().unwrap_or(false)
            })
            .collect();
        Population { baseline, spm }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub struct Maker {
        n: usize,
    }

    impl Maker {
        pub fn new() -> Self {
            Maker { n: 0 }
        }

        pub fn score(&mut self, model: &str, phase: TaskPhase, fault: &str, correct: bool) -> ScoreRecord {
            self.n += 1;
            ScoreRecord {
                task_id: format!("t{}", self.n),
                model_name: model.into(),
                phase,
                subject_language: SubjectLanguage::Python,
                seed_id: "s".into(),
                fault_id: fault.into(),
                mutant_id: (phase == TaskPhase::Spm).then(|| format!("m{}", self.n)),
                fault_kind: FaultKind::OffByOne,
                fault_quartile: Quartile::Q1,
                spm_label: (phase == TaskPhase::Spm).then(|| "M_d".into()),
                spm_steps: if phase == TaskPhase::Spm {
                    vec![SpmStep {
                        kind: SpmKind::DeadCode,
                        strength: 1,
                        quartile: Quartile::Q1,
                    }]
                } else {
                    Vec::new()
                },
                ground_truth_line: 5,
                predicted_line: Some(if correct { 5 } else { 6 }),
                correct,
                unparsed: false,
                skipped: false,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring_is_exact_match() {
        let mut m = fixtures::Maker::new();
        let s = m.score("a", TaskPhase::Baseline, "f", false);
        assert!(!s.correct);
        assert!(s.within(1));
        assert!(!s.within(0));
    }

    #[test]
    fn arithmetic_and_absent_cells() {
        let cell = Cell {
            correct: 113,
            unparsed: 0,
            total: 250,
            within_tolerance: 113,
        };
        assert!((cell.accuracy().unwrap() - 45.2).abs() < 1e-12);
        assert_eq!(Cell::default().accuracy(), None);
    }

    #[test]
    fn csv_uses_empty_fields_for_absent_values() {
        let t = Table {
            name: "t",
            header: vec!["k", "n", "pct"],
            rows: vec![vec![Field::Text("a,b".into()), Field::Count(0), Field::Number(None)]],
        };
        assert_eq!(t.to_csv(), "k,n,pct\n\"a,b\",0,\n");
        assert_eq!(t.to_json()[0]["pct"], serde_json::Value::Null);
    }
}
