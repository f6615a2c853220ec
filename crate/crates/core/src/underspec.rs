//! Removing tasks whose fault no model can pin down.
//!
//! A ⟨program, spec⟩ pair is kept when at least one panel model localizes
//! the injected fault. Each model is then evaluated under mutation only on
//! the kept tasks it localized itself.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gateway::{FaultLocTask, ModelAnswer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub fault_task_id: String,
    pub retained: bool,
    /// Panel models whose baseline answer hit the ground truth, sorted.
    pub localizing_models: Vec<String>,
    pub panel: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("{} (task, model) pair(s) have no baseline answer, e.g. {:?}", .0.len(), .0.first())]
    MissingAnswers(Vec<(String, String)>),
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub retained: Vec<FaultLocTask>,
    pub excluded: Vec<FaultLocTask>,
    pub verdicts: Vec<FilterVerdict>,
}

/// Answers looked up by `(task_id, model_name)`.
pub struct AnswerIndex<'a>(HashMap<(&'a str, &'a str), &'a ModelAnswer>);

impl<'a> AnswerIndex<'a> {
    pub fn new(answers: &'a [ModelAnswer]) -> Self {
        AnswerIndex(
            answers
                .iter()
                .map(|a| ((a.task_id.as_str(), a.model_name.as_str()), a))
                .collect(),
        )
    }

    pub fn get(&self, task_id: &str, model: &str) -> Option<&'a ModelAnswer> {
        self.0.get(&(task_id, model)).copied()
    }

    /// Whether `model` answered `task` with exactly the ground-truth line.
    /// Unparsed and skipped answers are incorrect.
    fn correct(&self, task: &FaultLocTask, model: &str) -> Result<bool, (String, String)> {
        self.get(&task.task_id, model)
            .map(|a| a.predicted_line == Some(task.ground_truth_line))
            .ok_or_else(|| (task.task_id.clone(), model.to_string()))
    }
}

pub fn filter_underspecified(
    baseline_tasks: &[FaultLocTask],
    panel: &[String],
    answers: &AnswerIndex,
) -> Result<FilterOutcome, FilterError> {
    let panel_sorted: Vec<String> = panel.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut missing = Vec::new();
    let mut outcome = FilterOutcome::default();
    for task in baseline_tasks {
        let mut localizing = Vec::new();
        for model in &panel_sorted {
            match answers.correct(task, model) {
                Ok(true) => localizing.push(model.clone()),
                Ok(false) => {}
                Err(pair) => missing.push(pair),
            }
        }
        let retained = !localizing.is_empty();
        outcome.verdicts.push(FilterVerdict {
            fault_task_id: task.task_id.clone(),
            retained,
            localizing_models: localizing,
            panel: panel_sorted.clone(),
        });
        if retained {
            outcome.retained.push(task.clone());
        } else {
            outcome.excluded.push(task.clone());
        }
    }
    if missing.is_empty() {
        Ok(outcome)
    } else {
        Err(FilterError::MissingAnswers(missing))
    }
}

/// The retained tasks that `model` localized correctly at baseline.
pub fn gate_for_model(
    retained_tasks: &[FaultLocTask],
    model: &str,
    answers: &AnswerIndex,
) -> Result<Vec<FaultLocTask>, FilterError> {
    let mut missing = Vec::new();
    let mut eligible = Vec::new();
    for task in retained_tasks {
        match answers.correct(task, model) {
            Ok(true) => eligible.push(task.clone()),
            Ok(false) => {}
            Err(pair) => missing.push(pair),
        }
    }
    if missing.is_empty() {
        Ok(eligible)
    } else {
        Err(FilterError::MissingAnswers(missing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{test_task, AnswerStatus};

    fn answer(task: &FaultLocTask, model: &str, line: Option<usize>) -> ModelAnswer {
        ModelAnswer {
            task_id: task.task_id.clone(),
            model_name: model.into(),
            raw_text: String::new(),
            predicted_line: line,
            latency_ms: 0,
            prompt_tokens: 0,
            completion_tokens: 0,
            attempts: 1,
            status: AnswerStatus::Answered,
        }
    }

    fn tasks() -> Vec<FaultLocTask> {
        let src = "a = 1\nb = 2\nc = 3\n";
        (1..=3)
            .map(|l| {
                let mut t = test_task(src, l);
                t.task_id = format!("task{l}");
                t
            })
            .collect()
    }

    #[test]
    fn existential_retention_and_per_model_gate() {
        let t = tasks();
        let panel: Vec<String> = (0..10).map(|i| format!("m{i}")).collect();
        let mut answers = Vec::new();
        for task in &t {
            for (i, m) in panel.iter().enumerate() {
                // Task 0: only m3 is right. Task 1: nobody. Task 2: everyone.
                let right = match task.ground_truth_line {
                    1 => i == 3,
                    2 => false,
                    _ => true,
                };
                let line = if right { Some(task.ground_truth_line) } else { None };
                answers.push(answer(task, m, line));
            }
        }
        let index = AnswerIndex::new(&answers);
        let out = filter_underspecified(&t, &panel, &index).unwrap();
        assert_eq!(out.retained.len(), 2);
        assert_eq!(out.excluded[0].ground_truth_line, 2);
        assert_eq!(out.verdicts[0].localizing_models, vec!["m3".to_string()]);
        assert!(out.verdicts.iter().all(|v| v.retained == !v.localizing_models.is_empty()));

        assert_eq!(gate_for_model(&out.retained, "m3", &index).unwrap().len(), 2);
        assert_eq!(gate_for_model(&out.retained, "m0", &index).unwrap().len(), 1);
    }

    #[test]
    fn missing_pairs_are_listed() {
        let t = tasks();
        let answers = vec![answer(&t[0], "a", Some(1))];
        let index = AnswerIndex::new(&answers);
        match filter_underspecified(&t, &["a".into()], &index) {
            Err(FilterError::MissingAnswers(pairs)) => assert_eq!(pairs.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(gate_for_model(&t, "b", &index).is_err());
    }
}
