use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{
    baseline_accuracy, location_heatmap, longitudinal, robustness_failure_rate, spm_type_accuracy, strength_curves,
    Axis, Cell, Population, ScoreRecord, Table,
};
use crate::gateway::TaskPhase;

pub struct ReportInputs<'a> {
    pub scores: &'a [ScoreRecord],
    /// Baseline task ids kept by the under-specification filter.
    pub retained: &'a HashSet<String>,
    /// Secondary ±k-line accuracy column.
    pub tolerance: usize,
    /// (older, newer) model-version pairs for the longitudinal table.
    pub model_pairs: &'a [(String, String)],
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub files: Vec<String>,
    pub robustness_micro_pct: Option<f64>,
    pub robustness_macro_pct: Option<f64>,
    pub baseline_scored: usize,
    pub spm_scored: usize,
}

const TABLE_FILES: &[&str] = &[
    "baseline_accuracy.csv",
    "robustness.csv",
    "strength_curves.csv",
    "location_heatmap.csv",
    "spm_type.csv",
    "longitudinal.csv",
    "summary.json",
];

fn round4(x: Option<f64>) -> Value {
    x.map_or(Value::Null, |v| json!((v * 1e4).round() / 1e4))
}

/// Builds every table and writes the report directory. Output depends only
/// on the inputs, so identical runs produce identical files.
pub fn emit_report(dir: &Path, inputs: &ReportInputs) -> io::Result<ReportSummary> {
    fs::create_dir_all(dir)?;
    for name in TABLE_FILES {
        let path = dir.join(name);
        if path.exists() {
            fs::remove_file(path)?;
        }
    }
    let pop = Population::new(inputs.scores, inputs.retained);
    let mut tables: Vec<Table> = vec![
        baseline_accuracy(&pop, &[Axis::Model, Axis::FaultKind, Axis::Language], inputs.tolerance),
        location_heatmap(&pop, inputs.tolerance),
    ];
    let (robustness, summary) = robustness_failure_rate(&pop, inputs.tolerance);
    if !pop.spm.is_empty() {
        tables.push(robustness);
        tables.push(strength_curves(&pop));
        tables.push(spm_type_accuracy(&pop, inputs.tolerance));
    }
    if !inputs.model_pairs.is_empty() {
        let known: Vec<(String, String)> = inputs
            .model_pairs
            .iter()
            .filter(|pair| match longitudinal(&pop, std::slice::from_ref(*pair)) {
                Ok(_) => true,
                Err(e) => {
                    log::warn!("skipping longitudinal pair: {e}");
                    false
                }
            })
            .cloned()
            .collect();
        tables.push(longitudinal(&pop, &known).expect("pairs were checked"));
    }

    let mut files = Vec::new();
    for table in &tables {
        let name = format!("{}.csv", table.name);
        fs::write(dir.join(&name), table.to_csv())?;
        files.push(name);
    }

    let mut unparsed: BTreeMap<String, BTreeMap<String, Cell>> = BTreeMap::new();
    for s in pop.baseline.iter().chain(pop.spm.iter()) {
        unparsed
            .entry(s.model_name.clone())
            .or_default()
            .entry(s.phase.to_string())
            .or_default()
            .add(s, 0);
    }
    let unparsed_json: BTreeMap<String, BTreeMap<String, Value>> = unparsed
        .into_iter()
        .map(|(model, phases)| {
            let phases = phases
                .into_iter()
                .map(|(phase, c)| (phase, json!({"unparsed": c.unparsed, "total": c.total, "unparsed_rate_pct": round4(super::pct(c.unparsed, c.total))})))
                .collect();
            (model, phases)
        })
        .collect();
    let per_model: BTreeMap<&String, Value> = summary
        .per_model
        .iter()
        .map(|(m, c)| (m, json!({"failed": c.incorrect(), "total": c.total, "failure_rate_pct": round4(c.failure_rate())})))
        .collect();
    let bundle = json!({
        "tolerance": inputs.tolerance,
        "counts": {
            "scores": inputs.scores.len(),
            "retained_tasks": inputs.retained.len(),
            "baseline_scored": pop.baseline.len(),
            "spm_scored": pop.spm.len(),
            "baseline_total": inputs.scores.iter().filter(|s| s.phase == TaskPhase::Baseline).count(),
        },
        "robustness": {
            "headline": "micro",
            "micro_failure_rate_pct": round4(summary.micro_pct),
            "macro_failure_rate_pct": round4(summary.macro_pct),
            "per_model": per_model,
        },
        "unparsed": unparsed_json,
        "tables": tables.iter().map(|t| (t.name, t.to_json())).collect::<BTreeMap<_, _>>(),
    });
    let mut text = serde_json::to_string_pretty(&bundle).expect("report serializes");
    text.push('\n');
    fs::write(dir.join("summary.json"), text)?;
    files.push("summary.json".into());

    Ok(ReportSummary {
        files,
        robustness_micro_pct: summary.micro_pct,
        robustness_macro_pct: summary.macro_pct,
        baseline_scored: pop.baseline.len(),
        spm_scored: pop.spm.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::fixtures::Maker;

    #[test]
    fn baseline_only_runs_emit_baseline_tables() {
        let mut m = Maker::new();
        let scores = vec![m.score("a", TaskPhase::Baseline, "f", true)];
        let retained: HashSet<String> = scores.iter().map(|s| s.task_id.clone()).collect();
        let dir = tempfile::tempdir().unwrap();
        let inputs = ReportInputs {
            scores: &scores,
            retained: &retained,
            tolerance: 1,
            model_pairs: &[],
        };
        let summary = emit_report(dir.path(), &inputs).unwrap();
        assert_eq!(summary.files, vec!["baseline_accuracy.csv", "location_heatmap.csv", "summary.json"]);
        let first = fs::read(dir.path().join("summary.json")).unwrap();
        emit_report(dir.path(), &inputs).unwrap();
        assert_eq!(first, fs::read(dir.path().join("summary.json")).unwrap());
    }
}
