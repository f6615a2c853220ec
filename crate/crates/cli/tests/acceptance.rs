//! Release gate: one PASS/FAIL line per acceptance criterion.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed even
//! when all criteria pass. Criterion 10 needs a live provider and is a manual
//! runbook (see README); it is reported as SKIPPED here.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use flbench_core::corpus::SeedProgram;
use flbench_core::demo::{demo_corpus, demo_seeds};
use flbench_core::fault_injector::{inject_fault, FaultKind, FaultyProgram};
use flbench_core::gateway::{FaultLocTask, Gateway, MockKind, ModelSpec, TaskPhase};
use flbench_core::hashing::derive_seed;
use flbench_core::language::SubjectLanguage;
use flbench_core::metrics::{
    robustness_failure_rate, spm_type_accuracy, strength_curve, Field, Population, ScoreRecord,
};
use flbench_core::sandbox::{verify_preservation_all, Sandbox};
use flbench_core::source_model::{apply_edits, parse, Edit, Quartile};
use flbench_core::spm::{standard_mutant_set, ContentMode, SpmKind, SpmStep, TemplateProvider};
use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

/// Criterion 1: wall-clock budget for one demo pipeline run.
const RUNTIME_BUDGET: Duration = Duration::from_secs(300);
/// Criterion 1: minimum oracle-scored tasks.
const MIN_ORACLE_TASKS: usize = 2000;
/// Criterion 3: minimum kill rate on the runnable demo seeds.
const MIN_KILL_RATE: f64 = 0.80;
/// Criterion 5: randomized edit batches.
const EDIT_BATCHES: u32 = 1000;
/// Criterion 6: CSV percentages carry four decimals.
const CSV_ROUNDING: f64 = 0.5e-4 + 1e-9;
/// Criterion 7: synthetic tasks and their line count.
const RANDOM_TASKS: usize = 10_000;
const RANDOM_LINES: usize = 100;
/// Criterion 9: absolute tolerance in percentage points.
const FIXTURE_TOLERANCE: f64 = 0.05;

const MODELS: &str = "mock:oracle,mock:random";
const SEED: &str = "42";

type Outcome = Result<String, String>;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn pipeline_command(run_dir: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flbench"));
    cmd.arg("pipeline")
        .arg("--config")
        .arg(workspace().join("configs/demo.toml"))
        .args(["--models", MODELS, "--seed", SEED])
        .arg("--run-dir")
        .arg(run_dir)
        .env("RUST_LOG", "warn")
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    cmd
}

fn run_pipeline(run_dir: &Path) -> Result<Duration, String> {
    let started = Instant::now();
    let status = pipeline_command(run_dir).status().map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("pipeline exited with {status}"));
    }
    Ok(started.elapsed())
}

fn read_jsonl(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap_or_default()
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid record"))
        .collect()
}

fn text(v: &Value, key: &str) -> String {
    match &v[key] {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Criterion 1

fn oracle_soundness(run: &Path, elapsed: Duration) -> Outcome {
    let scores: Vec<Value> = read_jsonl(&run.join("scores.jsonl"))
        .into_iter()
        .filter(|s| s["model_name"] == "mock:oracle")
        .collect();
    let wrong = scores.iter().filter(|s| s["correct"] != true).count();
    let mut phases = BTreeSet::new();
    let mut kinds = BTreeSet::new();
    let mut strengths = BTreeSet::new();
    let mut spm_quartiles = BTreeSet::new();
    let mut fault_quartiles = BTreeSet::new();
    for s in &scores {
        phases.insert(text(s, "phase"));
        fault_quartiles.insert(text(s, "fault_quartile"));
        for step in s["spm_steps"].as_array().into_iter().flatten() {
            kinds.insert(text(step, "kind"));
            strengths.insert(step["strength"].as_u64().unwrap_or(0));
            spm_quartiles.insert(text(step, "quartile"));
        }
    }
    let detail = format!(
        "{} oracle tasks, {wrong} wrong, phases={}, spm kinds={}, strengths={}, spm quartiles={}, fault quartiles={}, run {:.0?}",
        scores.len(),
        phases.len(),
        kinds.len(),
        strengths.len(),
        spm_quartiles.len(),
        fault_quartiles.len(),
        elapsed
    );
    let covered = phases.len() == 2
        && kinds.len() == 4
        && strengths == (1..=8).collect()
        && spm_quartiles.len() == 4
        && fault_quartiles.len() == 4;
    if wrong == 0 && covered && scores.len() >= MIN_ORACLE_TASKS && elapsed < RUNTIME_BUDGET {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------------------
// Criterion 2

/// The seed itself packaged as a mutation parent: the tracked line is an
/// ordinary fault site left unmodified.
fn unfaulted(seed: &SeedProgram) -> Option<FaultyProgram> {
    for kind in [FaultKind::OperatorSwap, FaultKind::IncorrectBooleanLogic, FaultKind::OffByOne] {
        for quartile in Quartile::ALL {
            if let Ok(mut p) = inject_fault(seed, kind, quartile, 1) {
                p.source_text = seed.source_text.clone();
                p.fault.fault_line = p.fault.original_line;
                p.fault.after_snippet = p.fault.before_snippet.clone();
                p.fault.fault_id = format!("{}-unfaulted", seed.seed_id);
                return Some(p);
            }
        }
    }
    None
}

fn semantic_preservation() -> Outcome {
    let sandbox = Sandbox::detect(Duration::from_secs(10));
    let mut checked = 0;
    let mut inequivalent = Vec::new();
    let mut errors = Vec::new();
    let mut skipped_languages = Vec::new();
    for language in SubjectLanguage::ALL {
        if !sandbox.can_run(language) {
            skipped_languages.push(language.to_string());
            continue;
        }
        for seed in demo_seeds(language) {
            let parent = unfaulted(&seed).ok_or_else(|| format!("{}: no trackable site", seed.seed_id))?;
            let mut mutants = Vec::new();
            for strength in [1u8, 4, 8] {
                for quartile in Quartile::ALL {
                    let rng = derive_seed(7, &[&seed.seed_id, &strength.to_string(), &quartile.to_string()]);
                    for (label, result) in
                        standard_mutant_set(&parent, strength, quartile, ContentMode::Template, &mut TemplateProvider, rng)
                    {
                        if let Ok(m) = result {
                            mutants.push((format!("{} {label} s{strength} {quartile}", seed.seed_id), m.source_text));
                        }
                    }
                }
            }
            let sources: Vec<&str> = mutants.iter().map(|(_, s)| s.as_str()).collect();
            let verdicts = verify_preservation_all(&sandbox, language, &seed.source_text, &sources)
                .map_err(|e| format!("{}: {e}", seed.seed_id))?;
            for ((name, _), verdict) in mutants.iter().zip(verdicts) {
                checked += 1;
                match verdict {
                    Ok(p) if p.equivalent => {}
                    Ok(p) => inequivalent.push(format!("{name} ({})", p.evidence)),
                    Err(e) => errors.push(format!("{name}: {e}")),
                }
            }
        }
    }
    let mut detail = format!("{checked} mutants executed, {} inequivalent, {} errors", inequivalent.len(), errors.len());
    if !skipped_languages.is_empty() {
        detail.push_str(&format!("; not runnable here: {}", skipped_languages.join(", ")));
    }
    if checked > 0 && inequivalent.is_empty() && errors.is_empty() {
        Ok(detail)
    } else {
        let first: Vec<&String> = inequivalent.iter().chain(&errors).take(3).collect();
        Err(format!("{detail}; e.g. {first:?}"))
    }
}

// ---------------------------------------------------------------------------
// Criterion 3

fn fault_effectiveness(run: &Path) -> Outcome {
    let faults = read_jsonl(&run.join("faults.jsonl"));
    let mut per_seed_kind: BTreeMap<(String, String), Vec<bool>> = BTreeMap::new();
    let (mut killed, mut survived) = (0usize, 0usize);
    for f in &faults {
        let fault = &f["fault"];
        let Some(k) = fault["killed"].as_bool() else { continue };
        if k {
            killed += 1;
        } else {
            survived += 1;
        }
        per_seed_kind
            .entry((text(fault, "seed_id"), text(fault, "kind")))
            .or_default()
            .push(k);
    }
    let executed_seeds: BTreeSet<&String> = per_seed_kind.keys().map(|(s, _)| s).collect();
    let missing: Vec<String> = executed_seeds
        .iter()
        .flat_map(|seed| FaultKind::ALL.iter().map(move |k| ((*seed).clone(), k.to_string())))
        .filter(|key| !per_seed_kind.get(key).is_some_and(|v| v.contains(&true)))
        .map(|(s, k)| format!("{s}/{k}"))
        .collect();
    let rate = killed as f64 / (killed + survived).max(1) as f64;
    let detail = format!(
        "{} runnable seeds, kill rate {:.1}% ({killed}/{}), {survived} flagged killed=false, {} seed×kind without a kill",
        executed_seeds.len(),
        rate * 100.0,
        killed + survived,
        missing.len()
    );
    if !executed_seeds.is_empty() && missing.is_empty() && rate >= MIN_KILL_RATE {
        Ok(detail)
    } else {
        Err(format!("{detail} {missing:?}"))
    }
}

// ---------------------------------------------------------------------------
// Criterion 4

fn composition_cardinality() -> Outcome {
    let mut complete = BTreeMap::new();
    let mut wrong_sizes = Vec::new();
    for seed in demo_corpus() {
        let expected = match seed.subject_language {
            SubjectLanguage::Java => 6,
            SubjectLanguage::Python => 5,
        };
        let faulty = FaultKind::ALL
            .iter()
            .flat_map(|&k| Quartile::ALL.map(move |q| (k, q)))
            .find_map(|(k, q)| inject_fault(&seed, k, q, 3).ok())
            .ok_or_else(|| format!("{}: no fault site", seed.seed_id))?;
        let mut any_complete = false;
        for quartile in Quartile::ALL {
            let set = standard_mutant_set(&faulty, 1, quartile, ContentMode::Template, &mut TemplateProvider, 11);
            let labels: BTreeSet<&String> = set.iter().map(|(l, _)| l).collect();
            if set.len() != expected || labels.len() != expected {
                wrong_sizes.push(format!("{} {quartile}: {}", seed.seed_id, set.len()));
            }
            any_complete |= set.iter().all(|(_, r)| r.is_ok());
        }
        if any_complete {
            *complete.entry(seed.subject_language).or_insert(0) += 1;
        }
    }
    let detail = format!(
        "complete sets: {} Java seeds ×6, {} Python seeds ×5; {} wrong-size sets",
        complete.get(&SubjectLanguage::Java).unwrap_or(&0),
        complete.get(&SubjectLanguage::Python).unwrap_or(&0),
        wrong_sizes.len()
    );
    if wrong_sizes.is_empty() && complete.values().sum::<usize>() == demo_corpus().len() {
        Ok(detail)
    } else {
        Err(format!("{detail} {wrong_sizes:?}"))
    }
}

// ---------------------------------------------------------------------------
// Criterion 5

fn line_starts(text: &str) -> Vec<usize> {
    let mut starts = vec![0];
    starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
    starts
}

fn sentinel(i: usize) -> String {
    format!("S{i:03}|")
}

/// Builds a non-overlapping batch from loose choices; returns the source and
/// the edits.
fn build_batch(n: usize, ops: &[(u8, usize, usize, bool)], block: Option<(usize, usize, usize)>) -> (String, Vec<Edit>) {
    let source: String = (1..=n).map(|i| format!("{}payload {i}\n", sentinel(i))).collect();
    let starts = line_starts(&source);
    let start_of = |line: usize| starts[line - 1];
    let mut edits = Vec::new();
    if let Some((start, len, before)) = block {
        let start = 1 + start % n;
        let end = (start + len).min(n);
        let before = 1 + before % (n + 1);
        if before < start || before > end + 1 {
            edits.push(Edit::MoveBlock { start, end, before });
        }
        return (source, edits);
    }
    let mut sorted: Vec<_> = ops.iter().map(|&(k, p, len, nl)| (1 + p % n, k, len, nl)).collect();
    sorted.sort();
    let mut next_free = 1;
    for (line, kind, len, newline) in sorted {
        let line = line.max(next_free);
        if line > n {
            break;
        }
        match kind {
            0 => {
                let start = start_of(line) + sentinel(line).len();
                let end = start_of(line + 1) - 1;
                let text = if newline { "new\nsplit".to_string() } else { "replaced".to_string() };
                edits.push(Edit::ReplaceSpan { start, end, text });
                next_free = line + 2;
            }
            1 => {
                let last = (line + len - 1).min(n);
                edits.push(Edit::ReplaceSpan {
                    start: start_of(line),
                    end: start_of(last + 1),
                    text: String::new(),
                });
                next_free = last + 2;
            }
            _ => {
                let lines = (0..len).map(|j| format!("inserted {j}")).collect();
                edits.push(Edit::InsertLinesBefore { line, lines });
                next_free = line + 1;
            }
        }
    }
    (source, edits)
}

fn parser_round_trip() -> Outcome {
    let mut failures = Vec::new();
    for seed in demo_corpus() {
        let parsed = parse(seed.subject_language, &seed.source_text).is_ok();
        let same = apply_edits(&seed.source_text, &[])
            .map(|(out, ledger)| out == seed.source_text && ledger.is_identity())
            .unwrap_or(false);
        if !(parsed && same) {
            failures.push(seed.seed_id.clone());
        }
    }
    let config = ProptestConfig {
        cases: EDIT_BATCHES,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (
        3usize..60,
        prop::collection::vec((0u8..3, 0usize..60, 1usize..4, any::<bool>()), 0..10),
        prop::option::weighted(0.2, (0usize..60, 0usize..5, 0usize..61)),
    );
    let property = runner.run(&strategy, |(n, ops, block)| {
        let (source, edits) = build_batch(n, &ops, block);
        let (out, ledger) = apply_edits(&source, &edits).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let lines: Vec<&str> = out.lines().collect();
        for i in 1..=n {
            let tag = sentinel(i);
            let found: Vec<usize> = (0..lines.len()).filter(|&j| lines[j].starts_with(&tag)).map(|j| j + 1).collect();
            prop_assert!(found.len() <= 1);
            prop_assert_eq!(ledger.map(i), found.first().copied(), "line {} in {:?}", i, edits);
        }
        prop_assert_eq!(ledger.new_line_count(), lines.len());
        Ok(())
    });
    let detail = format!("{} seeds round-trip byte-identically, {EDIT_BATCHES} random edit batches", demo_corpus().len() - failures.len());
    match (failures.is_empty(), property) {
        (true, Ok(())) => Ok(format!("{detail}: ledger agrees with textual search")),
        (_, Err(e)) => Err(format!("{detail}; ledger disagreement: {e}")),
        (false, _) => Err(format!("{detail}; failed seeds {failures:?}")),
    }
}

// ---------------------------------------------------------------------------
// Criterion 6

/// Value of a report key column for one raw score record.
fn key_value(s: &Value, column: &str) -> Option<String> {
    let single = s["spm_steps"].as_array().filter(|steps| steps.len() == 1).map(|steps| &steps[0]);
    Some(match column {
        "model" => text(s, "model_name"),
        "language" => text(s, "subject_language"),
        "fault_kind" => text(s, "fault_kind"),
        "phase" => text(s, "phase"),
        "quartile" => text(s, "fault_quartile"),
        "spm_label" => text(s, "spm_label"),
        "spm_kind" => match single?["kind"].as_str()? {
            "DeadCode" => "M_d".into(),
            "MisleadingComments" => "M_c".into(),
            "MisleadingVariableNames" => "M_v".into(),
            "FunctionShuffle" => "M_f".into(),
            other => other.into(),
        },
        "strength" => single?["strength"].to_string(),
        _ => return None,
    })
}

struct Recount {
    correct: usize,
    total: usize,
    unparsed: usize,
    within: usize,
}

fn recount<'a>(records: impl Iterator<Item = &'a Value>, tolerance: i64) -> Recount {
    let mut r = Recount {
        correct: 0,
        total: 0,
        unparsed: 0,
        within: 0,
    };
    for s in records {
        r.total += 1;
        let truth = s["ground_truth_line"].as_i64().unwrap();
        match s["predicted_line"].as_i64() {
            Some(p) => {
                r.correct += usize::from(p == truth);
                r.within += usize::from((p - truth).abs() <= tolerance);
            }
            None => r.unparsed += 1,
        }
    }
    r
}

fn pct(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| part as f64 * 100.0 / whole as f64)
}

fn ols(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (sxx, sxy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 * p.0, b + p.0 * p.1));
    let denom = n * sxx - sx * sx;
    (denom != 0.0).then(|| (n * sxy - sx * sy) / denom)
}

fn matches(s: &Value, columns: &[String], key: &[String]) -> bool {
    columns
        .iter()
        .zip(key)
        .all(|(c, k)| k == "*" || key_value(s, c).as_deref() == Some(k.as_str()))
}

fn close(csv: &str, expected: Option<f64>) -> bool {
    match (csv.is_empty(), expected) {
        (true, None) => true,
        (false, Some(e)) => csv.parse::<f64>().is_ok_and(|v| (v - e).abs() <= CSV_ROUNDING),
        _ => false,
    }
}

struct TableSpec {
    file: &'static str,
    keys: usize,
    /// Which key columns each rollup keeps.
    patterns: Vec<Vec<bool>>,
}

fn check_table(dir: &Path, spec: &TableSpec, population: &[&Value], tolerance: i64) -> Result<usize, String> {
    let mut reader = csv::Reader::from_path(dir.join(spec.file)).map_err(|e| format!("{}: {e}", spec.file))?;
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let columns = &header[..spec.keys];
    let rows: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(String::from).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;

    // Every row key must be one the rollups produce, and vice versa.
    let mut expected_keys = BTreeSet::new();
    for s in population {
        let Some(values) = columns.iter().map(|c| key_value(s, c)).collect::<Option<Vec<_>>>() else { continue };
        for pattern in &spec.patterns {
            expected_keys.insert(
                values
                    .iter()
                    .zip(pattern)
                    .map(|(v, keep)| if *keep { v.clone() } else { "*".into() })
                    .collect::<Vec<_>>(),
            );
        }
    }
    let row_keys: Vec<Vec<String>> = rows.iter().map(|r| r[..spec.keys].to_vec()).collect();
    let unique: BTreeSet<Vec<String>> = row_keys.iter().cloned().collect();
    if unique.len() != rows.len() || unique != expected_keys {
        return Err(format!("{}: {} rows, {} distinct, {} expected keys", spec.file, rows.len(), unique.len(), expected_keys.len()));
    }

    let slope_of = |key: &[String]| -> Option<f64> {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r[..3] == key[..3])
            .filter_map(|r| {
                let strength: f64 = r[3].parse().ok()?;
                let mut k = r[..3].to_vec();
                k.push(r[3].clone());
                let c = recount(population.iter().copied().filter(|s| matches(s, columns, &k)), 0);
                pct(c.correct, c.total).map(|a| (strength, a))
            })
            .collect();
        ols(&points)
    };

    for row in &rows {
        let key = &row[..spec.keys];
        let c = recount(population.iter().copied().filter(|s| matches(s, columns, key)), tolerance);
        for (name, value) in header.iter().zip(row).skip(spec.keys) {
            let ok = match name.as_str() {
                "correct" | "older_correct" => value == &c.correct.to_string(),
                "incorrect" | "failed" => value == &(c.total - c.correct).to_string(),
                "unparsed" => value == &c.unparsed.to_string(),
                "total" => value == &c.total.to_string(),
                "correct_within_tolerance" => value == &c.within.to_string(),
                "accuracy_pct" => close(value, pct(c.correct, c.total)),
                "failure_rate_pct" => close(value, pct(c.total - c.correct, c.total)),
                "accuracy_within_tolerance_pct" => close(value, pct(c.within, c.total)),
                "unparsed_rate_pct" => close(value, pct(c.unparsed, c.total)),
                "share_of_correct_pct" => {
                    let mut band = key.to_vec();
                    band[3] = "*".into();
                    let all = recount(population.iter().copied().filter(|s| matches(s, columns, &band)), 0);
                    close(value, pct(c.correct, all.correct))
                }
                "slope_pct_per_step" => close(value, slope_of(key)),
                other => return Err(format!("{}: unexpected column {other}", spec.file)),
            };
            if !ok {
                return Err(format!("{}: row {key:?} column {name} = {value:?}", spec.file));
            }
        }
    }
    Ok(rows.len())
}

fn metric_oracle(run: &Path) -> Outcome {
    let scores = read_jsonl(&run.join("scores.jsonl"));
    let retained: HashSet<String> = read_jsonl(&run.join("verdicts.jsonl"))
        .iter()
        .filter(|v| v["retained"] == true)
        .map(|v| text(v, "fault_task_id"))
        .collect();
    let baseline: Vec<&Value> = scores
        .iter()
        .filter(|s| s["phase"] == "baseline" && retained.contains(&text(s, "task_id")))
        .collect();
    let solved: HashSet<(String, String)> = baseline
        .iter()
        .filter(|s| s["correct"] == true)
        .map(|s| (text(s, "model_name"), text(s, "fault_id")))
        .collect();
    let spm: Vec<&Value> = scores
        .iter()
        .filter(|s| s["phase"] == "spm" && solved.contains(&(text(s, "model_name"), text(s, "fault_id"))))
        .collect();
    let both: Vec<&Value> = baseline.iter().chain(&spm).copied().collect();
    let single: Vec<&Value> = spm
        .iter()
        .copied()
        .filter(|s| s["spm_steps"].as_array().is_some_and(|a| a.len() == 1))
        .collect();

    let summary: Value = serde_json::from_str(&fs::read_to_string(run.join("report/summary.json")).unwrap_or_default())
        .map_err(|e| format!("summary.json: {e}"))?;
    let tolerance = summary["tolerance"].as_i64().unwrap_or(0);

    let b = |v: &[u8]| v.iter().map(|&x| x == 1).collect::<Vec<bool>>();
    let tables: Vec<(TableSpec, &[&Value])> = vec![
        (
            TableSpec {
                file: "baseline_accuracy.csv",
                keys: 3,
                patterns: vec![b(&[1, 1, 1]), b(&[1, 1, 0]), b(&[1, 0, 0]), b(&[0, 0, 0])],
            },
            &baseline,
        ),
        (
            TableSpec {
                file: "robustness.csv",
                keys: 2,
                patterns: vec![b(&[1, 1]), b(&[1, 0]), b(&[0, 0])],
            },
            &spm,
        ),
        (
            TableSpec {
                file: "location_heatmap.csv",
                keys: 4,
                patterns: vec![b(&[1, 1, 1, 1]), b(&[1, 1, 0, 1]), b(&[0, 1, 1, 1]), b(&[0, 1, 0, 1])],
            },
            &both,
        ),
        (
            TableSpec {
                file: "spm_type.csv",
                keys: 3,
                patterns: vec![b(&[1, 1, 1]), b(&[1, 1, 0]), b(&[0, 1, 1]), b(&[0, 1, 0])],
            },
            &spm,
        ),
        (
            TableSpec {
                file: "strength_curves.csv",
                keys: 4,
                patterns: vec![b(&[1, 1, 1, 1]), b(&[0, 1, 1, 1])],
            },
            &single,
        ),
    ];
    let mut rows = 0;
    for (spec, population) in &tables {
        rows += check_table(&run.join("report"), spec, population, tolerance)?;
    }

    let per_model: BTreeMap<String, Recount> = spm
        .iter()
        .map(|s| text(s, "model_name"))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|m| {
            let c = recount(spm.iter().copied().filter(|s| s["model_name"] == m.as_str()), 0);
            (m, c)
        })
        .collect();
    let all = recount(spm.iter().copied(), 0);
    let micro = pct(all.total - all.correct, all.total);
    let rates: Vec<f64> = per_model.values().filter_map(|c| pct(c.total - c.correct, c.total)).collect();
    let macro_avg = (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64);
    let robustness = &summary["robustness"];
    let json_close = |v: &Value, e: Option<f64>| match (v.as_f64(), e) {
        (Some(v), Some(e)) => (v - e).abs() <= CSV_ROUNDING,
        (None, None) => v.is_null(),
        _ => false,
    };
    if !json_close(&robustness["micro_failure_rate_pct"], micro) || !json_close(&robustness["macro_failure_rate_pct"], macro_avg) {
        return Err(format!("summary.json robustness {robustness} vs recount micro={micro:?} macro={macro_avg:?}"));
    }
    Ok(format!(
        "{rows} rows across {} tables and the summary match a brute-force recount of {} scores",
        tables.len(),
        scores.len()
    ))
}

// ---------------------------------------------------------------------------
// Criterion 7

fn random_baseline() -> Outcome {
    let gateway = Gateway::connect(ModelSpec::mock("mock:random", MockKind::UniformRandom { seed: 2024 })).map_err(|e| e.to_string())?;
    let source: String = (1..=RANDOM_LINES).map(|i| format!("x{i} = {i}\n")).collect();
    let mut hits = 0usize;
    for i in 0..RANDOM_TASKS {
        let task = FaultLocTask {
            task_id: format!("uniform-{i}"),
            phase: TaskPhase::Baseline,
            subject_language: SubjectLanguage::Python,
            source_text: source.clone(),
            spec_text: "assign numbered variables".into(),
            ground_truth_line: i % RANDOM_LINES + 1,
            seed_id: "synthetic".into(),
            fault_id: format!("f{i}"),
            mutant_id: None,
            fault_kind: FaultKind::OperatorSwap,
            fault_quartile: Quartile::Q1,
            spm_label: None,
            spm_steps: Vec::new(),
        };
        let answer = gateway.query(&task).map_err(|e| e.to_string())?;
        hits += usize::from(answer.predicted_line == Some(task.ground_truth_line));
    }
    let p = 1.0 / RANDOM_LINES as f64;
    let sigma = (p * (1.0 - p) / RANDOM_TASKS as f64).sqrt();
    let observed = hits as f64 / RANDOM_TASKS as f64;
    let detail = format!(
        "accuracy {:.3}% over {RANDOM_TASKS} tasks, bounds [{:.3}%, {:.3}%]",
        observed * 100.0,
        (p - 3.0 * sigma) * 100.0,
        (p + 3.0 * sigma) * 100.0
    );
    if (observed - p).abs() <= 3.0 * sigma {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------------------
// Criterion 8

fn compared_files(run: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = ["seeds", "faults", "mutants", "tasks", "answers", "verdicts", "scores"]
        .iter()
        .map(|s| PathBuf::from(format!("{s}.jsonl")))
        .collect();
    if let Ok(entries) = fs::read_dir(run.join("report")) {
        let mut report: Vec<PathBuf> = entries.flatten().map(|e| Path::new("report").join(e.file_name())).collect();
        report.sort();
        files.extend(report);
    }
    files
}

fn differing(a: &Path, b: &Path) -> Vec<String> {
    let files: BTreeSet<PathBuf> = compared_files(a).into_iter().chain(compared_files(b)).collect();
    files
        .into_iter()
        .filter(|f| fs::read(a.join(f)).ok() != fs::read(b.join(f)).ok())
        .map(|f| f.display().to_string())
        .collect()
}

fn line_count(path: &Path) -> usize {
    fs::read(path).map(|b| b.iter().filter(|&&c| c == b'\n').count()).unwrap_or(0)
}

/// Starts a run, kills it once the mutation-phase evaluation is under way,
/// tears the last answer record, then resumes.
fn crash_and_resume(run: &Path, reference: &Path) -> Result<String, String> {
    let threshold = line_count(&reference.join("answers.jsonl")) * 2 / 3;
    let mut child = pipeline_command(run).spawn().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let killed = loop {
        if child.try_wait().map_err(|e| e.to_string())?.is_some() {
            break false;
        }
        if line_count(&run.join("answers.jsonl")) >= threshold {
            child.kill().map_err(|e| e.to_string())?;
            child.wait().map_err(|e| e.to_string())?;
            break true;
        }
        if started.elapsed() > RUNTIME_BUDGET {
            let _ = child.kill();
            return Err("crash run did not reach the kill point".into());
        }
        thread::sleep(Duration::from_millis(20));
    };
    let answers = run.join("answers.jsonl");
    let len = fs::metadata(&answers).map_err(|e| e.to_string())?.len();
    let cut = 1 + derive_seed(8, &["tear"]) % 150;
    let file = fs::OpenOptions::new().write(true).open(&answers).map_err(|e| e.to_string())?;
    file.set_len(len.saturating_sub(cut)).map_err(|e| e.to_string())?;
    let _ = fs::remove_dir_all(run.join("report"));
    let stored = line_count(&answers);
    run_pipeline(run)?;
    Ok(format!(
        "{} at {stored} answers, last {cut} bytes torn",
        if killed { "killed" } else { "finished before the kill, truncated" }
    ))
}

fn determinism(a: &Path, b: &Path, c: &Path) -> Outcome {
    let diff = differing(a, b);
    if !diff.is_empty() {
        return Err(format!("identical runs differ in {diff:?}"));
    }
    let crash = crash_and_resume(c, a)?;
    let diff = differing(a, c);
    let files = compared_files(a).len();
    if diff.is_empty() {
        Ok(format!("two runs byte-identical over {files} files; crash run {crash}, resumed to identical output"))
    } else {
        Err(format!("resumed run differs in {diff:?} ({crash})"))
    }
}

// ---------------------------------------------------------------------------
// Criterion 9

struct Fixture {
    scores: Vec<ScoreRecord>,
    n: usize,
}

impl Fixture {
    fn new() -> Self {
        Fixture { scores: Vec::new(), n: 0 }
    }

    fn record(&mut self, model: &str, language: SubjectLanguage, fault: &str, steps: Vec<SpmStep>, correct: bool) {
        self.n += 1;
        let phase = if steps.is_empty() { TaskPhase::Baseline } else { TaskPhase::Spm };
        let label = (!steps.is_empty()).then(|| {
            steps.iter().rev().map(|s| s.kind.label()).collect::<Vec<_>>().join("∘")
        });
        self.scores.push(ScoreRecord {
            task_id: format!("t{}", self.n),
            model_name: model.into(),
            phase,
            subject_language: language,
            seed_id: "fixture".into(),
            fault_id: fault.into(),
            mutant_id: (phase == TaskPhase::Spm).then(|| format!("m{}", self.n)),
            fault_kind: FaultKind::OffByOne,
            fault_quartile: Quartile::Q2,
            spm_label: label,
            spm_steps: steps,
            ground_truth_line: 10,
            predicted_line: Some(if correct { 10 } else { 3 }),
            correct,
            unparsed: false,
            skipped: false,
        });
    }

    /// `correct` hits out of `total` mutation-phase tasks on one plan.
    fn spm(&mut self, model: &str, language: SubjectLanguage, kinds: &[SpmKind], strength: u8, correct: usize, total: usize) {
        let fault = format!("{model}-fault");
        if !self.scores.iter().any(|s| s.fault_id == fault && s.phase == TaskPhase::Baseline) {
            self.record(model, language, &fault, Vec::new(), true);
        }
        let steps: Vec<SpmStep> = kinds
            .iter()
            .map(|&kind| SpmStep {
                kind,
                strength,
                quartile: Quartile::Q2,
            })
            .collect();
        for i in 0..total {
            self.record(model, language, &fault, steps.clone(), i < correct);
        }
    }

    fn retained(&self) -> HashSet<String> {
        self.scores
            .iter()
            .filter(|s| s.phase == TaskPhase::Baseline)
            .map(|s| s.task_id.clone())
            .collect()
    }
}

fn number(table: &flbench_core::metrics::Table, keys: &[&str], column: &str) -> Option<f64> {
    let idx = table.header.iter().position(|h| *h == column)?;
    match table.row(keys)?.get(idx)? {
        Field::Number(v) => *v,
        _ => None,
    }
}

fn paper_shapes() -> Outcome {
    let mut checks: Vec<(String, f64, f64)> = Vec::new();

    // 78% of previously localized faults are missed after mutation.
    let mut f = Fixture::new();
    f.spm("m1", SubjectLanguage::Python, &[SpmKind::DeadCode], 1, 220, 1000);
    f.spm("m2", SubjectLanguage::Java, &[SpmKind::MisleadingComments], 1, 220, 1000);
    let retained = f.retained();
    let pop = Population::new(&f.scores, &retained);
    let (_, summary) = robustness_failure_rate(&pop, 0);
    checks.push(("robustness failure".into(), summary.micro_pct.unwrap_or(f64::NAN), 78.0));

    // Strength endpoints and per-step slopes.
    for (language, first, last, slope) in [
        (SubjectLanguage::Java, 15.82, 8.57, -1.04),
        (SubjectLanguage::Python, 42.88, 29.34, -1.93),
    ] {
        let mut f = Fixture::new();
        for s in 1..=8u8 {
            let acc = first + (last - first) * f64::from(s - 1) / 7.0;
            f.spm("m", language, &[SpmKind::DeadCode], s, (acc * 100.0).round() as usize, 10_000);
        }
        let retained = f.retained();
        let pop = Population::new(&f.scores, &retained);
        let curve = strength_curve(&pop.spm, None, SpmKind::DeadCode, language).map_err(|e| e.to_string())?;
        checks.push((format!("{language} s=1"), curve.points[&1].accuracy().unwrap_or(f64::NAN), first));
        checks.push((format!("{language} s=8"), curve.points[&8].accuracy().unwrap_or(f64::NAN), last));
        checks.push((format!("{language} slope"), curve.slope, slope));
    }

    // Per-operator accuracy ordering and the function-shuffle failure rate.
    let mut f = Fixture::new();
    f.spm("m", SubjectLanguage::Java, &[SpmKind::MisleadingVariableNames], 1, 2902, 10_000);
    f.spm("m", SubjectLanguage::Java, &[SpmKind::MisleadingComments], 1, 2563, 10_000);
    f.spm("m", SubjectLanguage::Java, &[SpmKind::DeadCode], 1, 2038, 10_000);
    f.spm("m", SubjectLanguage::Java, &[SpmKind::FunctionShuffle], 1, 17, 100);
    let retained = f.retained();
    let pop = Population::new(&f.scores, &retained);
    let table = spm_type_accuracy(&pop, 0);
    for (label, value) in [("M_v", 29.02), ("M_c", 25.63), ("M_d", 20.38)] {
        checks.push((format!("{label} accuracy"), number(&table, &["*", label, "*"], "accuracy_pct").unwrap_or(f64::NAN), value));
    }
    checks.push(("M_f failure".into(), number(&table, &["*", "M_f", "*"], "failure_rate_pct").unwrap_or(f64::NAN), 83.0));
    let ordered = {
        let acc = |l: &str| number(&table, &["*", l, "*"], "accuracy_pct").unwrap_or(f64::NAN);
        acc("M_v") > acc("M_c") && acc("M_c") > acc("M_d")
    };

    let worst = checks
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let rendered: Vec<String> = checks.iter().map(|(name, got, _)| format!("{name} {got:.2}")).collect();
    let detail = format!("{}; max deviation {worst:.4} pp", rendered.join(", "));
    if ordered && worst <= FIXTURE_TOLERANCE {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------------------

fn main() {
    // `cargo test --test acceptance -- 2 5` runs only the listed criteria.
    let only: BTreeSet<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |n: u8| only.is_empty() || only.contains(&n);
    let scratch = tempfile::tempdir().expect("temp dir");
    let (a, b, c) = (scratch.path().join("a"), scratch.path().join("b"), scratch.path().join("c"));
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();

    let reference: Result<Duration, String> = if [1, 3, 6, 8].into_iter().any(wanted) {
        let first = run_pipeline(&a);
        let second = if wanted(8) { run_pipeline(&b).map(|_| ()) } else { Ok(()) };
        first.and_then(|t| second.map(|_| t))
    } else {
        Err("not run".into())
    };
    let with_run = |f: &dyn Fn(Duration) -> Outcome| match &reference {
        Ok(t) => f(*t),
        Err(e) => Err(format!("demo pipeline failed: {e}")),
    };
    let criteria: [(u8, &str, &dyn Fn() -> Outcome); 9] = [
        (1, "line-tracking soundness", &|| with_run(&|t| oracle_soundness(&a, t))),
        (2, "semantic preservation", &semantic_preservation),
        (3, "fault effectiveness", &|| with_run(&|_| fault_effectiveness(&a))),
        (4, "composition set cardinality", &composition_cardinality),
        (5, "parser round-trip", &parser_round_trip),
        (6, "metric oracle equivalence", &|| with_run(&|_| metric_oracle(&a))),
        (7, "random-baseline sanity", &random_baseline),
        (8, "determinism & resumability", &|| with_run(&|_| determinism(&a, &b, &c))),
        (9, "paper-shape fixtures", &paper_shapes),
    ];
    for (n, name, check) in criteria {
        if wanted(n) {
            results.push((n, name, check()));
        }
    }

    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (n, name, outcome) in &results {
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        writeln!(out, "criterion {n} [{name}]: {status} - {detail}").unwrap();
    }
    if wanted(10) {
        writeln!(out, "criterion 10 [live directional check]: SKIPPED - manual runbook, needs a real provider").unwrap();
    }
    writeln!(out, "acceptance: {} passed, {failed} failed", results.len() - failed).unwrap();
    out.flush().unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
