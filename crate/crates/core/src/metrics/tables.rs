use std::collections::{BTreeMap, BTreeSet};

use super::{group, pct, Axis, Cell, Field, MetricsError, Population, ScoreRecord, Table, ANY};
use crate::language::SubjectLanguage;
use crate::spm::SpmKind;

/// Patterns keeping the first `i` axes, for `i` from all down to none.
fn prefix_rollups(n: usize) -> Vec<Vec<bool>> {
    (0..=n).rev().map(|keep| (0..n).map(|i| i < keep).collect()).collect()
}

fn text(s: &str) -> Field {
    Field::Text(s.to_string())
}

/// Accuracy over retained baseline tasks, grouped by `axes` with
/// hierarchical `*` rollups (the last axis rolls up first).
pub fn baseline_accuracy(pop: &Population, axes: &[Axis], tolerance: usize) -> Table {
    let mut header: Vec<&'static str> = axes.iter().map(|a| a.column()).collect();
    header.extend([
        "correct",
        "incorrect",
        "unparsed",
        "total",
        "accuracy_pct",
        "correct_within_tolerance",
        "accuracy_within_tolerance_pct",
        "unparsed_rate_pct",
    ]);
    let cells = group(pop.baseline.iter().copied(), axes, &prefix_rollups(axes.len()), tolerance);
    let rows = cells
        .into_iter()
        .map(|(key, c)| {
            let mut row: Vec<Field> = key.iter().map(|k| text(k)).collect();
            row.extend([
                Field::Count(c.correct),
                Field::Count(c.incorrect()),
                Field::Count(c.unparsed),
                Field::Count(c.total),
                Field::Number(c.accuracy()),
                Field::Count(c.within_tolerance),
                Field::Number(pct(c.within_tolerance, c.total)),
                Field::Number(pct(c.unparsed, c.total)),
            ]);
            row
        })
        .collect();
    Table {
        name: "baseline_accuracy",
        header,
        rows,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessSummary {
    /// Failures over all gated mutation-phase tasks, pooled across models.
    pub micro_pct: Option<f64>,
    /// Mean of the per-model failure rates.
    pub macro_pct: Option<f64>,
    pub per_model: BTreeMap<String, Cell>,
}

/// Fraction of mutation-phase tasks failed, among tasks whose parent fault
/// the same model localized before mutation.
pub fn robustness_failure_rate(pop: &Population, tolerance: usize) -> (Table, RobustnessSummary) {
    let axes = [Axis::Model, Axis::Language];
    let cells = group(pop.spm.iter().copied(), &axes, &prefix_rollups(2), tolerance);
    let per_model: BTreeMap<String, Cell> = cells
        .iter()
        .filter(|(k, _)| k[0] != ANY && k[1] == ANY)
        .map(|(k, c)| (k[0].clone(), *c))
        .collect();
    let rates: Vec<f64> = per_model.values().filter_map(Cell::failure_rate).collect();
    let summary = RobustnessSummary {
        micro_pct: cells.get(&vec![ANY.to_string(), ANY.to_string()]).and_then(Cell::failure_rate),
        macro_pct: (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64),
        per_model,
    };
    let rows = cells
        .into_iter()
        .map(|(k, c)| {
            vec![
                text(&k[0]),
                text(&k[1]),
                Field::Count(c.incorrect()),
                Field::Count(c.unparsed),
                Field::Count(c.total),
                Field::Number(c.failure_rate()),
            ]
        })
        .collect();
    let table = Table {
        name: "robustness",
        header: vec!["model", "language", "failed", "unparsed", "total", "failure_rate_pct"],
        rows,
    };
    (table, summary)
}

/// Least-squares slope of `y` against `x`; `None` without two distinct `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if n < 2.0 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthCurve {
    pub points: BTreeMap<u8, Cell>,
    /// Change in accuracy (percentage points) per unit of strength.
    pub slope: f64,
}

fn curve_points(spm: &[&ScoreRecord], model: Option<&str>, kind: SpmKind, language: SubjectLanguage) -> BTreeMap<u8, Cell> {
    let mut points: BTreeMap<u8, Cell> = BTreeMap::new();
    for s in spm {
        if s.single_spm_kind() == Some(kind)
            && s.subject_language == language
            && model.is_none_or(|m| m == s.model_name)
        {
            points.entry(s.strength().expect("single step")).or_default().add(s, 0);
        }
    }
    points
}

fn curve_slope(points: &BTreeMap<u8, Cell>) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|(&x, c)| c.accuracy().map(|y| (f64::from(x), y)))
        .collect();
    ols_slope(&xy)
}

/// Accuracy per strength for single-operator mutants of `kind`, pooled over
/// all models when `model` is `None`.
pub fn strength_curve(
    spm: &[&ScoreRecord],
    model: Option<&str>,
    kind: SpmKind,
    language: SubjectLanguage,
) -> Result<StrengthCurve, MetricsError> {
    let points = curve_points(spm, model, kind, language);
    let slope = curve_slope(&points)
        .ok_or_else(|| MetricsError::InsufficientStrengths(format!("{}/{kind}/{language}", model.unwrap_or(ANY))))?;
    Ok(StrengthCurve { points, slope })
}

/// Every strength curve in long format, one row per strength. Curves with a
/// single populated strength have an empty slope.
pub fn strength_curves(pop: &Population) -> Table {
    let mut combos: BTreeSet<(String, SpmKind, SubjectLanguage)> = BTreeSet::new();
    for s in &pop.spm {
        if let Some(kind) = s.single_spm_kind() {
            combos.insert((s.model_name.clone(), kind, s.subject_language));
            combos.insert((ANY.to_string(), kind, s.subject_language));
        }
    }
    let mut rows = Vec::new();
    for (model, kind, language) in combos {
        let filter = (model != ANY).then_some(model.as_str());
        let points = curve_points(&pop.spm, filter, kind, language);
        let slope = curve_slope(&points);
        for (strength, c) in points {
            rows.push(vec![
                text(&model),
                text(kind.label()),
                text(language.code()),
                Field::Count(usize::from(strength)),
                Field::Count(c.correct),
                Field::Count(c.total),
                Field::Number(c.accuracy()),
                Field::Number(slope),
            ]);
        }
    }
    Table {
        name: "strength_curves",
        header: vec![
            "model",
            "spm_kind",
            "language",
            "strength",
            "correct",
            "total",
            "accuracy_pct",
            "slope_pct_per_step",
        ],
        rows,
    }
}

/// Accuracy by fault kind and fault quartile, per phase, with each cell's
/// share of all correct localizations across the four quartiles.
pub fn location_heatmap(pop: &Population, tolerance: usize) -> Table {
    let axes = [Axis::Model, Axis::Phase, Axis::FaultKind, Axis::FaultQuartile];
    let patterns = vec![
        vec![true, true, true, true],
        vec![true, true, false, true],
        vec![false, true, true, true],
        vec![false, true, false, true],
    ];
    let records = pop.baseline.iter().chain(pop.spm.iter()).copied();
    let cells = group(records, &axes, &patterns, tolerance);
    let mut correct_by_band: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for (k, c) in &cells {
        *correct_by_band.entry(k[..3].to_vec()).or_default() += c.correct;
    }
    let rows = cells
        .iter()
        .map(|(k, c)| {
            let mut row: Vec<Field> = k.iter().map(|v| text(v)).collect();
            row.extend([
                Field::Count(c.correct),
                Field::Count(c.total),
                Field::Number(c.accuracy()),
                Field::Number(pct(c.correct, correct_by_band[&k[..3]])),
            ]);
            row
        })
        .collect();
    Table {
        name: "location_heatmap",
        header: vec![
            "model",
            "phase",
            "fault_kind",
            "quartile",
            "correct",
            "total",
            "accuracy_pct",
            "share_of_correct_pct",
        ],
        rows,
    }
}

/// Accuracy per mutation plan (single operators and compositions).
pub fn spm_type_accuracy(pop: &Population, tolerance: usize) -> Table {
    let axes = [Axis::Model, Axis::SpmLabel, Axis::Language];
    let patterns = vec![
        vec![true, true, true],
        vec![true, true, false],
        vec![false, true, true],
        vec![false, true, false],
    ];
    let rows = group(pop.spm.iter().copied(), &axes, &patterns, tolerance)
        .into_iter()
        .map(|(k, c)| {
            let mut row: Vec<Field> = k.iter().map(|v| text(v)).collect();
            row.extend([
                Field::Count(c.correct),
                Field::Count(c.total),
                Field::Number(c.accuracy()),
                Field::Number(c.failure_rate()),
            ]);
            row
        })
        .collect();
    Table {
        name: "spm_type",
        header: vec!["model", "spm_label", "language", "correct", "total", "accuracy_pct", "failure_rate_pct"],
        rows,
    }
}

/// Baseline accuracy change from each older model to its newer version.
pub fn longitudinal(pop: &Population, pairs: &[(String, String)]) -> Result<Table, MetricsError> {
    let mut per_model: BTreeMap<&str, Cell> = BTreeMap::new();
    for s in &pop.baseline {
        per_model.entry(&s.model_name).or_default().add(s, 0);
    }
    let mut rows = Vec::new();
    for (older, newer) in pairs {
        let (Some(a), Some(b)) = (per_model.get(older.as_str()), per_model.get(newer.as_str())) else {
            return Err(MetricsError::UnknownModelPair(older.clone(), newer.clone()));
        };
        let delta = b.accuracy().zip(a.accuracy()).map(|(y, x)| y - x);
        rows.push(vec![
            text(older),
            text(newer),
            Field::Count(a.correct),
            Field::Count(a.total),
            Field::Number(a.accuracy()),
            Field::Count(b.correct),
            Field::Count(b.total),
            Field::Number(b.accuracy()),
            Field::Number(delta),
        ]);
    }
    Ok(Table {
        name: "longitudinal",
        header: vec![
            "older_model",
            "newer_model",
            "older_correct",
            "older_total",
            "older_accuracy_pct",
            "newer_correct",
            "newer_total",
            "newer_accuracy_pct",
            "delta_pct",
        ],
        rows,
    })
}
