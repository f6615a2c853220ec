//! Stage orchestration over a run directory.
//!
//! Stages run in a fixed order: ingest → inject → evaluate(baseline) →
//! filter → mutate → evaluate(spm) → report. Every stage reads its inputs
//! from the run store and only appends records that are not there yet, so
//! re-running a stage is a no-op and an interrupted stage resumes.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::corpus::{filter_seeds, load_corpus, CorpusError, SeedProgram};
use crate::demo::demo_corpus;
use crate::fault_injector::{generate_fault_tasks, FaultKind, FaultyProgram};
use crate::gateway::{dispatch, FaultLocTask, Gateway, GatewayError, ModelAnswer, ModelContentProvider, ModelSpec, TaskPhase};
use crate::hashing::{content_hash, derive_seed};
use crate::language::SubjectLanguage;
use crate::metrics::{emit_report, score, ReportInputs, ReportSummary, ScoreRecord};
use crate::runstore::{answer_key, RunManifest, RunStore, StoreError, Stream};
use crate::sandbox::Sandbox;
use crate::source_model::Quartile;
use crate::spm::{standard_mutant_set, ContentMode, ContentProvider, TemplateProvider, MAX_STRENGTH, MIN_STRENGTH};
use crate::underspec::{filter_underspecified, gate_for_model, AnswerIndex, FilterError, FilterVerdict};

fn default_seed() -> u64 {
    42
}
fn default_min_loc() -> usize {
    50
}
fn default_max_tokens() -> usize {
    100_000
}
fn default_true() -> bool {
    true
}
fn default_one() -> usize {
    1
}
fn default_timeout_ms() -> u64 {
    10_000
}
fn default_parallel() -> usize {
    4
}
fn all_kinds() -> Vec<FaultKind> {
    FaultKind::ALL.to_vec()
}
fn all_quartiles() -> Vec<Quartile> {
    Quartile::ALL.to_vec()
}
fn all_strengths() -> Vec<u8> {
    (MIN_STRENGTH..=MAX_STRENGTH).collect()
}
fn template() -> String {
    "template".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    /// Use the bundled 30-program demo corpus.
    #[serde(default)]
    pub demo: bool,
    /// JSON-lines seed files (`id`, `language`, `spec`, `code` per record).
    #[serde(default)]
    pub files: Vec<PathBuf>,
    #[serde(default = "default_min_loc")]
    pub min_loc: usize,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            demo: false,
            files: Vec::new(),
            min_loc: default_min_loc(),
            max_tokens: default_max_tokens(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectConfig {
    #[serde(default = "all_kinds")]
    pub kinds: Vec<FaultKind>,
    #[serde(default = "all_quartiles")]
    pub quartiles: Vec<Quartile>,
    /// Distinct faults per (seed, kind, quartile).
    #[serde(default = "default_one")]
    pub per_combination: usize,
    /// Run seeds and faulty programs to record whether each fault is killed.
    #[serde(default = "default_true")]
    pub check_kills: bool,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
}

impl Default for InjectConfig {
    fn default() -> Self {
        InjectConfig {
            kinds: all_kinds(),
            quartiles: all_quartiles(),
            per_combination: 1,
            check_kills: true,
            timeout_ms: default_timeout_ms(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutateConfig {
    #[serde(default = "all_strengths")]
    pub strengths: Vec<u8>,
    #[serde(default = "all_quartiles")]
    pub quartiles: Vec<Quartile>,
    /// Each fault gets every `grid_stride`-th (strength, quartile) cell,
    /// rotating with the fault's position so all cells stay covered.
    #[serde(default = "default_one")]
    pub grid_stride: usize,
    /// `template`, or the name of a model that writes comments, names and
    /// dead code.
    #[serde(default = "template")]
    pub content: String,
}

impl Default for MutateConfig {
    fn default() -> Self {
        MutateConfig {
            strengths: all_strengths(),
            quartiles: all_quartiles(),
            grid_stride: 1,
            content: template(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    /// Roster names or `mock:` shorthands.
    #[serde(default)]
    pub models: Vec<String>,
    #[serde(default = "default_parallel")]
    pub parallel: usize,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        EvaluateConfig {
            models: Vec::new(),
            parallel: default_parallel(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Panel models; empty means every evaluated model.
    #[serde(default)]
    pub panel: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    /// Secondary ±k-line accuracy column.
    #[serde(default)]
    pub tolerance: usize,
    /// (older, newer) model names for the longitudinal table.
    #[serde(default)]
    pub model_pairs: Vec<(String, String)>,
    /// Leave out faults whose execution showed no behaviour change.
    #[serde(default)]
    pub exclude_unkilled: bool,
}

/// Everything a run depends on. Loaded from TOML; CLI flags override fields
/// before the run starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub run_dir: Option<PathBuf>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub corpus: CorpusConfig,
    #[serde(default)]
    pub inject: InjectConfig,
    #[serde(default)]
    pub mutate: MutateConfig,
    #[serde(default)]
    pub evaluate: EvaluateConfig,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub report: ReportConfig,
    /// Model roster with provider profiles.
    #[serde(default)]
    pub models: Vec<ModelSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run_dir: None,
            seed: default_seed(),
            corpus: CorpusConfig::default(),
            inject: InjectConfig::default(),
            mutate: MutateConfig::default(),
            evaluate: EvaluateConfig::default(),
            filter: FilterConfig::default(),
            report: ReportConfig::default(),
            models: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Rejects configurations no stage could run with.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if !self.corpus.demo && self.corpus.files.is_empty() {
            return bad("corpus: set `demo = true` or list seed `files`".into());
        }
        if self.inject.kinds.is_empty() || self.inject.quartiles.is_empty() || self.inject.per_combination == 0 {
            return bad("inject: kinds, quartiles and per_combination must be non-empty".into());
        }
        if let Some(s) = self.mutate.strengths.iter().find(|s| !(MIN_STRENGTH..=MAX_STRENGTH).contains(*s)) {
            return bad(format!("mutate: strength {s} outside {MIN_STRENGTH}..={MAX_STRENGTH}"));
        }
        if self.mutate.strengths.is_empty() || self.mutate.quartiles.is_empty() || self.mutate.grid_stride == 0 {
            return bad("mutate: strengths, quartiles and grid_stride must be non-empty".into());
        }
        if self.evaluate.parallel == 0 {
            return bad("evaluate: parallel must be at least 1".into());
        }
        let mut names = HashSet::new();
        for m in &self.models {
            if !names.insert(&m.name) {
                return bad(format!("models: `{}` is listed twice", m.name));
            }
        }
        for name in self.evaluate.models.iter().chain(&self.filter.panel) {
            self.model(name)?;
        }
        if let Some(unknown) = self.filter.panel.iter().find(|p| !self.evaluate.models.contains(p)) {
            return bad(format!("filter: panel model `{unknown}` is not evaluated"));
        }
        if self.mutate.content != "template" {
            self.model(&self.mutate.content)?;
        }
        Ok(())
    }

    /// Resolves a model name against the roster, then the mock shorthands.
    pub fn model(&self, name: &str) -> Result<ModelSpec, PipelineError> {
        if let Some(spec) = self.models.iter().find(|m| m.name == name) {
            return Ok(spec.clone());
        }
        name.parse().map_err(|e: crate::gateway::UnknownModel| PipelineError::Config(e.to_string()))
    }

    pub fn panel(&self) -> Vec<String> {
        if self.filter.panel.is_empty() {
            self.evaluate.models.clone()
        } else {
            self.filter.panel.clone()
        }
    }

    fn content_mode(&self) -> ContentMode {
        if self.mutate.content == "template" {
            ContentMode::Template
        } else {
            ContentMode::ModelGenerated(self.mutate.content.clone())
        }
    }

    /// The configuration as recorded in the manifest. Settings that cannot
    /// change results (run directory, parallelism) are left out so they may
    /// differ between invocations of one run.
    pub fn fingerprint(&self) -> Value {
        let mut value = serde_json::to_value(self).expect("config serializes");
        value.as_object_mut().expect("object").remove("run_dir");
        value["evaluate"].as_object_mut().expect("object").remove("parallel");
        value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Inject,
    Evaluate(TaskPhase),
    Filter,
    Mutate,
    Report,
}

impl Stage {
    /// Process exit code for a failure in this stage.
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Ingest => 10,
            Stage::Inject => 11,
            Stage::Evaluate(TaskPhase::Baseline) => 12,
            Stage::Filter => 13,
            Stage::Mutate => 14,
            Stage::Evaluate(TaskPhase::Spm) => 15,
            Stage::Report => 16,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Ingest => f.write_str("ingest"),
            Stage::Inject => f.write_str("inject"),
            Stage::Evaluate(phase) => write!(f, "evaluate({phase})"),
            Stage::Filter => f.write_str("filter"),
            Stage::Mutate => f.write_str("mutate"),
            Stage::Report => f.write_str("report"),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("required stage output `{0}` is missing; run the earlier stage first")]
    DependencyMissing(&'static str),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("report i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// A failure tagged with the stage it happened in.
#[derive(Debug, Error)]
#[error("{stage} failed: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: PipelineError,
}

impl StageError {
    pub fn exit_code(&self) -> i32 {
        match self.source {
            PipelineError::Config(_) => 2,
            _ => self.stage.exit_code(),
        }
    }
}

/// Per-stage outcome counts, for logs and the CLI.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub new_records: usize,
    pub skipped: usize,
    pub failed: usize,
}

fn corpus_hash(seeds: &[SeedProgram]) -> String {
    let mut joined = String::new();
    for s in seeds {
        joined.push_str(&s.seed_id);
        joined.push('\0');
        joined.push_str(&content_hash(&s.source_text));
        joined.push('\n');
    }
    content_hash(joined)
}

fn load_seeds(config: &RunConfig) -> Result<Vec<SeedProgram>, PipelineError> {
    let mut seeds = if config.corpus.demo { demo_corpus() } else { Vec::new() };
    for path in &config.corpus.files {
        for language in SubjectLanguage::ALL {
            let loaded = load_corpus(path, language)?;
            seeds.extend(loaded.seeds);
        }
    }
    let (kept, rejected) = filter_seeds(seeds, config.corpus.min_loc, config.corpus.max_tokens);
    for r in &rejected {
        log::info!("seed {} rejected: {:?}", r.seed.seed_id, r.reason);
    }
    Ok(kept)
}

/// Opens (or creates) the run directory for `config`.
pub fn open_run(dir: &Path, config: &RunConfig) -> Result<RunStore, PipelineError> {
    config.validate()?;
    let seeds = load_seeds(config)?;
    let manifest = RunManifest::new(config.fingerprint(), config.seed, corpus_hash(&seeds));
    Ok(RunStore::open(dir, manifest)?)
}

pub fn ingest(store: &mut RunStore, config: &RunConfig) -> Result<StageReport, PipelineError> {
    let mut report = StageReport::default();
    for seed in load_seeds(config)? {
        if store.append_new(Stream::Seeds, &seed)? {
            report.new_records += 1;
        } else {
            report.skipped += 1;
        }
    }
    store.sync()?;
    Ok(report)
}

/// Runs every seed once and every faulty program once; a fault is killed
/// when its observable behaviour differs from the seed's.
fn check_kills(seeds: &[SeedProgram], faults: &mut [FaultyProgram], timeout: Duration) {
    let sandbox = Sandbox::detect(timeout);
    let originals: HashMap<&str, Option<_>> = seeds
        .par_iter()
        .map(|s| {
            let run = sandbox
                .can_run(s.subject_language)
                .then(|| sandbox.run(s.subject_language, &s.source_text).ok())
                .flatten()
                .filter(|r| !r.timed_out);
            (s.seed_id.as_str(), run)
        })
        .collect();
    faults.par_iter_mut().for_each(|f| {
        let Some(Some(original)) = originals.get(f.fault.seed_id.as_str()) else {
            return;
        };
        f.fault.killed = match sandbox.run(f.language, &f.source_text) {
            Ok(run) => Some(!run.same_behaviour(original)),
            // Compile failures and crashes of the harness itself say nothing
            // about the fault.
            Err(e) => {
                log::warn!("fault {}: {e}", f.fault.fault_id);
                None
            }
        };
    });
}

pub fn inject(store: &mut RunStore, config: &RunConfig) -> Result<StageReport, PipelineError> {
    let seeds: Vec<SeedProgram> = store.read(Stream::Seeds)?;
    if seeds.is_empty() {
        return Err(PipelineError::DependencyMissing("seeds"));
    }
    let specs: HashMap<&str, &str> = seeds.iter().map(|s| (s.seed_id.as_str(), s.spec_text.as_str())).collect();
    let c = &config.inject;
    let mut faults: Vec<FaultyProgram> = generate_fault_tasks(&seeds, &c.kinds, &c.quartiles, c.per_combination, config.seed)
        .into_iter()
        .filter(|f| !store.contains(Stream::Faults, f.fault_id()))
        .collect();
    if c.check_kills {
        check_kills(&seeds, &mut faults, Duration::from_millis(c.timeout_ms));
    }
    let mut report = StageReport::default();
    for fault in &faults {
        store.append(Stream::Faults, fault)?;
        report.new_records += 1;
    }
    // Baseline tasks for every stored fault, including faults from an
    // interrupted earlier attempt.
    let all_faults: Vec<FaultyProgram> = store.read(Stream::Faults)?;
    for fault in &all_faults {
        let task = FaultLocTask::baseline(fault, specs[fault.fault.seed_id.as_str()]);
        store.append_new(Stream::Tasks, &task)?;
    }
    store.sync()?;
    Ok(report)
}

fn tasks_of(store: &RunStore, phase: TaskPhase) -> Result<Vec<FaultLocTask>, PipelineError> {
    Ok(store
        .read::<FaultLocTask>(Stream::Tasks)?
        .into_iter()
        .filter(|t| t.phase == phase)
        .collect())
}

fn retained_tasks(store: &RunStore) -> Result<Vec<FaultLocTask>, PipelineError> {
    let verdicts: Vec<FilterVerdict> = store.read(Stream::Verdicts)?;
    if verdicts.is_empty() {
        return Err(PipelineError::DependencyMissing("verdicts"));
    }
    let kept: HashSet<String> = verdicts.into_iter().filter(|v| v.retained).map(|v| v.fault_task_id).collect();
    Ok(tasks_of(store, TaskPhase::Baseline)?
        .into_iter()
        .filter(|t| kept.contains(&t.task_id))
        .collect())
}

/// Fault ids whose mutation-phase tasks `model` should answer.
fn eligible_faults(store: &RunStore, model: &str, answers: &[ModelAnswer]) -> Result<HashSet<String>, PipelineError> {
    let retained = retained_tasks(store)?;
    let index = AnswerIndex::new(answers);
    Ok(gate_for_model(&retained, model, &index)?
        .into_iter()
        .map(|t| t.fault_id)
        .collect())
}

pub fn evaluate(
    store: &mut RunStore,
    config: &RunConfig,
    phase: TaskPhase,
    parallel: usize,
) -> Result<StageReport, PipelineError> {
    let tasks = tasks_of(store, phase)?;
    if tasks.is_empty() {
        return Err(PipelineError::DependencyMissing(match phase {
            TaskPhase::Baseline => "tasks",
            TaskPhase::Spm => "mutants",
        }));
    }
    let by_id: HashMap<&str, &FaultLocTask> = tasks.iter().map(|t| (t.task_id.as_str(), t)).collect();

    // Answers stored just before a crash may still lack their score.
    let stored: Vec<ModelAnswer> = store.read(Stream::Answers)?;
    for answer in &stored {
        if let Some(task) = by_id.get(answer.task_id.as_str()) {
            if !store.contains(Stream::Scores, &answer_key(&answer.task_id, &answer.model_name)) {
                store.append(Stream::Scores, &score(task, answer))?;
            }
        }
    }

    let mut report = StageReport::default();
    for name in &config.evaluate.models {
        let gateway = Gateway::connect(config.model(name)?)?;
        let eligible = match phase {
            TaskPhase::Baseline => None,
            TaskPhase::Spm => Some(eligible_faults(store, name, &stored)?),
        };
        let outstanding: Vec<FaultLocTask> = tasks
            .iter()
            .filter(|t| eligible.as_ref().is_none_or(|e| e.contains(&t.fault_id)))
            .filter(|t| !store.contains(Stream::Answers, &answer_key(&t.task_id, name)))
            .cloned()
            .collect();
        report.skipped += tasks.len() - outstanding.len();
        log::info!("{name}: {} {phase} task(s) outstanding", outstanding.len());
        let summary = dispatch(&gateway, &outstanding, parallel, |answer| -> Result<(), PipelineError> {
            let task = by_id[answer.task_id.as_str()];
            store.append(Stream::Answers, &answer)?;
            // A torn write can leave a score whose answer was lost.
            store.append_new(Stream::Scores, &score(task, &answer))?;
            Ok(())
        })?;
        report.new_records += summary.answered + summary.skipped;
        report.failed += summary.failed;
        store.sync()?;
    }
    Ok(report)
}

pub fn filter(store: &mut RunStore, config: &RunConfig) -> Result<StageReport, PipelineError> {
    let tasks = tasks_of(store, TaskPhase::Baseline)?;
    let answers: Vec<ModelAnswer> = store.read(Stream::Answers)?;
    if answers.is_empty() {
        return Err(PipelineError::DependencyMissing("answers"));
    }
    let index = AnswerIndex::new(&answers);
    let outcome = filter_underspecified(&tasks, &config.panel(), &index)?;
    let mut report = StageReport::default();
    for verdict in &outcome.verdicts {
        if store.append_new(Stream::Verdicts, verdict)? {
            report.new_records += 1;
        } else {
            report.skipped += 1;
        }
    }
    log::info!("filter: {} retained, {} excluded", outcome.retained.len(), outcome.excluded.len());
    store.sync()?;
    Ok(report)
}

/// The (strength, quartile) cells assigned to the fault at `position`.
pub fn grid_cells(config: &MutateConfig, position: usize) -> Vec<(u8, Quartile)> {
    let grid: Vec<(u8, Quartile)> = config
        .strengths
        .iter()
        .flat_map(|&s| config.quartiles.iter().map(move |&q| (s, q)))
        .collect();
    let stride = config.grid_stride.min(grid.len()).max(1);
    grid.into_iter()
        .enumerate()
        .filter(|(i, _)| (i + position) % stride == 0)
        .map(|(_, cell)| cell)
        .collect()
}

fn mutate_fault(
    fault: &FaultyProgram,
    spec_text: &str,
    position: usize,
    config: &RunConfig,
    provider: &mut dyn ContentProvider,
) -> (Vec<(crate::spm::MutantProgram, FaultLocTask)>, usize) {
    let mut made = Vec::new();
    let mut failed = 0;
    for (strength, quartile) in grid_cells(&config.mutate, position) {
        let seed = derive_seed(config.seed, &["mutate", fault.fault_id(), &strength.to_string(), &quartile.to_string()]);
        for (label, result) in standard_mutant_set(fault, strength, quartile, config.content_mode(), provider, seed) {
            match result {
                Ok(mutant) => {
                    let task = FaultLocTask::spm(fault, &mutant, spec_text);
                    made.push((mutant, task));
                }
                Err(e) => {
                    log::debug!("fault {} {label} s={strength} {quartile}: {e}", fault.fault_id());
                    failed += 1;
                }
            }
        }
    }
    (made, failed)
}

pub fn mutate(store: &mut RunStore, config: &RunConfig) -> Result<StageReport, PipelineError> {
    let retained = retained_tasks(store)?;
    let answers: Vec<ModelAnswer> = store.read(Stream::Answers)?;
    let index = AnswerIndex::new(&answers);
    let mut eligible: BTreeSet<String> = BTreeSet::new();
    for model in &config.evaluate.models {
        eligible.extend(gate_for_model(&retained, model, &index)?.into_iter().map(|t| t.fault_id));
    }
    let seeds: Vec<SeedProgram> = store.read(Stream::Seeds)?;
    let specs: HashMap<&str, &str> = seeds.iter().map(|s| (s.seed_id.as_str(), s.spec_text.as_str())).collect();
    let faults: Vec<FaultyProgram> = store
        .read::<FaultyProgram>(Stream::Faults)?
        .into_iter()
        .filter(|f| eligible.contains(f.fault_id()))
        .collect();

    let results: Vec<(Vec<_>, usize)> = match config.content_mode() {
        ContentMode::Template => faults
            .par_iter()
            .enumerate()
            .map(|(i, f)| mutate_fault(f, specs[f.fault.seed_id.as_str()], i, config, &mut TemplateProvider))
            .collect(),
        ContentMode::ModelGenerated(name) => {
            let gateway = Gateway::connect(config.model(&name)?)?;
            let mut provider = ModelContentProvider::new(&gateway);
            faults
                .iter()
                .enumerate()
                .map(|(i, f)| mutate_fault(f, specs[f.fault.seed_id.as_str()], i, config, &mut provider))
                .collect()
        }
    };
    let mut report = StageReport::default();
    for (made, failed) in results {
        report.failed += failed;
        for (mutant, task) in made {
            if store.append_new(Stream::Mutants, &mutant)? {
                report.new_records += 1;
            } else {
                report.skipped += 1;
            }
            store.append_new(Stream::Tasks, &task)?;
        }
    }
    store.sync()?;
    Ok(report)
}

pub fn report(store: &mut RunStore, config: &RunConfig) -> Result<ReportSummary, PipelineError> {
    let scores: Vec<ScoreRecord> = store.read(Stream::Scores)?;
    if scores.is_empty() {
        return Err(PipelineError::DependencyMissing("scores"));
    }
    let verdicts: Vec<FilterVerdict> = store.read(Stream::Verdicts)?;
    let mut retained: HashSet<String> = verdicts.into_iter().filter(|v| v.retained).map(|v| v.fault_task_id).collect();
    if config.report.exclude_unkilled {
        let unkilled: HashSet<String> = store
            .read::<FaultyProgram>(Stream::Faults)?
            .into_iter()
            .filter(|f| f.fault.killed == Some(false))
            .map(|f| f.fault.fault_id)
            .collect();
        for task in tasks_of(store, TaskPhase::Baseline)? {
            if unkilled.contains(&task.fault_id) {
                retained.remove(&task.task_id);
            }
        }
    }
    let inputs = ReportInputs {
        scores: &scores,
        retained: &retained,
        tolerance: config.report.tolerance,
        model_pairs: &config.report.model_pairs,
    };
    Ok(emit_report(&store.report_dir(), &inputs)?)
}

/// Runs every stage in order.
pub fn run_pipeline(store: &mut RunStore, config: &RunConfig, parallel: usize) -> Result<ReportSummary, StageError> {
    let at = |stage: Stage| move |source: PipelineError| StageError { stage, source };
    let log_stage = |stage: Stage, r: &StageReport| {
        log::info!("{stage}: {} new, {} already present, {} failed", r.new_records, r.skipped, r.failed)
    };
    let r = ingest(store, config).map_err(at(Stage::Ingest))?;
    log_stage(Stage::Ingest, &r);
    let r = inject(store, config).map_err(at(Stage::Inject))?;
    log_stage(Stage::Inject, &r);
    let stage = Stage::Evaluate(TaskPhase::Baseline);
    let r = evaluate(store, config, TaskPhase::Baseline, parallel).map_err(at(stage))?;
    log_stage(stage, &r);
    let r = filter(store, config).map_err(at(Stage::Filter))?;
    log_stage(Stage::Filter, &r);
    let r = mutate(store, config).map_err(at(Stage::Mutate))?;
    log_stage(Stage::Mutate, &r);
    let stage = Stage::Evaluate(TaskPhase::Spm);
    match evaluate(store, config, TaskPhase::Spm, parallel) {
        Ok(r) => log_stage(stage, &r),
        // No fault survived filtering: the report covers the baseline only.
        Err(PipelineError::DependencyMissing("mutants")) => log::warn!("no mutation-phase tasks to evaluate"),
        Err(e) => return Err(at(stage)(e)),
    }
    report(store, config).map_err(at(Stage::Report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let config = RunConfig::from_toml(
            r#"
            seed = 7
            [corpus]
            demo = true
            [evaluate]
            models = ["mock:oracle"]
            "#,
        )
        .unwrap();
        assert_eq!(config.mutate.strengths, (1..=8).collect::<Vec<u8>>());
        assert_eq!(config.panel(), vec!["mock:oracle".to_string()]);
        config.validate().unwrap();

        let mut bad = config.clone();
        bad.evaluate.models.push("gpt-unknown".into());
        assert!(matches!(bad.validate(), Err(PipelineError::Config(_))));
        assert!(RunConfig::from_toml("colour = 1").is_err());
    }

    #[test]
    fn fingerprint_ignores_run_dir_and_parallelism() {
        let mut a = RunConfig::default();
        let mut b = RunConfig::default();
        a.run_dir = Some("x".into());
        b.evaluate.parallel = 16;
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.seed = 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn grid_rotation_covers_every_cell() {
        let config = MutateConfig {
            grid_stride: 4,
            ..MutateConfig::default()
        };
        let mut seen = HashSet::new();
        for position in 0..4 {
            let cells = grid_cells(&config, position);
            assert_eq!(cells.len(), 8);
            seen.extend(cells);
        }
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn mutate_before_filter_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig::default();
        config.corpus.demo = true;
        config.evaluate.models = vec!["mock:oracle".into()];
        let mut store = open_run(dir.path(), &config).unwrap();
        match mutate(&mut store, &config) {
            Err(PipelineError::DependencyMissing(what)) => assert_eq!(what, "verdicts"),
            other => panic!("{other:?}"),
        }
    }
}
