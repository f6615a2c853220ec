//! Fault-localization prompts, model backends, and answer extraction.

mod answer;
mod backend;
mod content;
mod dispatch;
mod limiter;
mod prompt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fault_injector::{FaultKind, FaultyProgram};
use crate::hashing::content_hash;
use crate::source_model::{text, Quartile};
use crate::language::SubjectLanguage;
use crate::spm::{MutantProgram, SpmStep};

pub use answer::parse_answer;
pub use backend::Gateway;
pub use content::ModelContentProvider;
pub use dispatch::{dispatch, DispatchSummary};
pub use limiter::{ConcurrencyLimit, TokenBucket};
pub use prompt::{build_prompt, ANSWER_INSTRUCTION};

/// Request/response shape of a hosted API.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiStyle {
    /// `POST .../chat/completions` with a bearer token.
    OpenaiChat,
    /// `POST .../v1/messages` with an `x-api-key` header.
    AnthropicMessages,
    /// `POST .../models/{model}:generateContent` with an `x-goog-api-key` header.
    Gemini,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MockKind {
    /// Always answers with the ground-truth line.
    Oracle,
    /// Uniform over all lines of the program.
    UniformRandom { seed: u64 },
    /// Lands in the first quartile with probability `bias`, otherwise
    /// uniformly in the remaining three.
    FirstQuartileBiased { bias: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provider {
    RemoteApi {
        style: ApiStyle,
        /// May contain `{model}`, replaced by the provider-side model id.
        endpoint: String,
        /// Provider-side model id; defaults to the roster name.
        #[serde(default)]
        model: Option<String>,
    },
    /// An Ollama-compatible `/api/generate` server.
    LocalRuntime {
        host: String,
        port: u16,
        #[serde(default)]
        model: Option<String>,
    },
    Mock(MockKind),
}

fn default_max_output_tokens() -> u32 {
    1024
}
fn default_max_retries() -> u32 {
    5
}
fn default_backoff_ms() -> u64 {
    500
}
fn default_concurrency() -> usize {
    4
}

/// One model of the evaluation roster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub provider: Provider,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_output_tokens")]
    pub max_output_tokens: u32,
    /// Requests per minute; `None` means unlimited.
    #[serde(default)]
    pub requests_per_minute: Option<u32>,
    #[serde(default = "default_concurrency")]
    pub max_concurrent: usize,
    /// Environment variable holding the API key.
    #[serde(default)]
    pub credential_env: Option<String>,
    /// Prompts estimated above this many tokens are skipped.
    #[serde(default)]
    pub context_limit_tokens: Option<usize>,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff_ms")]
    pub backoff_base_ms: u64,
}

impl ModelSpec {
    pub fn mock(name: impl Into<String>, kind: MockKind) -> Self {
        ModelSpec {
            name: name.into(),
            provider: Provider::Mock(kind),
            temperature: 0.0,
            max_output_tokens: default_max_output_tokens(),
            requests_per_minute: None,
            max_concurrent: default_concurrency(),
            credential_env: None,
            context_limit_tokens: None,
            max_retries: 0,
            backoff_base_ms: 0,
        }
    }

    pub fn is_mock(&self) -> bool {
        matches!(self.provider, Provider::Mock(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot interpret model `{0}`; expected a roster name or mock:oracle, mock:random[:seed], mock:q1[:bias[:seed]]")]
pub struct UnknownModel(pub String);

impl FromStr for ModelSpec {
    type Err = UnknownModel;

    /// Parses the `mock:` shorthands. Real providers come from the config roster.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || UnknownModel(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        if parts.first() != Some(&"mock") {
            return Err(err());
        }
        let num = |i: usize, default: u64| -> Result<u64, UnknownModel> {
            parts.get(i).map_or(Ok(default), |p| p.parse().map_err(|_| err()))
        };
        let kind = match parts.get(1).copied() {
            Some("oracle") if parts.len() == 2 => MockKind::Oracle,
            Some("random") if parts.len() <= 3 => MockKind::UniformRandom { seed: num(2, 0)? },
            Some("q1") if parts.len() <= 4 => {
                let bias = parts.get(2).map_or(Ok(0.8), |p| p.parse::<f64>().map_err(|_| err()))?;
                if !(0.0..=1.0).contains(&bias) {
                    return Err(err());
                }
                MockKind::FirstQuartileBiased { bias, seed: num(3, 0)? }
            }
            _ => return Err(err()),
        };
        Ok(ModelSpec::mock(s, kind))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskPhase {
    Baseline,
    Spm,
}

impl fmt::Display for TaskPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskPhase::Baseline => "baseline",
            TaskPhase::Spm => "spm",
        })
    }
}

impl FromStr for TaskPhase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(TaskPhase::Baseline),
            "spm" => Ok(TaskPhase::Spm),
            other => Err(format!("unknown phase `{other}` (expected baseline or spm)")),
        }
    }
}

/// A single question put to a model: which line of this program is faulty?
///
/// `ground_truth_line` is a sidecar for scoring and the oracle mock; it is
/// never rendered into a prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultLocTask {
    pub task_id: String,
    pub phase: TaskPhase,
    pub subject_language: SubjectLanguage,
    pub source_text: String,
    pub spec_text: String,
    pub ground_truth_line: usize,
    pub seed_id: String,
    pub fault_id: String,
    pub mutant_id: Option<String>,
    pub fault_kind: FaultKind,
    /// Quartile of the fault within the seed program.
    pub fault_quartile: Quartile,
    /// Composition label of the mutation plan (Spm phase only).
    pub spm_label: Option<String>,
    /// Steps in application order with requested strengths (Spm phase only).
    #[serde(default)]
    pub spm_steps: Vec<SpmStep>,
}

impl FaultLocTask {
    pub fn baseline(faulty: &FaultyProgram, spec_text: &str) -> Self {
        let fault = &faulty.fault;
        let mut task = FaultLocTask {
            task_id: String::new(),
            phase: TaskPhase::Baseline,
            subject_language: faulty.language,
            source_text: faulty.source_text.clone(),
            spec_text: spec_text.to_string(),
            ground_truth_line: fault.fault_line,
            seed_id: fault.seed_id.clone(),
            fault_id: fault.fault_id.clone(),
            mutant_id: None,
            fault_kind: fault.kind,
            fault_quartile: fault.quartile,
            spm_label: None,
            spm_steps: Vec::new(),
        };
        task.task_id = task.compute_id();
        task
    }

    pub fn spm(faulty: &FaultyProgram, mutant: &MutantProgram, spec_text: &str) -> Self {
        let mut task = FaultLocTask::baseline(faulty, spec_text);
        task.phase = TaskPhase::Spm;
        task.source_text = mutant.source_text.clone();
        task.ground_truth_line = mutant.tracked_fault_line;
        task.mutant_id = Some(mutant.mutant_id.clone());
        task.spm_label = Some(mutant.label());
        task.spm_steps = mutant.plan.steps.clone();
        task.task_id = task.compute_id();
        task
    }

    fn compute_id(&self) -> String {
        content_hash(format!(
            "{}\0{}\0{}\0{}\0{}",
            self.phase,
            self.fault_id,
            self.mutant_id.as_deref().unwrap_or(""),
            self.spec_text,
            self.source_text
        ))
    }

    pub fn line_count(&self) -> usize {
        text::line_count(&self.source_text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerStatus {
    Answered,
    /// Not sent because the prompt exceeds the model's context limit.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelAnswer {
    pub task_id: String,
    pub model_name: String,
    pub raw_text: String,
    /// `None` means the response could not be parsed (scored incorrect).
    pub predicted_line: Option<usize>,
    pub latency_ms: u64,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub attempts: u32,
    pub status: AnswerStatus,
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("model `{model}` failed after {attempts} attempt(s): {message}")]
    ProviderError { model: String, attempts: u32, message: String },
    #[error("environment variable `{0}` with the API key is not set")]
    AuthMissing(String),
    #[error("prompt of ~{tokens} tokens exceeds the {limit}-token limit")]
    ContextOverflow { tokens: usize, limit: usize },
    #[error("invalid model configuration: {0}")]
    Config(String),
}

#[cfg(test)]
pub(crate) fn test_task(source: &str, ground_truth_line: usize) -> FaultLocTask {
    let mut task = FaultLocTask {
        task_id: String::new(),
        phase: TaskPhase::Baseline,
        subject_language: SubjectLanguage::Python,
        source_text: source.to_string(),
        spec_text: "return one".to_string(),
        ground_truth_line,
        seed_id: "seed".into(),
        fault_id: "fault".into(),
        mutant_id: None,
        fault_kind: FaultKind::OffByOne,
        fault_quartile: Quartile::Q1,
        spm_label: None,
        spm_steps: Vec::new(),
    };
    task.task_id = task.compute_id();
    task
}
