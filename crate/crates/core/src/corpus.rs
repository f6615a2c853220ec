//! Seed programs: loading from line-delimited JSON and size filtering.

use std::fs;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::language::SubjectLanguage;
use crate::source_model;

/// A subject program together with its natural-language specification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProgram {
    pub seed_id: String,
    pub subject_language: SubjectLanguage,
    pub spec_text: String,
    pub source_text: String,
    pub loc: usize,
    pub token_estimate: usize,
}

impl SeedProgram {
    /// Builds a seed, computing the derived size fields.
    pub fn new(seed_id: impl Into<String>, language: SubjectLanguage, spec: impl Into<String>, code: impl Into<String>) -> Self {
        let source_text = code.into();
        SeedProgram {
            seed_id: seed_id.into(),
            subject_language: language,
            spec_text: spec.into(),
            loc: count_loc(&source_text),
            token_estimate: estimate_tokens(&source_text),
            source_text,
        }
    }
}

/// Lines containing at least one non-whitespace character.
pub fn count_loc(source: &str) -> usize {
    source.lines().filter(|l| !l.trim().is_empty()).count()
}

/// Provider-agnostic prompt-size proxy: one token per four characters, rounded up.
pub fn estimate_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record {index}: {reason}")]
    MalformedRecord { index: usize, reason: String },
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    language: Option<String>,
    spec: Option<String>,
    code: Option<String>,
}

/// A record that was skipped because its program did not parse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub index: usize,
    pub seed_id: String,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub seeds: Vec<SeedProgram>,
    pub skipped: Vec<SkippedRecord>,
}

/// Loads every record of `language` from a line-delimited seed file.
///
/// Records of the other language are ignored, which lets one file hold a
/// mixed corpus. Unparseable programs are skipped and reported in
/// [`LoadedCorpus::skipped`].
pub fn load_corpus(path: &Path, language: SubjectLanguage) -> Result<LoadedCorpus, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text, Some(language))
}

/// Parses seed records from text. `language = None` accepts both languages.
pub fn parse_corpus(text: &str, language: Option<SubjectLanguage>) -> Result<LoadedCorpus, CorpusError> {
    let mut out = LoadedCorpus::default();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| CorpusError::MalformedRecord { index, reason };
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        let field = |value: Option<String>, name: &str| -> Result<String, CorpusError> {
            match value {
                None => Err(malformed(format!("missing field `{name}`"))),
                Some(v) if v.trim().is_empty() => Err(malformed(format!("empty field `{name}`"))),
                Some(v) => Ok(v),
            }
        };
        let id = field(raw.id, "id")?;
        let lang: SubjectLanguage = field(raw.language, "language")?
            .parse()
            .map_err(|e: String| malformed(e))?;
        let spec = field(raw.spec, "spec")?;
        let code = field(raw.code, "code")?;
        if language.is_some_and(|l| l != lang) {
            continue;
        }
        if let Err(e) = source_model::parse(lang, &code) {
            warn!("skipping seed {id} (record {index}): {e}");
            out.skipped.push(SkippedRecord {
                index,
                seed_id: id,
                error: e.to_string(),
            });
            continue;
        }
        out.seeds.push(SeedProgram::new(id, lang, spec, code));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    TooSmall,
    TooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejected {
    pub seed: SeedProgram,
    pub reason: RejectReason,
}

/// Splits seeds into those within `[min_loc, ∞)` lines and `[0, max_tokens]`
/// tokens, and the rest with a reason each.
pub fn filter_seeds(seeds: Vec<SeedProgram>, min_loc: usize, max_tokens: usize) -> (Vec<SeedProgram>, Vec<Rejected>) {
    let mut retained = Vec::new();
    let mut rejected = Vec::new();
    for seed in seeds {
        if seed.loc < min_loc {
            rejected.push(Rejected {
                seed,
                reason: RejectReason::TooSmall,
            });
        } else if seed.token_estimate > max_tokens {
            rejected.push(Rejected {
                seed,
                reason: RejectReason::TooLarge,
            });
        } else {
            retained.push(seed);
        }
    }
    (retained, rejected)
}
