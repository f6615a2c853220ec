//! Semantic-preserving mutations with fault-line tracking.
//!
//! Every operator produces a batch of [`Edit`]s; the engine applies the
//! batch, re-parses the result, and composes the batch's [`LineLedger`] into
//! the mutant's cumulative ledger so the injected fault can always be found.

mod comments;
pub mod content;
mod dead_code;
mod rename;
mod shuffle;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use content::{ContentProvider, TemplateProvider};

use crate::fault_injector::FaultyProgram;
use crate::hashing::{content_hash, derive_seed, rng_for};
use crate::language::SubjectLanguage;
use crate::source_model::{
    self, apply_edits, text, Edit, EditError, LineLedger, ParseError, Quartile, SyntaxIndex,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpmKind {
    DeadCode,
    MisleadingComments,
    MisleadingVariableNames,
    FunctionShuffle,
}

impl SpmKind {
    pub const ALL: [SpmKind; 4] = [
        SpmKind::MisleadingComments,
        SpmKind::MisleadingVariableNames,
        SpmKind::DeadCode,
        SpmKind::FunctionShuffle,
    ];

    /// Short label used in plan names and reports.
    pub fn label(self) -> &'static str {
        match self {
            SpmKind::DeadCode => "M_d",
            SpmKind::MisleadingComments => "M_c",
            SpmKind::MisleadingVariableNames => "M_v",
            SpmKind::FunctionShuffle => "M_f",
        }
    }

    pub fn applies_to(self, language: SubjectLanguage) -> bool {
        self != SpmKind::FunctionShuffle || language == SubjectLanguage::Java
    }
}

impl fmt::Display for SpmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SpmKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        match key.as_str() {
            "md" | "d" | "deadcode" => Ok(SpmKind::DeadCode),
            "mc" | "c" | "misleadingcomments" | "comments" => Ok(SpmKind::MisleadingComments),
            "mv" | "v" | "misleadingvariablenames" | "names" | "rename" => Ok(SpmKind::MisleadingVariableNames),
            "mf" | "f" | "functionshuffle" | "shuffle" => Ok(SpmKind::FunctionShuffle),
            _ => Err(format!("unknown SPM kind `{s}`")),
        }
    }
}

pub const MIN_STRENGTH: u8 = 1;
pub const MAX_STRENGTH: u8 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpmStep {
    pub kind: SpmKind,
    pub strength: u8,
    pub quartile: Quartile,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentMode {
    Template,
    /// Content requested from the named model.
    ModelGenerated(String),
}

/// Steps in application order: `steps[0]` is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpmPlan {
    pub steps: Vec<SpmStep>,
    pub content_mode: ContentMode,
    pub rng_seed: u64,
}

impl SpmPlan {
    /// Composition label, outermost first: `[M_d, M_v, M_c]` reads `M_c∘M_v∘M_d`.
    pub fn label(&self) -> String {
        plan_label(self.steps.iter().map(|s| s.kind))
    }
}

pub fn plan_label(kinds: impl DoubleEndedIterator<Item = SpmKind>) -> String {
    kinds.rev().map(SpmKind::label).collect::<Vec<_>>().join("∘")
}

/// One executed step with the strength that could actually be realized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedStep {
    pub kind: SpmKind,
    pub strength: u8,
    pub effective_strength: u8,
    pub quartile: Quartile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rename {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantProgram {
    pub mutant_id: String,
    pub parent_fault_id: String,
    pub language: SubjectLanguage,
    pub plan: SpmPlan,
    pub applied: Vec<AppliedStep>,
    pub tracked_fault_line: usize,
    pub source_text: String,
    pub source_hash: String,
    /// Faulty-program line → mutant line.
    pub ledger: LineLedger,
    pub renames: Vec<Rename>,
}

impl MutantProgram {
    /// The unmutated faulty program viewed as an empty-plan mutant.
    pub fn root(faulty: &FaultyProgram) -> Self {
        let lines = text::line_count(&faulty.source_text);
        MutantProgram {
            mutant_id: faulty.fault.fault_id.clone(),
            parent_fault_id: faulty.fault.fault_id.clone(),
            language: faulty.language,
            plan: SpmPlan {
                steps: Vec::new(),
                content_mode: ContentMode::Template,
                rng_seed: 0,
            },
            applied: Vec::new(),
            tracked_fault_line: faulty.fault.fault_line,
            source_hash: content_hash(&faulty.source_text),
            source_text: faulty.source_text.clone(),
            ledger: LineLedger::identity(lines),
            renames: Vec::new(),
        }
    }

    pub fn label(&self) -> String {
        self.plan.label()
    }

    pub fn effective_strengths(&self) -> Vec<u8> {
        self.applied.iter().map(|a| a.effective_strength).collect()
    }

    /// Text of the line the fault is tracked to.
    pub fn fault_line_text(&self) -> &str {
        text::line_text(&self.source_text, self.tracked_fault_line).unwrap_or("")
    }
}

#[derive(Debug, Error)]
pub enum SpmError {
    #[error("{kind} does not apply to {language} programs")]
    InvalidForLanguage { kind: SpmKind, language: SubjectLanguage },
    #[error("strength {0} outside {MIN_STRENGTH}..={MAX_STRENGTH}")]
    StrengthOutOfRange(u8),
    #[error("no applicable {kind} target in {quartile}")]
    NoApplicableTarget { kind: SpmKind, quartile: Quartile },
    #[error("ran out of fresh names while renaming `{0}`")]
    RenameCollision(String),
    #[error("program does not parse: {0}")]
    Parse(ParseError),
    #[error("{kind} produced an unparseable program: {error}")]
    BrokenResult { kind: SpmKind, error: ParseError },
    #[error(transparent)]
    Edit(#[from] EditError),
    #[error("fault line lost after {0}")]
    FaultLost(SpmKind),
}

/// Everything an operator needs to plan one step.
pub(crate) struct StepContext<'a> {
    pub language: SubjectLanguage,
    pub source: &'a str,
    pub index: &'a SyntaxIndex,
    pub fault_line: usize,
    pub quartile: Quartile,
    pub strength: usize,
    pub rng: ChaCha8Rng,
    pub provider: &'a mut dyn ContentProvider,
}

impl StepContext<'_> {
    pub fn in_quartile(&self, line: usize) -> bool {
        self.quartile.contains(line, self.index.line_count)
    }
}

pub(crate) struct StepOutcome {
    pub edits: Vec<Edit>,
    pub effective: usize,
    pub renames: Vec<Rename>,
}

const PYTHON_RESERVED: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda",
    "nonlocal", "not", "or", "pass", "raise", "return", "try", "while", "with", "yield", "match", "case",
    "abs", "all", "any", "bin", "bool", "bytes", "callable", "chr", "dict", "dir", "divmod", "enumerate",
    "filter", "float", "format", "frozenset", "hash", "hex", "id", "input", "int", "isinstance", "issubclass",
    "iter", "len", "list", "map", "max", "min", "next", "object", "oct", "open", "ord", "pow", "print",
    "range", "repr", "reversed", "round", "set", "slice", "sorted", "str", "sum", "super", "tuple", "type",
    "zip", "self", "cls",
];

const JAVA_RESERVED: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null", "var",
    "record", "yield", "sealed", "permits", "String", "Object", "System", "Math", "Integer",
];

pub(crate) fn is_reserved(language: SubjectLanguage, name: &str) -> bool {
    match language {
        SubjectLanguage::Python => PYTHON_RESERVED.contains(&name) || (name.starts_with("__") && name.ends_with("__")),
        SubjectLanguage::Java => JAVA_RESERVED.contains(&name),
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c == '_' || c.is_ascii_alphabetic())
        && chars.all(|c| c == '_' || c.is_ascii_alphanumeric())
}

/// Names already claimed in the program or by earlier choices in this step.
pub(crate) struct NameBook {
    language: SubjectLanguage,
    taken: HashSet<String>,
}

impl NameBook {
    pub fn new(language: SubjectLanguage, index: &SyntaxIndex) -> Self {
        NameBook {
            language,
            taken: index.names_in_use.iter().cloned().collect(),
        }
    }

    pub fn available(&self, name: &str) -> bool {
        is_identifier(name) && !is_reserved(self.language, name) && !self.taken.contains(name)
    }

    pub fn claim(&mut self, name: &str) {
        self.taken.insert(name.to_string());
    }

    /// A free name from `pool` (styled for the language), chosen by `rng`;
    /// falls back to numbered variants of pool names.
    pub fn fresh(&mut self, pool: &[&str], rng: &mut ChaCha8Rng, allow_suffix: bool) -> Option<String> {
        use rand::seq::SliceRandom;
        let mut candidates: Vec<String> = pool
            .iter()
            .map(|p| content::styled(self.language, p))
            .filter(|n| self.available(n))
            .collect();
        candidates.sort();
        candidates.dedup();
        if let Some(name) = candidates.choose(rng).cloned() {
            self.claim(&name);
            return Some(name);
        }
        if !allow_suffix {
            return None;
        }
        for suffix in 2..1000 {
            let base = pool.choose(rng)?;
            let name = content::styled(self.language, &format!("{base}_{suffix}"));
            if self.available(&name) {
                self.claim(&name);
                return Some(name);
            }
        }
        None
    }
}

/// Applies one step of `kind` to `program`.
pub fn apply_spm(
    program: &MutantProgram,
    kind: SpmKind,
    strength: u8,
    quartile: Quartile,
    provider: &mut dyn ContentProvider,
    rng_seed: u64,
) -> Result<MutantProgram, SpmError> {
    let language = program.language;
    if !kind.applies_to(language) {
        return Err(SpmError::InvalidForLanguage { kind, language });
    }
    if !(MIN_STRENGTH..=MAX_STRENGTH).contains(&strength) {
        return Err(SpmError::StrengthOutOfRange(strength));
    }
    let index = source_model::parse(language, &program.source_text).map_err(SpmError::Parse)?;
    let ctx = StepContext {
        language,
        source: &program.source_text,
        index: &index,
        fault_line: program.tracked_fault_line,
        quartile,
        strength: strength as usize,
        rng: rng_for(rng_seed, &[kind.label()]),
        provider,
    };
    let outcome = match kind {
        SpmKind::MisleadingComments => comments::apply(ctx)?,
        SpmKind::MisleadingVariableNames => rename::apply(ctx)?,
        SpmKind::DeadCode => dead_code::apply(ctx)?,
        SpmKind::FunctionShuffle => shuffle::apply(ctx)?,
    };
    let (source_text, step_ledger) = apply_edits(&program.source_text, &outcome.edits)?;
    source_model::parse(language, &source_text).map_err(|error| SpmError::BrokenResult { kind, error })?;
    let tracked = step_ledger.map(program.tracked_fault_line).ok_or(SpmError::FaultLost(kind))?;
    let ledger = program.ledger.then(&step_ledger);

    let mut plan = program.plan.clone();
    plan.steps.push(SpmStep {
        kind,
        strength,
        quartile,
    });
    let mut applied = program.applied.clone();
    applied.push(AppliedStep {
        kind,
        strength,
        effective_strength: outcome.effective as u8,
        quartile,
    });
    let mut renames = program.renames.clone();
    renames.extend(outcome.renames);
    let source_hash = content_hash(&source_text);
    let mutant_id = content_hash(format!(
        "{}\0{}\0{:?}\0{}",
        program.parent_fault_id,
        plan.label(),
        plan.steps,
        source_hash
    ));
    Ok(MutantProgram {
        mutant_id,
        parent_fault_id: program.parent_fault_id.clone(),
        language,
        plan,
        applied,
        tracked_fault_line: tracked,
        source_text,
        source_hash,
        ledger,
        renames,
    })
}

/// Seed for the step at `position` of a plan whose base seed is `rng_seed`.
pub fn step_seed(rng_seed: u64, kind: SpmKind, position: usize) -> u64 {
    derive_seed(rng_seed, &[kind.label(), &position.to_string()])
}

/// Applies every step of `plan` in order.
pub fn apply_plan(
    faulty: &FaultyProgram,
    plan: &SpmPlan,
    provider: &mut dyn ContentProvider,
) -> Result<MutantProgram, SpmError> {
    let mut current = MutantProgram::root(faulty);
    current.plan.content_mode = plan.content_mode.clone();
    current.plan.rng_seed = plan.rng_seed;
    for (position, step) in plan.steps.iter().enumerate() {
        current = apply_spm(
            &current,
            step.kind,
            step.strength,
            step.quartile,
            provider,
            step_seed(plan.rng_seed, step.kind, position),
        )?;
    }
    Ok(current)
}

/// The application orders of the standard set, in report order.
pub fn standard_plans(language: SubjectLanguage) -> Vec<Vec<SpmKind>> {
    use SpmKind::*;
    let mut plans = vec![
        vec![MisleadingComments],
        vec![MisleadingVariableNames],
        vec![DeadCode],
    ];
    if FunctionShuffle.applies_to(language) {
        plans.push(vec![FunctionShuffle]);
    }
    plans.push(vec![MisleadingVariableNames, MisleadingComments]);
    plans.push(vec![DeadCode, MisleadingVariableNames, MisleadingComments]);
    plans
}

/// Builds a plan applying `kinds` in order, all at one strength and quartile.
pub fn uniform_plan(kinds: &[SpmKind], strength: u8, quartile: Quartile, content_mode: ContentMode, rng_seed: u64) -> SpmPlan {
    SpmPlan {
        steps: kinds
            .iter()
            .map(|&kind| SpmStep {
                kind,
                strength,
                quartile,
            })
            .collect(),
        content_mode,
        rng_seed,
    }
}

/// The single-operator mutants plus the two compositions. Each entry keeps
/// its own error so partial sets remain usable.
pub fn standard_mutant_set(
    faulty: &FaultyProgram,
    strength: u8,
    quartile: Quartile,
    content_mode: ContentMode,
    provider: &mut dyn ContentProvider,
    rng_seed: u64,
) -> Vec<(String, Result<MutantProgram, SpmError>)> {
    standard_plans(faulty.language)
        .into_iter()
        .map(|kinds| {
            let plan = uniform_plan(&kinds, strength, quartile, content_mode.clone(), rng_seed);
            (plan.label(), apply_plan(faulty, &plan, provider))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_read_outermost_first() {
        let plan = uniform_plan(
            &[SpmKind::DeadCode, SpmKind::MisleadingVariableNames, SpmKind::MisleadingComments],
            1,
            Quartile::Q1,
            ContentMode::Template,
            0,
        );
        assert_eq!(plan.label(), "M_c∘M_v∘M_d");
    }

    #[test]
    fn standard_set_sizes() {
        assert_eq!(standard_plans(SubjectLanguage::Java).len(), 6);
        assert_eq!(standard_plans(SubjectLanguage::Python).len(), 5);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("M_v".parse::<SpmKind>(), Ok(SpmKind::MisleadingVariableNames));
        assert_eq!("dead-code".parse::<SpmKind>(), Ok(SpmKind::DeadCode));
    }
}
