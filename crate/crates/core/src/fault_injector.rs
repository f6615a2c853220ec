//! Single-line fault injection with recorded ground truth.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use log::info;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::SeedProgram;
use crate::hashing::{content_hash, derive_seed, rng_for};
use crate::language::SubjectLanguage;
use crate::source_model::{
    self, apply_edits, code_part, text, Edit, EditError, InsertionPoint, LoopBound, LoopSite, OperatorSite,
    ParseError, Quartile, ScopeKind, SyntaxIndex,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaultKind {
    OffByOne,
    MisplacedReturn,
    IncorrectBooleanLogic,
    OperatorSwap,
}

impl FaultKind {
    pub const ALL: [FaultKind; 4] = [
        FaultKind::OffByOne,
        FaultKind::MisplacedReturn,
        FaultKind::IncorrectBooleanLogic,
        FaultKind::OperatorSwap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FaultKind::OffByOne => "OffByOne",
            FaultKind::MisplacedReturn => "MisplacedReturn",
            FaultKind::IncorrectBooleanLogic => "IncorrectBooleanLogic",
            FaultKind::OperatorSwap => "OperatorSwap",
        }
    }
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FaultKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        match key.as_str() {
            "offbyone" | "obo" => Ok(FaultKind::OffByOne),
            "misplacedreturn" | "return" => Ok(FaultKind::MisplacedReturn),
            "incorrectbooleanlogic" | "boolean" | "bool" => Ok(FaultKind::IncorrectBooleanLogic),
            "operatorswap" | "operator" | "arith" => Ok(FaultKind::OperatorSwap),
            _ => Err(format!("unknown fault kind `{s}`")),
        }
    }
}

/// A location where one fault of a given kind can be injected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaultSite {
    Loop(LoopSite),
    Operator { kind: FaultKind, site: OperatorSite },
    Return(InsertionPoint),
}

impl FaultSite {
    /// Line (in the unmodified program) the fault is anchored to.
    pub fn line(&self) -> usize {
        match self {
            FaultSite::Loop(l) => l.line,
            FaultSite::Operator { site, .. } => site.line,
            FaultSite::Return(p) => p.line,
        }
    }

    pub fn kind(&self) -> FaultKind {
        match self {
            FaultSite::Loop(_) => FaultKind::OffByOne,
            FaultSite::Operator { kind, .. } => *kind,
            FaultSite::Return(_) => FaultKind::MisplacedReturn,
        }
    }
}

/// Ground truth for one injected fault.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectedFault {
    pub fault_id: String,
    pub seed_id: String,
    pub kind: FaultKind,
    /// Line of the fault in the faulty program.
    pub fault_line: usize,
    /// Line in the seed program that the edit touched (or preceded).
    pub original_line: usize,
    /// Quartile of `original_line` within the seed program.
    pub quartile: Quartile,
    pub before_snippet: String,
    pub after_snippet: String,
    pub rng_seed: u64,
    /// Whether the fault changed observable behaviour on the seed's own
    /// driver; `None` when the program could not be executed.
    pub killed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultyProgram {
    pub fault: InjectedFault,
    pub language: SubjectLanguage,
    pub source_text: String,
}

impl FaultyProgram {
    pub fn fault_id(&self) -> &str {
        &self.fault.fault_id
    }
}

#[derive(Debug, Error)]
pub enum FaultError {
    #[error("no applicable {kind} site in {quartile}")]
    NoApplicableSite { kind: FaultKind, quartile: Quartile },
    #[error("seed does not parse: {0}")]
    Parse(#[from] ParseError),
    #[error("injected program no longer parses: {0}")]
    BrokenResult(ParseError),
    #[error(transparent)]
    Edit(#[from] EditError),
}

/// All candidate sites of `kind` in the indexed program.
pub fn discover_fault_sites(index: &SyntaxIndex, kind: FaultKind) -> Vec<FaultSite> {
    match kind {
        FaultKind::OffByOne => index.loop_sites.iter().cloned().map(FaultSite::Loop).collect(),
        FaultKind::MisplacedReturn => index
            .statement_boundaries
            .iter()
            .filter(|p| p.scope == ScopeKind::Function && p.return_statement.is_some())
            .cloned()
            .map(FaultSite::Return)
            .collect(),
        FaultKind::IncorrectBooleanLogic => index
            .boolean_op_sites
            .iter()
            .cloned()
            .map(|site| FaultSite::Operator { kind, site })
            .collect(),
        FaultKind::OperatorSwap => index
            .arith_op_sites
            .iter()
            .cloned()
            .map(|site| FaultSite::Operator { kind, site })
            .collect(),
    }
}

/// Replacement token for a boolean/relational operator.
pub fn swap_boolean(token: &str) -> Option<&'static str> {
    Some(match token {
        "and" => "or",
        "or" => "and",
        "&&" => "||",
        "||" => "&&",
        "==" => "!=",
        "!=" => "==",
        "<" => "<=",
        "<=" => "<",
        ">" => ">=",
        ">=" => ">",
        _ => return None,
    })
}

/// Replacement token for an arithmetic operator.
pub fn swap_arith(language: SubjectLanguage, token: &str) -> Option<&'static str> {
    Some(match (language, token) {
        (_, "+") => "-",
        (_, "-") => "+",
        (SubjectLanguage::Python, "*") => "//",
        (SubjectLanguage::Python, "//") => "*",
        (SubjectLanguage::Python, "/") => "*",
        (SubjectLanguage::Python, "%") => "//",
        (SubjectLanguage::Java, "*") => "/",
        (SubjectLanguage::Java, "/") => "*",
        (SubjectLanguage::Java, "%") => "/",
        _ => return None,
    })
}

/// `expr` nudged by `delta` (±1): literals are folded, other expressions get
/// an explicit `+1`/`-1`, parenthesized when operator precedence requires it.
pub fn perturb_bound(expr: &str, delta: i64) -> String {
    let trimmed = expr.trim();
    if let Ok(v) = trimmed.replace('_', "").parse::<i64>() {
        return (v + delta).to_string();
    }
    let low_precedence = trimmed.contains(['<', '>', '&', '|', '^', '?', '=', '!'])
        || trimmed
            .split(|c: char| !(c.is_alphanumeric() || c == '_'))
            .any(|w| matches!(w, "if" | "else" | "and" | "or" | "not" | "lambda" | "in" | "is"));
    let sign = if delta > 0 { '+' } else { '-' };
    let magnitude = delta.abs();
    if low_precedence {
        format!("({trimmed}){sign}{magnitude}")
    } else {
        format!("{trimmed}{sign}{magnitude}")
    }
}

fn line_code(language: SubjectLanguage, source: &str, line: usize) -> String {
    code_part(language, text::line_text(source, line).unwrap_or("")).to_string()
}

/// Applies the fault at `site`. `rng` only decides the off-by-one direction.
fn inject_at<R: Rng>(
    seed: &SeedProgram,
    site: &FaultSite,
    rng: &mut R,
) -> Result<(String, usize, usize, String, String), FaultError> {
    let language = seed.subject_language;
    let source = &seed.source_text;
    let edit = match site {
        FaultSite::Loop(loop_site) => {
            let bound: &LoopBound = loop_site.preferred_bound().expect("loop sites carry a bound");
            let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
            Edit::ReplaceSpan {
                start: bound.span.start,
                end: bound.span.end,
                text: perturb_bound(bound.span.slice(source), delta),
            }
        }
        FaultSite::Operator { kind, site } => {
            let replacement = match kind {
                FaultKind::IncorrectBooleanLogic => swap_boolean(&site.token),
                _ => swap_arith(language, &site.token),
            }
            .expect("indexed operators always have a swap");
            Edit::ReplaceSpan {
                start: site.span.start,
                end: site.span.end,
                text: replacement.to_string(),
            }
        }
        FaultSite::Return(point) => Edit::InsertLinesBefore {
            line: point.line,
            lines: vec![format!(
                "{}{}",
                point.indent,
                point.return_statement.as_deref().expect("return sites carry a statement")
            )],
        },
    };
    let (faulty, _) = apply_edits(source, &[edit])?;
    source_model::parse(language, &faulty).map_err(FaultError::BrokenResult)?;
    let original_line = site.line();
    let fault_line = original_line;
    let before = line_code(language, source, original_line);
    let after = line_code(language, &faulty, fault_line);
    Ok((faulty, fault_line, original_line, before, after))
}

fn build(seed: &SeedProgram, kind: FaultKind, quartile: Quartile, rng_seed: u64, parts: (String, usize, usize, String, String)) -> FaultyProgram {
    let (source_text, fault_line, original_line, before_snippet, after_snippet) = parts;
    let fault_id = content_hash(format!("{}\0{}\0{}\0{}", seed.seed_id, kind, fault_line, source_text));
    FaultyProgram {
        fault: InjectedFault {
            fault_id,
            seed_id: seed.seed_id.clone(),
            kind,
            fault_line,
            original_line,
            quartile,
            before_snippet,
            after_snippet,
            rng_seed,
            killed: None,
        },
        language: seed.subject_language,
        source_text,
    }
}

fn sites_in_quartile(index: &SyntaxIndex, kind: FaultKind, quartile: Quartile) -> Vec<FaultSite> {
    discover_fault_sites(index, kind)
        .into_iter()
        .filter(|s| quartile.contains(s.line(), index.line_count))
        .collect()
}

/// Injects one fault of `kind` at a site in `quartile`, chosen uniformly by
/// `rng_seed`.
pub fn inject_fault(seed: &SeedProgram, kind: FaultKind, quartile: Quartile, rng_seed: u64) -> Result<FaultyProgram, FaultError> {
    let index = source_model::parse(seed.subject_language, &seed.source_text)?;
    inject_with_index(seed, &index, kind, quartile, rng_seed)
}

fn inject_with_index(
    seed: &SeedProgram,
    index: &SyntaxIndex,
    kind: FaultKind,
    quartile: Quartile,
    rng_seed: u64,
) -> Result<FaultyProgram, FaultError> {
    let sites = sites_in_quartile(index, kind, quartile);
    let mut rng = rng_for(rng_seed, &["inject"]);
    let site = sites.choose(&mut rng).ok_or(FaultError::NoApplicableSite { kind, quartile })?;
    let parts = inject_at(seed, site, &mut rng)?;
    Ok(build(seed, kind, quartile, rng_seed, parts))
}

/// Seed used for attempt `attempt` of a (seed, kind, quartile) combination.
pub fn combination_seed(base: u64, seed_id: &str, kind: FaultKind, quartile: Quartile, attempt: usize) -> u64 {
    derive_seed(base, &[seed_id, kind.name(), &quartile.to_string(), &attempt.to_string()])
}

/// Up to `per_combination` distinct faults for each (seed, kind, quartile).
pub fn generate_fault_tasks(
    seeds: &[SeedProgram],
    kinds: &[FaultKind],
    quartiles: &[Quartile],
    per_combination: usize,
    rng_seed: u64,
) -> Vec<FaultyProgram> {
    assert!(per_combination >= 1, "per_combination must be at least 1");
    let mut out = Vec::new();
    for seed in seeds {
        let Ok(index) = source_model::parse(seed.subject_language, &seed.source_text) else {
            info!("seed {} does not parse; no faults generated", seed.seed_id);
            continue;
        };
        for &kind in kinds {
            for &quartile in quartiles {
                let site_count = sites_in_quartile(&index, kind, quartile).len();
                if site_count == 0 {
                    info!("seed {}: no {kind} site in {quartile}", seed.seed_id);
                    continue;
                }
                let mut seen = HashSet::new();
                let max_attempts = per_combination * 4 + site_count;
                for attempt in 0..max_attempts {
                    if seen.len() == per_combination {
                        break;
                    }
                    let s = combination_seed(rng_seed, &seed.seed_id, kind, quartile, attempt);
                    match inject_with_index(seed, &index, kind, quartile, s) {
                        Ok(f) => {
                            let key = (f.fault.fault_line, f.fault.after_snippet.clone());
                            if seen.insert(key) {
                                out.push(f);
                            }
                        }
                        Err(e) => info!("seed {}: {kind} in {quartile} failed: {e}", seed.seed_id),
                    }
                }
            }
        }
    }
    out
}
