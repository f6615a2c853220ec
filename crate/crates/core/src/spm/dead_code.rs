use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use regex::Regex;

use super::content::{DeadCodeRequest, VARIABLE_NAMES};
use super::{NameBook, SpmError, SpmKind, StepContext, StepOutcome};
use crate::language::SubjectLanguage;
use crate::source_model::{self, code_part, text, Edit, InsertionPoint, ScopeKind};

/// Lines every dead-code block occupies.
pub fn block_height(language: SubjectLanguage) -> usize {
    match language {
        SubjectLanguage::Python => 2,
        SubjectLanguage::Java => 3,
    }
}

const HELPER_NAMES: &[&str] = &[
    "refresh_cache", "legacy_check", "debug_dump", "normalize_rows", "warm_up", "validate_state", "apply_patch",
    "fallback_path", "compute_checksum", "trace_values",
];

/// Words that would change control flow of the enclosing function or fail to
/// compile inside a never-called helper.
const FORBIDDEN_PY: &[&str] = &["nonlocal", "await", "async", "break", "continue", "global", "yield", "import"];

/// Inserts `strength` blocks of code that can never run or whose results are
/// never read. Points are drawn with replacement, so strength is always met.
pub(super) fn apply(mut ctx: StepContext) -> Result<StepOutcome, SpmError> {
    let points: Vec<&InsertionPoint> = ctx
        .index
        .statement_boundaries
        .iter()
        .filter(|p| p.accepts_code && ctx.in_quartile(p.line))
        .filter(|p| match ctx.language {
            SubjectLanguage::Python => p.scope != ScopeKind::ClassBody,
            SubjectLanguage::Java => p.scope == ScopeKind::Function,
        })
        .collect();
    if points.is_empty() {
        return Err(SpmError::NoApplicableTarget {
            kind: SpmKind::DeadCode,
            quartile: ctx.quartile,
        });
    }
    let mut book = NameBook::new(ctx.language, ctx.index);
    let unit = ctx.index.indent_unit.clone();
    let readable: Vec<String> = ctx.index.identifier_table.iter().map(|e| e.name.clone()).collect();
    let mut edits = Vec::new();
    for _ in 0..ctx.strength {
        let point = *points.choose(&mut ctx.rng).expect("non-empty");
        let nearby = code_part(ctx.language, text::line_text(ctx.source, point.line).unwrap_or("")).to_string();
        let request = DeadCodeRequest {
            language: ctx.language,
            nearby_code: &nearby,
        };
        let generated = ctx.provider.dead_code_line(&request, &mut ctx.rng);
        let lines = match ctx.language {
            SubjectLanguage::Python => python_block(point, &unit, generated, &readable, &mut book, &mut ctx.rng),
            SubjectLanguage::Java => java_block(point, &unit, generated, &mut book, &mut ctx.rng),
        };
        debug_assert_eq!(lines.len(), block_height(ctx.language));
        edits.push(Edit::InsertLinesBefore {
            line: point.line,
            lines,
        });
    }
    Ok(StepOutcome {
        edits,
        effective: ctx.strength,
        renames: Vec::new(),
    })
}

fn fresh(book: &mut NameBook, pool: &[&str], rng: &mut ChaCha8Rng) -> String {
    book.fresh(pool, rng, true).expect("numbered fallback names are unbounded in practice")
}

fn literal(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(1..100)
}

/// Accepts a model-written line only if it is a self-contained statement
/// that parses inside a helper body.
fn acceptable_python(line: &str, unit: &str) -> bool {
    if line.contains('\n') || line.contains("\"\"\"") || line.contains("'''") || line.trim_end().ends_with('\\') {
        return false;
    }
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('@') || trimmed.ends_with(':') {
        return false;
    }
    let words: Vec<&str> = trimmed
        .split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .collect();
    if words.iter().any(|w| FORBIDDEN_PY.contains(w)) {
        return false;
    }
    source_model::parse(SubjectLanguage::Python, &format!("def probe():\n{unit}{trimmed}\n")).is_ok()
}

fn python_block(
    point: &InsertionPoint,
    unit: &str,
    generated: Option<String>,
    readable: &[String],
    book: &mut NameBook,
    rng: &mut ChaCha8Rng,
) -> Vec<String> {
    let i = &point.indent;
    if let Some(line) = generated.filter(|l| acceptable_python(l, unit)) {
        let helper = fresh(book, HELPER_NAMES, rng);
        return vec![format!("{i}def {helper}():"), format!("{i}{unit}{}", line.trim())];
    }
    match rng.gen_range(0..3) {
        0 => {
            let v = fresh(book, VARIABLE_NAMES, rng);
            let operand = readable.choose(rng).cloned().unwrap_or_else(|| literal(rng).to_string());
            let op = ["+", "-", "*"].choose(rng).expect("non-empty");
            vec![format!("{i}if False:"), format!("{i}{unit}{v} = {operand} {op} {}", literal(rng))]
        }
        1 => {
            let helper = fresh(book, HELPER_NAMES, rng);
            vec![format!("{i}def {helper}():"), format!("{i}{unit}return {} * {}", literal(rng), literal(rng))]
        }
        _ => {
            let a = fresh(book, VARIABLE_NAMES, rng);
            let b = fresh(book, VARIABLE_NAMES, rng);
            vec![format!("{i}{a} = {}", literal(rng)), format!("{i}{b} = {a} + {}", literal(rng))]
        }
    }
}

fn java_block(
    point: &InsertionPoint,
    unit: &str,
    generated: Option<String>,
    book: &mut NameBook,
    rng: &mut ChaCha8Rng,
) -> Vec<String> {
    let i = &point.indent;
    let shape = Regex::new(r"^(int|long|double)\s+[A-Za-z_]\w*\s*=\s*([0-9+\-*/(). ]+);$").expect("valid regex");
    if let Some(caps) = generated.as_deref().map(str::trim).and_then(|l| shape.captures(l)) {
        let v = fresh(book, VARIABLE_NAMES, rng);
        return vec![
            format!("{i}if (false) {{"),
            format!("{i}{unit}{} {v} = {};", &caps[1], caps[2].trim()),
            format!("{i}}}"),
        ];
    }
    match rng.gen_range(0..3) {
        0 => {
            let v = fresh(book, VARIABLE_NAMES, rng);
            vec![
                format!("{i}if (false) {{"),
                format!("{i}{unit}int {v} = {};", literal(rng)),
                format!("{i}}}"),
            ]
        }
        1 => {
            let v = fresh(book, VARIABLE_NAMES, rng);
            vec![
                format!("{i}int {v} = {};", literal(rng)),
                format!("{i}{v} += {};", literal(rng)),
                format!("{i}{v} = {v} * {};", literal(rng)),
            ]
        }
        _ => {
            let f = fresh(book, HELPER_NAMES, rng);
            let x = fresh(book, VARIABLE_NAMES, rng);
            vec![
                format!("{i}java.util.function.IntUnaryOperator {f} ="),
                format!("{i}{unit}{unit}{x} ->"),
                format!("{i}{unit}{unit}{x} + {};", literal(rng)),
            ]
        }
    }
}
