//! Sources of text for comments, names and dead code.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::language::SubjectLanguage;

/// What the engine needs a comment for.
#[derive(Debug, Clone)]
pub struct CommentRequest<'a> {
    pub language: SubjectLanguage,
    /// Code on the line the comment will describe (may be empty).
    pub nearby_code: &'a str,
    /// Identifiers that appear in the program, for plausible wording.
    pub names: &'a [String],
}

#[derive(Debug, Clone)]
pub struct NameRequest<'a> {
    pub language: SubjectLanguage,
    pub original: &'a str,
    /// Whether the identifier names a function rather than a variable.
    pub is_function: bool,
}

#[derive(Debug, Clone)]
pub struct DeadCodeRequest<'a> {
    pub language: SubjectLanguage,
    pub nearby_code: &'a str,
}

/// Supplies the free-form parts of semantic-preserving mutations.
///
/// Everything returned is treated as untrusted: the engine sanitizes
/// comments, validates names, and only ever places code inside shells that
/// cannot execute.
pub trait ContentProvider {
    /// A misleading but coherent one-sentence description (no comment markers).
    fn comment(&mut self, request: &CommentRequest, rng: &mut ChaCha8Rng) -> String;

    /// A preferred replacement name, or `None` to let the engine pick from its pool.
    fn identifier(&mut self, _request: &NameRequest, _rng: &mut ChaCha8Rng) -> Option<String> {
        None
    }

    /// One line of code for a dead-code shell, or `None` for a built-in shape.
    fn dead_code_line(&mut self, _request: &DeadCodeRequest, _rng: &mut ChaCha8Rng) -> Option<String> {
        None
    }
}

const COMMENT_TEMPLATES: &[&str] = &[
    "This function checks how many {a} are on the board.",
    "Normalize {a} so that duplicates are removed before counting.",
    "Sort {a} in descending order before returning.",
    "Cache {a} here to avoid recomputing it on every call.",
    "Skip the first element of {a} since it is always a sentinel.",
    "Convert {a} to a string so the caller can print it.",
    "Reverse {a} to process items from the end.",
    "{a} is guaranteed to be non-negative at this point.",
    "Retry until {a} is stable; this loop usually runs once.",
    "Merge {a} into {b} and discard the remainder.",
    "Swap {a} and {b} to keep the invariant sorted.",
    "Use {a} as a counter of processed rows.",
    "Compute the average of {a} over the whole input.",
    "Validate {a} and raise early if it is empty.",
    "Clamp {a} to the range of valid indices.",
    "{a} holds the running maximum seen so far.",
    "Binary search over {a} to find the insertion point.",
    "Accumulate {a} into {b} in reverse order.",
    "This block handles the case where {a} is already sorted.",
    "Drop the last entry of {a}; it is only a terminator.",
];

const FALLBACK_NOUNS: &[&str] = &["the items", "the queue", "the matrix", "the buffer", "the result"];

/// Variable names that read as meaningful but say nothing true.
pub const VARIABLE_NAMES: &[&str] = &[
    "index", "total", "result", "final_result", "temp", "flag", "buffer", "counter", "offset", "size", "count",
    "value", "item", "node", "cache", "limit", "left", "right", "key", "data", "matrix", "queue", "visited",
    "answer", "acc", "prev", "current", "score", "length", "width", "height", "step", "cursor", "pivot",
    "target", "accumulator", "seen", "pending", "weight", "level", "depth", "row_count", "max_value",
    "min_value", "is_valid", "is_sorted", "checksum", "remaining", "head", "tail",
];

/// Function names that suggest a different purpose.
pub const FUNCTION_NAMES: &[&str] = &[
    "howManyQueens", "validate_input", "count_items", "parse_header", "normalize", "check_bounds", "merge_lists",
    "compute_hash", "reset_state", "find_minimum", "sort_descending", "load_config", "print_report",
    "update_cache", "is_balanced", "reverse_items", "compress", "flatten_rows", "build_index", "sum_digits",
];

/// Converts a snake_case pool entry to the language's local-variable style.
pub fn styled(language: SubjectLanguage, name: &str) -> String {
    match language {
        SubjectLanguage::Python => name.to_string(),
        SubjectLanguage::Java => {
            let mut out = String::new();
            let mut upper = false;
            for c in name.chars() {
                if c == '_' {
                    upper = true;
                } else if upper {
                    out.extend(c.to_uppercase());
                    upper = false;
                } else {
                    out.push(c);
                }
            }
            out
        }
    }
}

/// Deterministic provider backed by curated pools and the engine's rng.
#[derive(Debug, Default, Clone)]
pub struct TemplateProvider;

impl ContentProvider for TemplateProvider {
    fn comment(&mut self, request: &CommentRequest, rng: &mut ChaCha8Rng) -> String {
        let template = COMMENT_TEMPLATES.choose(rng).expect("non-empty pool");
        let pick = |rng: &mut ChaCha8Rng| -> String {
            if request.names.is_empty() {
                FALLBACK_NOUNS.choose(rng).expect("non-empty").to_string()
            } else {
                format!("`{}`", request.names[rng.gen_range(0..request.names.len())])
            }
        };
        let a = pick(rng);
        let b = pick(rng);
        let sentence = template.replace("{a}", &a).replace("{b}", &b);
        let mut chars = sentence.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
            None => sentence,
        }
    }
}

/// Makes provider text safe to embed in a single-line comment.
pub fn sanitize_comment(text: &str) -> String {
    let one_line: String = text
        .chars()
        .map(|c| if c.is_control() { ' ' } else { c })
        .collect::<String>()
        .replace("*/", "* /")
        .replace("/*", "/ *");
    let collapsed = one_line.split_whitespace().collect::<Vec<_>>().join(" ");
    let trimmed: String = collapsed.chars().take(160).collect();
    if trimmed.is_empty() {
        "Intentionally left as is.".to_string()
    } else {
        trimmed
    }
}
