use std::sync::OnceLock;

use regex::Regex;

fn marker() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"FAULT_LINE\s*:\s*(\d+)").expect("valid regex"))
}

fn prose() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bline\s*[:#]?\s*(\d+)").expect("valid regex"))
}

/// Extracts the predicted line from a model response.
///
/// The last `FAULT_LINE: <n>` marker wins; without a marker, the last integer
/// directly following the word "line" is used. The result must lie within
/// `1..=line_count`; anything else is `None` (unparsed).
pub fn parse_answer(raw_text: &str, line_count: usize) -> Option<usize> {
    let pick = |re: &Regex| re.captures_iter(raw_text).last().map(|c| c[1].to_string());
    let digits = pick(marker()).or_else(|| pick(prose()))?;
    let line: usize = digits.parse().ok()?;
    (1..=line_count).contains(&line).then_some(line)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marker_path() {
        assert_eq!(parse_answer("...analysis... FAULT_LINE: 13", 20), Some(13));
        assert_eq!(parse_answer("FAULT_LINE: 2\nactually FAULT_LINE:5", 20), Some(5));
    }

    #[test]
    fn prose_fallback() {
        assert_eq!(parse_answer("The bug is on line 13", 20), Some(13));
        assert_eq!(parse_answer("Line #4 and then line: 7.", 20), Some(7));
    }

    #[test]
    fn unparsed_cases() {
        assert_eq!(parse_answer("the fault is somewhere in is_safe", 20), None);
        assert_eq!(parse_answer("FAULT_LINE: 0", 20), None);
        assert_eq!(parse_answer("FAULT_LINE: 21", 20), None);
        assert_eq!(parse_answer("FAULT_LINE: 99999999999999999999999", 20), None);
        assert_eq!(parse_answer("", 20), None);
    }
}
