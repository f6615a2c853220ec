//! Textual edits over physical lines, with a ledger that follows every
//! original line to its new position.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::text::{join_lines, split_lines, LineMap};

/// One edit in a batch. All coordinates refer to the text *before* the batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    /// Replace the byte range `start..end` with `text`.
    ReplaceSpan { start: usize, end: usize, text: String },
    /// Insert whole lines before `line` (`line_count + 1` appends).
    InsertLinesBefore { line: usize, lines: Vec<String> },
    /// Move lines `start..=end` so they sit before line `before`.
    MoveBlock { start: usize, end: usize, before: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("edits overlap: {0}")]
    OverlappingEdits(String),
    #[error("span out of range: {0}")]
    SpanOutOfRange(String),
}

/// Mapping from original line numbers to current ones (`None` = deleted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineLedger {
    map: Vec<Option<usize>>,
    new_line_count: usize,
}

impl LineLedger {
    pub fn identity(line_count: usize) -> Self {
        LineLedger {
            map: (1..=line_count).map(Some).collect(),
            new_line_count: line_count,
        }
    }

    pub fn original_line_count(&self) -> usize {
        self.map.len()
    }

    pub fn new_line_count(&self) -> usize {
        self.new_line_count
    }

    /// Where original `line` ended up. `None` if deleted or out of range.
    pub fn map(&self, line: usize) -> Option<usize> {
        if line == 0 {
            return None;
        }
        self.map.get(line - 1).copied().flatten()
    }

    pub fn is_identity(&self) -> bool {
        self.new_line_count == self.map.len()
            && self.map.iter().enumerate().all(|(i, m)| *m == Some(i + 1))
    }

    /// Ledger of applying `self` and then `next`.
    pub fn then(&self, next: &LineLedger) -> LineLedger {
        assert_eq!(
            self.new_line_count,
            next.original_line_count(),
            "ledgers do not chain"
        );
        LineLedger {
            map: self.map.iter().map(|m| m.and_then(|l| next.map(l))).collect(),
            new_line_count: next.new_line_count,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, Option<usize>)> + '_ {
        self.map.iter().enumerate().map(|(i, m)| (i + 1, *m))
    }
}

/// A contiguous run of original lines rendered as a unit.
struct Group {
    start: usize,
    end: usize,
    output: Vec<String>,
    /// Offset into `output` for each original line in `start..=end`.
    offsets: Vec<Option<usize>>,
}

struct Span<'a> {
    start: usize,
    end: usize,
    text: &'a str,
    start_line: usize,
    end_line: usize,
    whole_lines: bool,
}

/// Apply a batch of non-overlapping edits.
pub fn apply_edits(source: &str, edits: &[Edit]) -> Result<(String, LineLedger), EditError> {
    let map = LineMap::new(source);
    let (lines, trailing) = split_lines(source);
    let n = lines.len();

    let mut spans = Vec::new();
    for edit in edits {
        if let Edit::ReplaceSpan { start, end, text } = edit {
            if start > end || *end > source.len() {
                return Err(EditError::SpanOutOfRange(format!("{start}..{end} in {} bytes", source.len())));
            }
            if !source.is_char_boundary(*start) || !source.is_char_boundary(*end) {
                return Err(EditError::SpanOutOfRange(format!("{start}..{end} splits a character")));
            }
            let (sl, sc) = map.position(*start);
            let (el, ec) = map.position(*end);
            let whole_lines = sc == 0 && ec == 0 && el > sl && (text.is_empty() || text.ends_with('\n'));
            if !whole_lines && el > n {
                return Err(EditError::SpanOutOfRange(format!(
                    "{start}..{end} consumes the final newline without replacing whole lines"
                )));
            }
            spans.push(Span {
                start: *start,
                end: *end,
                text,
                start_line: sl,
                end_line: if whole_lines { el - 1 } else { el },
                whole_lines,
            });
        }
    }
    spans.sort_by_key(|s| (s.start, s.end));
    for pair in spans.windows(2) {
        if pair[0].end > pair[1].start || pair[0].start == pair[1].start {
            return Err(EditError::OverlappingEdits(format!(
                "replacements {}..{} and {}..{}",
                pair[0].start, pair[0].end, pair[1].start, pair[1].end
            )));
        }
    }

    // Partition lines into groups: spans touching common lines share a group.
    let mut groups: Vec<Group> = Vec::new();
    let mut line = 1;
    let mut si = 0;
    while line <= n {
        if si < spans.len() && spans[si].start_line == line {
            let mut members = vec![si];
            let mut end = spans[si].end_line;
            si += 1;
            while si < spans.len() && spans[si].start_line <= end {
                end = end.max(spans[si].end_line);
                members.push(si);
                si += 1;
            }
            let member_spans: Vec<&Span> = members.iter().map(|&i| &spans[i]).collect();
            groups.push(render_group(source, &map, line, end, &member_spans)?);
            line = end + 1;
        } else {
            groups.push(Group {
                start: line,
                end: line,
                output: vec![lines[line - 1].to_string()],
                offsets: vec![Some(0)],
            });
            line += 1;
        }
    }
    // Zero-length spans at the very end of a newline-terminated text.
    if si < spans.len() {
        return Err(EditError::SpanOutOfRange(format!(
            "replacement at offset {} lies past the last line",
            spans[si].start
        )));
    }

    let group_at_start = |l: usize| groups.iter().position(|g| g.start == l);
    let group_at_end = |l: usize| groups.iter().position(|g| g.end == l);

    // Sort keys: (anchor line, tier, edit index, original line).
    let mut placement: Vec<Option<(usize, u8, usize, usize)>> =
        groups.iter().map(|g| Some((g.start, 1, 0, g.start))).collect();
    let mut inserts: Vec<((usize, u8, usize, usize), &[String])> = Vec::new();
    let mut moved = vec![false; groups.len()];

    for (idx, edit) in edits.iter().enumerate() {
        match edit {
            Edit::ReplaceSpan { .. } => {}
            Edit::InsertLinesBefore { line, lines: new_lines } => {
                if *line == 0 || *line > n + 1 {
                    return Err(EditError::SpanOutOfRange(format!("insert before line {line} of {n}")));
                }
                if *line <= n && group_at_start(*line).is_none() {
                    return Err(EditError::OverlappingEdits(format!(
                        "insert before line {line} falls inside a replacement"
                    )));
                }
                inserts.push(((*line, 0, idx, 0), new_lines.as_slice()));
            }
            Edit::MoveBlock { start, end, before } => {
                if *start == 0 || start > end || *end > n || *before == 0 || *before > n + 1 {
                    return Err(EditError::SpanOutOfRange(format!(
                        "move {start}..={end} before {before} in {n} lines"
                    )));
                }
                if *before > *start && *before <= *end {
                    return Err(EditError::OverlappingEdits(format!(
                        "move {start}..={end} targets its own interior"
                    )));
                }
                let (Some(first), Some(last)) = (group_at_start(*start), group_at_end(*end)) else {
                    return Err(EditError::OverlappingEdits(format!(
                        "move {start}..={end} cuts through a replacement"
                    )));
                };
                if *before <= n && group_at_start(*before).is_none() {
                    return Err(EditError::OverlappingEdits(format!(
                        "move target {before} falls inside a replacement"
                    )));
                }
                for g in first..=last {
                    if moved[g] {
                        return Err(EditError::OverlappingEdits(format!(
                            "line {} moved twice",
                            groups[g].start
                        )));
                    }
                    moved[g] = true;
                    placement[g] = Some((*before, 0, idx, groups[g].start));
                }
            }
        }
    }

    enum Item<'a> {
        Group(usize),
        Insert(&'a [String]),
    }
    let mut items: Vec<((usize, u8, usize, usize), Item)> = placement
        .iter()
        .enumerate()
        .filter_map(|(g, key)| key.map(|k| (k, Item::Group(g))))
        .collect();
    items.extend(inserts.into_iter().map(|(k, l)| (k, Item::Insert(l))));
    items.sort_by_key(|(k, _)| *k);

    let mut out: Vec<String> = Vec::new();
    let mut ledger = vec![None; n];
    for (_, item) in items {
        match item {
            Item::Group(g) => {
                let group = &groups[g];
                let base = out.len();
                for (i, off) in group.offsets.iter().enumerate() {
                    ledger[group.start + i - 1] = off.map(|o| base + o + 1);
                }
                out.extend(group.output.iter().cloned());
            }
            Item::Insert(new_lines) => {
                for l in new_lines {
                    // An inserted "line" that itself contains newlines still
                    // occupies several physical lines.
                    out.extend(l.split('\n').map(str::to_string));
                }
            }
        }
    }

    let text = join_lines(&out, trailing || (n == 0 && !out.is_empty()));
    let new_line_count = out.len();
    Ok((
        text,
        LineLedger {
            map: ledger,
            new_line_count,
        },
    ))
}

fn render_group(
    source: &str,
    map: &LineMap,
    start: usize,
    end: usize,
    spans: &[&Span],
) -> Result<Group, EditError> {
    if spans.iter().any(|s| s.whole_lines) {
        if spans.len() > 1 {
            return Err(EditError::OverlappingEdits(format!(
                "whole-line replacement of lines {start}..={end} shares lines with another edit"
            )));
        }
        let span = spans[0];
        let output: Vec<String> = if span.text.is_empty() {
            Vec::new()
        } else {
            span.text[..span.text.len() - 1].split('\n').map(str::to_string).collect()
        };
        let k = output.len();
        let offsets = (start..=end)
            .map(|l| if l - start < k { Some(l - start) } else { None })
            .collect();
        return Ok(Group {
            start,
            end,
            output,
            offsets,
        });
    }

    let base = map.line_start(start);
    let group_end = map.line_end(end);
    let mut local = String::new();
    let mut cursor = base;
    for span in spans {
        local.push_str(&source[cursor..span.start]);
        local.push_str(span.text);
        cursor = span.end;
    }
    local.push_str(&source[cursor..group_end]);
    let output: Vec<String> = local.split('\n').map(str::to_string).collect();

    let mut offsets: Vec<Option<usize>> = vec![None; end - start + 1];
    // Running difference between output and original line offsets.
    let mut delta: isize = 0;
    let mut line = start;
    for span in spans {
        while line < span.start_line {
            offsets[line - start] = Some(((line - start) as isize + delta) as usize);
            line += 1;
        }
        let first = ((span.start_line - start) as isize + delta) as usize;
        let newlines = span.text.matches('\n').count();
        let covered = span.end_line - span.start_line;
        for l in span.start_line + 1..span.end_line {
            offsets[l - start] = if l - span.start_line < newlines {
                Some(first + (l - span.start_line))
            } else {
                None
            };
        }
        offsets[span.end_line - start] = Some(first + newlines);
        // A line split by the replacement stays with its own leading code;
        // a blank prefix means the line's content follows the new text.
        let prefix = &source[map.line_start(span.start_line)..span.start];
        if span.start_line != span.end_line || !prefix.trim().is_empty() {
            offsets[span.start_line - start] = Some(first);
        }
        delta += newlines as isize - covered as isize;
        line = span.end_line + 1;
    }
    while line <= end {
        offsets[line - start] = Some(((line - start) as isize + delta) as usize);
        line += 1;
    }
    debug_assert!(offsets.iter().flatten().all(|&o| o < output.len()));
    Ok(Group {
        start,
        end,
        output,
        offsets,
    })
}
