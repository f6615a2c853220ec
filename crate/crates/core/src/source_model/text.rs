/// Physical line layout of a source text.
///
/// Lines are 1-indexed and delimited by `\n`; a trailing newline does not
/// open an extra line. `line_start(line_count + 1)` is the end of the text.
#[derive(Debug, Clone)]
pub struct LineMap {
    starts: Vec<usize>,
    len: usize,
    trailing_newline: bool,
}

impl LineMap {
    pub fn new(text: &str) -> Self {
        let mut starts = Vec::new();
        if !text.is_empty() {
            starts.push(0);
            for (i, b) in text.bytes().enumerate() {
                if b == b'\n' && i + 1 < text.len() {
                    starts.push(i + 1);
                }
            }
        }
        LineMap {
            starts,
            len: text.len(),
            trailing_newline: text.ends_with('\n'),
        }
    }

    pub fn line_count(&self) -> usize {
        self.starts.len()
    }

    pub fn trailing_newline(&self) -> bool {
        self.trailing_newline
    }

    /// Byte offset where `line` starts; `line_count() + 1` maps to the end.
    pub fn line_start(&self, line: usize) -> usize {
        assert!(line >= 1 && line <= self.starts.len() + 1, "line {line} out of range");
        if line == self.starts.len() + 1 {
            self.len
        } else {
            self.starts[line - 1]
        }
    }

    /// Byte offset just past the content of `line` (excluding its newline).
    pub fn line_end(&self, line: usize) -> usize {
        if line < self.starts.len() {
            self.starts[line] - 1
        } else if self.trailing_newline {
            self.len - 1
        } else {
            self.len
        }
    }

    /// (line, column) for a byte offset, both computed against the text this
    /// map was built from. An offset at the very end of a newline-terminated
    /// text reports the virtual line `line_count() + 1`, column 0.
    pub fn position(&self, offset: usize) -> (usize, usize) {
        if self.starts.is_empty() {
            return (1, offset);
        }
        if offset == self.len && self.trailing_newline {
            return (self.starts.len() + 1, 0);
        }
        let idx = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (idx + 1, offset - self.starts[idx])
    }

    pub fn line_of(&self, offset: usize) -> usize {
        self.position(offset).0
    }
}

/// Split into line contents (without terminators) plus the trailing-newline flag.
pub fn split_lines(text: &str) -> (Vec<&str>, bool) {
    if text.is_empty() {
        return (Vec::new(), false);
    }
    let trailing = text.ends_with('\n');
    let body = if trailing { &text[..text.len() - 1] } else { text };
    (body.split('\n').collect(), trailing)
}

pub fn join_lines<S: AsRef<str>>(lines: &[S], trailing_newline: bool) -> String {
    let mut out = String::new();
    for (i, line) in lines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(line.as_ref());
    }
    if trailing_newline && !lines.is_empty() {
        out.push('\n');
    }
    out
}

pub fn line_count(text: &str) -> usize {
    LineMap::new(text).line_count()
}

/// Text of a 1-indexed physical line, if it exists.
pub fn line_text(text: &str, line: usize) -> Option<&str> {
    if line == 0 {
        return None;
    }
    split_lines(text).0.get(line - 1).copied()
}

/// Leading whitespace of a line.
pub fn indentation(line: &str) -> &str {
    let trimmed = line.trim_start_matches([' ', '\t']);
    &line[..line.len() - trimmed.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_lines_like_an_editor() {
        assert_eq!(line_count(""), 0);
        assert_eq!(line_count("a"), 1);
        assert_eq!(line_count("a\n"), 1);
        assert_eq!(line_count("a\n\nb"), 3);
        assert_eq!(line_count("\n"), 1);
    }

    #[test]
    fn split_join_round_trip() {
        for text in ["", "a", "a\n", "a\n\n", "\n", "x\ny\r\nz"] {
            let (lines, trailing) = split_lines(text);
            assert_eq!(join_lines(&lines, trailing), text, "{text:?}");
        }
    }

    #[test]
    fn positions() {
        let text = "ab\ncd\n";
        let map = LineMap::new(text);
        assert_eq!(map.position(0), (1, 0));
        assert_eq!(map.position(2), (1, 2));
        assert_eq!(map.position(3), (2, 0));
        assert_eq!(map.position(6), (3, 0));
        assert_eq!(map.line_start(3), 6);
        assert_eq!(map.line_end(1), 2);
        assert_eq!(map.line_end(2), 5);
    }
}
