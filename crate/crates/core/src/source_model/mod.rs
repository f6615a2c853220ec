//! Language frontends, the uniform mutation-site index, and line-tracked edits.

mod edit;
mod index;
mod java;
mod python;
pub mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use edit::{apply_edits, Edit, EditError, LineLedger};
pub use index::*;

use crate::language::SubjectLanguage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse failure at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Index `source` with the frontend for `language`.
pub fn parse(language: SubjectLanguage, source: &str) -> Result<SyntaxIndex, ParseError> {
    match language {
        SubjectLanguage::Python => python::parse(source),
        SubjectLanguage::Java => java::parse(source),
    }
}

/// The code on a physical line with any trailing comment removed, trimmed.
pub fn code_part(language: SubjectLanguage, line: &str) -> &str {
    let bytes = line.as_bytes();
    let mut quote: Option<u8> = None;
    let mut i = 0;
    let mut end = line.len();
    while i < bytes.len() {
        let c = bytes[i];
        match quote {
            Some(q) => {
                if c == b'\\' {
                    i += 1;
                } else if c == q {
                    quote = None;
                }
            }
            None => match (language, c) {
                (_, b'"') | (_, b'\'') => quote = Some(c),
                (SubjectLanguage::Python, b'#') => {
                    end = i;
                    break;
                }
                (SubjectLanguage::Java, b'/') if bytes.get(i + 1) == Some(&b'/') => {
                    end = i;
                    break;
                }
                _ => {}
            },
        }
        i += 1;
    }
    line[..end].trim()
}

/// Which quarter of a program's physical lines a line falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quartile {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quartile {
    pub const ALL: [Quartile; 4] = [Quartile::Q1, Quartile::Q2, Quartile::Q3, Quartile::Q4];

    fn ordinal(self) -> usize {
        match self {
            Quartile::Q1 => 1,
            Quartile::Q2 => 2,
            Quartile::Q3 => 3,
            Quartile::Q4 => 4,
        }
    }

    /// Inclusive line range `[first, last]` this quartile covers; empty
    /// (first > last) for very short programs.
    pub fn line_range(self, line_count: usize) -> (usize, usize) {
        let k = self.ordinal();
        let upper = |k: usize| (k * line_count).div_ceil(4);
        (upper(k - 1) + 1, upper(k))
    }

    pub fn contains(self, line: usize, line_count: usize) -> bool {
        let (first, last) = self.line_range(line_count);
        line >= first && line <= last
    }
}

impl fmt::Display for Quartile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.ordinal())
    }
}

impl std::str::FromStr for Quartile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "Q1" | "1" => Ok(Quartile::Q1),
            "Q2" | "2" => Ok(Quartile::Q2),
            "Q3" | "3" => Ok(Quartile::Q3),
            "Q4" | "4" => Ok(Quartile::Q4),
            other => Err(format!("unknown quartile `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line} outside 1..={line_count}")]
pub struct LineOutOfRange {
    pub line: usize,
    pub line_count: usize,
}

/// Quartile of `line`: Q1 iff `line <= ceil(count/4)`, Q2 iff
/// `line <= ceil(count/2)`, Q3 iff `line <= ceil(3*count/4)`, else Q4.
pub fn quartile_of(line: usize, line_count: usize) -> Result<Quartile, LineOutOfRange> {
    if line == 0 || line > line_count {
        return Err(LineOutOfRange { line, line_count });
    }
    Ok(Quartile::ALL
        .into_iter()
        .find(|q| line <= q.line_range(line_count).1)
        .expect("Q4 covers the last line"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: `line <= ceil(k*n/4)` holds exactly when
    /// `4*(line-1) < k*n`, so take the smallest such k.
    fn oracle(line: usize, count: usize) -> Quartile {
        let k = (1..=4).find(|k| 4 * (line - 1) < k * count).unwrap();
        Quartile::ALL[k - 1]
    }

    #[test]
    fn code_part_strips_comments_outside_strings() {
        assert_eq!(code_part(SubjectLanguage::Python, "  x = '#' # note"), "x = '#'");
        assert_eq!(code_part(SubjectLanguage::Java, "a = \"//\"; // c"), "a = \"//\";");
        assert_eq!(code_part(SubjectLanguage::Python, "# only"), "");
    }

    #[test]
    fn pinned_boundaries() {
        assert_eq!(quartile_of(1, 100), Ok(Quartile::Q1));
        assert_eq!(quartile_of(25, 100), Ok(Quartile::Q1));
        assert_eq!(quartile_of(26, 100), Ok(Quartile::Q2));
        assert_eq!(quartile_of(7, 10), Ok(Quartile::Q3));
        assert_eq!(quartile_of(100, 100), Ok(Quartile::Q4));
        assert!(quartile_of(0, 10).is_err());
        assert!(quartile_of(11, 10).is_err());
    }

    #[test]
    fn matches_interval_oracle_exhaustively() {
        for count in 1..=50 {
            for line in 1..=count {
                assert_eq!(quartile_of(line, count).unwrap(), oracle(line, count), "({line}, {count})");
            }
        }
    }

    #[test]
    fn quartiles_partition_lines() {
        for count in 1..=60 {
            let mut covered = vec![0; count + 1];
            for q in Quartile::ALL {
                let (first, last) = q.line_range(count);
                for l in first..=last {
                    covered[l] += 1;
                }
            }
            assert!(covered[1..].iter().all(|&c| c == 1), "count {count}");
        }
    }
}
