use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::language::SubjectLanguage;

/// Half-open byte range into the indexed source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ByteSpan {
    pub start: usize,
    pub end: usize,
}

impl ByteSpan {
    pub fn new(start: usize, end: usize) -> Self {
        ByteSpan { start, end }
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end]
    }

    pub fn overlaps(&self, other: &ByteSpan) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// An expression bounding a loop that can be nudged by one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopBound {
    pub line: usize,
    pub span: ByteSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSite {
    /// Line of the bound that an off-by-one edit would touch.
    pub line: usize,
    pub upper: Option<LoopBound>,
    pub lower: Option<LoopBound>,
}

impl LoopSite {
    /// Upper bound when present, lower bound otherwise.
    pub fn preferred_bound(&self) -> Option<&LoopBound> {
        self.upper.as_ref().or(self.lower.as_ref())
    }
}

/// A single operator token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSite {
    pub line: usize,
    pub span: ByteSpan,
    pub token: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScopeKind {
    Module,
    ClassBody,
    Function,
}

/// A position before an existing statement where whole lines may be inserted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionPoint {
    /// New lines go before this line.
    pub line: usize,
    /// Indentation of the statement that currently starts here.
    pub indent: String,
    pub scope: ScopeKind,
    /// Index into `function_spans` of the innermost enclosing function.
    pub function: Option<usize>,
    /// Early-exit statement valid at this point, when inside a function.
    pub return_statement: Option<String>,
    /// Whether dead code may be placed here without changing behaviour.
    pub accepts_code: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpan {
    pub name: String,
    /// Header line of the declaration.
    pub start_line: usize,
    pub end_line: usize,
    /// First line of the declaration including attached decorators,
    /// annotations and doc comments.
    pub block_start_line: usize,
    /// Indices into `statement_boundaries` inside this function's body.
    pub body_points: Vec<usize>,
    /// Enclosing class, for methods.
    pub class_id: Option<usize>,
    /// Whether the whole declaration occupies its own lines and can be moved.
    pub movable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CommentStyle {
    /// `# ...`
    Hash,
    /// `// ...`
    Line,
    /// `/* ... */` on a single line
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentSpan {
    pub line: usize,
    pub span: ByteSpan,
    pub style: CommentStyle,
    /// The comment is the only thing on its line.
    pub full_line: bool,
    /// Safe to rewrite (not a shebang, encoding cookie or multi-line block).
    pub replaceable: bool,
}

/// Scope in which an identifier is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScopeId {
    Module,
    Function(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifierEntry {
    pub name: String,
    pub declaration_line: usize,
    pub declaration: ByteSpan,
    /// Every occurrence within the scope, declaration included.
    pub occurrences: Vec<ByteSpan>,
    pub scope: ScopeId,
}

/// Uniform view of the mutation-relevant structure of one program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntaxIndex {
    pub language: SubjectLanguage,
    pub line_count: usize,
    pub loop_sites: Vec<LoopSite>,
    pub boolean_op_sites: Vec<OperatorSite>,
    pub arith_op_sites: Vec<OperatorSite>,
    pub statement_boundaries: Vec<InsertionPoint>,
    pub function_spans: Vec<FunctionSpan>,
    pub comment_spans: Vec<CommentSpan>,
    /// Identifiers whose every occurrence is resolved inside one scope and
    /// that can therefore be renamed consistently.
    pub identifier_table: Vec<IdentifierEntry>,
    /// Every identifier-like word appearing in code, for collision checks.
    pub names_in_use: BTreeSet<String>,
    /// One level of indentation as used by this file.
    pub indent_unit: String,
}
