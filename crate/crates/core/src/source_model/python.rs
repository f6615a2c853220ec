//! Python frontend: a tokenizer plus an indentation-driven statement tree.
//!
//! Only the constructs the mutation operators need are modelled. Anything
//! else is tokenized, checked for balance, and otherwise ignored.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::index::*;
use super::text::LineMap;
use super::ParseError;
use crate::language::SubjectLanguage;

const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda",
    "nonlocal", "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
];

const HEADER_KEYWORDS: &[&str] = &[
    "if", "elif", "else", "for", "while", "def", "class", "try", "except", "finally", "with", "async",
];

const CLAUSE_KEYWORDS: &[&str] = &["elif", "else", "except", "finally"];

// Longest first.
const OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "==", "!=", "<=", ">=", "<<", ">>", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "@=", "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">", "(",
    ")", "[", "]", "{", "}", ",", ":", ".", ";", "=",
];

/// Names whose presence means code may observe identifiers reflectively.
const REFLECTIVE_NAMES: &[&str] = &[
    "locals", "globals", "vars", "eval", "exec", "getattr", "setattr", "delattr", "hasattr", "__import__",
    "compile", "inspect",
];
const REFLECTIVE_ATTRS: &[&str] = &["__dict__", "__code__", "__name__", "__qualname__", "f_locals", "_getframe"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Name,
    Keyword,
    Number,
    Str,
    Op,
}

#[derive(Debug, Clone)]
pub(crate) struct Tok {
    pub kind: Kind,
    pub start: usize,
    pub end: usize,
    pub line: usize,
    /// For strings: an f-string whose text may reference names.
    pub fstring: bool,
}

struct Lexed {
    toks: Vec<Tok>,
    comments: Vec<(usize, usize, usize)>,
    /// Token index ranges of logical lines.
    logical: Vec<(usize, usize)>,
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

fn lex(src: &str) -> Result<Lexed, ParseError> {
    let map = LineMap::new(src);
    let bytes = src.as_bytes();
    let err = |offset: usize, message: String| {
        let (line, column) = map.position(offset);
        ParseError { line, column, message }
    };

    let mut toks: Vec<Tok> = Vec::new();
    let mut comments = Vec::new();
    let mut logical = Vec::new();
    let mut line_first = 0usize;
    let mut brackets: Vec<(u8, usize)> = Vec::new();
    let mut i = 0usize;

    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\x0c' | b'\r' => i += 1,
            b'\\' => {
                let mut j = i + 1;
                if j < bytes.len() && bytes[j] == b'\r' {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'\n' {
                    i = j + 1;
                } else {
                    return Err(err(i, "unexpected character after line continuation".into()));
                }
            }
            b'\n' => {
                if brackets.is_empty() && toks.len() > line_first {
                    logical.push((line_first, toks.len()));
                    line_first = toks.len();
                }
                i += 1;
            }
            b'#' => {
                let end = src[i..].find('\n').map_or(src.len(), |p| i + p);
                let end = if end > i && bytes[end - 1] == b'\r' { end - 1 } else { end };
                comments.push((i, end, map.line_of(i)));
                i = end;
            }
            b'"' | b'\'' => {
                let end = lex_string(src, i, i, &err)?;
                toks.push(Tok {
                    kind: Kind::Str,
                    start: i,
                    end,
                    line: map.line_of(i),
                    fstring: false,
                });
                i = end;
            }
            b'0'..=b'9' => {
                let end = lex_number(bytes, i);
                toks.push(Tok {
                    kind: Kind::Number,
                    start: i,
                    end,
                    line: map.line_of(i),
                    fstring: false,
                });
                i = end;
            }
            b'.' if i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() => {
                let end = lex_number(bytes, i);
                toks.push(Tok {
                    kind: Kind::Number,
                    start: i,
                    end,
                    line: map.line_of(i),
                    fstring: false,
                });
                i = end;
            }
            _ => {
                let ch = src[i..].chars().next().expect("in bounds");
                if is_ident_start(ch) {
                    let mut end = i + ch.len_utf8();
                    while let Some(n) = src[end..].chars().next() {
                        if is_ident_continue(n) {
                            end += n.len_utf8();
                        } else {
                            break;
                        }
                    }
                    let word = &src[i..end];
                    let next = bytes.get(end).copied();
                    let lower = word.to_ascii_lowercase();
                    if matches!(next, Some(b'"') | Some(b'\''))
                        && matches!(lower.as_str(), "r" | "u" | "b" | "f" | "br" | "rb" | "fr" | "rf")
                    {
                        let close = lex_string(src, i, end, &err)?;
                        toks.push(Tok {
                            kind: Kind::Str,
                            start: i,
                            end: close,
                            line: map.line_of(i),
                            fstring: lower.contains('f'),
                        });
                        i = close;
                        continue;
                    }
                    let kind = if KEYWORDS.contains(&word) { Kind::Keyword } else { Kind::Name };
                    toks.push(Tok {
                        kind,
                        start: i,
                        end,
                        line: map.line_of(i),
                        fstring: false,
                    });
                    i = end;
                    continue;
                }
                let Some(op) = OPERATORS.iter().find(|op| src[i..].starts_with(**op)) else {
                    return Err(err(i, format!("unexpected character `{ch}`")));
                };
                match *op {
                    "(" | "[" | "{" => brackets.push((op.as_bytes()[0], i)),
                    ")" | "]" | "}" => {
                        let want = match *op {
                            ")" => b'(',
                            "]" => b'[',
                            _ => b'{',
                        };
                        match brackets.pop() {
                            Some((open, _)) if open == want => {}
                            _ => return Err(err(i, format!("unmatched `{op}`"))),
                        }
                    }
                    _ => {}
                }
                toks.push(Tok {
                    kind: Kind::Op,
                    start: i,
                    end: i + op.len(),
                    line: map.line_of(i),
                    fstring: false,
                });
                i += op.len();
            }
        }
    }
    if let Some((open, at)) = brackets.pop() {
        return Err(err(at, format!("`{}` is never closed", open as char)));
    }
    if toks.len() > line_first {
        logical.push((line_first, toks.len()));
    }
    Ok(Lexed {
        toks,
        comments,
        logical,
    })
}

fn lex_string(
    src: &str,
    start: usize,
    quote_at: usize,
    err: &dyn Fn(usize, String) -> ParseError,
) -> Result<usize, ParseError> {
    let bytes = src.as_bytes();
    let q = bytes[quote_at];
    let triple = bytes.len() >= quote_at + 3 && bytes[quote_at + 1] == q && bytes[quote_at + 2] == q;
    let mut i = quote_at + if triple { 3 } else { 1 };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\\' {
            i += 2;
            continue;
        }
        if triple {
            if c == q && i + 2 < bytes.len() + 0 && bytes.get(i + 1) == Some(&q) && bytes.get(i + 2) == Some(&q) {
                return Ok(i + 3);
            }
        } else if c == q {
            return Ok(i + 1);
        } else if c == b'\n' {
            break;
        }
        i += 1;
    }
    Err(err(start, "unterminated string literal".into()))
}

fn lex_number(bytes: &[u8], start: usize) -> usize {
    let mut i = start;
    while i < bytes.len() {
        let c = bytes[i];
        let prev = if i > start { bytes[i - 1] } else { 0 };
        let exponent_sign = (c == b'+' || c == b'-') && (prev == b'e' || prev == b'E') && !is_hex(bytes, start);
        if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || exponent_sign {
            i += 1;
        } else {
            break;
        }
    }
    i
}

fn is_hex(bytes: &[u8], start: usize) -> bool {
    bytes.len() > start + 1 && bytes[start] == b'0' && matches!(bytes[start + 1], b'x' | b'X')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StmtKind {
    Def,
    Class,
    For,
    Decorator,
    Docstring,
    Import,
    Global,
    Other,
}

#[derive(Debug)]
struct Stmt {
    toks: (usize, usize),
    first_line: usize,
    own_last_line: usize,
    last_line: usize,
    indent: String,
    width: usize,
    parent: Option<usize>,
    children: Vec<usize>,
    header: bool,
    clause: bool,
    kind: StmtKind,
}

struct Frontend<'a> {
    src: &'a str,
    lines: Vec<&'a str>,
    toks: Vec<Tok>,
    stmts: Vec<Stmt>,
    roots: Vec<usize>,
}

impl<'a> Frontend<'a> {
    fn text(&self, t: usize) -> &'a str {
        &self.src[self.toks[t].start..self.toks[t].end]
    }

    fn is_op(&self, t: usize, op: &str) -> bool {
        self.toks.get(t).is_some_and(|tok| tok.kind == Kind::Op && self.text(t) == op)
    }

    fn is_kw(&self, t: usize, kw: &str) -> bool {
        self.toks.get(t).is_some_and(|tok| tok.kind == Kind::Keyword && self.text(t) == kw)
    }

    /// Nearest enclosing def/class statement.
    fn scope_owner(&self, s: usize) -> Option<usize> {
        let mut cur = self.stmts[s].parent;
        while let Some(p) = cur {
            if matches!(self.stmts[p].kind, StmtKind::Def | StmtKind::Class) {
                return Some(p);
            }
            cur = self.stmts[p].parent;
        }
        None
    }

    fn descendants(&self, s: usize, out: &mut Vec<usize>) {
        for &c in &self.stmts[s].children {
            out.push(c);
            self.descendants(c, out);
        }
    }
}

fn width_of(indent: &str) -> usize {
    let mut w = 0;
    for c in indent.chars() {
        if c == '\t' {
            w = (w / 8 + 1) * 8;
        } else {
            w += 1;
        }
    }
    w
}

pub fn parse(src: &str) -> Result<SyntaxIndex, ParseError> {
    let lexed = lex(src)?;
    let (lines, _) = super::text::split_lines(src);
    let mut fe = Frontend {
        src,
        lines,
        toks: lexed.toks,
        stmts: Vec::new(),
        roots: Vec::new(),
    };
    build_tree(&mut fe, &lexed.logical)?;

    let line_count = fe.lines.len();
    let indent_unit = indent_unit(&fe);

    let mut function_spans = Vec::new();
    let mut def_to_fn: HashMap<usize, usize> = HashMap::new();
    for (s, stmt) in fe.stmts.iter().enumerate() {
        if stmt.kind == StmtKind::Def {
            let name_tok = (stmt.toks.0..stmt.toks.1)
                .find(|&t| fe.is_kw(t, "def"))
                .map(|t| t + 1)
                .filter(|&t| t < stmt.toks.1);
            let name = name_tok.map(|t| fe.text(t).to_string()).unwrap_or_default();
            let mut block_start = stmt.first_line;
            let siblings = match stmt.parent {
                Some(p) => &fe.stmts[p].children,
                None => &fe.roots,
            };
            if let Some(pos) = siblings.iter().position(|&x| x == s) {
                for &prev in siblings[..pos].iter().rev() {
                    if fe.stmts[prev].kind == StmtKind::Decorator {
                        block_start = fe.stmts[prev].first_line;
                    } else {
                        break;
                    }
                }
            }
            let class_id = stmt.parent.filter(|&p| fe.stmts[p].kind == StmtKind::Class);
            def_to_fn.insert(s, function_spans.len());
            function_spans.push(FunctionSpan {
                name,
                start_line: stmt.first_line,
                end_line: stmt.last_line,
                block_start_line: block_start,
                body_points: Vec::new(),
                class_id,
                movable: false,
            });
        }
    }

    let statement_boundaries = insertion_points(&fe, &def_to_fn, &mut function_spans);
    let (loop_sites, boolean_op_sites, arith_op_sites) = operator_sites(&fe);
    let comment_spans = comment_spans(&fe, &lexed.comments);
    let names_in_use: BTreeSet<String> = fe
        .toks
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t.kind, Kind::Name | Kind::Keyword))
        .map(|(i, _)| fe.text(i).to_string())
        .collect();
    let identifier_table = identifier_table(&fe, &def_to_fn);

    Ok(SyntaxIndex {
        language: SubjectLanguage::Python,
        line_count,
        loop_sites,
        boolean_op_sites,
        arith_op_sites,
        statement_boundaries,
        function_spans,
        comment_spans,
        identifier_table,
        names_in_use,
        indent_unit,
    })
}

fn build_tree(fe: &mut Frontend, logical: &[(usize, usize)]) -> Result<(), ParseError> {
    // (indent width, owning header statement)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
    let mut expect_block: Option<usize> = None;

    for &(a, b) in logical {
        let first = &fe.toks[a];
        let first_line = first.line;
        let line_text = fe.lines[first_line - 1];
        let indent = super::text::indentation(line_text).to_string();
        let width = width_of(&indent);
        let own_last_line = {
            let last = &fe.toks[b - 1];
            LineMap::new(fe.src).line_of(last.end.saturating_sub(1).max(last.start))
        };
        let err = |message: &str| ParseError {
            line: first_line,
            column: indent.len(),
            message: message.to_string(),
        };

        if let Some(header) = expect_block.take() {
            if width <= stack.last().expect("non-empty").0 {
                return Err(err("expected an indented block"));
            }
            stack.push((width, Some(header)));
        } else if width > stack.last().expect("non-empty").0 {
            return Err(err("unexpected indent"));
        } else {
            while width < stack.last().expect("non-empty").0 {
                stack.pop();
            }
            if width != stack.last().expect("non-empty").0 {
                return Err(err("unindent does not match any outer indentation level"));
            }
        }
        let parent = stack.last().expect("non-empty").1;

        let first_text = fe.text(a);
        let last_is_colon = fe.is_op(b - 1, ":");
        let starts_header = first.kind == Kind::Keyword && HEADER_KEYWORDS.contains(&first_text);
        let header = starts_header && last_is_colon;
        let clause = first.kind == Kind::Keyword && CLAUSE_KEYWORDS.contains(&first_text);
        if clause {
            let siblings = match parent {
                Some(p) => &fe.stmts[p].children,
                None => &fe.roots,
            };
            let ok = siblings.last().is_some_and(|&prev| fe.stmts[prev].header || fe.stmts[prev].clause);
            if !ok {
                return Err(err(&format!("`{first_text}` without a matching statement")));
            }
        }
        let second = if a + 1 < b { Some(fe.text(a + 1)) } else { None };
        let kind = match (first_text, first.kind) {
            ("def", Kind::Keyword) => StmtKind::Def,
            ("async", Kind::Keyword) if second == Some("def") => StmtKind::Def,
            ("class", Kind::Keyword) => StmtKind::Class,
            ("for", Kind::Keyword) => StmtKind::For,
            ("async", Kind::Keyword) if second == Some("for") => StmtKind::For,
            ("@", Kind::Op) => StmtKind::Decorator,
            ("import", Kind::Keyword) | ("from", Kind::Keyword) => StmtKind::Import,
            ("global", Kind::Keyword) | ("nonlocal", Kind::Keyword) => StmtKind::Global,
            _ if (a..b).all(|t| fe.toks[t].kind == Kind::Str) => StmtKind::Docstring,
            _ => StmtKind::Other,
        };
        if matches!(kind, StmtKind::Def | StmtKind::Class) && !header {
            return Err(err("definition header must end with `:`"));
        }

        let id = fe.stmts.len();
        fe.stmts.push(Stmt {
            toks: (a, b),
            first_line,
            own_last_line,
            last_line: own_last_line,
            indent,
            width,
            parent,
            children: Vec::new(),
            header,
            clause,
            kind,
        });
        match parent {
            Some(p) => fe.stmts[p].children.push(id),
            None => fe.roots.push(id),
        }
        if header {
            expect_block = Some(id);
        }
    }
    if let Some(h) = expect_block {
        return Err(ParseError {
            line: fe.stmts[h].own_last_line,
            column: 0,
            message: "expected an indented block at end of file".into(),
        });
    }
    // Propagate last lines upward (children always follow parents).
    for s in (0..fe.stmts.len()).rev() {
        let last = fe.stmts[s].last_line;
        if let Some(p) = fe.stmts[s].parent {
            if fe.stmts[p].last_line < last {
                fe.stmts[p].last_line = last;
            }
        }
    }
    Ok(())
}

fn indent_unit(fe: &Frontend) -> String {
    if fe.stmts.iter().any(|s| s.indent.contains('\t')) {
        return "\t".into();
    }
    let mut unit = usize::MAX;
    for s in &fe.stmts {
        if let Some(p) = s.parent {
            let diff = s.width.saturating_sub(fe.stmts[p].width);
            if diff > 0 {
                unit = unit.min(diff);
            }
        }
    }
    " ".repeat(if unit == usize::MAX { 4 } else { unit })
}

fn insertion_points(
    fe: &Frontend,
    def_to_fn: &HashMap<usize, usize>,
    function_spans: &mut [FunctionSpan],
) -> Vec<InsertionPoint> {
    let mut points = Vec::new();
    let mut visit = |siblings: &[usize], points: &mut Vec<InsertionPoint>| {
        for (pos, &s) in siblings.iter().enumerate() {
            let stmt = &fe.stmts[s];
            if stmt.clause {
                continue;
            }
            if pos > 0 && fe.stmts[siblings[pos - 1]].kind == StmtKind::Decorator {
                continue;
            }
            if pos == 0 && stmt.kind == StmtKind::Docstring {
                continue;
            }
            if stmt.kind == StmtKind::Import && fe.text(stmt.toks.0) == "from" && fe.text(stmt.toks.0 + 1) == "__future__"
            {
                continue;
            }
            // Continuation lines of the previous statement on the same line (`a; b`)
            // never start a logical line, so every statement begins its own line
            // unless a one-line compound statement precedes it.
            let owner = fe.scope_owner(s);
            let (scope, function) = match owner {
                None => (ScopeKind::Module, None),
                Some(o) if fe.stmts[o].kind == StmtKind::Class => (ScopeKind::ClassBody, None),
                Some(o) => (ScopeKind::Function, def_to_fn.get(&o).copied()),
            };
            let index = points.len();
            if let Some(f) = function {
                function_spans[f].body_points.push(index);
            }
            points.push(InsertionPoint {
                line: stmt.first_line,
                indent: stmt.indent.clone(),
                scope,
                function,
                return_statement: (scope == ScopeKind::Function).then(|| "return".to_string()),
                accepts_code: scope != ScopeKind::ClassBody,
            });
        }
    };
    let mut order: Vec<Vec<usize>> = vec![fe.roots.clone()];
    for stmt in &fe.stmts {
        if !stmt.children.is_empty() {
            order.push(stmt.children.clone());
        }
    }
    for siblings in &order {
        visit(siblings, &mut points);
    }
    points.sort_by_key(|p| p.line);
    // Re-point function body indices after sorting.
    for f in function_spans.iter_mut() {
        f.body_points.clear();
    }
    for (i, p) in points.iter().enumerate() {
        if let Some(f) = p.function {
            function_spans[f].body_points.push(i);
        }
    }
    points
}

/// Whether the token before `t` ends an operand, making `t` a binary operator.
fn ends_operand(fe: &Frontend, t: usize) -> bool {
    if t == 0 {
        return false;
    }
    let prev = &fe.toks[t - 1];
    match prev.kind {
        Kind::Name | Kind::Number | Kind::Str => true,
        Kind::Keyword => matches!(fe.text(t - 1), "True" | "False" | "None"),
        Kind::Op => matches!(fe.text(t - 1), ")" | "]" | "}"),
    }
}

fn operator_sites(fe: &Frontend) -> (Vec<LoopSite>, Vec<OperatorSite>, Vec<OperatorSite>) {
    let mut loops = Vec::new();
    let mut booleans = Vec::new();
    let mut ariths = Vec::new();
    let mut in_decorator = HashSet::new();
    for stmt in &fe.stmts {
        if stmt.kind == StmtKind::Decorator {
            in_decorator.extend(stmt.toks.0..stmt.toks.1);
        }
        if stmt.kind == StmtKind::For {
            loops.extend(range_sites(fe, stmt));
        }
    }

    for (t, tok) in fe.toks.iter().enumerate() {
        if in_decorator.contains(&t) {
            continue;
        }
        let text = fe.text(t);
        let site = || OperatorSite {
            line: tok.line,
            span: ByteSpan::new(tok.start, tok.end),
            token: text.to_string(),
        };
        match tok.kind {
            Kind::Keyword if matches!(text, "and" | "or") => booleans.push(site()),
            Kind::Op if matches!(text, "==" | "!=" | "<" | "<=" | ">" | ">=") => booleans.push(site()),
            Kind::Op if matches!(text, "+" | "-" | "*" | "/" | "//" | "%") => {
                let next_is_str = fe.toks.get(t + 1).is_some_and(|n| n.kind == Kind::Str);
                let prev_is_str = t > 0 && fe.toks[t - 1].kind == Kind::Str;
                if ends_operand(fe, t) && !next_is_str && !prev_is_str {
                    ariths.push(site());
                }
            }
            _ => {}
        }
    }
    (loops, booleans, ariths)
}

/// `range(...)` calls in the iterable part of a `for` header.
fn range_sites(fe: &Frontend, stmt: &Stmt) -> Vec<LoopSite> {
    let (a, b) = stmt.toks;
    let mut depth = 0i32;
    let mut in_at = None;
    let mut colon_at = b;
    for t in a..b {
        if fe.toks[t].kind == Kind::Op {
            match fe.text(t) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                ":" if depth == 0 && in_at.is_some() => {
                    colon_at = t;
                    break;
                }
                _ => {}
            }
        } else if depth == 0 && in_at.is_none() && fe.is_kw(t, "in") {
            in_at = Some(t);
        }
    }
    let Some(in_at) = in_at else { return Vec::new() };

    let mut sites = Vec::new();
    let mut t = in_at + 1;
    while t < colon_at {
        let is_range = fe.toks[t].kind == Kind::Name
            && fe.text(t) == "range"
            && !(t > 0 && fe.is_op(t - 1, "."))
            && fe.is_op(t + 1, "(");
        if !is_range {
            t += 1;
            continue;
        }
        // Split arguments at depth-1 commas.
        let open = t + 1;
        let mut args: Vec<(usize, usize)> = Vec::new();
        let mut depth = 0;
        let mut arg_start = open + 1;
        let mut close = open;
        for u in open..colon_at {
            if fe.toks[u].kind == Kind::Op {
                match fe.text(u) {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        depth -= 1;
                        if depth == 0 {
                            if u > arg_start {
                                args.push((arg_start, u));
                            }
                            close = u;
                            break;
                        }
                    }
                    "," if depth == 1 => {
                        args.push((arg_start, u));
                        arg_start = u + 1;
                    }
                    _ => {}
                }
            }
        }
        let usable = (1..=3).contains(&args.len())
            && args.iter().all(|&(s, e)| {
                s < e
                    && !fe.is_op(s, "*")
                    && !fe.is_op(s, "**")
                    && !(e - s >= 2 && fe.toks[s].kind == Kind::Name && fe.is_op(s + 1, "="))
            });
        if usable {
            let bound = |&(s, e): &(usize, usize)| {
                let first = &fe.toks[s];
                let last = &fe.toks[e - 1];
                (first.line == last.line).then(|| LoopBound {
                    line: first.line,
                    span: ByteSpan::new(first.start, last.end),
                })
            };
            let upper = if args.len() == 1 { bound(&args[0]) } else { bound(&args[1]) };
            let lower = if args.len() >= 2 { bound(&args[0]) } else { None };
            let site = LoopSite {
                line: 0,
                upper,
                lower,
            };
            if let Some(line) = site.preferred_bound().map(|b| b.line) {
                sites.push(LoopSite { line, ..site });
            }
        }
        t = close.max(t + 1);
    }
    sites
}

fn comment_spans(fe: &Frontend, comments: &[(usize, usize, usize)]) -> Vec<CommentSpan> {
    comments
        .iter()
        .map(|&(start, end, line)| {
            let text = &fe.src[start..end];
            let line_text = fe.lines[line - 1];
            let full_line = line_text.trim_start().starts_with('#');
            let special = (line == 1 && text.starts_with("#!"))
                || (line <= 2 && (text.contains("coding:") || text.contains("coding=")))
                || text.contains("type:")
                || text.contains("noqa");
            CommentSpan {
                line,
                span: ByteSpan::new(start, end),
                style: CommentStyle::Hash,
                full_line,
                replaceable: !special,
            }
        })
        .collect()
}

/// Bracket context of every token: innermost open bracket, and whether that
/// bracket is a `def` parameter list.
fn bracket_context(fe: &Frontend) -> Vec<Option<(char, bool)>> {
    let mut out = Vec::with_capacity(fe.toks.len());
    let mut stack: Vec<(char, bool)> = Vec::new();
    for t in 0..fe.toks.len() {
        out.push(stack.last().copied());
        if fe.toks[t].kind == Kind::Op {
            match fe.text(t) {
                "(" => {
                    let def_header = t >= 2 && fe.is_kw(t - 2, "def") && fe.toks[t - 1].kind == Kind::Name;
                    stack.push(('(', def_header));
                }
                "[" => stack.push(('[', false)),
                "{" => stack.push(('{', false)),
                ")" | "]" | "}" => {
                    stack.pop();
                }
                _ => {}
            }
        }
    }
    out
}

fn identifier_table(fe: &Frontend, def_to_fn: &HashMap<usize, usize>) -> Vec<IdentifierEntry> {
    let ctx = bracket_context(fe);
    let after_dot = |t: usize| t > 0 && fe.is_op(t - 1, ".");
    let is_name = |t: usize| fe.toks[t].kind == Kind::Name;

    let reflective = (0..fe.toks.len()).any(|t| {
        is_name(t)
            && ((!after_dot(t) && REFLECTIVE_NAMES.contains(&fe.text(t)))
                || (after_dot(t) && REFLECTIVE_ATTRS.contains(&fe.text(t))))
    });
    if reflective {
        return Vec::new();
    }

    let kwarg_names: HashSet<&str> = (0..fe.toks.len())
        .filter(|&t| {
            is_name(t) && fe.is_op(t + 1, "=") && matches!(ctx[t], Some(('(', false)))
        })
        .map(|t| fe.text(t))
        .collect();

    let mut entries = Vec::new();

    for (&def_stmt, &fn_idx) in def_to_fn {
        let stmt = &fe.stmts[def_stmt];
        let mut own: Vec<usize> = Vec::new();
        let mut all: Vec<usize> = Vec::new();
        fe.descendants(def_stmt, &mut all);
        for &d in &all {
            if fe.scope_owner(d) == Some(def_stmt) {
                own.push(d);
            }
        }
        if all.iter().any(|&d| fe.stmts[d].kind == StmtKind::Class) {
            continue;
        }
        let span_start = stmt.toks.0;
        let span_end = all.iter().map(|&d| fe.stmts[d].toks.1).max().unwrap_or(stmt.toks.1);

        let def_kw = (stmt.toks.0..stmt.toks.1).find(|&t| fe.is_kw(t, "def")).expect("def keyword");
        let fn_name_tok = def_kw + 1;
        let fn_name = fe.text(fn_name_tok);

        let mut bound: Vec<(String, usize)> = Vec::new();
        let mut rejected: HashSet<String> = HashSet::new();

        // Parameters, and names used in defaults/annotations (evaluated outside).
        let mut t = fn_name_tok + 2;
        let mut depth = 1;
        while t < stmt.toks.1 && depth > 0 {
            if fe.toks[t].kind == Kind::Op {
                match fe.text(t) {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => depth -= 1,
                    _ => {}
                }
            }
            if depth > 0 && is_name(t) {
                let prev_ok = fe.is_op(t - 1, "(")
                    || fe.is_op(t - 1, ",")
                    || fe.is_op(t - 1, "*")
                    || fe.is_op(t - 1, "**");
                let next_ok = fe.is_op(t + 1, ",") || fe.is_op(t + 1, ")") || fe.is_op(t + 1, "=") || fe.is_op(t + 1, ":");
                if depth == 1 && prev_ok && next_ok {
                    bound.push((fe.text(t).to_string(), t));
                } else {
                    rejected.insert(fe.text(t).to_string());
                }
            }
            t += 1;
        }
        // Return annotation.
        while t < stmt.toks.1 {
            if is_name(t) {
                rejected.insert(fe.text(t).to_string());
            }
            t += 1;
        }

        for &d in &all {
            let s = &fe.stmts[d];
            let (a, b) = s.toks;
            match s.kind {
                StmtKind::Global => {
                    for t in a..b {
                        if is_name(t) {
                            rejected.insert(fe.text(t).to_string());
                        }
                    }
                }
                StmtKind::Import => {
                    for t in a..b {
                        if is_name(t) {
                            rejected.insert(fe.text(t).to_string());
                        }
                    }
                }
                _ => {}
            }
            for t in a..b {
                if fe.toks[t].kind == Kind::Str && fe.toks[t].fstring {
                    for word in words(&fe.src[fe.toks[t].start..fe.toks[t].end]) {
                        rejected.insert(word.to_string());
                    }
                }
                if is_name(t) && fe.is_op(t + 1, ":=") {
                    bound.push((fe.text(t).to_string(), t));
                }
            }
        }

        for &d in &own {
            let s = &fe.stmts[d];
            let (a, b) = s.toks;
            match s.kind {
                StmtKind::Def => {
                    let kw = (a..b).find(|&t| fe.is_kw(t, "def")).expect("def");
                    bound.push((fe.text(kw + 1).to_string(), kw + 1));
                }
                StmtKind::For => {
                    let start = if fe.is_kw(a, "async") { a + 2 } else { a + 1 };
                    let mut t = start;
                    while t < b && !fe.is_kw(t, "in") {
                        if is_name(t) && !after_dot(t) {
                            bound.push((fe.text(t).to_string(), t));
                        }
                        t += 1;
                    }
                }
                _ => {}
            }
            // `with ... as x`, `except E as x`
            if matches!(fe.text(a), "with" | "except") || (fe.text(a) == "async" && fe.is_kw(a + 1, "with")) {
                for t in a..b {
                    if fe.is_kw(t, "as") && t + 1 < b && is_name(t + 1) {
                        bound.push((fe.text(t + 1).to_string(), t + 1));
                    }
                }
            }
            // Assignment targets at depth 0 before the last top-level `=`.
            if s.kind == StmtKind::Other {
                let mut depth = 0;
                let mut last_eq = None;
                let mut aug = None;
                for t in a..b {
                    if fe.toks[t].kind == Kind::Op {
                        match fe.text(t) {
                            "(" | "[" | "{" => depth += 1,
                            ")" | "]" | "}" => depth -= 1,
                            "=" if depth == 0 => last_eq = Some(t),
                            "+=" | "-=" | "*=" | "/=" | "//=" | "%=" | "**=" | "&=" | "|=" | "^=" | ">>="
                            | "<<=" | "@="
                                if depth == 0 && aug.is_none() =>
                            {
                                aug = Some(t)
                            }
                            _ => {}
                        }
                    }
                }
                let annotated = is_name(a) && fe.is_op(a + 1, ":");
                let target_end = last_eq.or(aug).or(annotated.then_some(a + 1));
                if let Some(end) = target_end {
                    let mut depth = 0;
                    for t in a..end {
                        if fe.toks[t].kind == Kind::Op {
                            match fe.text(t) {
                                "(" | "[" | "{" => depth += 1,
                                ")" | "]" | "}" => depth -= 1,
                                _ => {}
                            }
                        }
                        if depth == 0 && is_name(t) && !after_dot(t) {
                            let followed = fe.is_op(t + 1, ".") || fe.is_op(t + 1, "[") || fe.is_op(t + 1, "(");
                            if !followed {
                                bound.push((fe.text(t).to_string(), t));
                            }
                        }
                    }
                }
            }
        }

        let mut seen = HashSet::new();
        for (name, decl_tok) in bound {
            if !seen.insert(name.clone()) {
                continue;
            }
            if rejected.contains(&name)
                || kwarg_names.contains(name.as_str())
                || name == fn_name
                || name == "self"
                || name == "cls"
                || name.starts_with('_')
                || KEYWORDS.contains(&name.as_str())
            {
                continue;
            }
            let occurrences: Vec<ByteSpan> = (span_start..span_end)
                .filter(|&t| t != fn_name_tok && is_name(t) && !after_dot(t) && fe.text(t) == name)
                .map(|t| ByteSpan::new(fe.toks[t].start, fe.toks[t].end))
                .collect();
            let decl = &fe.toks[decl_tok];
            entries.push(IdentifierEntry {
                name,
                declaration_line: decl.line,
                declaration: ByteSpan::new(decl.start, decl.end),
                occurrences,
                scope: ScopeId::Function(fn_idx),
            });
        }
    }

    // Module-level functions that are only ever called directly.
    let module_bindings: HashMap<&str, usize> = {
        let mut counts = HashMap::new();
        for &r in &fe.roots {
            let s = &fe.stmts[r];
            let (a, b) = s.toks;
            let mut names = Vec::new();
            match s.kind {
                StmtKind::Def | StmtKind::Class => {
                    if let Some(kw) = (a..b).find(|&t| fe.is_kw(t, "def") || fe.is_kw(t, "class")) {
                        names.push(fe.text(kw + 1));
                    }
                }
                _ => {
                    for t in a..b {
                        if is_name(t) && !after_dot(t) && (fe.is_op(t + 1, "=") || fe.is_op(t + 1, ",")) {
                            names.push(fe.text(t));
                        }
                        if s.kind == StmtKind::Import && is_name(t) {
                            names.push(fe.text(t));
                        }
                    }
                }
            }
            for n in names {
                *counts.entry(n).or_insert(0) += 1;
            }
        }
        counts
    };
    let globals: HashSet<&str> = fe
        .stmts
        .iter()
        .filter(|s| s.kind == StmtKind::Global)
        .flat_map(|s| (s.toks.0..s.toks.1).filter(|&t| is_name(t)).map(|t| fe.text(t)))
        .collect();
    for &r in &fe.roots {
        let s = &fe.stmts[r];
        if s.kind != StmtKind::Def {
            continue;
        }
        let kw = (s.toks.0..s.toks.1).find(|&t| fe.is_kw(t, "def")).expect("def");
        let name_tok = kw + 1;
        let name = fe.text(name_tok);
        if name.starts_with('_')
            || module_bindings.get(name).copied().unwrap_or(0) != 1
            || kwarg_names.contains(name)
            || globals.contains(name)
        {
            continue;
        }
        let uses: Vec<usize> = (0..fe.toks.len())
            .filter(|&t| is_name(t) && !after_dot(t) && fe.text(t) == name)
            .collect();
        if !uses.iter().all(|&t| t == name_tok || fe.is_op(t + 1, "(")) {
            continue;
        }
        let in_fstring = fe
            .toks
            .iter()
            .any(|t| t.kind == Kind::Str && t.fstring && words(&fe.src[t.start..t.end]).any(|w| w == name));
        if in_fstring {
            continue;
        }
        let decl = &fe.toks[name_tok];
        entries.push(IdentifierEntry {
            name: name.to_string(),
            declaration_line: decl.line,
            declaration: ByteSpan::new(decl.start, decl.end),
            occurrences: uses
                .iter()
                .map(|&t| ByteSpan::new(fe.toks[t].start, fe.toks[t].end))
                .collect(),
            scope: ScopeId::Module,
        });
    }

    entries.sort_by(|a, b| (a.declaration.start, &a.name).cmp(&(b.declaration.start, &b.name)));
    entries
}

fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !is_ident_continue(c)).filter(|w| !w.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(src: &str) -> SyntaxIndex {
        parse(src).unwrap_or_else(|e| panic!("{e}"))
    }

    #[test]
    fn rejects_broken_programs() {
        assert!(parse("def f(:\n    pass\n").is_err());
        assert!(parse("x = (1,\n").is_err());
        assert!(parse("if x:\npass\n").is_err());
        assert!(parse("x = 1\n    y = 2\n").is_err());
        assert!(parse("s = 'abc\n").is_err());
        assert!(parse("else:\n    pass\n").is_err());
        assert!(parse("x = 1 $ 2\n").is_err());
    }

    #[test]
    fn accepts_common_constructs() {
        let src = "import os\n\nclass A:\n    '''doc'''\n    def m(self, x=1, *a, **k) -> int:\n        s = f\"{x}\"\n        return x\n\n\ndef g(n):\n    total = 0\n    for i in range(n):\n        if i % 2 == 0 and i > 1:\n            total += i\n        else:\n            total -= 1\n    return [j * 2 for j in range(3)], total\n\nprint(g(10))\n";
        let index = idx(src);
        assert_eq!(index.function_spans.len(), 2);
        assert_eq!(index.loop_sites.len(), 1);
        assert_eq!(index.loop_sites[0].line, 12);
        assert!(index.boolean_op_sites.iter().any(|s| s.token == "and"));
    }

    #[test]
    fn empty_function_body() {
        let index = idx("def f():\n    pass\n");
        assert!(index.loop_sites.is_empty());
        assert!(!index.statement_boundaries.is_empty());
    }

    #[test]
    fn unary_operators_are_not_sites() {
        let index = idx("x = -1\ny = x - 1\nz = f(*args)\nw = 'a' + 'b'\n");
        let tokens: Vec<_> = index.arith_op_sites.iter().map(|s| (s.line, s.token.as_str())).collect();
        assert_eq!(tokens, vec![(2, "-")]);
    }

    #[test]
    fn rename_candidates_are_scoped() {
        let src = "def f(count, step):\n    result = count * step\n    print(count, sep=' ')\n    return result\n\nresult = f(2, 3)\n";
        let index = idx(src);
        let names: Vec<_> = index.identifier_table.iter().map(|e| e.name.as_str()).collect();
        assert!(names.contains(&"count"));
        assert!(names.contains(&"step"));
        // `f` is only called directly, so it can be renamed at module scope.
        assert!(names.contains(&"f"));
        let result = index
            .identifier_table
            .iter()
            .find(|e| e.name == "result")
            .expect("local result");
        assert_eq!(result.occurrences.len(), 2);
        for entry in &index.identifier_table {
            for occ in &entry.occurrences {
                assert_eq!(occ.slice(src), entry.name);
            }
        }
    }

    #[test]
    fn keyword_arguments_block_renames() {
        let src = "def f(key):\n    return key\n\nprint(f(key=1))\n";
        let index = idx(src);
        assert!(index.identifier_table.iter().all(|e| e.name != "key"));
    }

    #[test]
    fn reflection_disables_renaming() {
        let src = "def f(a):\n    return locals()\n";
        assert!(idx(src).identifier_table.is_empty());
    }
}
