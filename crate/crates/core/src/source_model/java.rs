//! Java frontend: a tokenizer and a brace-frame walker.
//!
//! The walker classifies every `{` (class body, method body, statement block,
//! lambda, switch, initializer) and derives sites from that classification.

use std::collections::{BTreeSet, HashSet};

use super::index::*;
use super::text::LineMap;
use super::ParseError;
use crate::language::SubjectLanguage;

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double"];

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "synchronized", "native", "default",
    "strictfp", "transient", "volatile",
];

const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "?", ":",
    ";", ",", ".", "@", "&", "|", "^", "(", ")", "{", "}", "[", "]",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ident,
    Keyword,
    Number,
    Str,
    Char,
    Op,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    start: usize,
    end: usize,
    line: usize,
}

struct Comment {
    start: usize,
    end: usize,
    line: usize,
    end_line: usize,
    block: bool,
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

fn lex(src: &str, map: &LineMap) -> Result<(Vec<Tok>, Vec<Comment>), ParseError> {
    let bytes = src.as_bytes();
    let err = |offset: usize, message: String| {
        let (line, column) = map.position(offset);
        ParseError { line, column, message }
    };
    let mut toks = Vec::new();
    let mut comments = Vec::new();
    let mut brackets: Vec<(u8, usize)> = Vec::new();
    let mut i = 0;
    let push = |toks: &mut Vec<Tok>, kind, start, end| {
        toks.push(Tok {
            kind,
            start,
            end,
            line: map.line_of(start),
        })
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if src[i..].starts_with("//") {
            let end = src[i..].find('\n').map_or(src.len(), |p| i + p);
            let end = if end > i && bytes[end - 1] == b'\r' { end - 1 } else { end };
            comments.push(Comment {
                start: i,
                end,
                line: map.line_of(i),
                end_line: map.line_of(i),
                block: false,
            });
            i = end;
            continue;
        }
        if src[i..].starts_with("/*") {
            let Some(p) = src[i + 2..].find("*/") else {
                return Err(err(i, "unterminated comment".into()));
            };
            let end = i + 2 + p + 2;
            comments.push(Comment {
                start: i,
                end,
                line: map.line_of(i),
                end_line: map.line_of(end - 1),
                block: true,
            });
            i = end;
            continue;
        }
        if src[i..].starts_with("\"\"\"") {
            let mut j = i + 3;
            loop {
                if j >= bytes.len() {
                    return Err(err(i, "unterminated text block".into()));
                }
                if bytes[j] == b'\\' {
                    j += 2;
                } else if src[j..].starts_with("\"\"\"") {
                    j += 3;
                    break;
                } else {
                    j += 1;
                }
            }
            push(&mut toks, Kind::Str, i, j);
            i = j;
            continue;
        }
        if c == b'"' || c == b'\'' {
            let mut j = i + 1;
            loop {
                if j >= bytes.len() || bytes[j] == b'\n' {
                    return Err(err(i, "unterminated literal".into()));
                }
                if bytes[j] == b'\\' {
                    j += 2;
                } else if bytes[j] == c {
                    j += 1;
                    break;
                } else {
                    j += 1;
                }
            }
            push(&mut toks, if c == b'"' { Kind::Str } else { Kind::Char }, i, j);
            i = j;
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            let hex = c == b'0' && matches!(bytes.get(i + 1), Some(b'x') | Some(b'X'));
            let mut j = i;
            while j < bytes.len() {
                let d = bytes[j];
                let sign = (d == b'+' || d == b'-') && !hex && matches!(bytes[j - 1], b'e' | b'E');
                if d.is_ascii_alphanumeric() || d == b'_' || d == b'.' || sign {
                    j += 1;
                } else {
                    break;
                }
            }
            push(&mut toks, Kind::Number, i, j);
            i = j;
            continue;
        }
        let ch = src[i..].chars().next().expect("in bounds");
        if is_ident_start(ch) {
            let mut j = i + ch.len_utf8();
            while let Some(n) = src[j..].chars().next() {
                if !is_ident_continue(n) {
                    break;
                }
                j += n.len_utf8();
            }
            let kind = if KEYWORDS.contains(&&src[i..j]) { Kind::Keyword } else { Kind::Ident };
            push(&mut toks, kind, i, j);
            i = j;
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
        push(&mut toks, Kind::Op, i, i + op.len());
        i += op.len();
    }
    if let Some((open, at)) = brackets.pop() {
        return Err(err(at, format!("`{}` is never closed", open as char)));
    }
    Ok((toks, comments))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FrameKind {
    Paren,
    ClassBody(usize),
    /// Method or constructor body; holds the function index.
    Method(usize),
    Block,
    Lambda,
    Switch,
    Initializer,
    ArrayInit,
}

#[derive(Debug, Clone)]
struct Frame {
    kind: FrameKind,
    /// Inside a lambda, anonymous class, local class or switch.
    opaque: bool,
    /// The enclosing method, if any.
    method: Option<usize>,
    /// First token of the most recent statement or member in this frame.
    last_start: Option<usize>,
    /// Token after which the current class member began.
    member_start: usize,
    do_block: bool,
}

struct MethodInfo {
    function: usize,
    header_start: usize,
    params: (usize, usize),
    body_open: usize,
    body_close: usize,
    return_statement: Option<String>,
    opaque: bool,
    has_local_class: bool,
}

struct Java<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    /// Indices of `<`/`>`/`>>`/`>>>` tokens that belong to type arguments.
    generic: HashSet<usize>,
}

impl<'a> Java<'a> {
    fn text(&self, t: usize) -> &'a str {
        &self.src[self.toks[t].start..self.toks[t].end]
    }

    fn is_op(&self, t: usize, op: &str) -> bool {
        self.toks.get(t).is_some_and(|k| k.kind == Kind::Op && self.text(t) == op)
    }

    fn is_kw(&self, t: usize, kw: &str) -> bool {
        self.toks.get(t).is_some_and(|k| k.kind == Kind::Keyword && self.text(t) == kw)
    }

    fn is_ident(&self, t: usize) -> bool {
        self.toks.get(t).is_some_and(|k| k.kind == Kind::Ident)
    }

    fn first_on_line(&self, t: usize) -> bool {
        t == 0 || self.toks[t - 1].line < self.toks[t].line
    }

    fn matching_open(&self, close: usize) -> Option<usize> {
        let (open, shut) = match self.text(close) {
            ")" => ("(", ")"),
            "]" => ("[", "]"),
            "}" => ("{", "}"),
            _ => return None,
        };
        let mut depth = 0;
        for t in (0..=close).rev() {
            if self.is_op(t, shut) {
                depth += 1;
            } else if self.is_op(t, open) {
                depth -= 1;
                if depth == 0 {
                    return Some(t);
                }
            }
        }
        None
    }

    fn matching_close(&self, open: usize) -> Option<usize> {
        let (open_s, shut) = match self.text(open) {
            "(" => ("(", ")"),
            "[" => ("[", "]"),
            "{" => ("{", "}"),
            _ => return None,
        };
        let mut depth = 0;
        for t in open..self.toks.len() {
            if self.is_op(t, open_s) {
                depth += 1;
            } else if self.is_op(t, shut) {
                depth -= 1;
                if depth == 0 {
                    return Some(t);
                }
            }
        }
        None
    }
}

/// Marks angle brackets that open and close type-argument lists.
fn find_generics(j: &Java) -> HashSet<usize> {
    let mut out = HashSet::new();
    for t in 0..j.toks.len() {
        if !j.is_op(t, "<") || t == 0 || out.contains(&t) {
            continue;
        }
        let prev_ok = {
            let p = t - 1;
            let pt = j.text(p);
            (j.is_ident(p) && pt.chars().next().is_some_and(|c| c.is_uppercase()))
                || j.is_op(p, ".")
                || (j.toks[p].kind == Kind::Keyword && MODIFIERS.contains(&pt))
                || j.is_op(p, "{")
                || j.is_op(p, "}")
                || j.is_op(p, ";")
        };
        if !prev_ok {
            continue;
        }
        let mut depth = 0i32;
        let mut members = Vec::new();
        let mut closed = false;
        for u in t..j.toks.len() {
            let text = j.text(u);
            let tok = &j.toks[u];
            let allowed = match tok.kind {
                Kind::Ident => true,
                Kind::Keyword => matches!(text, "extends" | "super") || PRIMITIVES.contains(&text),
                Kind::Op => matches!(text, "<" | ">" | ">>" | ">>>" | "." | "," | "?" | "[" | "]" | "&" | "@"),
                _ => false,
            };
            if !allowed {
                break;
            }
            match text {
                "<" if tok.kind == Kind::Op => {
                    depth += 1;
                    members.push(u);
                }
                ">" | ">>" | ">>>" if tok.kind == Kind::Op => {
                    depth -= text.len() as i32;
                    members.push(u);
                    if depth <= 0 {
                        closed = depth == 0;
                        break;
                    }
                }
                _ => {}
            }
        }
        if closed {
            out.extend(members);
        }
    }
    out
}

fn return_for(j: &Java, name_tok: usize, header_start: usize, is_ctor: bool) -> Option<String> {
    if is_ctor {
        return None;
    }
    let before = name_tok.checked_sub(1).filter(|&p| p >= header_start)?;
    let value = match j.text(before) {
        "void" => return Some("if (true) return;".into()),
        "boolean" => "false",
        "int" | "long" | "short" | "byte" | "char" | "double" | "float" => "0",
        _ => "null",
    };
    Some(format!("if (true) return {value};"))
}

pub fn parse(src: &str) -> Result<SyntaxIndex, ParseError> {
    let map = LineMap::new(src);
    let (toks, comments) = lex(src, &map)?;
    let mut j = Java {
        src,
        toks,
        generic: HashSet::new(),
    };
    j.generic = find_generics(&j);
    let (lines, _) = super::text::split_lines(src);

    let mut frames: Vec<Frame> = vec![Frame {
        kind: FrameKind::Block,
        opaque: true,
        method: None,
        last_start: None,
        member_start: 0,
        do_block: false,
    }];
    let top_level = |frames: &Vec<Frame>| frames.len() == 1;

    let mut classes: Vec<String> = Vec::new();
    let mut pending_class: Option<String> = None;
    let mut functions: Vec<FunctionSpan> = Vec::new();
    let mut methods: Vec<MethodInfo> = Vec::new();
    let mut points: Vec<InsertionPoint> = Vec::new();
    let mut last_closed_do = false;

    for t in 0..j.toks.len() {
        let text = j.text(t);
        let kind = j.toks[t].kind;
        let frame = frames.last().expect("root frame").clone();

        // Statement / member boundaries.
        let prev_boundary = t == 0 || j.is_op(t - 1, "{") || j.is_op(t - 1, ";") || j.is_op(t - 1, "}");
        let in_paren = frame.kind == FrameKind::Paren;
        if prev_boundary && !in_paren && !matches!(frame.kind, FrameKind::ArrayInit) {
            let continuation = matches!(text, "else" | "catch" | "finally")
                || (text == "while" && j.is_op(t - 1, "}") && last_closed_do)
                || (text == ")" || text == "}" || text == "," || text == ";" || text == ".")
                || ((text == "super" || text == "this") && j.is_op(t + 1, "("));
            let code_frame = matches!(frame.kind, FrameKind::Method(_) | FrameKind::Block) && !frame.opaque;
            if !continuation && j.first_on_line(t) {
                let line = j.toks[t].line;
                let indent = super::text::indentation(lines[line - 1]).to_string();
                if code_frame {
                    let terminal = frame.last_start.is_some_and(|s| {
                        matches!(j.text(s), "return" | "throw" | "break" | "continue")
                    }) && j.is_op(t - 1, ";");
                    let m = frame.method.map(|m| &methods[m]);
                    points.push(InsertionPoint {
                        line,
                        indent,
                        scope: ScopeKind::Function,
                        function: m.map(|m| m.function),
                        return_statement: if terminal { None } else { m.and_then(|m| m.return_statement.clone()) },
                        accepts_code: !terminal,
                    });
                } else if matches!(frame.kind, FrameKind::ClassBody(_)) && !frame.opaque {
                    points.push(InsertionPoint {
                        line,
                        indent,
                        scope: ScopeKind::ClassBody,
                        function: None,
                        return_statement: None,
                        accepts_code: false,
                    });
                } else if top_level(&frames) {
                    points.push(InsertionPoint {
                        line,
                        indent,
                        scope: ScopeKind::Module,
                        function: None,
                        return_statement: None,
                        accepts_code: false,
                    });
                }
            }
            if !continuation {
                let f = frames.last_mut().expect("root frame");
                f.last_start = Some(t);
                if matches!(f.kind, FrameKind::ClassBody(_)) || frames.len() == 1 {
                    frames.last_mut().expect("root").member_start = t;
                }
            }
        }

        if kind == Kind::Keyword && matches!(text, "class" | "interface" | "enum") && !j.is_op(t.wrapping_sub(1), ".")
        {
            if j.is_ident(t + 1) {
                pending_class = Some(j.text(t + 1).to_string());
            }
        } else if kind == Kind::Ident
            && text == "record"
            && j.is_ident(t + 1)
            && (j.is_op(t + 2, "(") || j.is_op(t + 2, "<"))
        {
            pending_class = Some(j.text(t + 1).to_string());
        }

        if kind != Kind::Op {
            continue;
        }
        match text {
            "(" | "[" => frames.push(Frame {
                kind: FrameKind::Paren,
                opaque: frame.opaque,
                method: frame.method,
                last_start: None,
                member_start: t,
                do_block: false,
            }),
            ")" | "]" => {
                frames.pop();
            }
            "}" => {
                let closed = frames.pop().expect("balanced");
                last_closed_do = closed.do_block;
                if let FrameKind::Method(m) = closed.kind {
                    methods[m].body_close = t;
                    let f = methods[m].function;
                    functions[f].end_line = j.toks[t].line;
                }
            }
            "{" => {
                let prev = t.checked_sub(1);
                let prev_text = prev.map(|p| j.text(p)).unwrap_or("");
                let in_class_body = matches!(frame.kind, FrameKind::ClassBody(_)) || top_level(&frames);
                let push = |frames: &mut Vec<Frame>, kind: FrameKind, opaque: bool, method: Option<usize>| {
                    frames.push(Frame {
                        kind,
                        opaque,
                        method,
                        last_start: None,
                        member_start: t + 1,
                        do_block: prev_text == "do",
                    })
                };
                if let Some(name) = pending_class.take() {
                    let id = classes.len();
                    classes.push(name);
                    let local = !in_class_body || (frame.opaque && !top_level(&frames));
                    if local {
                        if let Some(m) = frame.method {
                            methods[m].has_local_class = true;
                        }
                    }
                    push(&mut frames, FrameKind::ClassBody(id), local, None);
                    continue;
                }
                if in_class_body {
                    let member_start = frame.member_start;
                    match method_header(&j, member_start, t) {
                        Some((name_tok, params)) => {
                            let class_id = match frame.kind {
                                FrameKind::ClassBody(c) => Some(c),
                                _ => None,
                            };
                            let is_ctor = class_id.is_some_and(|c| classes[c] == j.text(name_tok));
                            let header_start = member_start;
                            let mut block_start = j.toks[header_start].line;
                            while block_start > 1 {
                                let above = block_start - 1;
                                let comment_only = comments.iter().any(|c| {
                                    c.line <= above && c.end_line >= above && {
                                        let l = lines[above - 1].trim();
                                        !l.is_empty()
                                    }
                                }) && !j.toks.iter().any(|k| k.line == above);
                                if comment_only {
                                    block_start = above;
                                } else {
                                    break;
                                }
                            }
                            let fidx = functions.len();
                            functions.push(FunctionSpan {
                                name: j.text(name_tok).to_string(),
                                start_line: j.toks[name_tok].line,
                                end_line: j.toks[t].line,
                                block_start_line: block_start,
                                body_points: Vec::new(),
                                class_id: if frame.opaque { None } else { class_id },
                                movable: false,
                            });
                            let midx = methods.len();
                            methods.push(MethodInfo {
                                function: fidx,
                                header_start,
                                params,
                                body_open: t,
                                body_close: t,
                                return_statement: return_for(&j, name_tok, header_start, is_ctor),
                                opaque: frame.opaque,
                                has_local_class: false,
                            });
                            push(&mut frames, FrameKind::Method(midx), frame.opaque, Some(midx));
                        }
                        None => {
                            let only_modifiers = (member_start..t).all(|u| j.is_kw(u, "static"));
                            let kind = if only_modifiers { FrameKind::Initializer } else { FrameKind::ArrayInit };
                            push(&mut frames, kind, true, frame.method);
                        }
                    }
                    continue;
                }
                // Code context.
                if prev_text == "->" {
                    push(&mut frames, FrameKind::Lambda, true, frame.method);
                } else if matches!(prev_text, "=" | "]" | ",")
                    || frame.kind == FrameKind::ArrayInit
                    || (frame.kind == FrameKind::Paren && prev_text != ")")
                {
                    push(&mut frames, FrameKind::ArrayInit, true, frame.method);
                } else if prev_text == ")" {
                    let open = prev.and_then(|p| j.matching_open(p)).unwrap_or(0);
                    if open > 0 && j.is_kw(open - 1, "switch") {
                        push(&mut frames, FrameKind::Switch, true, frame.method);
                    } else if is_anonymous_class(&j, open) {
                        if let Some(m) = frame.method {
                            methods[m].has_local_class = true;
                        }
                        let id = classes.len();
                        classes.push(String::new());
                        push(&mut frames, FrameKind::ClassBody(id), true, None);
                    } else {
                        push(&mut frames, FrameKind::Block, frame.opaque, frame.method);
                    }
                } else {
                    push(&mut frames, FrameKind::Block, frame.opaque, frame.method);
                }
            }
            _ => {}
        }
    }

    points.sort_by_key(|p| p.line);
    points.dedup_by_key(|p| p.line);
    for (i, p) in points.iter().enumerate() {
        if let Some(f) = p.function {
            functions[f].body_points.push(i);
        }
    }
    for m in &methods {
        let f = &mut functions[m.function];
        let first = m.header_start;
        let close = m.body_close;
        let own_first_line = first == 0 || j.toks[first - 1].line < j.toks[first].line;
        let own_last_line = close + 1 >= j.toks.len() || j.toks[close + 1].line > j.toks[close].line;
        f.movable = !m.opaque && own_first_line && own_last_line && f.class_id.is_some();
    }

    let (loop_sites, boolean_op_sites, arith_op_sites) = operator_sites(&j);
    let comment_spans = comments
        .iter()
        .map(|c| {
            let line_text = lines[c.line - 1];
            CommentSpan {
                line: c.line,
                span: ByteSpan::new(c.start, c.end),
                style: if c.block { CommentStyle::Block } else { CommentStyle::Line },
                full_line: line_text.trim() == &src[c.start..c.end],
                replaceable: c.line == c.end_line,
            }
        })
        .collect();
    let names_in_use: BTreeSet<String> = j
        .toks
        .iter()
        .filter(|k| matches!(k.kind, Kind::Ident | Kind::Keyword))
        .map(|k| src[k.start..k.end].to_string())
        .collect();
    let identifier_table = identifier_table(&j, &methods);

    Ok(SyntaxIndex {
        language: SubjectLanguage::Java,
        line_count: lines.len(),
        loop_sites,
        boolean_op_sites,
        arith_op_sites,
        statement_boundaries: points,
        function_spans: functions,
        comment_spans,
        identifier_table,
        names_in_use,
        indent_unit: indent_unit(&lines),
    })
}

fn indent_unit(lines: &[&str]) -> String {
    if lines.iter().any(|l| l.starts_with('\t')) {
        return "\t".into();
    }
    let widths: BTreeSet<usize> = lines
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| super::text::indentation(l).len())
        .filter(|&w| w > 0)
        .collect();
    " ".repeat(widths.first().copied().unwrap_or(4))
}

/// Recognizes `... name(params) [throws X, Y] {` and returns the name token
/// and the parameter-list token range (exclusive of the parentheses).
fn method_header(j: &Java, member_start: usize, brace: usize) -> Option<(usize, (usize, usize))> {
    let mut t = brace.checked_sub(1)?;
    // Skip a throws clause.
    let mut u = t;
    while u > member_start && (j.is_ident(u) || j.is_op(u, ".") || j.is_op(u, ",")) {
        u -= 1;
    }
    if j.is_kw(u, "throws") {
        t = u.checked_sub(1)?;
    }
    if !j.is_op(t, ")") {
        return None;
    }
    let open = j.matching_open(t)?;
    if open <= member_start {
        return None;
    }
    let name = open - 1;
    if !j.is_ident(name) {
        return None;
    }
    // A header never contains `=` at its own level (that would be a field initializer).
    if (member_start..name).any(|u| j.is_op(u, "=")) {
        return None;
    }
    Some((name, (open + 1, t)))
}

fn is_anonymous_class(j: &Java, open_paren: usize) -> bool {
    let mut t = open_paren;
    while t > 0 {
        t -= 1;
        let text = j.text(t);
        if j.is_kw(t, "new") {
            return true;
        }
        let type_like = j.is_ident(t) || text == "." || j.generic.contains(&t) || (j.toks[t].kind == Kind::Op && text == ",");
        if !type_like {
            return false;
        }
    }
    false
}

fn operator_sites(j: &Java) -> (Vec<LoopSite>, Vec<OperatorSite>, Vec<OperatorSite>) {
    let mut loops = Vec::new();
    let mut booleans = Vec::new();
    let mut ariths = Vec::new();

    let string_lines: HashSet<usize> = j
        .toks
        .iter()
        .filter(|k| matches!(k.kind, Kind::Str | Kind::Char))
        .map(|k| k.line)
        .collect();
    // Variables declared as strings make `+` a concatenation.
    let string_names: HashSet<&str> = (1..j.toks.len())
        .filter(|&t| j.is_ident(t) && j.text(t - 1) == "String")
        .map(|t| j.text(t))
        .collect();
    // Annotation argument lists and import/package declarations are not code.
    let mut skip = HashSet::new();
    for t in 0..j.toks.len() {
        if j.is_op(t, "@") && j.is_ident(t + 1) {
            let mut u = t + 1;
            while j.is_ident(u) || j.is_op(u, ".") {
                u += 1;
            }
            if j.is_op(u, "(") {
                if let Some(c) = j.matching_close(u) {
                    skip.extend(u..=c);
                }
            }
        }
        if j.is_kw(t, "import") || j.is_kw(t, "package") {
            let mut u = t;
            while u < j.toks.len() && !j.is_op(u, ";") {
                skip.insert(u);
                u += 1;
            }
        }
    }

    for t in 0..j.toks.len() {
        let tok = &j.toks[t];
        if tok.kind == Kind::Keyword && j.text(t) == "for" && j.is_op(t + 1, "(") {
            if let Some(site) = for_site(j, t + 1) {
                loops.push(site);
            }
        }
        if tok.kind != Kind::Op || skip.contains(&t) || j.generic.contains(&t) {
            continue;
        }
        let text = j.text(t);
        let site = || OperatorSite {
            line: tok.line,
            span: ByteSpan::new(tok.start, tok.end),
            token: text.to_string(),
        };
        let prev_operand = t > 0
            && match j.toks[t - 1].kind {
                Kind::Ident | Kind::Number | Kind::Str | Kind::Char => true,
                Kind::Keyword => matches!(j.text(t - 1), "true" | "false" | "null" | "this"),
                Kind::Op => matches!(j.text(t - 1), ")" | "]" | "++" | "--"),
            };
        match text {
            "&&" | "||" | "==" | "!=" | "<" | "<=" | ">" | ">=" => booleans.push(site()),
            "+" | "-" | "*" | "/" | "%" => {
                let adjacent_string = [t.wrapping_sub(1), t + 1]
                    .iter()
                    .any(|&u| j.toks.get(u).is_some_and(|k| matches!(k.kind, Kind::Str | Kind::Char)));
                let string_operand = [t.wrapping_sub(1), t + 1]
                    .iter()
                    .any(|&u| j.is_ident(u) && string_names.contains(j.text(u)));
                let string_line = text == "+" && (string_lines.contains(&tok.line) || string_operand);
                if prev_operand && !adjacent_string && !string_line {
                    ariths.push(site());
                }
            }
            _ => {}
        }
    }
    (loops, booleans, ariths)
}

/// Classic `for (init; cond; update)` with a single relational condition.
fn for_site(j: &Java, open: usize) -> Option<LoopSite> {
    let close = j.matching_close(open)?;
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut start = open + 1;
    for t in open + 1..close {
        if j.toks[t].kind == Kind::Op {
            match j.text(t) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                ";" if depth == 0 => {
                    parts.push((start, t));
                    start = t + 1;
                }
                _ => {}
            }
        }
    }
    parts.push((start, close));
    if parts.len() != 3 {
        return None;
    }
    let (cs, ce) = parts[1];
    let mut rel = None;
    let mut depth = 0;
    for t in cs..ce {
        if j.toks[t].kind != Kind::Op {
            continue;
        }
        match j.text(t) {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            "<" | "<=" | ">" | ">=" if depth == 0 && !j.generic.contains(&t) => {
                if rel.is_some() {
                    return None;
                }
                rel = Some(t);
            }
            "&&" | "||" | "?" => return None,
            _ => {}
        }
    }
    let rel = rel?;
    let bound = |s: usize, e: usize| {
        (s < e && j.toks[s].line == j.toks[e - 1].line).then(|| LoopBound {
            line: j.toks[s].line,
            span: ByteSpan::new(j.toks[s].start, j.toks[e - 1].end),
        })
    };
    let upper = bound(rel + 1, ce);
    let (is, ie) = parts[0];
    let eqs: Vec<usize> = (is..ie).filter(|&t| j.is_op(t, "=")).collect();
    let commas = (is..ie).any(|t| j.is_op(t, ","));
    let lower = if eqs.len() == 1 && !commas { bound(eqs[0] + 1, ie) } else { None };
    let line = upper.as_ref().or(lower.as_ref())?.line;
    Some(LoopSite { line, upper, lower })
}

fn is_type_end(j: &Java, t: usize) -> bool {
    match j.toks[t].kind {
        Kind::Ident => true,
        Kind::Keyword => PRIMITIVES.contains(&j.text(t)),
        Kind::Op => {
            (j.generic.contains(&t) && j.text(t) != "<") || (j.text(t) == "]" && t > 0 && j.is_op(t - 1, "["))
        }
        _ => false,
    }
}

fn identifier_table(j: &Java, methods: &[MethodInfo]) -> Vec<IdentifierEntry> {
    let mut entries = Vec::new();
    for m in methods {
        if m.opaque || m.has_local_class {
            continue;
        }
        let is_decl = |t: usize| {
            j.is_ident(t)
                && t > 0
                && is_type_end(j, t - 1)
                && !j.is_op(t.wrapping_sub(2), ".")
                && matches!(j.text(t + 1), "=" | ";" | "," | ":" | ")")
                && j.toks[t + 1].kind == Kind::Op
        };
        let mut decls: Vec<usize> = Vec::new();
        // Parameters: last identifier of each top-level comma group.
        let (ps, pe) = m.params;
        let mut depth = 0;
        let mut group_last = None;
        for t in ps..pe {
            match j.text(t) {
                "(" | "<" | "[" if j.toks[t].kind == Kind::Op => depth += 1,
                ")" | ">" | "]" if j.toks[t].kind == Kind::Op => depth -= 1,
                ">>" => depth -= 2,
                ">>>" => depth -= 3,
                "," if depth == 0 => {
                    if let Some(g) = group_last.take() {
                        decls.push(g);
                    }
                }
                _ => {}
            }
            if depth == 0 && j.is_ident(t) {
                group_last = Some(t);
            }
        }
        if let Some(g) = group_last {
            decls.push(g);
        }
        for t in m.body_open + 1..m.body_close {
            if is_decl(t) {
                decls.push(t);
            }
        }

        let usable = |t: usize| j.is_ident(t) && !j.is_op(t - 1, ".") && !j.is_op(t + 1, "(") && !j.is_op(t + 1, ".");
        let mut seen = HashSet::new();
        for d in decls {
            let name = j.text(d);
            if !seen.insert(name) {
                continue;
            }
            let occ: Vec<usize> = (ps..m.body_close).filter(|&t| usable(t) && j.text(t) == name).collect();
            if occ.first() != Some(&d) {
                continue;
            }
            // Used as a qualifier (`name.field`) is fine; used after a dot is a member.
            let member_use = (ps..m.body_close).any(|t| j.is_ident(t) && j.text(t) == name && j.is_op(t - 1, "."));
            if member_use {
                continue;
            }
            let occurrences = (ps..m.body_close)
                .filter(|&t| j.is_ident(t) && j.text(t) == name && !j.is_op(t - 1, ".") && !j.is_op(t + 1, "("))
                .map(|t| ByteSpan::new(j.toks[t].start, j.toks[t].end))
                .collect();
            entries.push(IdentifierEntry {
                name: name.to_string(),
                declaration_line: j.toks[d].line,
                declaration: ByteSpan::new(j.toks[d].start, j.toks[d].end),
                occurrences,
                scope: ScopeId::Function(m.function),
            });
        }
    }
    entries.sort_by(|a, b| (a.declaration.start, &a.name).cmp(&(b.declaration.start, &b.name)));
    entries
}
