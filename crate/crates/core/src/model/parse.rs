//! Readers and writers for the `.cbt` template and `.cbi` instance formats.

use std::fmt::Write as _;

use thiserror::Error;

use super::{CoBooleanFunction, Constraint, Element, Instance, ModelError, Template};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: ModelError },
    #[error("template has no `domain` line")]
    MissingDomain,
    #[error("instance has no constraints")]
    EmptyInstance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Int(&'a str),
    LParen,
    RParen,
    Assign,
    EqEq,
    Pin,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Pin => "`:=`".into(),
        }
    }
}

/// A token with its 1-based column.
type Spanned<'a> = (usize, Tok<'a>);

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn lex(line: &str, line_no: usize) -> Result<Vec<Spanned<'_>>, ParseError> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| ParseError::Syntax {
        line: line_no,
        column: col,
        message,
    };
    while i < bytes.len() {
        let c = bytes[i];
        let col = line[..i].chars().count() + 1;
        match c {
            b' ' | b'\t' | b'\r' => i += 1,
            b'(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            b'=' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((col, Tok::EqEq));
                i += 2;
            }
            b'=' => {
                out.push((col, Tok::Assign));
                i += 1;
            }
            b':' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((col, Tok::Pin));
                i += 2;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let text = &line[start..i];
                if !text.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err(col, format!("malformed number `{text}`")));
                }
                out.push((col, Tok::Int(text)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(&line[start..i])));
            }
            _ => {
                let ch = line[i..].chars().next().unwrap_or('?');
                return Err(err(col, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

/// Significant lines: comments removed, blank lines skipped.
fn significant(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

struct Cursor<'a> {
    toks: Vec<Spanned<'a>>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: Vec<Spanned<'a>>, line: usize, raw: &str) -> Self {
        Self {
            toks,
            pos: 0,
            line,
            end_col: raw.trim_end().chars().count() + 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let column = self.toks.get(self.pos).map_or(self.end_col, |t| t.0);
        ParseError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".into(), Tok::describe)
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok<'static>) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.found())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = *s;
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn int(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                let v = s
                    .parse::<usize>()
                    .map_err(|_| self.error(format!("{what} `{s}` is too large")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.error(format!("unexpected {}", self.found())))
        } else {
            Ok(())
        }
    }
}

/// Parses a `.cbt` template:
///
/// ```text
/// # comment
/// domain 3
/// fn e0 = 1 0 0
/// ```
pub fn parse_template(text: &str) -> Result<Template, ParseError> {
    let mut lines = significant(text);
    let (domain_line, raw) = lines.next().ok_or(ParseError::MissingDomain)?;
    let mut cur = Cursor::new(lex(raw, domain_line)?, domain_line, raw);
    match cur.peek() {
        Some(Tok::Ident("domain")) => cur.pos += 1,
        _ => return Err(cur.error(format!("expected `domain`, found {}", cur.found()))),
    }
    let size = cur.int("domain size")?;
    cur.finish()?;
    if size < 2 {
        return Err(ParseError::Invalid {
            line: domain_line,
            source: ModelError::DomainTooSmall(size),
        });
    }

    let mut functions: Vec<CoBooleanFunction> = Vec::new();
    for (line_no, raw) in lines {
        let mut cur = Cursor::new(lex(raw, line_no)?, line_no, raw);
        match cur.peek() {
            Some(Tok::Ident("fn")) => cur.pos += 1,
            _ => return Err(cur.error(format!("expected `fn`, found {}", cur.found()))),
        }
        let name = cur.ident("function name")?;
        cur.expect(Tok::Assign)?;
        let invalid = |source| ParseError::Invalid { line: line_no, source };
        let mut table = Vec::new();
        while cur.peek().is_some() {
            let v = cur.int("table entry")?;
            if v > 1 {
                return Err(invalid(ModelError::NonBooleanEntry {
                    name: name.into(),
                    position: table.len(),
                    value: v,
                }));
            }
            table.push(v as u8);
        }
        if table.len() != size {
            return Err(invalid(ModelError::TableLength {
                name: name.into(),
                expected: size,
                found: table.len(),
            }));
        }
        let f = CoBooleanFunction::new(name, table).map_err(invalid)?;
        if functions.iter().any(|g| g.name() == name) {
            return Err(invalid(ModelError::DuplicateFunction(name.into())));
        }
        functions.push(f);
    }
    // every invariant was checked line by line
    Ok(Template::new(size, functions).expect("validated while parsing"))
}

/// Parses a `.cbi` instance: one of `f(x) = y`, `f(x) = g(y)`, `x == y`,
/// `x := d` per significant line.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut constraints = Vec::new();
    for (line_no, raw) in significant(text) {
        let mut cur = Cursor::new(lex(raw, line_no)?, line_no, raw);
        let first = cur.ident("function or variable name")?;
        let c = match cur.next() {
            Some(Tok::LParen) => {
                let arg = cur.ident("variable")?;
                cur.expect(Tok::RParen)?;
                cur.expect(Tok::Assign)?;
                let rhs = cur.ident("variable or function")?;
                if cur.peek() == Some(&Tok::LParen) {
                    cur.pos += 1;
                    let rarg = cur.ident("variable")?;
                    cur.expect(Tok::RParen)?;
                    Constraint::apply_apply(first, arg, rhs, rarg)
                } else {
                    Constraint::apply(first, arg, rhs)
                }
            }
            Some(Tok::EqEq) => Constraint::equal(first, cur.ident("variable")?),
            Some(Tok::Pin) => Constraint::pin(first, cur.int("domain element")? as Element),
            _ => {
                cur.pos -= 1;
                return Err(cur.error(format!("expected `(`, `==` or `:=`, found {}", cur.found())));
            }
        };
        cur.finish()?;
        constraints.push(c);
    }
    Instance::new(constraints).ok_or(ParseError::EmptyInstance)
}

pub fn render_template(t: &Template) -> String {
    let mut out = format!("domain {}\n", t.size());
    for f in t.functions() {
        let _ = write!(out, "fn {} =", f.name());
        for v in f.table() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn render_instance(inst: &Instance) -> String {
    inst.constraints().iter().map(|c| format!("{c}\n")).collect()
}
