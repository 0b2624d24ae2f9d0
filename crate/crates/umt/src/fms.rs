//! The `.fms` structure file format.
//!
//! ```text
//! universe 3
//! # strict chain
//! rel R/2 = (0,1),(0,2),(1,2)
//! rel P/1 =
//! ```

use std::fmt::Write as _;

use thiserror::Error;
use umt_core::structure::is_identifier;
use umt_core::{Element, Structure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: element {element} of {relation} is outside universe {universe}")]
    OutOfRange {
        line: usize,
        relation: String,
        element: usize,
        universe: usize,
    },
    #[error("line {line}: tuple of {relation} has {found} entries, declared arity is {expected}")]
    ArityMismatch {
        line: usize,
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: relation {name} is declared twice")]
    DuplicateRelation { line: usize, name: String },
    #[error("line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: StructureError,
    },
}

impl FmsError {
    pub fn kind(&self) -> &'static str {
        match self {
            FmsError::Syntax { .. } => "SyntaxError",
            FmsError::OutOfRange { .. } => "OutOfRange",
            FmsError::ArityMismatch { .. } => "ArityMismatch",
            FmsError::DuplicateRelation { .. } => "DuplicateRelation",
            FmsError::Structure { source, .. } => source.kind(),
        }
    }

    pub fn line(&self) -> usize {
        match self {
            FmsError::Syntax { line, .. }
            | FmsError::OutOfRange { line, .. }
            | FmsError::ArityMismatch { line, .. }
            | FmsError::DuplicateRelation { line, .. }
            | FmsError::Structure { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Comma,
    Num(usize),
}

fn tokens(text: &str, line: usize) -> Result<Vec<Token>, FmsError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            ',' => out.push(Token::Comma),
            c if c.is_whitespace() => {}
            c if c.is_ascii_digit() => {
                let mut end = i + 1;
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    chars.next();
                }
                let n = text[i..end].parse().map_err(|_| FmsError::Syntax {
                    line,
                    message: format!("number {:?} is too large", &text[i..end]),
                })?;
                out.push(Token::Num(n));
            }
            c => {
                return Err(FmsError::Syntax {
                    line,
                    message: format!("unexpected character {c:?} in tuple list"),
                })
            }
        }
    }
    Ok(out)
}

fn parse_tuples(text: &str, line: usize) -> Result<Vec<Vec<usize>>, FmsError> {
    let toks = tokens(text, line)?;
    let syntax = |message: &str| FmsError::Syntax {
        line,
        message: message.to_string(),
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if !out.is_empty() {
            if toks[i] != Token::Comma {
                return Err(syntax("expected ',' between tuples"));
            }
            i += 1;
        }
        if toks.get(i) != Some(&Token::Open) {
            return Err(syntax("expected '(' to start a tuple"));
        }
        i += 1;
        let mut tuple = Vec::new();
        loop {
            match toks.get(i) {
                Some(Token::Num(n)) => tuple.push(*n),
                _ => return Err(syntax("expected an element index")),
            }
            i += 1;
            match toks.get(i) {
                Some(Token::Comma) => i += 1,
                Some(Token::Close) => {
                    i += 1;
                    break;
                }
                _ => return Err(syntax("expected ',' or ')' inside a tuple")),
            }
        }
        out.push(tuple);
    }
    Ok(out)
}

/// Parses `.fms` text. Line numbers in errors are 1-based.
pub fn parse_structure(text: &str) -> Result<Structure, FmsError> {
    let mut structure: Option<Structure> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| FmsError::Syntax { line, message };
        let Some(s) = structure.as_mut() else {
            let rest = content
                .strip_prefix("universe")
                .filter(|r| r.starts_with(char::is_whitespace))
                .ok_or_else(|| syntax("expected `universe <n>` as the first line".into()))?;
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad universe size {:?}", rest.trim())))?;
            structure =
                Some(Structure::new(n).map_err(|source| FmsError::Structure { line, source })?);
            continue;
        };
        let rest = content
            .strip_prefix("rel")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| {
                syntax(format!(
                    "expected `rel Name/arity = ...`, found {content:?}"
                ))
            })?;
        let (head, body) = rest
            .split_once('=')
            .ok_or_else(|| syntax("missing '=' in relation line".into()))?;
        let (name, arity) = head
            .split_once('/')
            .ok_or_else(|| syntax("expected Name/arity".into()))?;
        let (name, arity) = (name.trim(), arity.trim());
        if !is_identifier(name) {
            return Err(syntax(format!("bad relation name {name:?}")));
        }
        let arity: usize = arity
            .parse()
            .map_err(|_| syntax(format!("bad arity {arity:?}")))?;
        if s.relation(name).is_ok() {
            return Err(FmsError::DuplicateRelation {
                line,
                name: name.to_string(),
            });
        }
        let tuples = parse_tuples(body, line)?;
        let universe = s.universe_size();
        for t in &tuples {
            if t.len() != arity {
                return Err(FmsError::ArityMismatch {
                    line,
                    relation: name.to_string(),
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&element) = t.iter().find(|&&e| e >= universe) {
                return Err(FmsError::OutOfRange {
                    line,
                    relation: name.to_string(),
                    element,
                    universe,
                });
            }
        }
        s.add_relation(name, arity, &tuples)
            .map_err(|source| FmsError::Structure { line, source })?;
    }
    structure.ok_or(FmsError::Syntax {
        line: text.lines().count().max(1),
        message: "missing `universe <n>` line".into(),
    })
}

/// Renders a structure in `.fms` syntax, relations in name order and tuples
/// in lexicographic order.
pub fn write_structure(s: &Structure) -> String {
    let mut out = format!("universe {}\n", s.universe_size());
    for r in s.relations() {
        let tuples: Vec<String> = r.tuples().iter().map(|t| tuple_string(&t)).collect();
        let _ = write!(out, "rel {}/{} =", r.name(), r.arity());
        if !tuples.is_empty() {
            let _ = write!(out, " {}", tuples.join(","));
        }
        out.push('\n');
    }
    out
}

fn tuple_string(t: &[Element]) -> String {
    let items: Vec<String> = t.iter().map(|e| e.to_string()).collect();
    format!("({})", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_chain_with_comments() {
        let s = parse_structure(
            "# a chain\nuniverse 3\n\nrel R/2 = (0,1), ( 0 , 2 ),(1,2)  # strict\nrel P/1 =\n",
        )
        .unwrap();
        assert_eq!(s.universe_size(), 3);
        assert_eq!(s.relation("R").unwrap().len(), 3);
        assert!(s.relation("P").unwrap().is_empty());
    }

    #[test]
    fn writes_what_it_reads() {
        let text = "universe 3\nrel C/3 = (0,1,2),(1,2,0),(2,0,1)\nrel E/2 =\n";
        let s = parse_structure(text).unwrap();
        let out = write_structure(&s);
        assert_eq!(parse_structure(&out).unwrap(), s);
    }

    #[test]
    fn errors_carry_lines_and_kinds() {
        let cases = [
            ("rel R/2 = (0,1)\n", "SyntaxError", 1),
            ("universe 2\nrel R/2 = (0,2)\n", "OutOfRange", 2),
            ("universe 2\n\nrel R/2 = (0,1,1)\n", "ArityMismatch", 3),
            (
                "universe 2\nrel R/1 = (0)\nrel R/1 = (1)\n",
                "DuplicateRelation",
                3,
            ),
            ("universe 2\nrel R/2 = (0,1)(1,0)\n", "SyntaxError", 2),
            ("universe 2\nrel 9R/2 =\n", "SyntaxError", 2),
            ("universe 17\n", "UniverseTooLarge", 1),
            ("universe 2\nrel R/0 =\n", "ZeroArity", 2),
            ("", "SyntaxError", 1),
        ];
        for (text, kind, line) in cases {
            let e = parse_structure(text).unwrap_err();
            assert_eq!((e.kind(), e.line()), (kind, line), "{text:?}: {e}");
        }
    }
}
