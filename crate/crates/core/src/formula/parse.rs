use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Connective, Formula, FormulaError, Quantifier, Signature};
use crate::structure::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    And,
    Or,
    Arrow,
    DoubleArrow,
    Eq,
    Neq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let err = |pos: usize, msg: &str| FormulaError::Syntax {
        position: pos,
        message: msg.to_owned(),
    };
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let next = bytes.get(i + 1).map(|b| b.1);
        let next2 = bytes.get(i + 2).map(|b| b.1);
        let (tok, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '&' | '∧' => (Tok::And, 1),
            '|' | '∨' => (Tok::Or, 1),
            '¬' => (Tok::Bang, 1),
            '→' => (Tok::Arrow, 1),
            '↔' => (Tok::DoubleArrow, 1),
            '=' => (Tok::Eq, 1),
            '!' if next == Some('=') => (Tok::Neq, 2),
            '!' => (Tok::Bang, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '<' if next == Some('-') && next2 == Some('>') => (Tok::DoubleArrow, 3),
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while bytes
                    .get(i)
                    .is_some_and(|b| b.1.is_ascii_alphanumeric() || b.1 == '_')
                {
                    i += 1;
                }
                let word: String = bytes[start..i].iter().map(|b| b.1).collect();
                out.push((pos, Tok::Ident(word)));
                continue;
            }
            other => return Err(err(pos, &format!("unexpected character {other:?}"))),
        };
        out.push((pos, tok));
        i += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error(&self, msg: &str) -> FormulaError {
        FormulaError::Syntax {
            position: self.offset(),
            message: msg.to_owned(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), FormulaError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<String, FormulaError> {
        match self.peek() {
            Some(Tok::Ident(w)) if !is_keyword(w) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.implication()?;
        while self.eat(&Tok::DoubleArrow) {
            let rhs = self.implication()?;
            f = f.iff(rhs);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let f = self.junction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(f.implies(rhs));
        }
        Ok(f)
    }

    fn junction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        let mut op: Option<Connective> = None;
        loop {
            let this = match self.peek() {
                Some(Tok::And) => Connective::And,
                Some(Tok::Or) => Connective::Or,
                _ => break,
            };
            if op.is_some_and(|o| o != this) {
                return Err(FormulaError::AmbiguousMix {
                    position: self.offset(),
                });
            }
            op = Some(this);
            self.pos += 1;
            let rhs = self.unary()?;
            f = Formula::binary(this, f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(w)) => {
                if let Some(q) = quantifier(&w) {
                    self.pos += 1;
                    let v = self.var()?;
                    self.expect(&Tok::Dot, "'.' after the quantified variable")?;
                    let body = self.iff()?;
                    return Ok(Formula::Quant(q, v, Box::new(body)));
                }
                self.atom()
            }
            _ => Err(self.error("expected a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let name = self.var()?;
        if self.eat(&Tok::LParen) {
            let mut args = alloc::vec![self.var()?];
            while self.eat(&Tok::Comma) {
                args.push(self.var()?);
            }
            self.expect(&Tok::RParen, "')' closing the argument list")?;
            return Ok(Formula::Rel(name, args));
        }
        if self.eat(&Tok::Eq) {
            let rhs = self.var()?;
            return Ok(Formula::Eq(name, rhs));
        }
        if self.eat(&Tok::Neq) {
            let rhs = self.var()?;
            return Ok(Formula::Eq(name, rhs).not());
        }
        Err(self.error("expected '(', '=' or '!=' after an identifier"))
    }
}

fn quantifier(word: &str) -> Option<Quantifier> {
    match word {
        "forall" => Some(Quantifier::Forall),
        "exists" => Some(Quantifier::Exists),
        "existsu" => Some(Quantifier::ExistsUnique),
        _ => None,
    }
}

fn is_keyword(word: &str) -> bool {
    quantifier(word).is_some()
}

/// Parses a formula. `!` binds tightest, then `&`/`|` (equal strength, never
/// mixed without parentheses), then right-associative `->`, then `<->`.
/// Quantifier bodies extend as far right as possible. Binders that shadow
/// another variable in scope are renamed apart.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    debug_assert!(f.all_vars().iter().all(|v| is_identifier(v)));
    Ok(f.freshen_binders())
}

/// [`parse_formula`] plus a check of every relation atom against `sig`.
pub fn parse_formula_with(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
    let f = parse_formula(text)?;
    check_signature(&f, sig)?;
    Ok(f)
}

pub(crate) fn check_signature(f: &Formula, sig: &Signature) -> Result<(), FormulaError> {
    for (name, arity) in f.relation_uses() {
        match sig.arity(name) {
            None => return Err(FormulaError::UnknownRelation(name.to_owned())),
            Some(a) if a != arity => {
                return Err(FormulaError::ArityMismatch {
                    relation: name.to_owned(),
                    expected: a,
                    found: arity,
                })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn negation_binds_tightest_and_conjunction_beats_implication() {
        let f = p("!A(x) & B(x) -> C(x)");
        let expected = Formula::rel("A", &["x"])
            .not()
            .and(Formula::rel("B", &["x"]))
            .implies(Formula::rel("C", &["x"]));
        assert_eq!(f, expected);
    }

    #[test]
    fn sentence_has_no_free_vars() {
        assert!(p("forall x. exists y. R(x,y)").free_vars().is_empty());
    }

    #[test]
    fn mixing_and_or_is_rejected() {
        assert!(matches!(
            parse_formula("A(x) & B(x) | C(x)"),
            Err(FormulaError::AmbiguousMix { .. })
        ));
        assert!(parse_formula("(A(x) & B(x)) | C(x)").is_ok());
        assert!(parse_formula("A(x) | B(x) | C(x)").is_ok());
    }

    #[test]
    fn implication_is_right_associative_and_iff_weakest() {
        let f = p("A(x) -> B(x) -> C(x)");
        let a = Formula::rel("A", &["x"]);
        let b = Formula::rel("B", &["x"]);
        let c = Formula::rel("C", &["x"]);
        assert_eq!(f, a.clone().implies(b.clone().implies(c.clone())));
        let g = p("A(x) -> B(x) <-> C(x)");
        assert_eq!(g, a.implies(b).iff(c));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = p("A(x) & forall y. B(y) -> C(x)");
        match f {
            Formula::Binary(Connective::And, _, rhs) => {
                assert!(matches!(*rhs, Formula::Quant(Quantifier::Forall, _, _)))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn neq_is_negated_equality() {
        assert_eq!(p("x != y"), Formula::eq("x", "y").not());
        assert_eq!(p("x!=y").to_string(), "x!=y");
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        let f = p("forall x. exists x. R(x,x)");
        assert_eq!(f.to_string(), "forall x. exists x_1. R(x_1,x_1)");
        let g = p("P(x) & exists x. Q(x)");
        assert_eq!(g.to_string(), "P(x) & exists x_1. Q(x_1)");
        assert_eq!(g.free_vars().len(), 1);
    }

    #[test]
    fn signature_check() {
        let sig = Signature::new([("R", 2)]);
        assert!(parse_formula_with("R(x,y)", &sig).is_ok());
        assert_eq!(
            parse_formula_with("S(x)", &sig),
            Err(FormulaError::UnknownRelation("S".into()))
        );
        assert!(matches!(
            parse_formula_with("R(x)", &sig),
            Err(FormulaError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn syntax_errors_report_offsets() {
        match parse_formula("R(x,") {
            Err(FormulaError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("forall . R(x)").is_err());
        assert!(parse_formula("R(x) R(y)").is_err());
        assert!(parse_formula("x").is_err());
        assert!(parse_formula("R(forall)").is_err());
    }

    #[test]
    fn display_round_trip_examples() {
        for s in [
            "!A(x) & B(x) -> C(x)",
            "forall x. exists y. R(x,y)",
            "(A(x) | B(x)) & C(x)",
            "(A(x) -> B(x)) -> C(x)",
            "A(x) <-> (B(x) <-> C(x))",
            "existsu y. R(x,y) & y!=x",
            "!(exists y. R(x,y)) & x=x",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
    }
}
