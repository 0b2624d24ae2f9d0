//! Relation algebra over the tables of a structure.
//!
//! Expressions are written in call form (`complement(R)`, `converse(R)`,
//! `union(A,B)`, `intersect(A,B)`, `diff(A,B)`, `compose(A,B)`) with the
//! constants `diag` and `full`; composition also has the infix form `A∘B`
//! (or `A;B`).

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::structure::{is_identifier, RelationTable, Structure, StructureError};
use crate::tuples::TupleSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelExpr {
    Named(String),
    /// The equality relation on the universe.
    Diag,
    /// All pairs.
    Full,
    Complement(Box<RelExpr>),
    Converse(Box<RelExpr>),
    Compose(Box<RelExpr>, Box<RelExpr>),
    Union(Box<RelExpr>, Box<RelExpr>),
    Intersect(Box<RelExpr>, Box<RelExpr>),
    Difference(Box<RelExpr>, Box<RelExpr>),
}

impl RelExpr {
    pub fn named(name: &str) -> Self {
        RelExpr::Named(name.to_owned())
    }

    pub fn complement(self) -> Self {
        RelExpr::Complement(Box::new(self))
    }

    pub fn converse(self) -> Self {
        RelExpr::Converse(Box::new(self))
    }

    pub fn compose(self, other: RelExpr) -> Self {
        RelExpr::Compose(Box::new(self), Box::new(other))
    }

    pub fn union(self, other: RelExpr) -> Self {
        RelExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn intersect(self, other: RelExpr) -> Self {
        RelExpr::Intersect(Box::new(self), Box::new(other))
    }

    pub fn difference(self, other: RelExpr) -> Self {
        RelExpr::Difference(Box::new(self), Box::new(other))
    }
}

impl fmt::Display for RelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelExpr::Named(n) => f.write_str(n),
            RelExpr::Diag => f.write_str("diag"),
            RelExpr::Full => f.write_str("full"),
            RelExpr::Complement(e) => write!(f, "complement({e})"),
            RelExpr::Converse(e) => write!(f, "converse({e})"),
            RelExpr::Compose(a, b) => write!(f, "compose({a},{b})"),
            RelExpr::Union(a, b) => write!(f, "union({a},{b})"),
            RelExpr::Intersect(a, b) => write!(f, "intersect({a},{b})"),
            RelExpr::Difference(a, b) => write!(f, "diff({a},{b})"),
        }
    }
}

/// Evaluates `expr` over `s`. The result is named after the expression text.
pub fn relation_algebra(s: &Structure, expr: &RelExpr) -> Result<RelationTable, StructureError> {
    Ok(RelationTable::new(expr.to_string(), eval(s, expr)?))
}

fn require_binary(set: &TupleSet, expr: &RelExpr) -> Result<(), StructureError> {
    if set.arity() == 2 {
        Ok(())
    } else {
        Err(StructureError::NonBinaryOperand(expr.to_string()))
    }
}

fn same_arity(a: &TupleSet, b: &TupleSet, expr: &RelExpr) -> Result<(), StructureError> {
    if a.arity() == b.arity() {
        Ok(())
    } else {
        Err(StructureError::ArityMismatch {
            relation: expr.to_string(),
            expected: a.arity(),
            found: b.arity(),
        })
    }
}

fn eval(s: &Structure, expr: &RelExpr) -> Result<TupleSet, StructureError> {
    let n = s.universe_size();
    Ok(match expr {
        RelExpr::Named(name) => s.relation(name)?.tuples().clone(),
        RelExpr::Diag => {
            let mut d = TupleSet::empty(n, 2);
            for x in 0..n {
                d.insert(&[x, x]);
            }
            d
        }
        RelExpr::Full => TupleSet::full(n, 2),
        RelExpr::Complement(e) => eval(s, e)?.complement(),
        RelExpr::Converse(e) => {
            let a = eval(s, e)?;
            require_binary(&a, e)?;
            let mut out = TupleSet::empty(n, 2);
            for t in a.iter() {
                out.insert(&[t[1], t[0]]);
            }
            out
        }
        RelExpr::Compose(l, r) => {
            let a = eval(s, l)?;
            let b = eval(s, r)?;
            require_binary(&a, l)?;
            require_binary(&b, r)?;
            compose(&a, &b)
        }
        RelExpr::Union(l, r) | RelExpr::Intersect(l, r) | RelExpr::Difference(l, r) => {
            let a = eval(s, l)?;
            let b = eval(s, r)?;
            same_arity(&a, &b, expr)?;
            match expr {
                RelExpr::Union(..) => a.union(&b),
                RelExpr::Intersect(..) => a.intersection(&b),
                _ => a.difference(&b),
            }
        }
    })
}

/// `{(x,z) | exists y: (x,y) in a and (y,z) in b}`.
pub fn compose(a: &TupleSet, b: &TupleSet) -> TupleSet {
    let n = a.universe();
    let mut out = TupleSet::empty(n, 2);
    for t in a.iter() {
        for z in 0..n {
            if b.contains(&[t[1], z]) {
                out.insert(&[t[0], z]);
            }
        }
    }
    out
}

/// Parses the expression syntax described in the module docs.
pub fn parse_rel_expr(text: &str) -> Result<RelExpr, StructureError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
    };
    let e = p.compose()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> StructureError {
        StructureError::Syntax {
            position: self.chars.get(self.pos).map_or(self.chars.len(), |c| c.0),
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.1.is_whitespace())
        {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.chars.get(self.pos).is_some_and(|x| x.1 == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), StructureError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn compose(&mut self) -> Result<RelExpr, StructureError> {
        let mut e = self.primary()?;
        while self.eat('∘') || self.eat(';') {
            let rhs = self.primary()?;
            e = e.compose(rhs);
        }
        Ok(e)
    }

    fn ident(&mut self) -> Result<String, StructureError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.1.is_ascii_alphanumeric() || c.1 == '_')
        {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        if is_identifier(&word) {
            Ok(word)
        } else {
            self.pos = start;
            Err(self.error("expected a relation name"))
        }
    }

    fn primary(&mut self) -> Result<RelExpr, StructureError> {
        if self.eat('(') {
            let e = self.compose()?;
            self.expect(')')?;
            return Ok(e);
        }
        let word = self.ident()?;
        let unary = |p: &mut Parser| -> Result<RelExpr, StructureError> {
            p.expect('(')?;
            let e = p.compose()?;
            p.expect(')')?;
            Ok(e)
        };
        let binary = |p: &mut Parser| -> Result<(RelExpr, RelExpr), StructureError> {
            p.expect('(')?;
            let a = p.compose()?;
            p.expect(',')?;
            let b = p.compose()?;
            p.expect(')')?;
            Ok((a, b))
        };
        Ok(match word.as_str() {
            "diag" => RelExpr::Diag,
            "full" => RelExpr::Full,
            "complement" => unary(self)?.complement(),
            "converse" => unary(self)?.converse(),
            "compose" => {
                let (a, b) = binary(self)?;
                a.compose(b)
            }
            "union" => {
                let (a, b) = binary(self)?;
                a.union(b)
            }
            "intersect" => {
                let (a, b) = binary(self)?;
                a.intersect(b)
            }
            "diff" => {
                let (a, b) = binary(self)?;
                a.difference(b)
            }
            _ => RelExpr::Named(word),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn l3() -> Structure {
        Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [0, 2], [1, 2]])
            .unwrap()
    }

    #[test]
    fn square_of_chain_is_strictly_smaller() {
        let s = l3();
        let sq = relation_algebra(&s, &parse_rel_expr("R∘R").unwrap()).unwrap();
        assert_eq!(sq.to_vec(), vec![vec![0, 2]]);
        let r = s.relation("R").unwrap().tuples();
        assert!(sq.tuples().is_subset(r) && sq.tuples() != r);
    }

    #[test]
    fn complement_of_diag() {
        let s = Structure::new(3).unwrap();
        let t = relation_algebra(&s, &parse_rel_expr("complement(diag)").unwrap()).unwrap();
        assert_eq!(t.len(), 6);
        assert!((0..3).all(|x| !t.contains(&[x, x])));
    }

    #[test]
    fn double_complement() {
        let s = l3();
        let t =
            relation_algebra(&s, &parse_rel_expr("complement(complement(R))").unwrap()).unwrap();
        assert_eq!(t.tuples(), s.relation("R").unwrap().tuples());
    }

    #[test]
    fn errors() {
        let s = l3().with_relation("C", 3, [[0, 1, 2]]).unwrap();
        assert_eq!(
            relation_algebra(&s, &parse_rel_expr("converse(C)").unwrap()),
            Err(StructureError::NonBinaryOperand("C".into()))
        );
        assert_eq!(
            relation_algebra(&s, &parse_rel_expr("Q").unwrap()),
            Err(StructureError::UnknownRelation("Q".into()))
        );
        assert!(matches!(
            relation_algebra(&s, &parse_rel_expr("union(R,C)").unwrap()),
            Err(StructureError::ArityMismatch { .. })
        ));
        assert!(parse_rel_expr("complement(R").is_err());
        assert!(parse_rel_expr("R R").is_err());
    }

    #[test]
    fn display_round_trips() {
        let e = parse_rel_expr("converse(R) ∘ union(diag, complement(full))").unwrap();
        assert_eq!(parse_rel_expr(&e.to_string()).unwrap(), e);
    }
}
