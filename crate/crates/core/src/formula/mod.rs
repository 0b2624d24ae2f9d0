//! First-order formulas over a relational signature: syntax tree, printer,
//! parser, evaluator and enumerator.
//!
//! There are no constants or function symbols, so every formula is
//! constant-free by construction.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::structure::Structure;
use crate::tuples::permutations;

pub(crate) mod enumerate;
mod eval;
mod parse;

pub use enumerate::{enumerate_formulas, FormulaStream, DEFAULT_MAX_DEPTH};
pub use eval::{evaluate, truth_set, Environment};
pub use parse::{parse_formula, parse_formula_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
    /// Unique existence.
    ExistsUnique,
}

impl Quantifier {
    pub const ALL: [Quantifier; 3] = [
        Quantifier::Exists,
        Quantifier::Forall,
        Quantifier::ExistsUnique,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
            Quantifier::ExistsUnique => "existsu",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Iff,
    ];

    pub fn is_commutative(self) -> bool {
        !matches!(self, Connective::Implies)
    }

    fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }

    fn level(self) -> u8 {
        match self {
            Connective::Iff => 0,
            Connective::Implies => 1,
            Connective::And | Connective::Or => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(String, String),
    Rel(String, Vec<String>),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaError {
    Syntax {
        position: usize,
        message: String,
    },
    /// `&` and `|` mixed without parentheses.
    AmbiguousMix {
        position: usize,
    },
    UnknownRelation(String),
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    UnboundVariable(String),
    /// A variable list does not match the formula's free variables.
    FreeVariableMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    DepthLimit {
        depth: usize,
        limit: usize,
    },
    /// A truth table would exceed the supported number of slots.
    CapacityExceeded {
        universe: usize,
        arity: usize,
    },
}

impl FormulaError {
    pub fn kind(&self) -> &'static str {
        match self {
            FormulaError::Syntax { .. } => "SyntaxError",
            FormulaError::AmbiguousMix { .. } => "AmbiguousMix",
            FormulaError::UnknownRelation(_) => "UnknownRelation",
            FormulaError::ArityMismatch { .. } => "ArityMismatch",
            FormulaError::UnboundVariable(_) => "UnboundVariable",
            FormulaError::FreeVariableMismatch { .. } => "FreeVariableMismatch",
            FormulaError::DepthLimit { .. } => "DepthLimit",
            FormulaError::CapacityExceeded { .. } => "CapacityExceeded",
        }
    }
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::Syntax { position, message } => {
                write!(f, "syntax error at offset {position}: {message}")
            }
            FormulaError::AmbiguousMix { position } => write!(
                f,
                "'&' and '|' mixed without parentheses at offset {position}"
            ),
            FormulaError::UnknownRelation(n) => write!(f, "unknown relation {n}"),
            FormulaError::ArityMismatch {
                relation,
                expected,
                found,
            } => write!(
                f,
                "relation {relation} has arity {expected} but is applied to {found} variables"
            ),
            FormulaError::UnboundVariable(v) => write!(f, "variable {v} has no value"),
            FormulaError::FreeVariableMismatch { expected, found } => write!(
                f,
                "free variables are {{{}}} but the variable list is [{}]",
                expected.join(","),
                found.join(",")
            ),
            FormulaError::DepthLimit { depth, limit } => {
                write!(f, "depth {depth} exceeds the enumeration limit {limit}")
            }
            FormulaError::CapacityExceeded { universe, arity } => write!(
                f,
                "{arity}-ary truth tables over a universe of {universe} are too large"
            ),
        }
    }
}

impl core::error::Error for FormulaError {}

/// Relation names with arities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new<S: Into<String>>(rels: impl IntoIterator<Item = (S, usize)>) -> Self {
        Signature {
            arities: rels.into_iter().map(|(n, a)| (n.into(), a)).collect(),
        }
    }

    pub fn of(s: &Structure) -> Self {
        Signature::new(s.signature())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    /// Relations in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(n, &a)| (n.as_str(), a))
    }
}

impl Formula {
    pub fn eq(a: &str, b: &str) -> Self {
        Formula::Eq(a.to_owned(), b.to_owned())
    }

    pub fn rel(name: &str, args: &[&str]) -> Self {
        Formula::Rel(
            name.to_owned(),
            args.iter().map(|&a| a.to_owned()).collect(),
        )
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn binary(op: Connective, a: Formula, b: Formula) -> Self {
        Formula::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::binary(Connective::And, self, other)
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::binary(Connective::Or, self, other)
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::binary(Connective::Implies, self, other)
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::binary(Connective::Iff, self, other)
    }

    pub fn quant(q: Quantifier, var: &str, body: Formula) -> Self {
        Formula::Quant(q, var.to_owned(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::quant(Quantifier::Exists, var, body)
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::quant(Quantifier::Forall, var, body)
    }

    /// Connective/quantifier nesting height; atoms have height 0.
    pub fn height(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => 0,
            Formula::Not(a) => a.height() + 1,
            Formula::Binary(_, a, b) => a.height().max(b.height()) + 1,
            Formula::Quant(_, _, b) => b.height() + 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |v: &'a str, bound: &Vec<&'a str>| {
            if !bound.contains(&v) {
                out.insert(v.to_owned());
            }
        };
        match self {
            Formula::Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Rel(_, args) => args.iter().for_each(|a| note(a, bound)),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Binary(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_owned());
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Rel(_, args) => args.iter().for_each(|a| f(a)),
            Formula::Not(a) => a.visit_vars(f),
            Formula::Binary(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Formula::Quant(_, v, body) => {
                f(v);
                body.visit_vars(f);
            }
        }
    }

    /// Relation symbols used, with the arities they are applied at.
    pub fn relation_uses(&self) -> Vec<(&str, usize)> {
        let mut out = Vec::new();
        self.visit_rels(&mut |n, a| out.push((n, a)));
        out
    }

    fn visit_rels<'a>(&'a self, f: &mut impl FnMut(&'a str, usize)) {
        match self {
            Formula::Eq(..) => {}
            Formula::Rel(n, args) => f(n, args.len()),
            Formula::Not(a) => a.visit_rels(f),
            Formula::Binary(_, a, b) => {
                a.visit_rels(f);
                b.visit_rels(f);
            }
            Formula::Quant(_, _, body) => body.visit_rels(f),
        }
    }

    /// Simultaneous capture-avoiding substitution of free variables.
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Formula {
        let mut used = self.all_vars();
        used.extend(map.values().cloned());
        self.rename_rec(map, &mut used)
    }

    fn rename_rec(&self, map: &BTreeMap<String, String>, used: &mut BTreeSet<String>) -> Formula {
        let sub = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::Eq(a, b) => Formula::Eq(sub(a), sub(b)),
            Formula::Rel(n, args) => Formula::Rel(n.clone(), args.iter().map(sub).collect()),
            Formula::Not(a) => Formula::Not(Box::new(a.rename_rec(map, used))),
            Formula::Binary(op, a, b) => Formula::Binary(
                *op,
                Box::new(a.rename_rec(map, used)),
                Box::new(b.rename_rec(map, used)),
            ),
            Formula::Quant(q, v, body) => {
                let mut inner = map.clone();
                inner.remove(v);
                let captured = inner.values().any(|t| t == v);
                if captured {
                    let fresh = fresh_name(v, used);
                    inner.insert(v.clone(), fresh.clone());
                    Formula::Quant(*q, fresh, Box::new(body.rename_rec(&inner, used)))
                } else {
                    Formula::Quant(*q, v.clone(), Box::new(body.rename_rec(&inner, used)))
                }
            }
        }
    }

    /// Renames every binder that shadows a free variable or an enclosing
    /// binder, so each quantifier binds a name fresh within its scope.
    pub fn freshen_binders(&self) -> Formula {
        let mut used = self.all_vars();
        let mut in_scope: Vec<String> = self.free_vars().into_iter().collect();
        self.freshen_rec(&mut in_scope, &mut used)
    }

    fn freshen_rec(&self, in_scope: &mut Vec<String>, used: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => self.clone(),
            Formula::Not(a) => Formula::Not(Box::new(a.freshen_rec(in_scope, used))),
            Formula::Binary(op, a, b) => Formula::Binary(
                *op,
                Box::new(a.freshen_rec(in_scope, used)),
                Box::new(b.freshen_rec(in_scope, used)),
            ),
            Formula::Quant(q, v, body) => {
                let (name, body) = if in_scope.contains(v) {
                    let fresh = fresh_name(v, used);
                    let mut map = BTreeMap::new();
                    map.insert(v.clone(), fresh.clone());
                    // only v's own occurrences move; nothing else can be captured
                    (fresh, body.rename_rec(&map, used))
                } else {
                    (v.clone(), (**body).clone())
                };
                in_scope.push(name.clone());
                let body = body.freshen_rec(in_scope, used);
                in_scope.pop();
                Formula::Quant(*q, name, Box::new(body))
            }
        }
    }

    /// Alpha-normal form: bound variables renamed `%0, %1, ..` by binder depth.
    pub fn alpha_normal(&self) -> Formula {
        self.alpha_rec(&BTreeMap::new(), 0)
    }

    fn alpha_rec(&self, map: &BTreeMap<String, String>, depth: usize) -> Formula {
        let sub = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::Eq(a, b) => Formula::Eq(sub(a), sub(b)),
            Formula::Rel(n, args) => Formula::Rel(n.clone(), args.iter().map(sub).collect()),
            Formula::Not(a) => Formula::Not(Box::new(a.alpha_rec(map, depth))),
            Formula::Binary(op, a, b) => Formula::Binary(
                *op,
                Box::new(a.alpha_rec(map, depth)),
                Box::new(b.alpha_rec(map, depth)),
            ),
            Formula::Quant(q, v, body) => {
                let name = format!("%{depth}");
                let mut inner = map.clone();
                inner.insert(v.clone(), name.clone());
                Formula::Quant(*q, name, Box::new(body.alpha_rec(&inner, depth + 1)))
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.alpha_normal() == other.alpha_normal()
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8, tail: bool) -> fmt::Result {
        let (level, is_quant) = match self {
            Formula::Binary(op, ..) => (op.level(), false),
            Formula::Quant(..) => (3, true),
            _ => (3, false),
        };
        // a quantifier body runs to the end of the input, so a quantifier
        // may only appear bare in tail position
        if level < min || (is_quant && !tail) {
            f.write_str("(")?;
            self.write_prec(f, 0, true)?;
            return f.write_str(")");
        }
        match self {
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Rel(n, args) => write!(f, "{n}({})", args.join(",")),
            Formula::Not(a) => match &**a {
                Formula::Eq(x, y) => write!(f, "{x}!={y}"),
                inner => {
                    f.write_str("!")?;
                    inner.write_prec(f, 3, tail)
                }
            },
            Formula::Binary(op, a, b) => {
                let left_min = match (op, &**a) {
                    (Connective::And | Connective::Or, Formula::Binary(inner, ..))
                        if inner == op =>
                    {
                        2
                    }
                    (Connective::And | Connective::Or, _) => 3,
                    (Connective::Implies, _) => 2,
                    (Connective::Iff, _) => 0,
                };
                let right_min = match op {
                    Connective::And | Connective::Or => 3,
                    Connective::Implies | Connective::Iff => 1,
                };
                a.write_prec(f, left_min, false)?;
                write!(f, " {} ", op.symbol())?;
                b.write_prec(f, right_min, tail)
            }
            Formula::Quant(q, v, body) => {
                write!(f, "{} {v}. ", q.keyword())?;
                body.write_prec(f, 0, true)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0, true)
    }
}

/// `base_1`, `base_2`, .. : the first name not in `used`; records it.
pub(crate) fn fresh_name(base: &str, used: &mut BTreeSet<String>) -> String {
    let mut k = 1;
    loop {
        let candidate = format!("{base}_{k}");
        if !used.contains(&candidate) {
            used.insert(candidate.clone());
            return candidate;
        }
        k += 1;
    }
}

pub(crate) fn check_vars_match(f: &Formula, vars: &[&str]) -> Result<(), FormulaError> {
    let free = f.free_vars();
    let given: BTreeSet<String> = vars.iter().map(|&v| v.to_owned()).collect();
    if given != free || given.len() != vars.len() {
        return Err(FormulaError::FreeVariableMismatch {
            expected: free.into_iter().collect(),
            found: vars.iter().map(|&v| v.to_owned()).collect(),
        });
    }
    Ok(())
}

/// Disjunction of `f` over all permutations of `vars` (identity first, then
/// lexicographic). Its truth set is the permutation closure of `f`'s.
pub fn factorial_closure(f: &Formula, vars: &[&str]) -> Result<Formula, FormulaError> {
    check_vars_match(f, vars)?;
    let mut out: Option<Formula> = None;
    for perm in permutations(vars.len()) {
        let map: BTreeMap<String, String> = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| (v.to_owned(), vars[perm[i]].to_owned()))
            .collect();
        let instance = f.rename_free(&map);
        out = Some(match out {
            None => instance,
            Some(acc) => acc.or(instance),
        });
    }
    Ok(out.expect("at least the identity permutation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn factorial_closure_binary() {
        let f = parse_formula("R(x,y)").unwrap();
        let c = factorial_closure(&f, &["x", "y"]).unwrap();
        assert_eq!(c.to_string(), "R(x,y) | R(y,x)");
    }

    #[test]
    fn factorial_closure_ternary_has_six_disjuncts() {
        let f = parse_formula("T(x,y,z)").unwrap();
        let c = factorial_closure(&f, &["x", "y", "z"]).unwrap();
        assert_eq!(c.to_string().matches('|').count(), 5);
        assert!(factorial_closure(&f, &["x", "y"]).is_err());
    }

    #[test]
    fn rename_avoids_capture() {
        let f = parse_formula("exists y. R(x,y)").unwrap();
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), "y".to_string());
        let g = f.rename_free(&map);
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec!["y"]);
        assert_eq!(g.to_string(), "exists y_1. R(y,y_1)");
    }

    #[test]
    fn printer_parenthesizes_non_tail_quantifiers() {
        let f = Formula::exists("y", Formula::rel("R", &["x", "y"])).and(Formula::rel("P", &["x"]));
        assert_eq!(f.to_string(), "(exists y. R(x,y)) & P(x)");
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        let g = Formula::rel("P", &["x"])
            .and(Formula::exists("y", Formula::rel("R", &["x", "y"])))
            .implies(Formula::rel("P", &["x"]));
        assert_eq!(parse_formula(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_formula("forall y. R(x,y)").unwrap();
        let b = parse_formula("forall z. R(x,z)").unwrap();
        assert!(a.alpha_eq(&b));
        assert_ne!(a, b);
    }
}
