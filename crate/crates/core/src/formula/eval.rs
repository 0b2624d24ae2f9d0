use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::parse::check_signature;
use super::{check_vars_match, Connective, Formula, FormulaError, Quantifier, Signature};
use crate::structure::Structure;
use crate::tuples::{decode, slot_count, Element, TupleSet};

/// Assignment of elements to free variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment(BTreeMap<String, Element>);

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, var: &str, value: Element) -> Self {
        self.0.insert(var.to_owned(), value);
        self
    }

    pub fn get(&self, var: &str) -> Option<Element> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Element)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// The environment with every value mapped through `perm`.
    pub fn mapped(&self, perm: &[Element]) -> Self {
        Environment(self.0.iter().map(|(k, &v)| (k.clone(), perm[v])).collect())
    }
}

impl<S: Into<String>> FromIterator<(S, Element)> for Environment {
    fn from_iter<I: IntoIterator<Item = (S, Element)>>(iter: I) -> Self {
        Environment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

enum Compiled<'a> {
    Eq(usize, usize),
    Rel(&'a TupleSet, Vec<usize>),
    Not(Box<Compiled<'a>>),
    Binary(Connective, Box<Compiled<'a>>, Box<Compiled<'a>>),
    Quant(Quantifier, usize, Box<Compiled<'a>>),
}

/// Resolves variables to slots: free variables first (in `free` order), then
/// one slot per binder depth.
fn compile<'a>(
    s: &'a Structure,
    f: &Formula,
    scope: &mut Vec<(String, usize)>,
    depth: usize,
    nfree: usize,
) -> Result<Compiled<'a>, FormulaError> {
    let slot = |v: &str, scope: &Vec<(String, usize)>| {
        scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|&(_, i)| i)
            .ok_or_else(|| FormulaError::UnboundVariable(v.to_owned()))
    };
    Ok(match f {
        Formula::Eq(a, b) => Compiled::Eq(slot(a, scope)?, slot(b, scope)?),
        Formula::Rel(n, args) => {
            let table = s
                .relation(n)
                .map_err(|_| FormulaError::UnknownRelation(n.clone()))?;
            let slots = args
                .iter()
                .map(|a| slot(a, scope))
                .collect::<Result<_, _>>()?;
            Compiled::Rel(table.tuples(), slots)
        }
        Formula::Not(a) => Compiled::Not(Box::new(compile(s, a, scope, depth, nfree)?)),
        Formula::Binary(op, a, b) => Compiled::Binary(
            *op,
            Box::new(compile(s, a, scope, depth, nfree)?),
            Box::new(compile(s, b, scope, depth, nfree)?),
        ),
        Formula::Quant(q, v, body) => {
            let index = nfree + depth;
            scope.push((v.clone(), index));
            let body = compile(s, body, scope, depth + 1, nfree);
            scope.pop();
            Compiled::Quant(*q, index, Box::new(body?))
        }
    })
}

fn quant_depth(f: &Formula) -> usize {
    match f {
        Formula::Eq(..) | Formula::Rel(..) => 0,
        Formula::Not(a) => quant_depth(a),
        Formula::Binary(_, a, b) => quant_depth(a).max(quant_depth(b)),
        Formula::Quant(_, _, b) => 1 + quant_depth(b),
    }
}

impl Compiled<'_> {
    fn eval(&self, n: usize, slots: &mut [Element]) -> bool {
        match self {
            Compiled::Eq(a, b) => slots[*a] == slots[*b],
            Compiled::Rel(t, args) => {
                let idx = args.iter().fold(0, |acc, &i| acc * n + slots[i]);
                t.contains_index(idx)
            }
            Compiled::Not(a) => !a.eval(n, slots),
            Compiled::Binary(op, a, b) => {
                let x = a.eval(n, slots);
                match op {
                    Connective::And => x && b.eval(n, slots),
                    Connective::Or => x || b.eval(n, slots),
                    Connective::Implies => !x || b.eval(n, slots),
                    Connective::Iff => x == b.eval(n, slots),
                }
            }
            Compiled::Quant(q, i, body) => {
                let mut hits = 0usize;
                for v in 0..n {
                    slots[*i] = v;
                    let t = body.eval(n, slots);
                    match (q, t) {
                        (Quantifier::Exists, true) => return true,
                        (Quantifier::Forall, false) => return false,
                        (Quantifier::ExistsUnique, true) => {
                            hits += 1;
                            if hits > 1 {
                                return false;
                            }
                        }
                        _ => {}
                    }
                }
                match q {
                    Quantifier::Exists => false,
                    Quantifier::Forall => true,
                    Quantifier::ExistsUnique => hits == 1,
                }
            }
        }
    }
}

/// A formula compiled against a structure with a fixed free-variable order.
struct Prepared<'a> {
    code: Compiled<'a>,
    slots: Vec<Element>,
    universe: usize,
}

fn prepare<'a>(s: &'a Structure, f: &Formula, free: &[&str]) -> Result<Prepared<'a>, FormulaError> {
    check_signature(f, &Signature::of(s))?;
    let mut scope: Vec<(String, usize)> = free
        .iter()
        .enumerate()
        .map(|(i, &v)| (v.to_owned(), i))
        .collect();
    let code = compile(s, f, &mut scope, 0, free.len())?;
    Ok(Prepared {
        code,
        slots: vec![0; free.len() + quant_depth(f)],
        universe: s.universe_size(),
    })
}

/// Standard finite-model truth of `f` in `s` under `env`.
pub fn evaluate(s: &Structure, f: &Formula, env: &Environment) -> Result<bool, FormulaError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    for v in &free {
        match env.get(v) {
            None => return Err(FormulaError::UnboundVariable(v.clone())),
            Some(x) if x >= s.universe_size() => {
                return Err(FormulaError::UnboundVariable(alloc::format!(
                    "{v} (value {x} outside the universe)"
                )))
            }
            Some(_) => {}
        }
    }
    let names: Vec<&str> = free.iter().map(String::as_str).collect();
    let mut p = prepare(s, f, &names)?;
    for (i, v) in names.iter().enumerate() {
        p.slots[i] = env.get(v).unwrap();
    }
    Ok(p.code.eval(p.universe, &mut p.slots))
}

/// `{ t | f holds with vars[i] = t[i] }` as a set of `vars.len()`-tuples.
/// `vars` must list exactly the free variables of `f`.
pub fn truth_set(s: &Structure, f: &Formula, vars: &[&str]) -> Result<TupleSet, FormulaError> {
    check_vars_match(f, vars)?;
    let mut p = prepare(s, f, vars)?;
    let n = s.universe_size();
    let mut out = TupleSet::empty(n, vars.len());
    let total = slot_count(n, vars.len()).unwrap_or(0);
    for idx in 0..total {
        let t = decode(n, vars.len(), idx);
        p.slots[..t.len()].copy_from_slice(&t);
        if p.code.eval(n, &mut p.slots) {
            out.insert_index(idx);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    fn l3() -> Structure {
        Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [0, 2], [1, 2]])
            .unwrap()
    }

    #[test]
    fn maximum_has_no_successor() {
        let f = parse_formula("exists y. R(x,y)").unwrap();
        assert!(!evaluate(&l3(), &f, &Environment::new().bind("x", 2)).unwrap());
        assert!(evaluate(&l3(), &f, &Environment::new().bind("x", 0)).unwrap());
    }

    #[test]
    fn reflexive_equality() {
        let f = parse_formula("x=x").unwrap();
        assert!(evaluate(&l3(), &f, &Environment::new().bind("x", 0)).unwrap());
    }

    #[test]
    fn chain_is_transitive() {
        let f = parse_formula("forall x. forall y. forall z. R(x,y) & R(y,z) -> R(x,z)").unwrap();
        assert!(evaluate(&l3(), &f, &Environment::new()).unwrap());
    }

    #[test]
    fn exists_unique() {
        let f = parse_formula("existsu y. R(x,y)").unwrap();
        let ts = truth_set(&l3(), &f, &["x"]).unwrap();
        assert_eq!(ts.to_vec(), vec![vec![1]]);
    }

    #[test]
    fn truth_sets() {
        let s = l3();
        let f = parse_formula("exists y. R(x,y)").unwrap();
        assert_eq!(
            truth_set(&s, &f, &["x"]).unwrap().to_vec(),
            vec![vec![0], vec![1]]
        );
        let bare = Structure::new(3).unwrap();
        let g = parse_formula("x=x").unwrap();
        assert!(truth_set(&bare, &g, &["x"]).unwrap().is_full());
        let h = parse_formula("R(x,y)").unwrap();
        assert_eq!(
            truth_set(&s, &h, &["x", "y"]).unwrap(),
            *s.relation("R").unwrap().tuples()
        );
        let swapped = truth_set(&s, &h, &["y", "x"]).unwrap();
        assert_eq!(swapped.to_vec(), vec![vec![1, 0], vec![2, 0], vec![2, 1]]);
    }

    #[test]
    fn errors() {
        let s = l3();
        let f = parse_formula("R(x,y)").unwrap();
        assert_eq!(
            evaluate(&s, &f, &Environment::new().bind("x", 0)),
            Err(FormulaError::UnboundVariable("y".into()))
        );
        let g = parse_formula("S(x)").unwrap();
        assert_eq!(
            evaluate(&s, &g, &Environment::new().bind("x", 0)),
            Err(FormulaError::UnknownRelation("S".into()))
        );
        let h = parse_formula("R(x)").unwrap();
        assert!(matches!(
            evaluate(&s, &h, &Environment::new().bind("x", 0)),
            Err(FormulaError::ArityMismatch { .. })
        ));
        assert!(truth_set(&s, &f, &["x"]).is_err());
        assert!(truth_set(&s, &f, &["x", "x"]).is_err());
    }
}
