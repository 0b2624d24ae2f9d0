//! Syntactic enumeration of formulas by nesting height.
//!
//! Variables in scope are numbered: the first `n` are the free variables
//! `x1..xn`, deeper binders are `y1, y2, ..` by binder depth. That fixes
//! bound-variable names canonically, so alpha-equivalent duplicates never
//! arise. Commutative connectives take their operands in enumeration order
//! only. Double negations and vacuous quantifiers are skipped.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Connective, Formula, FormulaError, Quantifier, Signature};
use crate::tuples::decode;

pub const DEFAULT_MAX_DEPTH: usize = 4;

/// Name of scope slot `i` when the first `n` slots are free.
pub(crate) fn slot_name(i: usize, n: usize) -> String {
    if i < n {
        format!("x{}", i + 1)
    } else {
        format!("y{}", i - n + 1)
    }
}

/// Atoms over a scope of `s` slots, in a fixed order: equalities `vi=vj`
/// (`i <= j`), then relation atoms by relation name and argument tuple.
pub(crate) fn scope_atoms(sig: &Signature, s: usize, n: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..s {
        for j in i..s {
            out.push(Formula::Eq(slot_name(i, n), slot_name(j, n)));
        }
    }
    for (name, arity) in sig.iter() {
        let count = s.pow(arity as u32);
        for idx in 0..count {
            let args = decode(s, arity, idx)
                .into_iter()
                .map(|i| slot_name(i, n))
                .collect();
            out.push(Formula::Rel(name.into(), args));
        }
    }
    out
}

struct Bands {
    sig: Signature,
    n: usize,
    /// (scope, height) -> formulas of exactly that height
    memo: BTreeMap<(usize, usize), Rc<Vec<Formula>>>,
    /// (scope, height) -> formulas of height <= that
    cumulative: BTreeMap<(usize, usize), Rc<Vec<Formula>>>,
}

impl Bands {
    fn band(&mut self, s: usize, h: usize) -> Rc<Vec<Formula>> {
        if let Some(b) = self.memo.get(&(s, h)) {
            return b.clone();
        }
        let band: Rc<Vec<Formula>> = Rc::new(self.generate(s, h).collect());
        self.memo.insert((s, h), band.clone());
        band
    }

    fn upto(&mut self, s: usize, h: usize) -> Rc<Vec<Formula>> {
        if let Some(b) = self.cumulative.get(&(s, h)) {
            return b.clone();
        }
        let mut all = Vec::new();
        for k in 0..=h {
            all.extend(self.band(s, k).iter().cloned());
        }
        let all = Rc::new(all);
        self.cumulative.insert((s, h), all.clone());
        all
    }

    /// Lazily generates the band of height exactly `h` at scope `s`;
    /// lower bands are materialized.
    fn generate(&mut self, s: usize, h: usize) -> Box<dyn Iterator<Item = Formula>> {
        if h == 0 {
            return Box::new(scope_atoms(&self.sig, s, self.n).into_iter());
        }
        let prev = self.band(s, h - 1);
        let lower = self.upto(s, h - 1);
        let lo = lower.len() - prev.len();
        let body = self.band(s + 1, h - 1);
        let bound = slot_name(s, self.n);

        let negations = {
            let prev = prev.clone();
            (0..prev.len()).filter_map(move |i| match &prev[i] {
                Formula::Not(_) => None,
                f => Some(f.clone().not()),
            })
        };
        let binaries = Connective::ALL.into_iter().flat_map(move |op| {
            let lower = lower.clone();
            let hi = lower.len();
            let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if op.is_commutative() {
                Box::new((lo..hi).flat_map(|j| (0..=j).map(move |i| (i, j))))
            } else {
                Box::new(
                    (0..hi)
                        .flat_map(move |i| (0..hi).map(move |j| (i, j)))
                        .filter(move |&(i, j)| i >= lo || j >= lo),
                )
            };
            pairs.map(move |(i, j)| Formula::binary(op, lower[i].clone(), lower[j].clone()))
        });
        let quantified = (0..body.len())
            .filter(move |&i| body[i].free_vars().contains(&bound))
            .collect::<Vec<_>>()
            .into_iter()
            .flat_map({
                let body = self.band(s + 1, h - 1);
                let bound = slot_name(s, self.n);
                move |i| {
                    let f = body[i].clone();
                    let bound = bound.clone();
                    Quantifier::ALL
                        .into_iter()
                        .map(move |q| Formula::Quant(q, bound.clone(), Box::new(f.clone())))
                }
            });
        Box::new(negations.chain(binaries).chain(quantified))
    }
}

/// Stream of formulas with free variables exactly `x1..xn`, by height.
pub struct FormulaStream {
    bands: Bands,
    depth: usize,
    height: usize,
    current: Option<Box<dyn Iterator<Item = Formula>>>,
}

impl core::fmt::Debug for FormulaStream {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FormulaStream")
            .field("n", &self.bands.n)
            .field("depth", &self.depth)
            .field("height", &self.height)
            .finish()
    }
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        let n = self.bands.n;
        loop {
            if self.current.is_none() {
                if self.height > self.depth {
                    return None;
                }
                self.current = Some(self.bands.generate(n, self.height));
                self.height += 1;
            }
            match self.current.as_mut().unwrap().next() {
                Some(f) if f.free_vars().len() == n => return Some(f),
                Some(_) => continue,
                None => self.current = None,
            }
        }
    }
}

/// Every formula over `sig` with free variables exactly `x1..xn` and nesting
/// height at most `depth`, deduplicated up to renaming of bound variables
/// and operand order of `&`, `|`, `<->`. Heights are emitted in ascending
/// order; the order within a height is fixed.
pub fn enumerate_formulas(
    sig: &Signature,
    depth: usize,
    n: usize,
    max_depth: usize,
) -> Result<FormulaStream, FormulaError> {
    if depth > max_depth {
        return Err(FormulaError::DepthLimit {
            depth,
            limit: max_depth,
        });
    }
    Ok(FormulaStream {
        bands: Bands {
            sig: sig.clone(),
            n,
            memo: BTreeMap::new(),
            cumulative: BTreeMap::new(),
        },
        depth,
        height: 0,
        current: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn sig() -> Signature {
        Signature::new([("R", 2)])
    }

    #[test]
    fn atomic_layer() {
        let all: Vec<String> = enumerate_formulas(&sig(), 0, 1, DEFAULT_MAX_DEPTH)
            .unwrap()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(all, ["x1=x1", "R(x1,x1)"]);
    }

    #[test]
    fn depth_one_has_quantified_atoms() {
        let all: BTreeSet<String> = enumerate_formulas(&sig(), 1, 1, DEFAULT_MAX_DEPTH)
            .unwrap()
            .map(|f| f.to_string())
            .collect();
        assert!(all.contains("exists y1. R(x1,y1)"));
        assert!(all.contains("exists y1. R(y1,x1)"));
        assert!(!all.iter().any(|f| f.contains("!!")));
    }

    #[test]
    fn no_duplicates_up_to_alpha_and_commutativity() {
        fn canon(f: &Formula) -> Formula {
            match f {
                Formula::Not(a) => canon(a).not(),
                Formula::Binary(op, a, b) => {
                    let (a, b) = (canon(a), canon(b));
                    if op.is_commutative() && b < a {
                        Formula::binary(*op, b, a)
                    } else {
                        Formula::binary(*op, a, b)
                    }
                }
                Formula::Quant(q, v, b) => Formula::Quant(*q, v.clone(), Box::new(canon(b))),
                atom => atom.clone(),
            }
        }
        for n in 1..=2 {
            let all: Vec<Formula> = enumerate_formulas(&sig(), 2, n, DEFAULT_MAX_DEPTH)
                .unwrap()
                .collect();
            let distinct: BTreeSet<Formula> =
                all.iter().map(|f| canon(&f.alpha_normal())).collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all
                .iter()
                .all(|f| f.free_vars().len() == n && f.height() <= 2));
        }
    }

    #[test]
    fn deterministic_and_height_ordered() {
        let a: Vec<Formula> = enumerate_formulas(&sig(), 2, 1, 4).unwrap().collect();
        let b: Vec<Formula> = enumerate_formulas(&sig(), 2, 1, 4).unwrap().collect();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].height() <= w[1].height()));
    }

    #[test]
    fn depth_limit() {
        assert!(matches!(
            enumerate_formulas(&sig(), 5, 1, DEFAULT_MAX_DEPTH),
            Err(FormulaError::DepthLimit { depth: 5, limit: 4 })
        ));
    }
}
