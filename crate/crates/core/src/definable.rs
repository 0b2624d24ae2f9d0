//! Truth tables of all formulas up to a nesting height, computed on one
//! structure.
//!
//! Scope slots are named as in the syntactic enumerator: `x1..xn` are free,
//! deeper binders are `y1, y2, ..`. For each scope the engine keeps every
//! distinct truth table reached so far, grouped in bands by the least height
//! producing it, plus a back-pointer from which one representative formula
//! is rebuilt. Two formulas with the same table on the structure are
//! interchangeable for any check that only looks at truth sets, so the
//! engine explores one formula per table instead of every syntactic variant.
//!
//! A formula whose free variables are a proper subset of `x1..xn` has a
//! table at scope `n` as well; such tables are included.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::formula::enumerate::slot_name;
use crate::formula::{Connective, Formula, FormulaError, Quantifier, DEFAULT_MAX_DEPTH};
use crate::structure::Structure;
use crate::tuples::{slot_count, TupleSet, MAX_SLOTS};

#[derive(Debug, Clone)]
enum Node {
    Atom(Formula),
    Not(u32),
    Bin(Connective, u32, u32),
    /// Quantifier over the last slot of a table one scope deeper.
    Quant(Quantifier, u32),
}

struct Scope {
    slots: usize,
    words: usize,
    tables: Vec<Box<[u64]>>,
    nodes: Vec<Node>,
    index: HashMap<Box<[u64]>, u32>,
    /// `bands[h]` is one past the last id of band `h`; only complete bands.
    bands: Vec<usize>,
}

impl Scope {
    fn new(universe: usize, s: usize) -> Self {
        let slots = slot_count(universe, s).unwrap_or(usize::MAX);
        Scope {
            slots,
            words: slots.div_ceil(64),
            tables: Vec::new(),
            nodes: Vec::new(),
            index: HashMap::new(),
            bands: Vec::new(),
        }
    }

    fn band_range(&self, h: usize) -> core::ops::Range<usize> {
        let lo = if h == 0 { 0 } else { self.bands[h - 1] };
        lo..self.bands[h]
    }

    fn tail_mask(&self) -> u64 {
        match self.slots % 64 {
            0 => !0,
            r => (1u64 << r) - 1,
        }
    }

    /// Adds `buf` if new. Returns its id when it was new.
    fn add(&mut self, buf: &[u64], node: Node) -> Option<u32> {
        if self.index.contains_key(buf) {
            return None;
        }
        let id = self.tables.len() as u32;
        let table: Box<[u64]> = buf.into();
        self.index.insert(table.clone(), id);
        self.tables.push(table);
        self.nodes.push(node);
        Some(id)
    }

    fn truncate(&mut self, len: usize) {
        for t in self.tables.drain(len..) {
            self.index.remove(&t);
        }
        self.nodes.truncate(len);
    }
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// A formula paired with its truth set over `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub formula: Formula,
    pub table: TupleSet,
}

pub struct Definable<'a> {
    s: &'a Structure,
    universe: usize,
    free: usize,
    depth: usize,
    scopes: Vec<Scope>,
}

enum Step {
    Done,
    Stopped(u32),
}

impl<'a> Definable<'a> {
    /// Tables of `free`-variable formulas of height at most `depth`.
    pub fn new(s: &'a Structure, free: usize, depth: usize) -> Result<Self, FormulaError> {
        Self::with_max_depth(s, free, depth, DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(
        s: &'a Structure,
        free: usize,
        depth: usize,
        max_depth: usize,
    ) -> Result<Self, FormulaError> {
        if depth > max_depth {
            return Err(FormulaError::DepthLimit {
                depth,
                limit: max_depth,
            });
        }
        let universe = s.universe_size();
        let widest = free + depth;
        match slot_count(universe, widest) {
            Some(n) if n <= MAX_SLOTS => {}
            _ => {
                return Err(FormulaError::CapacityExceeded {
                    universe,
                    arity: widest,
                })
            }
        }
        let scopes = (0..=widest).map(|k| Scope::new(universe, k)).collect();
        Ok(Definable {
            s,
            universe,
            free,
            depth,
            scopes,
        })
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// First table at the free scope, in generation order, satisfying
    /// `pred`. Generation stops as soon as one is found.
    pub fn find<F>(&mut self, mut pred: F) -> Option<Definition>
    where
        F: FnMut(&TupleSet) -> bool,
    {
        let (u, n) = (self.universe, self.free);
        for h in 0..=self.depth {
            if self.scopes[n].bands.len() > h {
                let range = self.scopes[n].band_range(h);
                for id in range {
                    let t = TupleSet::from_words(u, n, &self.scopes[n].tables[id]);
                    if pred(&t) {
                        return Some(Definition {
                            formula: self.formula(n, id as u32),
                            table: t,
                        });
                    }
                }
                continue;
            }
            let start = self.scopes[n].tables.len();
            let mut visit = |w: &[u64]| pred(&TupleSet::from_words(u, n, w));
            if let Step::Stopped(id) = self.grow(n, h, &mut visit) {
                let hit = Definition {
                    formula: self.formula(n, id),
                    table: TupleSet::from_words(u, n, &self.scopes[n].tables[id as usize]),
                };
                self.scopes[n].truncate(start);
                return Some(hit);
            }
        }
        None
    }

    /// Every distinct table at the free scope with a representative formula.
    pub fn all(&mut self) -> Vec<Definition> {
        let n = self.free;
        for h in 0..=self.depth {
            self.ensure(n, h);
        }
        (0..self.scopes[n].tables.len())
            .map(|id| Definition {
                formula: self.formula(n, id as u32),
                table: TupleSet::from_words(self.universe, n, &self.scopes[n].tables[id]),
            })
            .collect()
    }

    fn ensure(&mut self, s: usize, h: usize) {
        while self.scopes[s].bands.len() <= h {
            let next = self.scopes[s].bands.len();
            self.grow(s, next, &mut |_| false);
        }
    }

    /// Generates band `h` at scope `s`; earlier bands must be complete.
    fn grow(&mut self, s: usize, h: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> Step {
        debug_assert_eq!(self.scopes[s].bands.len(), h);
        let step = if h == 0 {
            self.atoms(s, visit)
        } else {
            self.compounds(s, h, visit)
        };
        if let Step::Done = step {
            let end = self.scopes[s].tables.len();
            self.scopes[s].bands.push(end);
        }
        step
    }

    fn atoms(&mut self, s: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> Step {
        let u = self.universe;
        let scope = &mut self.scopes[s];
        let slots = scope.slots;
        // digits[idx * s + i] = value of slot i in tuple idx
        let mut digits = vec![0u8; slots * s];
        for idx in 0..slots {
            let mut rest = idx;
            for i in (0..s).rev() {
                digits[idx * s + i] = (rest % u) as u8;
                rest /= u;
            }
        }
        let mut buf = vec![0u64; scope.words];
        let mut emit = |scope: &mut Scope, buf: &[u64], f: Formula| -> Option<u32> {
            let id = scope.add(buf, Node::Atom(f))?;
            visit(buf).then_some(id)
        };
        for i in 0..s {
            for j in i..s {
                buf.iter_mut().for_each(|w| *w = 0);
                for idx in 0..slots {
                    if digits[idx * s + i] == digits[idx * s + j] {
                        buf[idx / 64] |= 1 << (idx % 64);
                    }
                }
                let f = Formula::Eq(slot_name(i, self.free), slot_name(j, self.free));
                if let Some(id) = emit(scope, &buf, f) {
                    return Step::Stopped(id);
                }
            }
        }
        for rel in self.s.relations() {
            let arity = rel.arity();
            let Some(count) = slot_count(s, arity) else {
                continue;
            };
            for a in 0..count {
                let args = crate::tuples::decode(s, arity, a);
                buf.iter_mut().for_each(|w| *w = 0);
                for idx in 0..slots {
                    let r = args
                        .iter()
                        .fold(0, |acc, &i| acc * u + digits[idx * s + i] as usize);
                    if rel.tuples().contains_index(r) {
                        buf[idx / 64] |= 1 << (idx % 64);
                    }
                }
                let names = args.iter().map(|&i| slot_name(i, self.free)).collect();
                let f = Formula::Rel(rel.name().into(), names);
                if let Some(id) = emit(scope, &buf, f) {
                    return Step::Stopped(id);
                }
            }
        }
        Step::Done
    }

    fn compounds(&mut self, s: usize, h: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> Step {
        let prev = self.scopes[s].band_range(h - 1);
        let (lo, hi) = (prev.start, prev.end);
        let mask = self.scopes[s].tail_mask();
        let words = self.scopes[s].words;
        let mut buf = vec![0u64; words];

        macro_rules! offer {
            ($node:expr) => {
                if let Some(id) = self.scopes[s].add(&buf, $node) {
                    if visit(&buf) {
                        return Step::Stopped(id);
                    }
                }
            };
        }

        for id in lo..hi {
            let t = &self.scopes[s].tables[id];
            for (b, w) in buf.iter_mut().zip(t.iter()) {
                *b = !w;
            }
            if let Some(last) = buf.last_mut() {
                *last &= mask;
            }
            offer!(Node::Not(id as u32));
        }

        for op in Connective::ALL {
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            if op.is_commutative() {
                for j in lo..hi {
                    pairs.extend((0..=j).map(|i| (i, j)));
                }
            }
            for (i, j) in pairs.iter().copied().chain(
                (!op.is_commutative())
                    .then(|| (0..hi).flat_map(move |i| (0..hi).map(move |j| (i, j))))
                    .into_iter()
                    .flatten()
                    .filter(|&(i, j)| i >= lo || j >= lo),
            ) {
                {
                    let tables = &self.scopes[s].tables;
                    let (a, b) = (&tables[i], &tables[j]);
                    for k in 0..words {
                        buf[k] = match op {
                            Connective::And => a[k] & b[k],
                            Connective::Or => a[k] | b[k],
                            Connective::Implies => !a[k] | b[k],
                            Connective::Iff => !(a[k] ^ b[k]),
                        };
                    }
                    if let Some(last) = buf.last_mut() {
                        *last &= mask;
                    }
                }
                offer!(Node::Bin(op, i as u32, j as u32));
            }
        }

        self.ensure(s + 1, h - 1);
        let u = self.universe;
        let body_range = self.scopes[s + 1].band_range(h - 1);
        let slots = self.scopes[s].slots;
        for body in body_range {
            for q in Quantifier::ALL {
                buf.iter_mut().for_each(|w| *w = 0);
                {
                    let t = &self.scopes[s + 1].tables[body];
                    for idx in 0..slots {
                        let hits = (idx * u..idx * u + u).filter(|&i| bit(t, i)).count();
                        let value = match q {
                            Quantifier::Exists => hits > 0,
                            Quantifier::Forall => hits == u,
                            Quantifier::ExistsUnique => hits == 1,
                        };
                        if value {
                            buf[idx / 64] |= 1 << (idx % 64);
                        }
                    }
                }
                offer!(Node::Quant(q, body as u32));
            }
        }
        Step::Done
    }

    fn formula(&self, s: usize, id: u32) -> Formula {
        match &self.scopes[s].nodes[id as usize] {
            Node::Atom(f) => f.clone(),
            Node::Not(a) => self.formula(s, *a).not(),
            Node::Bin(op, a, b) => Formula::binary(*op, self.formula(s, *a), self.formula(s, *b)),
            Node::Quant(q, body) => Formula::Quant(
                *q,
                slot_name(s, self.free),
                Box::new(self.formula(s + 1, *body)),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{enumerate_formulas, truth_set, Signature};
    use alloc::collections::BTreeSet;
    use alloc::string::{String, ToString};

    fn l3() -> Structure {
        Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [0, 2], [1, 2]])
            .unwrap()
    }

    fn free_names(n: usize) -> Vec<String> {
        (0..n).map(|i| slot_name(i, n)).collect()
    }

    /// Truth set over `x1..xn` of a formula whose free variables are a subset.
    fn table_over(s: &Structure, f: &Formula, n: usize) -> TupleSet {
        let names = free_names(n);
        let mut g = f.clone();
        for v in &names {
            if !g.free_vars().contains(v) {
                g = g.and(Formula::eq(v, v));
            }
        }
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        truth_set(s, &g, &vars).unwrap()
    }

    #[test]
    fn representatives_evaluate_to_their_tables() {
        let s = l3();
        for n in 1..=2 {
            let mut d = Definable::new(&s, n, 2).unwrap();
            for def in d.all() {
                assert_eq!(
                    table_over(&s, &def.formula, n),
                    def.table,
                    "{}",
                    def.formula
                );
                assert!(def.formula.height() <= 2);
            }
        }
    }

    #[test]
    fn same_tables_as_syntactic_enumeration() {
        let s = l3();
        let sig = Signature::of(&s);
        for n in 1..=2 {
            for depth in 0..=2 {
                let semantic: BTreeSet<TupleSet> = Definable::new(&s, n, depth)
                    .unwrap()
                    .all()
                    .into_iter()
                    .map(|d| d.table)
                    .collect();
                let syntactic: BTreeSet<TupleSet> = enumerate_formulas(&sig, depth, n, 4)
                    .unwrap()
                    .map(|f| table_over(&s, &f, n))
                    .collect();
                assert!(syntactic.is_subset(&semantic), "n={n} depth={depth}");
                // padding a formula that misses some xi costs one conjunction
                if depth < 2 {
                    let padded: BTreeSet<TupleSet> = enumerate_formulas(&sig, depth + 1, n, 4)
                        .unwrap()
                        .map(|f| table_over(&s, &f, n))
                        .collect();
                    assert!(semantic.is_subset(&padded), "n={n} depth={depth}");
                }
            }
        }
    }

    #[test]
    fn first_nontrivial_indicator_on_a_chain() {
        let s = l3();
        let mut d = Definable::new(&s, 1, 1).unwrap();
        let hit = d.find(|t| !t.is_empty() && !t.is_full()).unwrap();
        assert_eq!(hit.formula.to_string(), "exists y1. R(x1,y1)");
        assert_eq!(hit.table.to_vec(), vec![vec![0], vec![1]]);
        // an interrupted search leaves the engine reusable
        let again = d.find(|t| !t.is_empty() && !t.is_full()).unwrap();
        assert_eq!(again, hit);
        // {}, M, {0,1}, {1,2}, {1}; the complements of {1,2} and {0,1} need height 2
        assert_eq!(d.all().len(), 5);
        assert_eq!(Definable::new(&s, 1, 2).unwrap().all().len(), 8);
    }

    #[test]
    fn symmetric_structure_has_only_trivial_indicators() {
        let s = Structure::new(4).unwrap();
        let mut d = Definable::new(&s, 1, 3).unwrap();
        assert!(d
            .all()
            .iter()
            .all(|x| x.table.is_empty() || x.table.is_full()));
    }

    #[test]
    fn limits() {
        let s = l3();
        assert!(matches!(
            Definable::new(&s, 1, 5),
            Err(FormulaError::DepthLimit { .. })
        ));
        let big = Structure::new(16).unwrap();
        assert!(matches!(
            Definable::with_max_depth(&big, 3, 4, 8),
            Err(FormulaError::CapacityExceeded { .. })
        ));
    }
}
