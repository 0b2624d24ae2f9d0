//! Finite relational structures.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::tuples::{slot_count, Element, TupleSet};

/// Largest universe accepted by structure operations.
pub const MAX_UNIVERSE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureError {
    OutOfRange {
        relation: String,
        element: Element,
        universe: usize,
    },
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    DuplicateRelation(String),
    UnknownRelation(String),
    NonBinaryOperand(String),
    UniverseTooLarge(usize),
    InvalidName(String),
    ZeroArity(String),
    /// `universe^arity` is too large to tabulate.
    CapacityExceeded(String),
    /// Malformed relation expression.
    Syntax {
        position: usize,
        message: String,
    },
}

impl StructureError {
    /// Stable kind name, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            StructureError::OutOfRange { .. } => "OutOfRange",
            StructureError::ArityMismatch { .. } => "ArityMismatch",
            StructureError::DuplicateRelation(_) => "DuplicateRelation",
            StructureError::UnknownRelation(_) => "UnknownRelation",
            StructureError::NonBinaryOperand(_) => "NonBinaryOperand",
            StructureError::UniverseTooLarge(_) => "UniverseTooLarge",
            StructureError::InvalidName(_) => "InvalidName",
            StructureError::ZeroArity(_) => "ZeroArity",
            StructureError::CapacityExceeded(_) => "CapacityExceeded",
            StructureError::Syntax { .. } => "SyntaxError",
        }
    }
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::OutOfRange {
                relation,
                element,
                universe,
            } => write!(
                f,
                "element {element} in relation {relation} is outside the universe 0..{universe}"
            ),
            StructureError::ArityMismatch {
                relation,
                expected,
                found,
            } => write!(
                f,
                "relation {relation} has arity {expected} but got a tuple of length {found}"
            ),
            StructureError::DuplicateRelation(n) => write!(f, "relation {n} declared twice"),
            StructureError::UnknownRelation(n) => write!(f, "unknown relation {n}"),
            StructureError::NonBinaryOperand(n) => write!(f, "operand {n} is not binary"),
            StructureError::UniverseTooLarge(n) => {
                write!(f, "universe size {n} exceeds the limit {MAX_UNIVERSE}")
            }
            StructureError::InvalidName(n) => write!(f, "invalid relation name {n:?}"),
            StructureError::ZeroArity(n) => write!(f, "relation {n} must have positive arity"),
            StructureError::CapacityExceeded(n) => {
                write!(f, "relation {n} has too many tuple slots to tabulate")
            }
            StructureError::Syntax { position, message } => {
                write!(f, "relation expression, column {position}: {message}")
            }
        }
    }
}

impl core::error::Error for StructureError {}

/// Identifier rule shared by relation names and variables.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A named relation over the universe of its structure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelationTable {
    name: String,
    tuples: TupleSet,
}

impl RelationTable {
    pub fn new(name: impl Into<String>, tuples: TupleSet) -> Self {
        RelationTable {
            name: name.into(),
            tuples,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.tuples.arity()
    }

    pub fn universe(&self) -> usize {
        self.tuples.universe()
    }

    pub fn tuples(&self) -> &TupleSet {
        &self.tuples
    }

    pub fn into_tuples(self) -> TupleSet {
        self.tuples
    }

    pub fn contains(&self, tuple: &[Element]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn to_vec(&self) -> Vec<Vec<Element>> {
        self.tuples.to_vec()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Debug for RelationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} = {:?}", self.name, self.arity(), self.tuples)
    }
}

/// A finite universe `0..n` with named relation tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    universe: usize,
    relations: BTreeMap<String, RelationTable>,
}

impl Structure {
    pub fn new(universe: usize) -> Result<Self, StructureError> {
        if universe > MAX_UNIVERSE {
            return Err(StructureError::UniverseTooLarge(universe));
        }
        Ok(Structure {
            universe,
            relations: BTreeMap::new(),
        })
    }

    /// Adds a relation given as explicit tuples, validating ranges and arity.
    pub fn add_relation<T: AsRef<[Element]>>(
        &mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Result<&mut Self, StructureError> {
        let mut set = self.empty_table(name, arity)?;
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(StructureError::ArityMismatch {
                    relation: name.to_owned(),
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&e) = t.iter().find(|&&e| e >= self.universe) {
                return Err(StructureError::OutOfRange {
                    relation: name.to_owned(),
                    element: e,
                    universe: self.universe,
                });
            }
            set.insert(t);
        }
        self.insert_table(RelationTable::new(name, set))?;
        Ok(self)
    }

    /// Builder-style [`Structure::add_relation`].
    pub fn with_relation<T: AsRef<[Element]>>(
        mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Result<Self, StructureError> {
        self.add_relation(name, arity, tuples)?;
        Ok(self)
    }

    fn empty_table(&self, name: &str, arity: usize) -> Result<TupleSet, StructureError> {
        if !is_identifier(name) {
            return Err(StructureError::InvalidName(name.to_owned()));
        }
        if arity == 0 {
            return Err(StructureError::ZeroArity(name.to_owned()));
        }
        if slot_count(self.universe, arity).is_none() {
            return Err(StructureError::CapacityExceeded(name.to_owned()));
        }
        if self.relations.contains_key(name) {
            return Err(StructureError::DuplicateRelation(name.to_owned()));
        }
        Ok(TupleSet::empty(self.universe, arity))
    }

    /// Adds an already tabulated relation. The table's universe must match.
    pub fn insert_table(&mut self, table: RelationTable) -> Result<(), StructureError> {
        self.empty_table(table.name(), table.arity())?;
        if table.universe() != self.universe {
            // a table from another universe can only be wrong here
            return Err(StructureError::OutOfRange {
                relation: table.name().to_owned(),
                element: table.universe(),
                universe: self.universe,
            });
        }
        self.relations.insert(table.name().to_owned(), table);
        Ok(())
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn relations(&self) -> impl Iterator<Item = &RelationTable> {
        self.relations.values()
    }

    pub fn relation(&self, name: &str) -> Result<&RelationTable, StructureError> {
        self.relations
            .get(name)
            .ok_or_else(|| StructureError::UnknownRelation(name.to_owned()))
    }

    /// Like [`Structure::relation`] but also requires arity 2.
    pub fn binary(&self, name: &str) -> Result<&RelationTable, StructureError> {
        let r = self.relation(name)?;
        if r.arity() != 2 {
            return Err(StructureError::NonBinaryOperand(name.to_owned()));
        }
        Ok(r)
    }

    /// Relation names and arities, in name order.
    pub fn signature(&self) -> Vec<(String, usize)> {
        self.relations
            .values()
            .map(|r| (r.name().to_owned(), r.arity()))
            .collect()
    }

    /// Arity multiset as `arity -> count`.
    pub fn arity_profile(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in self.relations.values() {
            *out.entry(r.arity()).or_insert(0) += 1;
        }
        out
    }

    /// Restriction to `subset`, re-indexed in ascending element order.
    pub fn induced_substructure(&self, subset: &[Element]) -> Result<Structure, StructureError> {
        let mut elems: Vec<Element> = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if let Some(&e) = elems.iter().find(|&&e| e >= self.universe) {
            return Err(StructureError::OutOfRange {
                relation: String::from("<subset>"),
                element: e,
                universe: self.universe,
            });
        }
        let mut index = alloc::vec![usize::MAX; self.universe];
        for (new, &old) in elems.iter().enumerate() {
            index[old] = new;
        }
        let mut out = Structure::new(elems.len())?;
        for r in self.relations.values() {
            let mut set = TupleSet::empty(elems.len(), r.arity());
            for t in r.tuples().iter() {
                if t.iter().all(|&e| index[e] != usize::MAX) {
                    let image: Vec<Element> = t.iter().map(|&e| index[e]).collect();
                    set.insert(&image);
                }
            }
            out.relations
                .insert(r.name().to_owned(), RelationTable::new(r.name(), set));
        }
        Ok(out)
    }

    /// Image of the structure under an element permutation.
    pub fn permuted(&self, perm: &[Element]) -> Structure {
        let relations = self
            .relations
            .iter()
            .map(|(n, r)| {
                (
                    n.clone(),
                    RelationTable::new(n.clone(), r.tuples().permuted(perm)),
                )
            })
            .collect();
        Structure {
            universe: self.universe,
            relations,
        }
    }

    /// Is `perm` an automorphism, i.e. does it map every table onto itself?
    pub fn is_automorphism(&self, perm: &[Element]) -> bool {
        self.relations
            .values()
            .all(|r| r.tuples().permuted(perm) == *r.tuples())
    }

    /// The structure keeping only the named relations.
    pub fn reduct(&self, names: &[&str]) -> Result<Structure, StructureError> {
        let mut out = Structure::new(self.universe)?;
        for n in names {
            out.relations
                .insert((*n).to_owned(), self.relation(n)?.clone());
        }
        Ok(out)
    }

    /// Smallest transitive relation containing the named binary relation.
    pub fn transitive_closure(&self, name: &str) -> Result<RelationTable, StructureError> {
        let r = self.binary(name)?;
        Ok(RelationTable::new(
            alloc::format!("closure({name})"),
            transitive_closure(r.tuples()),
        ))
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Structure")
            .field("universe", &self.universe)
            .field("relations", &self.relations.values().collect::<Vec<_>>())
            .finish()
    }
}

/// Warshall closure of a binary tuple set.
pub fn transitive_closure(rel: &TupleSet) -> TupleSet {
    let n = rel.universe();
    let mut out = rel.clone();
    for k in 0..n {
        for i in 0..n {
            if !out.contains(&[i, k]) {
                continue;
            }
            for j in 0..n {
                if out.contains(&[k, j]) {
                    out.insert(&[i, j]);
                }
            }
        }
    }
    out
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
    fn rejects_out_of_range_and_bad_arity() {
        let err = Structure::new(3).unwrap().with_relation("R", 2, [[0, 3]]);
        assert!(matches!(
            err,
            Err(StructureError::OutOfRange { element: 3, .. })
        ));
        let err = Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [vec![0, 1, 2]]);
        assert!(matches!(
            err,
            Err(StructureError::ArityMismatch {
                expected: 2,
                found: 3,
                ..
            })
        ));
        let err = l3().with_relation("R", 1, [[0]]);
        assert_eq!(err, Err(StructureError::DuplicateRelation("R".into())));
        assert!(Structure::new(17).is_err());
    }

    #[test]
    fn induced_substructure_reindexes() {
        let s = l3().induced_substructure(&[0, 2]).unwrap();
        assert_eq!(s.universe_size(), 2);
        assert_eq!(s.relation("R").unwrap().to_vec(), vec![vec![0, 1]]);
        assert_eq!(l3().induced_substructure(&[0, 1, 2]).unwrap(), l3());
        let e = l3().induced_substructure(&[]).unwrap();
        assert_eq!(e.universe_size(), 0);
        assert!(e.relation("R").unwrap().is_empty());
        assert!(l3().induced_substructure(&[5]).is_err());
    }

    #[test]
    fn closure_examples() {
        let s = Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [1, 2]])
            .unwrap();
        assert_eq!(
            s.transitive_closure("R").unwrap().to_vec(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        let t = l3();
        assert_eq!(
            t.transitive_closure("R").unwrap().tuples(),
            t.relation("R").unwrap().tuples()
        );
        let s = Structure::new(2)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [1, 0]])
            .unwrap();
        assert_eq!(
            s.transitive_closure("R").unwrap().to_vec(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let s = s.with_relation("T", 3, [[0, 0, 0]]).unwrap();
        assert_eq!(
            s.transitive_closure("T"),
            Err(StructureError::NonBinaryOperand("T".into()))
        );
        assert_eq!(
            s.transitive_closure("Q"),
            Err(StructureError::UnknownRelation("Q".into()))
        );
    }

    #[test]
    fn arity_profile_counts() {
        let s = l3().with_relation("C", 3, [[0, 1, 2]]).unwrap();
        let p = s.arity_profile();
        assert_eq!(p.get(&2), Some(&1));
        assert_eq!(p.get(&3), Some(&1));
    }
}
