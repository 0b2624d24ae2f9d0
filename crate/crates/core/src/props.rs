//! Classification of binary and ternary relations.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::structure::{transitive_closure, RelationTable, Structure, StructureError};
use crate::tuples::{Element, TupleSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropsError {
    Structure(StructureError),
    NotDistinguishability { relation: String },
    NotAnOrder { relation: String },
}

impl PropsError {
    pub fn kind(&self) -> &'static str {
        match self {
            PropsError::Structure(e) => e.kind(),
            PropsError::NotDistinguishability { .. } => "NotDistinguishability",
            PropsError::NotAnOrder { .. } => "NotAnOrder",
        }
    }
}

impl fmt::Display for PropsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropsError::Structure(e) => e.fmt(f),
            PropsError::NotDistinguishability { relation } => write!(
                f,
                "{relation} is not irreflexive, symmetric and antitransitive"
            ),
            PropsError::NotAnOrder { relation } => {
                write!(f, "{relation} is not a linear order (reflexive or strict)")
            }
        }
    }
}

impl core::error::Error for PropsError {}

impl From<StructureError> for PropsError {
    fn from(e: StructureError) -> Self {
        PropsError::Structure(e)
    }
}

/// A property checked on every pair or triple: it may hold everywhere, its
/// negation may hold everywhere, or neither. When both hold vacuously (an
/// empty relation is both symmetric and asymmetric) the flag reads `Holds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Holds,
    Negated,
    Neither,
}

impl Tri {
    fn of(holds: bool, negated: bool) -> Tri {
        match (holds, negated) {
            (true, _) => Tri::Holds,
            (false, true) => Tri::Negated,
            _ => Tri::Neither,
        }
    }

    pub fn holds(self) -> bool {
        self == Tri::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Holds => "holds",
            Tri::Negated => "negated",
            Tri::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryReport {
    /// `Negated` = irreflexive.
    pub reflexive: Tri,
    /// `Negated` = asymmetric.
    pub symmetric: Tri,
    /// `Negated` = no two consecutive pairs close a triangle.
    pub transitive: Tri,
    pub irreflexive: bool,
    pub antisymmetric: bool,
    pub antitransitive: bool,
    pub linear: bool,
    pub dense: bool,
    pub has_least: bool,
    pub has_greatest: bool,
    pub equivalence: bool,
    pub distinguishability: bool,
    pub order: bool,
    pub strict_order: bool,
    pub preorder: bool,
    pub total_preorder: bool,
    pub well_order: bool,
}

impl BinaryReport {
    /// Flag names and values in a fixed order, for reports.
    pub fn flags(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("irreflexive", self.irreflexive),
            ("antisymmetric", self.antisymmetric),
            ("antitransitive", self.antitransitive),
            ("linear", self.linear),
            ("dense", self.dense),
            ("has_least", self.has_least),
            ("has_greatest", self.has_greatest),
        ]
    }

    pub fn labels(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("equivalence", self.equivalence),
            ("distinguishability", self.distinguishability),
            ("order", self.order),
            ("strict_order", self.strict_order),
            ("preorder", self.preorder),
            ("total_preorder", self.total_preorder),
            ("well_order", self.well_order),
        ]
    }

    pub fn tri_flags(&self) -> Vec<(&'static str, Tri)> {
        vec![
            ("reflexive", self.reflexive),
            ("symmetric", self.symmetric),
            ("transitive", self.transitive),
        ]
    }

    pub fn is_linear_order(&self) -> bool {
        (self.order || self.strict_order) && self.linear
    }
}

/// Classifies a binary table by exhaustive quantification.
pub fn classify_table(r: &TupleSet) -> BinaryReport {
    assert_eq!(r.arity(), 2, "binary table expected");
    let n = r.universe();
    let at = |x: usize, y: usize| r.contains(&[x, y]);
    let all = |p: &dyn Fn(usize) -> bool| (0..n).all(p);

    let reflexive = all(&|x| at(x, x));
    let irreflexive = all(&|x| !at(x, x));
    let symmetric = all(&|x| all(&|y| !at(x, y) || at(y, x)));
    let asymmetric = all(&|x| all(&|y| !at(x, y) || !at(y, x)));
    let antisymmetric = all(&|x| all(&|y| x == y || !at(x, y) || !at(y, x)));
    let transitive = all(&|x| all(&|y| all(&|z| !(at(x, y) && at(y, z)) || at(x, z))));
    let intransitive = all(&|x| all(&|y| all(&|z| !(at(x, y) && at(y, z)) || !at(x, z))));
    let antitransitive = all(&|x| all(&|y| all(&|z| !at(x, z) || at(y, x) || at(y, z))));
    let linear = all(&|x| all(&|y| x == y || at(x, y) || at(y, x)));
    let dense = all(&|x| {
        all(&|y| x == y || !at(x, y) || (0..n).any(|t| t != x && t != y && at(x, t) && at(t, y)))
    });
    let has_least = (0..n).any(|x| all(&|y| y == x || at(x, y)));
    let has_greatest = (0..n).any(|x| all(&|y| y == x || at(y, x)));
    let preorder = reflexive && transitive;
    BinaryReport {
        reflexive: Tri::of(reflexive, irreflexive),
        symmetric: Tri::of(symmetric, asymmetric),
        transitive: Tri::of(transitive, intransitive),
        irreflexive,
        antisymmetric,
        antitransitive,
        linear,
        dense,
        has_least,
        has_greatest,
        equivalence: reflexive && symmetric && transitive,
        distinguishability: irreflexive && symmetric && antitransitive,
        order: reflexive && antisymmetric && transitive,
        strict_order: irreflexive && antisymmetric && transitive,
        preorder,
        total_preorder: preorder && linear,
        well_order: is_well_founded_unique(r),
    }
}

/// Every nonempty subset has exactly one element related to all its other
/// members.
fn is_well_founded_unique(r: &TupleSet) -> bool {
    let n = r.universe();
    let below: Vec<u32> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x && r.contains(&[x, y]))
                .fold(0, |m, y| m | 1 << y)
        })
        .collect();
    (1u32..1 << n).all(|a| {
        let least = (0..n)
            .filter(|&x| a >> x & 1 == 1 && (a & !(1 << x)) & !below[x] == 0)
            .count();
        least == 1
    })
}

pub fn classify_binary(s: &Structure, rel: &str) -> Result<BinaryReport, PropsError> {
    Ok(classify_table(s.binary(rel)?.tuples()))
}

/// A universally quantified check with its first counterexample in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Vec<Element>>,
}

impl Check {
    fn first<I: IntoIterator<Item = Vec<Element>>>(counterexamples: I) -> Check {
        let witness = counterexamples.into_iter().next();
        Check {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReport {
    /// `[a,b,c] => ![c,b,a]`
    pub asymmetry3: Check,
    /// `[a,b,c] & [a,c,d] => [a,b,d]`
    pub transitivity3: Check,
    /// `[a,b,c] => [b,c,a]`
    pub cyclicity: Check,
    /// every distinct triple is ordered one way or the other
    pub completeness3: Check,
    /// `[x,y,z] => exists t. [x,y,t] & [x,t,z]`, `t` outside the triple
    pub dense3: Check,
}

impl CyclicReport {
    pub fn checks(&self) -> Vec<(&'static str, &Check)> {
        vec![
            ("asymmetry3", &self.asymmetry3),
            ("transitivity3", &self.transitivity3),
            ("cyclicity", &self.cyclicity),
            ("completeness3", &self.completeness3),
            ("dense3", &self.dense3),
        ]
    }

    pub fn is_cyclic_order(&self) -> bool {
        self.asymmetry3.holds && self.transitivity3.holds && self.cyclicity.holds
    }
}

fn distinct_tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<Element>> {
    let total = crate::tuples::slot_count(n, k).unwrap_or(0);
    (0..total)
        .map(move |i| crate::tuples::decode(n, k, i))
        .filter(|t| crate::tuples::is_distinct(t))
}

pub fn classify_ternary(c: &TupleSet) -> CyclicReport {
    assert_eq!(c.arity(), 3, "ternary table expected");
    let n = c.universe();
    let at = |a: usize, b: usize, d: usize| c.contains(&[a, b, d]);
    CyclicReport {
        asymmetry3: Check::first(
            distinct_tuples(n, 3).filter(|t| at(t[0], t[1], t[2]) && at(t[2], t[1], t[0])),
        ),
        transitivity3: Check::first(distinct_tuples(n, 4).filter(|t| {
            let (a, b, x, d) = (t[0], t[1], t[2], t[3]);
            at(a, b, x) && at(a, x, d) && !at(a, b, d)
        })),
        cyclicity: Check::first(
            distinct_tuples(n, 3).filter(|t| at(t[0], t[1], t[2]) && !at(t[1], t[2], t[0])),
        ),
        completeness3: Check::first(
            distinct_tuples(n, 3).filter(|t| !at(t[0], t[1], t[2]) && !at(t[2], t[1], t[0])),
        ),
        dense3: Check::first(distinct_tuples(n, 3).filter(|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            at(x, y, z) && !(0..n).any(|w| !t.contains(&w) && at(x, y, w) && at(x, w, z))
        })),
    }
}

pub fn classify_cyclic(s: &Structure, rel: &str) -> Result<CyclicReport, PropsError> {
    let table = s.relation(rel)?;
    if table.arity() != 3 {
        return Err(StructureError::ArityMismatch {
            relation: rel.to_string(),
            expected: 3,
            found: table.arity(),
        }
        .into());
    }
    Ok(classify_ternary(table.tuples()))
}

/// Strict linear order extending a distinguishability: related pairs are
/// oriented from lower to higher index, closed transitively, and the
/// remaining incomparable elements are ordered by index.
pub fn linearize(s: &Structure, rel: &str) -> Result<RelationTable, PropsError> {
    let r = s.binary(rel)?.tuples();
    if !classify_table(r).distinguishability {
        return Err(PropsError::NotDistinguishability {
            relation: rel.to_string(),
        });
    }
    let n = s.universe_size();
    let mut oriented = TupleSet::empty(n, 2);
    for t in r.iter() {
        if t[0] < t[1] {
            oriented.insert(&t);
        }
    }
    let closed = transitive_closure(&oriented);
    // Kahn's algorithm, least index first among the available elements
    let mut indegree: Vec<usize> = (0..n)
        .map(|y| (0..n).filter(|&x| closed.contains(&[x, y])).count())
        .collect();
    let mut placed = vec![false; n];
    let mut sequence = Vec::with_capacity(n);
    while sequence.len() < n {
        let next = (0..n)
            .find(|&x| !placed[x] && indegree[x] == 0)
            .expect("oriented pairs form no cycle");
        placed[next] = true;
        sequence.push(next);
        for y in 0..n {
            if closed.contains(&[next, y]) {
                indegree[y] -= 1;
            }
        }
    }
    let mut out = TupleSet::empty(n, 2);
    for (i, &a) in sequence.iter().enumerate() {
        for &b in &sequence[i + 1..] {
            out.insert(&[a, b]);
        }
    }
    Ok(RelationTable::new(alloc::format!("linear({rel})"), out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightSegmentReport {
    /// Upward-closed sets with an outside element below an inside one,
    /// in increasing bitmask order.
    pub proper_segments: Vec<Vec<Element>>,
    /// `principal_upsets[x] = {t | rho(x,t)} ∪ {x}`.
    pub principal_upsets: Vec<Vec<Element>>,
}

pub fn right_segments(s: &Structure, rel: &str) -> Result<RightSegmentReport, PropsError> {
    let r = s.binary(rel)?.tuples();
    if !classify_table(r).is_linear_order() {
        return Err(PropsError::NotAnOrder {
            relation: rel.to_string(),
        });
    }
    let n = s.universe_size();
    let members = |mask: u32| (0..n).filter(move |&x| mask >> x & 1 == 1);
    let mut proper_segments = Vec::new();
    for mask in 0u32..1 << n {
        let inside = |x: usize| mask >> x & 1 == 1;
        let closed = members(mask).all(|x| (0..n).all(|y| !r.contains(&[x, y]) || inside(y)));
        let witnessed = (0..n).any(|t| !inside(t) && members(mask).any(|x| r.contains(&[t, x])));
        if closed && witnessed {
            proper_segments.push(members(mask).collect());
        }
    }
    let principal_upsets = (0..n)
        .map(|x| (0..n).filter(|&t| t == x || r.contains(&[x, t])).collect())
        .collect();
    Ok(RightSegmentReport {
        proper_segments,
        principal_upsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relalg::{relation_algebra, RelExpr};

    fn chain(n: usize, reflexive: bool) -> Structure {
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x < y || (reflexive && x == y) {
                    pairs.push([x, y]);
                }
            }
        }
        Structure::new(n)
            .unwrap()
            .with_relation("R", 2, pairs)
            .unwrap()
    }

    fn table(s: &Structure, e: RelExpr) -> TupleSet {
        relation_algebra(s, &e).unwrap().into_tuples()
    }

    #[test]
    fn strict_chain() {
        let r = classify_binary(&chain(3, false), "R").unwrap();
        assert!(r.irreflexive && r.antisymmetric && r.linear);
        assert_eq!(r.transitive, Tri::Holds);
        assert_eq!(r.reflexive, Tri::Negated);
        assert_eq!(r.symmetric, Tri::Negated);
        assert!(!r.dense);
        assert!(r.strict_order && !r.order);
        assert!(r.has_least && r.has_greatest);
        assert!(r.well_order);
    }

    #[test]
    fn inequality_and_equality() {
        let s = Structure::new(3).unwrap();
        let neq = classify_table(&table(&s, RelExpr::Diag.complement()));
        assert!(neq.distinguishability && !neq.equivalence);
        let eq = classify_table(&table(&s, RelExpr::Diag));
        assert!(eq.equivalence && !eq.distinguishability);
        assert_eq!(eq.transitive, Tri::Holds);
    }

    #[test]
    fn three_valued_flags() {
        let s = Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 0], [0, 1]])
            .unwrap();
        let r = classify_binary(&s, "R").unwrap();
        assert_eq!(r.reflexive, Tri::Neither);
        assert_eq!(r.symmetric, Tri::Neither);
        let c3 = Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [1, 2], [2, 0]])
            .unwrap();
        assert_eq!(classify_binary(&c3, "R").unwrap().transitive, Tri::Negated);
    }

    #[test]
    fn chain_composition_is_strictly_smaller() {
        for n in 2..=5 {
            let s = chain(n, false);
            assert!(!classify_binary(&s, "R").unwrap().dense);
            let r = table(&s, RelExpr::named("R"));
            let rr = table(&s, RelExpr::named("R").compose(RelExpr::named("R")));
            assert!(rr.is_subset(&r) && rr != r);
        }
    }

    fn z(n: usize) -> Structure {
        let mut tuples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (db, dc) = ((b + n - a) % n, (c + n - a) % n);
                    if 0 < db && db < dc {
                        tuples.push([a, b, c]);
                    }
                }
            }
        }
        Structure::new(n)
            .unwrap()
            .with_relation("C", 3, tuples)
            .unwrap()
    }

    #[test]
    fn cyclic_order_on_four_points() {
        let r = classify_cyclic(&z(4), "C").unwrap();
        assert!(r.asymmetry3.holds && r.transitivity3.holds && r.cyclicity.holds);
        assert!(r.completeness3.holds);
        assert!(!r.dense3.holds);
        assert_eq!(r.dense3.witness, Some(vec![0, 1, 2]));
    }

    #[test]
    fn degenerate_ternary_relations() {
        let empty = Structure::new(3)
            .unwrap()
            .with_relation::<[usize; 3]>("C", 3, [])
            .unwrap();
        let r = classify_cyclic(&empty, "C").unwrap();
        assert!(r.asymmetry3.holds);
        assert!(!r.completeness3.holds);
        let both = Structure::new(3)
            .unwrap()
            .with_relation("C", 3, [[0, 1, 2], [2, 1, 0]])
            .unwrap();
        let r = classify_cyclic(&both, "C").unwrap();
        assert_eq!(r.asymmetry3.witness, Some(vec![0, 1, 2]));
        assert!(classify_cyclic(&chain(3, false), "R").is_err());
    }

    #[test]
    fn linearization() {
        let s = Structure::new(3)
            .unwrap()
            .with_relation("N", 2, [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]])
            .unwrap();
        assert_eq!(
            linearize(&s, "N").unwrap().to_vec(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        let across = Structure::new(3)
            .unwrap()
            .with_relation("D", 2, [[0, 2], [2, 0], [1, 2], [2, 1]])
            .unwrap();
        assert_eq!(
            linearize(&across, "D").unwrap().to_vec(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        let one = Structure::new(1)
            .unwrap()
            .with_relation::<[usize; 2]>("E", 2, [])
            .unwrap();
        assert!(linearize(&one, "E").unwrap().is_empty());
        assert!(matches!(
            linearize(&chain(3, false), "R"),
            Err(PropsError::NotDistinguishability { .. })
        ));
    }

    #[test]
    fn segments() {
        let r = right_segments(&chain(3, true), "R").unwrap();
        assert_eq!(r.proper_segments, vec![vec![2], vec![1, 2]]);
        assert_eq!(r.principal_upsets, vec![vec![0, 1, 2], vec![1, 2], vec![2]]);
        let one = right_segments(&chain(1, true), "R").unwrap();
        assert!(one.proper_segments.is_empty());
        assert_eq!(one.principal_upsets, vec![vec![0]]);
        let strict = right_segments(&chain(2, false), "R").unwrap();
        assert_eq!(strict.proper_segments, vec![vec![1]]);
        let c3 = Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [1, 2], [2, 0]])
            .unwrap();
        assert!(matches!(
            right_segments(&c3, "R"),
            Err(PropsError::NotAnOrder { .. })
        ));
    }
}
