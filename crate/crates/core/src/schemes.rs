//! Uniformity, minimality and atomicity schemes checked on one structure.
//!
//! Three readings of "every admissible formula" are supported:
//! `Formulas(d)` ranges over formulas of height at most `d`, `Orbits` over
//! every automorphism-invariant set (on a finite structure, exactly the
//! constant-free definable sets), and `Subsets` over arbitrary subsets.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::aut::{automorphism_group, AutError, OrbitKind};
use crate::definable::{Definable, Definition};
use crate::formula::enumerate::slot_name;
use crate::formula::{truth_set, Formula, FormulaError};
use crate::structure::{Structure, StructureError};
use crate::tuples::{k_subsets, nonempty_subsets_lex, permutations, Element, TupleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Formulas(usize),
    Orbits,
    Subsets,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Formulas(d) => write!(f, "formulas:{d}"),
            Mode::Orbits => f.write_str("orbits"),
            Mode::Subsets => f.write_str("subsets"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "orbits" => Ok(Mode::Orbits),
            "subsets" => Ok(Mode::Subsets),
            _ => s
                .strip_prefix("formulas:")
                .and_then(|d| d.parse().ok())
                .map(Mode::Formulas)
                .ok_or_else(|| format!("unknown mode {s:?} (orbits, subsets or formulas:D)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Uniform,
    Q,
    Q1,
    F,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Uniform => "uniform",
            Scheme::Q => "q",
            Scheme::Q1 => "q1",
            Scheme::F => "f",
        }
    }

    pub fn default_mode(self) -> Mode {
        match self {
            Scheme::Uniform => Mode::Orbits,
            _ => Mode::Subsets,
        }
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Scheme::Uniform),
            "q" => Ok(Scheme::Q),
            "q1" => Ok(Scheme::Q1),
            "f" => Ok(Scheme::F),
            _ => Err(format!("unknown scheme {s:?} (uniform, q, q1 or f)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Some distinct tuple satisfies the instance, another has no
    /// satisfying rearrangement.
    NotUniform,
    NoMinimizer,
    MultipleMinimizers,
    /// The minimizer set of an admissible set is empty.
    EmptyCore,
    /// The minimizer set is split by another admissible set.
    SplitCore,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::NotUniform => "not_uniform",
            ViolationKind::NoMinimizer => "no_minimizer",
            ViolationKind::MultipleMinimizers => "multiple_minimizers",
            ViolationKind::EmptyCore => "empty_core",
            ViolationKind::SplitCore => "split_core",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Formula(Formula),
    Subset(Vec<Element>),
    OrbitClasses(Vec<Vec<Vec<Element>>>),
}

/// An admissible set and its minimizer set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSet {
    pub set: Vec<Element>,
    pub z: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeVerdict {
    pub scheme: Scheme,
    pub holds: bool,
    pub mode: Mode,
    /// Uniformity level.
    pub n: Option<usize>,
    pub violation: Option<ViolationKind>,
    pub witness: Option<Witness>,
    /// Variable order of `witness_tuple` and `falsifying_tuple` when the
    /// witness is a formula.
    pub variables: Vec<String>,
    /// Elements of the violating admissible set.
    pub witness_set: Option<Vec<Element>>,
    pub witness_tuple: Option<Vec<Element>>,
    pub falsifying_tuple: Option<Vec<Element>>,
    pub minimizers: Option<Vec<Element>>,
    pub separator: Option<Witness>,
    pub separator_set: Option<Vec<Element>>,
    pub z_sets: Vec<ZSet>,
    pub warnings: Vec<String>,
}

impl SchemeVerdict {
    fn new(scheme: Scheme, mode: Mode) -> Self {
        SchemeVerdict {
            scheme,
            holds: true,
            mode,
            n: None,
            violation: None,
            witness: None,
            variables: Vec::new(),
            witness_set: None,
            witness_tuple: None,
            falsifying_tuple: None,
            minimizers: None,
            separator: None,
            separator_set: None,
            z_sets: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn violated(mut self, kind: ViolationKind) -> Self {
        self.holds = false;
        self.violation = Some(kind);
        self
    }
}

const EMPTY_UNIVERSE: &str = "empty universe: the scheme holds vacuously";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeError {
    Structure(StructureError),
    Formula(FormulaError),
    Aut(AutError),
    BadMode { scheme: Scheme, mode: Mode },
    BadLevel,
    ArityMismatch { expected: usize, found: usize },
}

impl SchemeError {
    pub fn kind(&self) -> &'static str {
        match self {
            SchemeError::Structure(e) => e.kind(),
            SchemeError::Formula(e) => e.kind(),
            SchemeError::Aut(e) => e.kind(),
            SchemeError::BadMode { .. } => "BadMode",
            SchemeError::BadLevel => "BadLevel",
            SchemeError::ArityMismatch { .. } => "ArityMismatch",
        }
    }
}

impl fmt::Display for SchemeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeError::Structure(e) => e.fmt(f),
            SchemeError::Formula(e) => e.fmt(f),
            SchemeError::Aut(e) => e.fmt(f),
            SchemeError::BadMode { scheme, mode } => {
                write!(
                    f,
                    "mode {mode} is not available for the {} scheme",
                    scheme.as_str()
                )
            }
            SchemeError::BadLevel => f.write_str("the uniformity level must be at least 1"),
            SchemeError::ArityMismatch { expected, found } => write!(
                f,
                "the instance has {found} free variables but the level is {expected}"
            ),
        }
    }
}

impl core::error::Error for SchemeError {}

impl From<StructureError> for SchemeError {
    fn from(e: StructureError) -> Self {
        SchemeError::Structure(e)
    }
}

impl From<FormulaError> for SchemeError {
    fn from(e: FormulaError) -> Self {
        SchemeError::Formula(e)
    }
}

impl From<AutError> for SchemeError {
    fn from(e: AutError) -> Self {
        SchemeError::Aut(e)
    }
}

/// Decides whether an `n`-ary table breaks the uniformity instance, given
/// the `n`-subsets and the permutations of `0..n`.
struct UniformTest {
    subsets: Vec<Vec<Element>>,
    perms: Vec<Vec<usize>>,
}

impl UniformTest {
    fn new(universe: usize, n: usize) -> Self {
        UniformTest {
            subsets: k_subsets(universe, n),
            perms: permutations(n),
        }
    }

    /// `(first distinct tuple in t, first n-subset none of whose
    /// arrangements is in t)` when both exist.
    fn violation(&self, t: &TupleSet) -> Option<(Vec<Element>, Vec<Element>)> {
        let witness = t.iter().find(|x| crate::tuples::is_distinct(x))?;
        let falsifier = self.subsets.iter().find(|set| {
            !self.perms.iter().any(|p| {
                let arranged: Vec<Element> = p.iter().map(|&i| set[i]).collect();
                t.contains(&arranged)
            })
        })?;
        Some((witness, falsifier.clone()))
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Checks n-uniformity. With `instance` given, only that formula is checked
/// (its free variables, sorted by name, play the roles of the `n` positions).
pub fn check_uniformity(
    s: &Structure,
    n: usize,
    mode: Mode,
    instance: Option<&Formula>,
) -> Result<SchemeVerdict, SchemeError> {
    if n == 0 {
        return Err(SchemeError::BadLevel);
    }
    if mode == Mode::Subsets {
        return Err(SchemeError::BadMode {
            scheme: Scheme::Uniform,
            mode,
        });
    }
    let mut v = SchemeVerdict::new(Scheme::Uniform, mode);
    v.n = Some(n);
    if let Some(f) = instance {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        if free.len() != n {
            return Err(SchemeError::ArityMismatch {
                expected: n,
                found: free.len(),
            });
        }
        let vars: Vec<&str> = free.iter().map(String::as_str).collect();
        let table = truth_set(s, f, &vars)?;
        v.variables = free.clone();
        if s.universe_size() == 0 {
            v.warnings.push(EMPTY_UNIVERSE.to_owned());
            return Ok(v);
        }
        if let Some((w, x)) = UniformTest::new(s.universe_size(), n).violation(&table) {
            v = v.violated(ViolationKind::NotUniform);
            v.witness = Some(Witness::Formula(f.clone()));
            v.witness_tuple = Some(w);
            v.falsifying_tuple = Some(x);
        }
        return Ok(v);
    }
    let u = s.universe_size();
    if u == 0 {
        v.warnings.push(EMPTY_UNIVERSE.to_owned());
        return Ok(v);
    }
    match mode {
        Mode::Orbits => {
            let classes = automorphism_group(s)?.orbits(n, OrbitKind::Subsets).classes;
            if classes.len() > 1 {
                v.witness_tuple = Some(classes[0][0].clone());
                v.falsifying_tuple = Some(classes[1][0].clone());
                v.witness = Some(Witness::OrbitClasses(classes));
                v = v.violated(ViolationKind::NotUniform);
            }
        }
        Mode::Formulas(depth) => {
            v.variables = (0..n).map(|i| slot_name(i, n)).collect();
            // with at most one n-subset every nonempty instance is closed
            if binomial(u, n) <= 1 {
                return Ok(v);
            }
            let test = UniformTest::new(u, n);
            let mut engine = Definable::new(s, n, depth)?;
            if let Some(hit) = engine.find(|t| test.violation(t).is_some()) {
                let (w, x) = test.violation(&hit.table).unwrap();
                v = v.violated(ViolationKind::NotUniform);
                v.witness = Some(Witness::Formula(hit.formula));
                v.witness_tuple = Some(w);
                v.falsifying_tuple = Some(x);
            }
        }
        Mode::Subsets => unreachable!(),
    }
    Ok(v)
}

/// Levels `1..=max_n` at which the structure is uniform under the orbit
/// oracle. Levels above the universe size always pass.
pub fn uniformity_degrees(s: &Structure, max_n: usize) -> Result<Vec<usize>, SchemeError> {
    let group = automorphism_group(s)?;
    Ok((1..=max_n)
        .filter(|&n| group.orbits(n, OrbitKind::Subsets).classes.len() <= 1)
        .collect())
}

/// Unary formulas of height at most `depth` with a truth set other than
/// empty or everything, one per distinct truth set, in generation order.
pub fn find_indicators(s: &Structure, depth: usize) -> Result<Vec<Definition>, SchemeError> {
    if s.universe_size() == 0 {
        return Ok(Vec::new());
    }
    let mut engine = Definable::new(s, 1, depth)?;
    Ok(engine
        .all()
        .into_iter()
        .filter(|d| !d.table.is_empty() && !d.table.is_full())
        .collect())
}

/// Point orbits of the automorphism group: elements no definable unary set
/// separates.
pub fn indiscernibility_partition(s: &Structure) -> Result<Vec<Vec<Element>>, SchemeError> {
    Ok(automorphism_group(s)?.point_orbits())
}

fn mask_of(elements: &[Element]) -> u32 {
    elements.iter().fold(0, |m, &e| m | 1 << e)
}

fn elements_of(mask: u32) -> Vec<Element> {
    (0..32).filter(|&e| mask >> e & 1 == 1).collect()
}

/// `down[x]` = mask of every `y` with `rho(x,y)`.
fn rows(r: &TupleSet) -> Vec<u32> {
    let n = r.universe();
    (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| r.contains(&[x, y]))
                .fold(0, |m, y| m | 1 << y)
        })
        .collect()
}

fn minimizers(down: &[u32], a: u32) -> u32 {
    (0..down.len())
        .filter(|&x| a >> x & 1 == 1 && a & !down[x] == 0)
        .fold(0, |m, x| m | 1 << x)
}

/// An admissible unary set, with the formula defining it in formulas mode.
struct Admissible {
    mask: u32,
    formula: Option<Formula>,
}

impl Admissible {
    fn witness(&self) -> Witness {
        match &self.formula {
            Some(f) => Witness::Formula(f.clone()),
            None => Witness::Subset(elements_of(self.mask)),
        }
    }
}

fn orbit_unions(s: &Structure) -> Result<Vec<Admissible>, SchemeError> {
    let orbits = automorphism_group(s)?.point_orbits();
    let masks: Vec<u32> = orbits.iter().map(|o| mask_of(o)).collect();
    let mut unions: Vec<Vec<Element>> = (1u32..1 << masks.len())
        .map(|pick| {
            let m = (0..masks.len())
                .filter(|&i| pick >> i & 1 == 1)
                .fold(0, |m, i| m | masks[i]);
            elements_of(m)
        })
        .collect();
    unions.sort();
    Ok(unions
        .into_iter()
        .map(|set| Admissible {
            mask: mask_of(&set),
            formula: None,
        })
        .collect())
}

fn definable_sets(s: &Structure, depth: usize) -> Result<Vec<Admissible>, SchemeError> {
    Ok(Definable::new(s, 1, depth)?
        .all()
        .into_iter()
        .map(|d| Admissible {
            mask: d.table.iter().fold(0, |m, t| m | 1 << t[0]),
            formula: Some(d.formula),
        })
        .collect())
}

fn lex_subsets(n: usize) -> impl Iterator<Item = Admissible> {
    nonempty_subsets_lex(n).into_iter().map(|set| Admissible {
        mask: mask_of(&set),
        formula: None,
    })
}

/// Every admissible nonempty set has exactly one element below all of its
/// members under `rho`.
pub fn check_q(s: &Structure, rho: &str, mode: Mode) -> Result<SchemeVerdict, SchemeError> {
    let down = rows(s.binary(rho)?.tuples());
    let mut v = SchemeVerdict::new(Scheme::Q, mode);
    if s.universe_size() == 0 {
        v.warnings.push(EMPTY_UNIVERSE.to_owned());
        return Ok(v);
    }
    let sets: alloc::boxed::Box<dyn Iterator<Item = Admissible>> = match mode {
        Mode::Subsets => alloc::boxed::Box::new(lex_subsets(s.universe_size())),
        Mode::Orbits => alloc::boxed::Box::new(orbit_unions(s)?.into_iter()),
        Mode::Formulas(d) => alloc::boxed::Box::new(definable_sets(s, d)?.into_iter()),
    };
    for a in sets.filter(|a| a.mask != 0) {
        let z = minimizers(&down, a.mask);
        if z.count_ones() != 1 {
            let kind = if z == 0 {
                ViolationKind::NoMinimizer
            } else {
                ViolationKind::MultipleMinimizers
            };
            v = v.violated(kind);
            v.witness = Some(a.witness());
            v.witness_set = Some(elements_of(a.mask));
            v.minimizers = Some(elements_of(z));
            break;
        }
    }
    Ok(v)
}

/// Every finite subset has a unique `rho`-least member. Same meaning as
/// [`check_q`] in subsets mode, computed separately over bitmasks.
pub fn check_f(s: &Structure, rho: &str) -> Result<SchemeVerdict, SchemeError> {
    let r = s.binary(rho)?.tuples();
    let n = s.universe_size();
    let mut v = SchemeVerdict::new(Scheme::F, Mode::Subsets);
    if n == 0 {
        v.warnings.push(EMPTY_UNIVERSE.to_owned());
        return Ok(v);
    }
    // lower[y] = elements x with rho(x, y)
    let mut lower = [0u32; 32];
    for t in r.iter() {
        lower[t[1]] |= 1 << t[0];
    }
    let mut worst: Option<(Vec<Element>, u32)> = None;
    for set in 1u32..1 << n {
        let mut least = set;
        let mut rest = set;
        while rest != 0 {
            let y = rest.trailing_zeros() as usize;
            least &= lower[y];
            rest &= rest - 1;
        }
        if least.count_ones() != 1 {
            let key = elements_of(set);
            if worst.as_ref().is_none_or(|(k, _)| key < *k) {
                worst = Some((key, least));
            }
        }
    }
    if let Some((set, least)) = worst {
        let kind = if least == 0 {
            ViolationKind::NoMinimizer
        } else {
            ViolationKind::MultipleMinimizers
        };
        v = v.violated(kind);
        v.witness = Some(Witness::Subset(set.clone()));
        v.witness_set = Some(set);
        v.minimizers = Some(elements_of(least));
    }
    Ok(v)
}

/// For every admissible nonempty `A` the set `z_A` of elements below all
/// of `A` under `delta` is nonempty, and no admissible `B` contains part
/// of `z_A` but not all of it.
pub fn check_q1(s: &Structure, delta: &str, mode: Mode) -> Result<SchemeVerdict, SchemeError> {
    let down = rows(s.binary(delta)?.tuples());
    let n = s.universe_size();
    let mut v = SchemeVerdict::new(Scheme::Q1, mode);
    if n == 0 {
        v.warnings.push(EMPTY_UNIVERSE.to_owned());
        return Ok(v);
    }
    let splits = |z: u32, b: u32| z & b != 0 && z & !b != 0;
    if mode == Mode::Subsets {
        let full = (1u32 << n) - 1;
        v.z_sets.push(ZSet {
            set: elements_of(full),
            z: elements_of(minimizers(&down, full)),
        });
        for a in lex_subsets(n) {
            let z = minimizers(&down, a.mask);
            let separator = if z == 0 {
                None
            } else {
                match lex_subsets(n).find(|b| splits(z, b.mask)) {
                    Some(b) => Some(b),
                    None => continue,
                }
            };
            record_q1_violation(&mut v, &a, z, separator);
            break;
        }
        return Ok(v);
    }
    let sets = match mode {
        Mode::Orbits => orbit_unions(s)?,
        Mode::Formulas(d) => definable_sets(s, d)?,
        Mode::Subsets => unreachable!(),
    };
    for a in sets.iter().filter(|a| a.mask != 0) {
        let z = minimizers(&down, a.mask);
        v.z_sets.push(ZSet {
            set: elements_of(a.mask),
            z: elements_of(z),
        });
        if !v.holds {
            continue;
        }
        if z == 0 {
            record_q1_violation(&mut v, a, z, None);
        } else if let Some(b) = sets.iter().find(|b| splits(z, b.mask)) {
            let b = Admissible {
                mask: b.mask,
                formula: b.formula.clone(),
            };
            record_q1_violation(&mut v, a, z, Some(b));
        }
    }
    Ok(v)
}

fn record_q1_violation(v: &mut SchemeVerdict, a: &Admissible, z: u32, b: Option<Admissible>) {
    v.holds = false;
    v.witness = Some(a.witness());
    v.witness_set = Some(elements_of(a.mask));
    v.minimizers = Some(elements_of(z));
    match b {
        None => v.violation = Some(ViolationKind::EmptyCore),
        Some(b) => {
            v.violation = Some(ViolationKind::SplitCore);
            v.separator = Some(b.witness());
            v.separator_set = Some(elements_of(b.mask));
        }
    }
    if v.mode == Mode::Subsets {
        v.z_sets.push(ZSet {
            set: elements_of(a.mask),
            z: elements_of(z),
        });
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Formula(x) => x.fmt(f),
            Witness::Subset(set) => write!(f, "{}", set_string(set)),
            Witness::OrbitClasses(classes) => {
                let parts: Vec<String> = classes
                    .iter()
                    .map(|c| {
                        let items: Vec<String> = c.iter().map(|t| set_string(t)).collect();
                        format!("[{}]", items.join(" "))
                    })
                    .collect();
                f.write_str(&parts.join(" | "))
            }
        }
    }
}

/// `{a,b,c}`
pub fn set_string(set: &[Element]) -> String {
    let items: Vec<String> = set.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{evaluate, parse_formula, Environment};
    use alloc::vec;

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

    fn c3() -> Structure {
        Structure::new(3)
            .unwrap()
            .with_relation("R", 2, [[0, 1], [1, 2], [2, 0]])
            .unwrap()
    }

    fn full(n: usize) -> Structure {
        let pairs: Vec<[usize; 2]> = (0..n).flat_map(|x| (0..n).map(move |y| [x, y])).collect();
        Structure::new(n)
            .unwrap()
            .with_relation("R", 2, pairs)
            .unwrap()
    }

    #[test]
    fn chain_is_not_one_uniform() {
        let s = chain(3, false);
        let v = check_uniformity(&s, 1, Mode::Orbits, None).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::OrbitClasses(vec![
                vec![vec![0]],
                vec![vec![1]],
                vec![vec![2]]
            ]))
        );
        let f = check_uniformity(&s, 1, Mode::Formulas(1), None).unwrap();
        assert!(!f.holds);
        let Some(Witness::Formula(w)) = &f.witness else {
            panic!()
        };
        assert_eq!(w.to_string(), "exists y1. R(x1,y1)");
        assert_eq!(f.witness_tuple, Some(vec![0]));
        assert_eq!(f.falsifying_tuple, Some(vec![2]));
        let env = |x| Environment::new().bind("x1", x);
        assert!(evaluate(&s, w, &env(0)).unwrap());
        assert!(!evaluate(&s, w, &env(2)).unwrap());
    }

    #[test]
    fn uniform_examples() {
        assert!(
            check_uniformity(&z(4), 1, Mode::Orbits, None)
                .unwrap()
                .holds
        );
        assert!(
            check_uniformity(&c3(), 2, Mode::Orbits, None)
                .unwrap()
                .holds
        );
        let v = check_uniformity(&chain(3, false), 5, Mode::Orbits, None).unwrap();
        assert!(v.holds);
        assert!(
            check_uniformity(&chain(3, false), 5, Mode::Formulas(2), None)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn single_instance() {
        let s = chain(3, false);
        let f = parse_formula("R(x,y)").unwrap();
        // every pair of distinct elements is comparable
        assert!(
            check_uniformity(&s, 2, Mode::Orbits, Some(&f))
                .unwrap()
                .holds
        );
        let g = parse_formula("R(x,y) & exists z. R(y,z)").unwrap();
        let v = check_uniformity(&s, 2, Mode::Orbits, Some(&g)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness_tuple, Some(vec![0, 1]));
        assert_eq!(v.falsifying_tuple, Some(vec![0, 2]));
        assert!(matches!(
            check_uniformity(&s, 1, Mode::Orbits, Some(&f)),
            Err(SchemeError::ArityMismatch {
                expected: 1,
                found: 2
            })
        ));
    }

    #[test]
    fn mode_and_level_errors() {
        let s = chain(2, false);
        assert!(matches!(
            check_uniformity(&s, 1, Mode::Subsets, None),
            Err(SchemeError::BadMode { .. })
        ));
        assert_eq!(
            check_uniformity(&s, 0, Mode::Orbits, None),
            Err(SchemeError::BadLevel)
        );
        assert_eq!("formulas:3".parse::<Mode>(), Ok(Mode::Formulas(3)));
        assert!("formulas".parse::<Mode>().is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(uniformity_degrees(&z(4), 4).unwrap(), vec![1, 3, 4]);
        assert_eq!(uniformity_degrees(&c3(), 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(uniformity_degrees(&chain(3, false), 3).unwrap(), vec![3]);
    }

    #[test]
    fn indicators() {
        let found = find_indicators(&chain(3, false), 1).unwrap();
        assert!(found
            .iter()
            .any(|d| d.formula.to_string() == "exists y1. R(x1,y1)"
                && d.table.to_vec() == vec![vec![0], vec![1]]));
        assert!(find_indicators(&z(4), 3).unwrap().is_empty());
        assert!(find_indicators(&Structure::new(3).unwrap(), 4)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn minimality() {
        assert!(check_q(&chain(3, true), "R", Mode::Subsets).unwrap().holds);
        let v = check_q(&full(2), "R", Mode::Subsets).unwrap();
        assert_eq!(v.violation, Some(ViolationKind::MultipleMinimizers));
        assert_eq!(v.witness_set, Some(vec![0, 1]));
        let w = check_q(&chain(3, false), "R", Mode::Subsets).unwrap();
        assert_eq!(w.violation, Some(ViolationKind::NoMinimizer));
        assert_eq!(w.witness, Some(Witness::Subset(vec![0])));
        assert_eq!(w.minimizers, Some(vec![]));
        for s in [chain(3, true), chain(3, false), full(2)] {
            let (q, f) = (
                check_q(&s, "R", Mode::Subsets).unwrap(),
                check_f(&s, "R").unwrap(),
            );
            assert_eq!(q.holds, f.holds);
            assert_eq!(q.witness_set, f.witness_set);
            assert_eq!(q.minimizers, f.minimizers);
        }
        let one = Structure::new(1)
            .unwrap()
            .with_relation("R", 2, [[0, 0]])
            .unwrap();
        assert!(check_q(&one, "R", Mode::Orbits).unwrap().holds);
        let bare = Structure::new(1)
            .unwrap()
            .with_relation::<[usize; 2]>("R", 2, [])
            .unwrap();
        assert!(!check_q(&bare, "R", Mode::Formulas(1)).unwrap().holds);
    }

    #[test]
    fn boolean_atomicity() {
        // classes {0,1} below {2}
        let pre = Structure::new(3)
            .unwrap()
            .with_relation(
                "D",
                2,
                [[0, 0], [0, 1], [1, 0], [1, 1], [0, 2], [1, 2], [2, 2]],
            )
            .unwrap();
        let v = check_q1(&pre, "D", Mode::Orbits).unwrap();
        assert!(v.holds);
        let zm = v.z_sets.iter().find(|z| z.set == vec![0, 1, 2]).unwrap();
        assert_eq!(zm.z, vec![0, 1]);
        let w = check_q1(&chain(3, false), "R", Mode::Subsets).unwrap();
        assert_eq!(w.violation, Some(ViolationKind::EmptyCore));
        assert!(check_q1(&full(3), "R", Mode::Orbits).unwrap().holds);
        let split = check_q1(&full(3), "R", Mode::Subsets).unwrap();
        assert_eq!(split.violation, Some(ViolationKind::SplitCore));
        assert_eq!(split.separator_set, Some(vec![0]));
        assert_eq!(split.z_sets[0].z, vec![0, 1, 2]);
    }

    #[test]
    fn partitions() {
        assert_eq!(
            indiscernibility_partition(&chain(3, false)).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            indiscernibility_partition(&z(4)).unwrap(),
            vec![vec![0, 1, 2, 3]]
        );
        assert_eq!(
            indiscernibility_partition(&Structure::new(3).unwrap()).unwrap(),
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn empty_universe_warns() {
        let s = Structure::new(0)
            .unwrap()
            .with_relation::<[usize; 2]>("R", 2, [])
            .unwrap();
        for v in [
            check_uniformity(&s, 1, Mode::Orbits, None).unwrap(),
            check_q(&s, "R", Mode::Subsets).unwrap(),
            check_q1(&s, "R", Mode::Subsets).unwrap(),
            check_f(&s, "R").unwrap(),
        ] {
            assert!(v.holds);
            assert_eq!(v.warnings.len(), 1);
        }
    }
}
