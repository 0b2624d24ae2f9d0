//! Automorphism groups and orbit partitions of finite structures.
//!
//! On a finite structure a set of tuples is definable without constants
//! exactly when every automorphism preserves it, so the orbits computed here
//! are the exact definability oracle for the scheme checks.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::structure::Structure;
use crate::tuples::{decode, encode, is_distinct, k_subsets, slot_count, Element};

/// Default largest universe for automorphism search.
pub const DEFAULT_AUT_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutError {
    AutLimitExceeded { universe: usize, limit: usize },
}

impl AutError {
    pub fn kind(&self) -> &'static str {
        "AutLimitExceeded"
    }
}

impl fmt::Display for AutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutError::AutLimitExceeded { universe, limit } => write!(
                f,
                "universe size {universe} exceeds the automorphism search limit {limit}"
            ),
        }
    }
}

impl core::error::Error for AutError {}

/// The automorphisms of a structure, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    degree: usize,
    perms: Vec<Vec<Element>>,
}

impl AutGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<Element>] {
        &self.perms
    }

    pub fn contains(&self, perm: &[Element]) -> bool {
        self.perms
            .binary_search_by(|p| p.as_slice().cmp(perm))
            .is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.len() == 1
    }

    /// Identity present, closed under composition and inverses.
    pub fn satisfies_group_axioms(&self) -> bool {
        let id: Vec<Element> = (0..self.degree).collect();
        if !self.contains(&id) {
            return false;
        }
        for p in &self.perms {
            let mut inv = vec![0; self.degree];
            for (i, &pi) in p.iter().enumerate() {
                inv[pi] = i;
            }
            if !self.contains(&inv) {
                return false;
            }
            for q in &self.perms {
                let pq: Vec<Element> = q.iter().map(|&qi| p[qi]).collect();
                if !self.contains(&pq) {
                    return false;
                }
            }
        }
        true
    }

    /// Partition of `0..degree` into point orbits, ordered by least element.
    pub fn point_orbits(&self) -> Vec<Vec<Element>> {
        self.orbits(1, OrbitKind::Subsets)
            .classes
            .into_iter()
            .map(|c| c.into_iter().map(|t| t[0]).collect())
            .collect()
    }

    /// Orbits of the group on distinct-entry `k`-tuples or on `k`-subsets.
    pub fn orbits(&self, k: usize, kind: OrbitKind) -> OrbitPartition {
        let n = self.degree;
        let items: Vec<Vec<Element>> = match kind {
            OrbitKind::Subsets => k_subsets(n, k),
            OrbitKind::Tuples => {
                let total = slot_count(n, k).unwrap_or(0);
                (0..total)
                    .map(|i| decode(n, k, i))
                    .filter(|t| is_distinct(t))
                    .collect()
            }
        };
        let mut seen: BTreeSet<Vec<Element>> = BTreeSet::new();
        let mut classes = Vec::new();
        for item in items {
            if seen.contains(&item) {
                continue;
            }
            let mut class: BTreeSet<Vec<Element>> = BTreeSet::new();
            for g in &self.perms {
                let mut image: Vec<Element> = item.iter().map(|&e| g[e]).collect();
                if kind == OrbitKind::Subsets {
                    image.sort_unstable();
                }
                class.insert(image);
            }
            seen.extend(class.iter().cloned());
            classes.push(class.into_iter().collect());
        }
        OrbitPartition { kind, k, classes }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Tuples,
    Subsets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub kind: OrbitKind,
    pub k: usize,
    /// Each class sorted; classes ordered by least member.
    pub classes: Vec<Vec<Vec<Element>>>,
}

impl OrbitPartition {
    pub fn class_of(&self, item: &[Element]) -> Option<usize> {
        let mut key = item.to_vec();
        if self.kind == OrbitKind::Subsets {
            key.sort_unstable();
        }
        self.classes
            .iter()
            .position(|c| c.binary_search(&key).is_ok())
    }
}

/// Tuples of each relation whose largest entry is `i`, grouped by `i`, so
/// a partial map on `0..=i` can be checked as soon as `i` is assigned.
struct LevelChecks {
    per_level: Vec<Vec<(usize, Vec<Element>)>>,
}

fn level_checks(s: &Structure) -> LevelChecks {
    let n = s.universe_size();
    let mut per_level = vec![Vec::new(); n];
    for (ri, r) in s.relations().enumerate() {
        let total = slot_count(n, r.arity()).unwrap_or(0);
        for idx in 0..total {
            let t = decode(n, r.arity(), idx);
            let top = *t.iter().max().unwrap();
            per_level[top].push((ri, t));
        }
    }
    LevelChecks { per_level }
}

/// Automorphism group by backtracking over images in ascending order,
/// pruning as soon as a relation row over the assigned prefix breaks.
pub fn automorphism_group(s: &Structure) -> Result<AutGroup, AutError> {
    automorphism_group_with_limit(s, DEFAULT_AUT_LIMIT)
}

pub fn automorphism_group_with_limit(s: &Structure, limit: usize) -> Result<AutGroup, AutError> {
    let n = s.universe_size();
    if n > limit {
        return Err(AutError::AutLimitExceeded { universe: n, limit });
    }
    let tables: Vec<_> = s.relations().map(|r| r.tuples()).collect();
    let checks = level_checks(s);
    let mut perms = Vec::new();
    let mut image = vec![0; n];
    let mut used = vec![false; n];

    fn search(
        i: usize,
        n: usize,
        image: &mut Vec<Element>,
        used: &mut Vec<bool>,
        checks: &LevelChecks,
        tables: &[&crate::tuples::TupleSet],
        out: &mut Vec<Vec<Element>>,
    ) {
        if i == n {
            out.push(image.clone());
            return;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            image[i] = cand;
            let ok = checks.per_level[i].iter().all(|(ri, t)| {
                let mapped: Vec<Element> = t.iter().map(|&e| image[e]).collect();
                let table = tables[*ri];
                table.contains_index(encode(n, t)) == table.contains_index(encode(n, &mapped))
            });
            if ok {
                used[cand] = true;
                search(i + 1, n, image, used, checks, tables, out);
                used[cand] = false;
            }
        }
    }
    search(0, n, &mut image, &mut used, &checks, &tables, &mut perms);
    Ok(AutGroup { degree: n, perms })
}

pub fn orbits(s: &Structure, k: usize, kind: OrbitKind) -> Result<OrbitPartition, AutError> {
    Ok(automorphism_group(s)?.orbits(k, kind))
}

/// Is the group transitive on `n`-element subsets? Vacuously true when
/// there are fewer than two such subsets.
pub fn is_n_homogeneous(s: &Structure, n: usize) -> Result<bool, AutError> {
    Ok(orbits(s, n, OrbitKind::Subsets)?.classes.len() <= 1)
}
