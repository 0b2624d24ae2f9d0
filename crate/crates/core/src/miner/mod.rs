//! Exhaustive enumeration of small structures and verification campaigns.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::aut::{automorphism_group, OrbitKind};
use crate::schemes::{
    check_f, check_q, check_q1, check_uniformity, uniformity_degrees, Mode, Scheme, SchemeError,
};
use crate::structure::{RelationTable, Structure, StructureError};
use crate::tuples::{decode, encode, permutations, slot_count, Element, TupleSet};

mod campaigns;

pub use campaigns::{run_campaign, CampaignParams, CAMPAIGNS};

/// Largest number of relation bits enumerated exhaustively.
pub const MAX_BITS: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinerError {
    SizeCapExceeded { bits: usize, cap: usize },
    UnknownCampaign(String),
    Scheme(SchemeError),
}

impl MinerError {
    pub fn kind(&self) -> &'static str {
        match self {
            MinerError::SizeCapExceeded { .. } => "SizeCapExceeded",
            MinerError::UnknownCampaign(_) => "UnknownCampaign",
            MinerError::Scheme(e) => e.kind(),
        }
    }
}

impl fmt::Display for MinerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinerError::SizeCapExceeded { bits, cap } => {
                write!(
                    f,
                    "{bits} relation bits exceed the enumeration cap of {cap}"
                )
            }
            MinerError::UnknownCampaign(name) => write!(
                f,
                "unknown campaign {name:?}; known campaigns: {}",
                CAMPAIGNS.join(", ")
            ),
            MinerError::Scheme(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for MinerError {}

impl From<SchemeError> for MinerError {
    fn from(e: SchemeError) -> Self {
        MinerError::Scheme(e)
    }
}

impl From<StructureError> for MinerError {
    fn from(e: StructureError) -> Self {
        MinerError::Scheme(e.into())
    }
}

/// Runs independent jobs and returns their results in job order.
pub trait Executor: Sync {
    fn run<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..jobs).map(f).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub universe: usize,
    pub signature: Vec<(String, usize)>,
    /// One representative per isomorphism class instead of every structure.
    pub unlabeled: bool,
}

impl EnumerationSpec {
    pub fn binary(universe: usize) -> Self {
        EnumerationSpec {
            universe,
            signature: alloc::vec![("R".to_string(), 2)],
            unlabeled: false,
        }
    }

    pub fn unlabeled(mut self) -> Self {
        self.unlabeled = true;
        self
    }

    /// Total number of relation slots; a structure is a bit string this long.
    pub fn bits(&self) -> usize {
        self.signature
            .iter()
            .map(|(_, a)| slot_count(self.universe, *a).unwrap_or(usize::MAX))
            .fold(0usize, |acc, b| acc.saturating_add(b))
    }

    pub fn validate(&self) -> Result<(), MinerError> {
        let bits = self.bits();
        if bits > MAX_BITS {
            return Err(MinerError::SizeCapExceeded {
                bits,
                cap: MAX_BITS,
            });
        }
        Ok(())
    }

    /// Number of labeled structures.
    pub fn count(&self) -> u64 {
        1u64 << self.bits()
    }

    /// The structure whose slot `j` (relations in signature order, tuples in
    /// lexicographic order) is bit `j` of `code`.
    pub fn decode(&self, code: u64) -> Structure {
        let mut s = Structure::new(self.universe).expect("universe validated");
        let mut offset = 0;
        for (name, arity) in &self.signature {
            let slots = slot_count(self.universe, *arity).unwrap();
            let mut t = TupleSet::empty(self.universe, *arity);
            for j in 0..slots {
                if code >> (offset + j) & 1 == 1 {
                    t.insert_index(j);
                }
            }
            s.insert_table(RelationTable::new(name.clone(), t))
                .expect("signature names are distinct");
            offset += slots;
        }
        s
    }

    pub fn encode(&self, s: &Structure) -> u64 {
        let mut code = 0u64;
        let mut offset = 0;
        for (name, arity) in &self.signature {
            let t = s
                .relation(name)
                .expect("structure matches the signature")
                .tuples();
            for j in t.indices() {
                code |= 1 << (offset + j);
            }
            offset += slot_count(self.universe, *arity).unwrap();
        }
        code
    }

    /// Least code over all relabelings of the structure with code `code`.
    pub fn canonical(&self, code: u64, maps: &SlotMaps) -> u64 {
        maps.maps
            .iter()
            .map(|m| {
                let mut out = 0u64;
                let mut rest = code;
                while rest != 0 {
                    let j = rest.trailing_zeros() as usize;
                    out |= 1 << m[j];
                    rest &= rest - 1;
                }
                out
            })
            .min()
            .unwrap_or(code)
    }

    pub fn slot_maps(&self) -> SlotMaps {
        let perms = permutations(self.universe);
        let maps = perms
            .iter()
            .map(|p| {
                let mut m = Vec::with_capacity(self.bits());
                let mut offset = 0;
                for (_, arity) in &self.signature {
                    let slots = slot_count(self.universe, *arity).unwrap();
                    for j in 0..slots {
                        let t: Vec<Element> = decode(self.universe, *arity, j)
                            .into_iter()
                            .map(|e| p[e])
                            .collect();
                        m.push((offset + encode(self.universe, &t)) as u8);
                    }
                    offset += slots;
                }
                m
            })
            .collect();
        SlotMaps { maps }
    }
}

/// For each permutation of the universe, where each slot is sent.
pub struct SlotMaps {
    maps: Vec<Vec<u8>>,
}

/// Structures in code order; in unlabeled mode only codes that are their
/// own canonical form.
pub fn enumerate_structures(
    spec: &EnumerationSpec,
) -> Result<impl Iterator<Item = Structure> + '_, MinerError> {
    spec.validate()?;
    let maps = spec.unlabeled.then(|| spec.slot_maps());
    Ok((0..spec.count())
        .filter(move |&c| maps.as_ref().is_none_or(|m| spec.canonical(c, m) == c))
        .map(move |c| spec.decode(c)))
}

/// Splits the code space into chunks by leading bits, runs `visit` on every
/// code of each chunk, and merges the per-chunk accumulators in code order.
pub fn sweep<E, F>(exec: &E, spec: &EnumerationSpec, visit: F) -> Result<Tally, MinerError>
where
    E: Executor,
    F: Fn(u64, &Structure, &mut Tally) + Sync,
{
    spec.validate()?;
    let bits = spec.bits();
    let lead = bits.min(6);
    let jobs = 1usize << lead;
    let width = bits - lead;
    let maps = spec.unlabeled.then(|| spec.slot_maps());
    let parts = exec.run(jobs, |j| {
        let mut acc = Tally::default();
        let base = (j as u64) << width;
        for c in base..base + (1u64 << width) {
            if let Some(m) = &maps {
                if spec.canonical(c, m) != c {
                    continue;
                }
            }
            visit(c, &spec.decode(c), &mut acc);
        }
        acc
    });
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    Ok(total)
}

/// Counters plus sample codes, merged by addition and concatenation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub counts: BTreeMap<String, u64>,
    pub samples: BTreeMap<String, Vec<u64>>,
}

impl Tally {
    pub fn bump(&mut self, key: &str) {
        *self.counts.entry(key.to_string()).or_default() += 1;
    }

    pub fn add(&mut self, key: &str, n: u64) {
        *self.counts.entry(key.to_string()).or_default() += n;
    }

    pub fn sample(&mut self, key: &str, code: u64) {
        self.samples.entry(key.to_string()).or_default().push(code);
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn samples(&self, key: &str) -> &[u64] {
        self.samples.get(key).map_or(&[], Vec::as_slice)
    }

    pub fn merge(&mut self, other: Tally) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        for (k, v) in other.samples {
            self.samples.entry(k).or_default().extend(v);
        }
    }
}

/// A binary table is trivial when it is empty, the diagonal, the
/// off-diagonal or everything.
pub fn is_trivial_binary(t: &TupleSet) -> bool {
    let n = t.universe();
    let diag = (0..n).all(|x| t.contains(&[x, x]));
    let nodiag = (0..n).all(|x| !t.contains(&[x, x]));
    let off = (0..n).all(|x| (0..n).all(|y| x == y || t.contains(&[x, y])));
    let nooff = (0..n).all(|x| (0..n).all(|y| x == y || !t.contains(&[x, y])));
    (diag || nodiag) && (off || nooff)
}

/// No element is related to every other one, and none has every other
/// one related to it.
pub fn is_not_very_simple(t: &TupleSet) -> bool {
    let n = t.universe();
    let to_all = (0..n).any(|x| (0..n).all(|y| y == x || t.contains(&[x, y])));
    let from_all = (0..n).any(|x| (0..n).all(|y| y == x || t.contains(&[y, x])));
    !to_all && !from_all
}

/// A recorded fact about one structure that can be recomputed from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    Uniform {
        structure: Structure,
        n: usize,
        mode: Mode,
        holds: bool,
    },
    Scheme {
        structure: Structure,
        scheme: Scheme,
        relation: String,
        mode: Mode,
        holds: bool,
    },
    AutOrder {
        structure: Structure,
        order: usize,
    },
    Degrees {
        structure: Structure,
        max: usize,
        degrees: Vec<usize>,
    },
    /// Orbits of the automorphism group on `k`-subsets.
    Orbits {
        structure: Structure,
        k: usize,
        classes: Vec<Vec<Vec<Element>>>,
    },
}

impl Claim {
    pub fn structure(&self) -> &Structure {
        match self {
            Claim::Uniform { structure, .. }
            | Claim::Scheme { structure, .. }
            | Claim::AutOrder { structure, .. }
            | Claim::Degrees { structure, .. }
            | Claim::Orbits { structure, .. } => structure,
        }
    }

    /// Recomputes the claim; `true` when the recorded value is reproduced.
    pub fn replay(&self) -> Result<bool, MinerError> {
        Ok(match self {
            Claim::Uniform {
                structure,
                n,
                mode,
                holds,
            } => check_uniformity(structure, *n, *mode, None)?.holds == *holds,
            Claim::Scheme {
                structure,
                scheme,
                relation,
                mode,
                holds,
            } => {
                let v = match scheme {
                    Scheme::Q => check_q(structure, relation, *mode)?,
                    Scheme::Q1 => check_q1(structure, relation, *mode)?,
                    Scheme::F => check_f(structure, relation)?,
                    Scheme::Uniform => return Ok(false),
                };
                v.holds == *holds
            }
            Claim::AutOrder { structure, order } => {
                automorphism_group(structure)
                    .map_err(SchemeError::from)?
                    .order()
                    == *order
            }
            Claim::Degrees {
                structure,
                max,
                degrees,
            } => uniformity_degrees(structure, *max)? == *degrees,
            Claim::Orbits {
                structure,
                k,
                classes,
            } => {
                automorphism_group(structure)
                    .map_err(SchemeError::from)?
                    .orbits(*k, OrbitKind::Subsets)
                    .classes
                    == *classes
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub name: String,
    pub holds: bool,
    pub statement: String,
    pub witnesses: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignReport {
    pub campaign: String,
    pub params: BTreeMap<String, usize>,
    pub tallies: BTreeMap<String, u64>,
    pub findings: Vec<Finding>,
}

impl CampaignReport {
    /// All findings hold.
    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.holds)
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }
}
