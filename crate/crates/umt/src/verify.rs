//! Replay of recorded witnesses.
//!
//! Library claims are recomputed through the library, and where a direct
//! check is cheap it runs too: orbit partitions and group orders by trying
//! every permutation, formula witnesses by evaluating the formula on the
//! recorded tuples, minimal-set witnesses by reading the relation.

use std::collections::BTreeSet;

use umt_core::formula::{evaluate, parse_formula_with, Environment};
use umt_core::miner::Claim;
use umt_core::schemes::Scheme;
use umt_core::tuples::{is_distinct, k_subsets, permutations};
use umt_core::{Element, Signature, Structure};

/// Largest universe for the permutation brute force.
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replay {
    Claim(Claim),
    /// `formula` holds at `witness_tuple` and at no rearrangement of
    /// `falsifying_tuple`.
    FormulaInstance {
        structure: Structure,
        formula: String,
        variables: Vec<String>,
        witness_tuple: Vec<Element>,
        falsifying_tuple: Vec<Element>,
    },
    /// `minimizers` are the members of `set` related to every member of
    /// `set`, and they break the scheme.
    MinimalSet {
        structure: Structure,
        scheme: Scheme,
        relation: String,
        set: Vec<Element>,
        minimizers: Vec<Element>,
        separator_set: Option<Vec<Element>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub reproduced: bool,
    pub detail: String,
}

impl Outcome {
    fn new(reproduced: bool, detail: impl Into<String>) -> Self {
        Outcome {
            reproduced,
            detail: detail.into(),
        }
    }
}

fn automorphisms(s: &Structure) -> Vec<Vec<Element>> {
    permutations(s.universe_size())
        .into_iter()
        .filter(|p| {
            s.relations().all(|r| {
                r.tuples().iter().all(|t| {
                    let image: Vec<Element> = t.iter().map(|&e| p[e]).collect();
                    r.contains(&image)
                })
            })
        })
        .collect()
}

/// Orbits on `k`-subsets under every relation-preserving permutation,
/// as a set of classes.
pub fn brute_force_orbits(s: &Structure, k: usize) -> BTreeSet<BTreeSet<Vec<Element>>> {
    let group = automorphisms(s);
    k_subsets(s.universe_size(), k)
        .into_iter()
        .map(|set| {
            group
                .iter()
                .map(|p| {
                    let mut image: Vec<Element> = set.iter().map(|&e| p[e]).collect();
                    image.sort_unstable();
                    image
                })
                .collect()
        })
        .collect()
}

fn check_claim(c: &Claim) -> Result<Outcome, String> {
    let library = c.replay().map_err(|e| format!("{}: {e}", e.kind()))?;
    let small = c.structure().universe_size() <= BRUTE_FORCE_LIMIT;
    match c {
        Claim::Orbits {
            structure,
            k,
            classes,
            ..
        } if small => {
            let recorded: BTreeSet<BTreeSet<Vec<Element>>> = classes
                .iter()
                .map(|class| class.iter().cloned().collect())
                .collect();
            let direct = brute_force_orbits(structure, *k) == recorded;
            Ok(Outcome::new(
                library && direct,
                format!("library {library}, permutation brute force {direct}"),
            ))
        }
        Claim::AutOrder { structure, order } if small => {
            let direct = automorphisms(structure).len() == *order;
            Ok(Outcome::new(
                library && direct,
                format!("library {library}, permutation brute force {direct}"),
            ))
        }
        _ => Ok(Outcome::new(library, format!("library {library}"))),
    }
}

fn check_instance(
    s: &Structure,
    formula: &str,
    variables: &[String],
    witness: &[Element],
    falsifier: &[Element],
) -> Result<Outcome, String> {
    let f =
        parse_formula_with(formula, &Signature::of(s)).map_err(|e| format!("{}: {e}", e.kind()))?;
    if variables.len() != witness.len() || variables.len() != falsifier.len() {
        return Err("tuple lengths differ from the variable list".into());
    }
    let holds_at = |t: &[Element]| -> Result<bool, String> {
        let env = variables
            .iter()
            .zip(t)
            .fold(Environment::new(), |env, (v, &e)| env.bind(v, e));
        evaluate(s, &f, &env).map_err(|e| format!("{}: {e}", e.kind()))
    };
    let satisfied = is_distinct(witness) && holds_at(witness)?;
    let mut rearranged = false;
    for p in permutations(falsifier.len()) {
        let t: Vec<Element> = p.iter().map(|&i| falsifier[i]).collect();
        rearranged |= holds_at(&t)?;
    }
    let falsified = is_distinct(falsifier) && !rearranged;
    Ok(Outcome::new(
        satisfied && falsified,
        format!("holds at witness {satisfied}, fails at every rearrangement {falsified}"),
    ))
}

fn check_minimal_set(
    s: &Structure,
    scheme: Scheme,
    relation: &str,
    set: &[Element],
    minimizers: &[Element],
    separator: Option<&[Element]>,
) -> Result<Outcome, String> {
    let r = s
        .binary(relation)
        .map_err(|e| format!("{}: {e}", e.kind()))?;
    let z: Vec<Element> = set
        .iter()
        .copied()
        .filter(|&x| set.iter().all(|&a| r.contains(&[x, a])))
        .collect();
    let matches = !set.is_empty() && z == minimizers;
    let breaks = match scheme {
        Scheme::Q | Scheme::F => z.len() != 1,
        Scheme::Q1 => match separator {
            None => z.is_empty(),
            Some(b) => {
                let inside = z.iter().filter(|x| b.contains(x)).count();
                0 < inside && inside < z.len()
            }
        },
        Scheme::Uniform => false,
    };
    Ok(Outcome::new(
        matches && breaks,
        format!("minimizers recomputed {matches}, scheme broken {breaks}"),
    ))
}

pub fn replay(r: &Replay) -> Result<Outcome, String> {
    match r {
        Replay::Claim(c) => check_claim(c),
        Replay::FormulaInstance {
            structure,
            formula,
            variables,
            witness_tuple,
            falsifying_tuple,
        } => check_instance(
            structure,
            formula,
            variables,
            witness_tuple,
            falsifying_tuple,
        ),
        Replay::MinimalSet {
            structure,
            scheme,
            relation,
            set,
            minimizers,
            separator_set,
        } => check_minimal_set(
            structure,
            *scheme,
            relation,
            set,
            minimizers,
            separator_set.as_deref(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use umt_core::aut::{automorphism_group, OrbitKind};
    use umt_core::families::{c3, cyclic_order, paley7};
    use umt_core::schemes::Mode;

    #[test]
    fn brute_force_agrees_with_search() {
        for s in [cyclic_order(4), c3(), paley7()] {
            let g = automorphism_group(&s).unwrap();
            assert_eq!(automorphisms(&s).len(), g.order());
            for k in 1..=3 {
                let classes = g.orbits(k, OrbitKind::Subsets).classes;
                let c = Claim::Orbits {
                    structure: s.clone(),
                    k,
                    classes,
                };
                assert!(check_claim(&c).unwrap().reproduced);
            }
        }
    }

    #[test]
    fn tampered_claims_fail() {
        let s = cyclic_order(4);
        let c = Claim::Uniform {
            structure: s.clone(),
            n: 2,
            mode: Mode::Orbits,
            holds: true,
        };
        assert!(!check_claim(&c).unwrap().reproduced);
        let c = Claim::Orbits {
            structure: s,
            k: 2,
            classes: vec![vec![vec![0, 1], vec![0, 2]]],
        };
        assert!(!check_claim(&c).unwrap().reproduced);
    }

    #[test]
    fn formula_instance() {
        let s = umt_core::families::chain(3, false);
        let vars = vec!["x1".to_string()];
        let r = Replay::FormulaInstance {
            structure: s.clone(),
            formula: "exists y. R(x1,y)".into(),
            variables: vars.clone(),
            witness_tuple: vec![0],
            falsifying_tuple: vec![2],
        };
        assert!(replay(&r).unwrap().reproduced);
        let r = Replay::FormulaInstance {
            structure: s,
            formula: "exists y. R(x1,y)".into(),
            variables: vars,
            witness_tuple: vec![2],
            falsifying_tuple: vec![0],
        };
        assert!(!replay(&r).unwrap().reproduced);
    }
}
