//! Named campaigns. Each recomputes its facts from the scheme, orbit and
//! classification primitives and reports counts plus findings.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{
    is_not_very_simple, is_trivial_binary, sweep, CampaignReport, Claim, EnumerationSpec, Executor,
    Finding, MinerError, Tally,
};
use crate::aut::{automorphism_group, OrbitKind, DEFAULT_AUT_LIMIT};
use crate::families::{c3, chain, cyclic_order, paley7};
use crate::props::{classify_table, classify_ternary};
use crate::schemes::{
    check_f, check_q, check_q1, check_uniformity, uniformity_degrees, Mode, Scheme, Witness,
};
use crate::structure::Structure;

pub const CAMPAIGNS: [&str; 8] = [
    "lemma1-finite",
    "two-implies-one",
    "theorem4-count",
    "f-q-crosscheck",
    "cyclic-ladder",
    "paley-probe",
    "q1-preorders",
    "iso-counts",
];

/// Witness lists are cut at this many claims per finding.
const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CampaignParams {
    pub size: Option<usize>,
    pub depth: Option<usize>,
}

impl CampaignParams {
    pub fn size(size: usize) -> Self {
        CampaignParams {
            size: Some(size),
            depth: None,
        }
    }
}

fn default_size(name: &str) -> usize {
    match name {
        "lemma1-finite" => 6,
        "two-implies-one" | "q1-preorders" => 4,
        "cyclic-ladder" => 7,
        "paley-probe" => 7,
        _ => 3,
    }
}

struct Builder {
    report: CampaignReport,
}

impl Builder {
    fn new(name: &str) -> Self {
        Builder {
            report: CampaignReport {
                campaign: name.to_string(),
                params: BTreeMap::new(),
                tallies: BTreeMap::new(),
                findings: Vec::new(),
            },
        }
    }

    fn param(&mut self, key: &str, value: usize) {
        self.report.params.insert(key.to_string(), value);
    }

    fn tally(&mut self, key: &str, value: u64) {
        self.report.tallies.insert(key.to_string(), value);
    }

    fn tallies(&mut self, t: &Tally) {
        for (k, v) in &t.counts {
            self.tally(k, *v);
        }
    }

    fn finding(&mut self, name: &str, holds: bool, statement: String, mut witnesses: Vec<Claim>) {
        witnesses.truncate(MAX_WITNESSES);
        self.report.findings.push(Finding {
            name: name.to_string(),
            holds,
            statement,
            witnesses,
        });
    }
}

fn size_cap(size: usize, cap: usize) -> Result<(), MinerError> {
    if size > cap {
        return Err(MinerError::SizeCapExceeded { bits: size, cap });
    }
    Ok(())
}

fn uniform_claim(s: &Structure, n: usize, mode: Mode) -> Result<Claim, MinerError> {
    Ok(Claim::Uniform {
        structure: s.clone(),
        n,
        mode,
        holds: check_uniformity(s, n, mode, None)?.holds,
    })
}

/// Runs a catalogued campaign. Reports are identical for every executor.
pub fn run_campaign<E: Executor>(
    name: &str,
    params: &CampaignParams,
    exec: &E,
) -> Result<CampaignReport, MinerError> {
    if !CAMPAIGNS.contains(&name) {
        return Err(MinerError::UnknownCampaign(name.to_string()));
    }
    let size = params.size.unwrap_or_else(|| default_size(name));
    let mut b = Builder::new(name);
    if name != "paley-probe" {
        b.param("size", size);
    }
    match name {
        "lemma1-finite" => finite_chains(&mut b, size, params.depth.unwrap_or(2))?,
        "two-implies-one" => two_implies_one(&mut b, size, exec)?,
        "theorem4-count" => minimality_passers(&mut b, size, exec)?,
        "f-q-crosscheck" => f_q_crosscheck(&mut b, size, exec)?,
        "cyclic-ladder" => cyclic_ladder(&mut b, size)?,
        "paley-probe" => paley_probe(&mut b)?,
        "q1-preorders" => q1_preorders(&mut b, size, exec)?,
        "iso-counts" => iso_counts(&mut b, size, exec)?,
        _ => unreachable!(),
    }
    Ok(b.report)
}

fn finite_chains(b: &mut Builder, size: usize, depth: usize) -> Result<(), MinerError> {
    size_cap(size, DEFAULT_AUT_LIMIT)?;
    b.param("depth", depth);
    let mut claims = Vec::new();
    let (mut chains, mut orbit_hits, mut formula_hits) = (0u64, 0u64, 0u64);
    let mut confirmed = true;
    let mut sample = String::new();
    for n in 2..=size {
        for reflexive in [false, true] {
            let s = chain(n, reflexive);
            chains += 1;
            let orbits = check_uniformity(&s, 1, Mode::Orbits, None)?;
            let formulas = check_uniformity(&s, 1, Mode::Formulas(depth), None)?;
            orbit_hits += u64::from(!orbits.holds);
            if let Some(Witness::Formula(f)) = &formulas.witness {
                formula_hits += 1;
                // the indicator's truth set must be a proper union of point orbits
                let group = automorphism_group(&s).map_err(crate::schemes::SchemeError::from)?;
                let t = crate::formula::truth_set(&s, f, &["x1"]).ok();
                if let Some(t) = t {
                    confirmed &= group.perms().iter().all(|p| t.permuted(p) == t);
                    confirmed &= !t.is_empty() && !t.is_full();
                }
                if sample.is_empty() {
                    sample = format!("{f}");
                }
            }
            claims.push(Claim::Uniform {
                structure: s.clone(),
                n: 1,
                mode: Mode::Orbits,
                holds: orbits.holds,
            });
            claims.push(Claim::Uniform {
                structure: s,
                n: 1,
                mode: Mode::Formulas(depth),
                holds: formulas.holds,
            });
        }
    }
    b.tally("chains", chains);
    b.tally("orbit_violations", orbit_hits);
    b.tally("indicators_found", formula_hits);
    b.finding(
        "chains-not-1-uniform",
        orbit_hits == chains && formula_hits == chains && confirmed,
        format!(
            "strict and reflexive chains of size 2..={size} are not 1-uniform; formulas of height <= {depth} produce an indicator for each (first: {sample}), and each indicator is a proper automorphism-invariant set"
        ),
        claims,
    );
    Ok(())
}

fn two_implies_one<E: Executor>(b: &mut Builder, size: usize, exec: &E) -> Result<(), MinerError> {
    let spec = EnumerationSpec::binary(size);
    let t = sweep(exec, &spec, |code, s, acc| {
        acc.bump("structures");
        let group = automorphism_group(s).expect("universe within the search limit");
        let one = group.orbits(1, OrbitKind::Subsets).classes.len() <= 1;
        let two = group.orbits(2, OrbitKind::Subsets).classes.len() <= 1;
        if one {
            acc.bump("one_uniform");
        }
        if two {
            acc.bump("two_uniform");
            acc.sample("two_uniform", code);
            if !is_trivial_binary(s.relation("R").unwrap().tuples()) {
                acc.bump("two_uniform_nontrivial");
            }
            if !one {
                acc.bump("two_not_one");
                acc.sample("two_not_one", code);
            }
        }
    })?;
    size_cap(size, DEFAULT_AUT_LIMIT)?;
    b.tallies(&t);
    for key in [
        "one_uniform",
        "two_uniform",
        "two_uniform_nontrivial",
        "two_not_one",
    ] {
        b.tally(key, t.get(key));
    }
    let decode = |codes: &[u64], n: usize, holds: bool| -> Vec<Claim> {
        codes
            .iter()
            .take(MAX_WITNESSES)
            .map(|&c| Claim::Uniform {
                structure: spec.decode(c),
                n,
                mode: Mode::Orbits,
                holds,
            })
            .collect()
    };
    b.finding(
        "two-implies-one",
        t.get("two_not_one") == 0,
        format!(
            "every 2-uniform binary structure of size {size} is 1-uniform ({} of {} are 2-uniform)",
            t.get("two_uniform"),
            t.get("structures")
        ),
        decode(t.samples("two_not_one"), 1, false),
    );
    b.finding(
        "two-uniform-are-trivial",
        t.get("two_uniform_nontrivial") == 0,
        format!(
            "every 2-uniform binary structure of size {size} is empty, the diagonal, the off-diagonal or full"
        ),
        decode(t.samples("two_uniform"), 2, true),
    );
    Ok(())
}

fn minimality_passers<E: Executor>(
    b: &mut Builder,
    size: usize,
    exec: &E,
) -> Result<(), MinerError> {
    let spec = EnumerationSpec::binary(size);
    let t = sweep(exec, &spec, |code, s, acc| {
        acc.bump("structures");
        let passes = check_q(s, "R", Mode::Subsets)
            .expect("binary relation")
            .holds;
        let r = classify_table(s.relation("R").unwrap().tuples());
        let rlo = r.order && r.linear;
        if passes {
            acc.bump("passing");
            acc.sample("passing", code);
        }
        if rlo {
            acc.bump("reflexive_linear_orders");
        }
        if passes != rlo {
            acc.bump("mismatches");
            acc.sample("mismatches", code);
        }
    })?;
    for key in ["passing", "reflexive_linear_orders", "mismatches"] {
        b.tally(key, t.get(key));
    }
    b.tallies(&t);
    let claims = t
        .samples("mismatches")
        .iter()
        .chain(t.samples("passing"))
        .map(|&c| {
            let s = spec.decode(c);
            Ok(Claim::Scheme {
                holds: check_q(&s, "R", Mode::Subsets)?.holds,
                structure: s,
                scheme: Scheme::Q,
                relation: "R".into(),
                mode: Mode::Subsets,
            })
        })
        .take(MAX_WITNESSES)
        .collect::<Result<Vec<_>, MinerError>>()?;
    b.finding(
        "q-passers-are-reflexive-linear-orders",
        t.get("mismatches") == 0,
        format!(
            "the structures of size {size} satisfying the minimality scheme over all subsets are exactly the reflexive linear orders ({} passing)",
            t.get("passing")
        ),
        claims,
    );
    Ok(())
}

fn f_q_crosscheck<E: Executor>(b: &mut Builder, size: usize, exec: &E) -> Result<(), MinerError> {
    let spec = EnumerationSpec::binary(size);
    let t = sweep(exec, &spec, |code, s, acc| {
        acc.bump("structures");
        let q = check_q(s, "R", Mode::Subsets).expect("binary relation");
        let f = check_f(s, "R").expect("binary relation");
        if q.holds {
            acc.bump("q_passing");
        }
        if f.holds {
            acc.bump("f_passing");
            acc.sample("f_passing", code);
        }
        if q.holds == f.holds && q.witness_set == f.witness_set && q.minimizers == f.minimizers {
            acc.bump("agree");
        } else {
            acc.bump("disagree");
            acc.sample("disagree", code);
        }
    })?;
    for key in ["agree", "disagree", "f_passing", "q_passing"] {
        b.tally(key, t.get(key));
    }
    b.tallies(&t);
    let claims = t
        .samples("disagree")
        .iter()
        .chain(t.samples("f_passing"))
        .take(MAX_WITNESSES)
        .map(|&c| {
            let s = spec.decode(c);
            Ok(Claim::Scheme {
                holds: check_f(&s, "R")?.holds,
                structure: s,
                scheme: Scheme::F,
                relation: "R".into(),
                mode: Mode::Subsets,
            })
        })
        .collect::<Result<Vec<_>, MinerError>>()?;
    b.finding(
        "f-equals-q-on-subsets",
        t.get("disagree") == 0,
        format!(
            "the finite-minimum and minimality schemes give the same verdict and witness on every binary structure of size {size}"
        ),
        claims,
    );
    Ok(())
}

fn cyclic_ladder(b: &mut Builder, size: usize) -> Result<(), MinerError> {
    size_cap(size, DEFAULT_AUT_LIMIT)?;
    let (mut axioms, mut one, mut two_at_three_only) = (true, true, true);
    let mut claims = Vec::new();
    let mut orders = 0;
    for n in 3..=size {
        orders += 1;
        let s = cyclic_order(n);
        let r = classify_ternary(s.relation("C").unwrap().tuples());
        axioms &= r.is_cyclic_order() && r.completeness3.holds;
        let c1 = uniform_claim(&s, 1, Mode::Orbits)?;
        let c2 = uniform_claim(&s, 2, Mode::Orbits)?;
        if let Claim::Uniform { holds, .. } = c1 {
            one &= holds;
        }
        if let Claim::Uniform { holds, .. } = c2 {
            two_at_three_only &= holds == (n == 3);
        }
        claims.push(c1);
        claims.push(c2);
    }
    b.tally("orders", orders);
    b.finding(
        "cyclic-axioms",
        axioms,
        format!("the standard cyclic order on Z_n, 3 <= n <= {size}, is asymmetric, transitive, cyclic and complete"),
        Vec::new(),
    );
    b.finding(
        "cyclic-one-uniform",
        one,
        format!("the standard cyclic order on Z_n, 3 <= n <= {size}, is 1-uniform"),
        claims.iter().step_by(2).cloned().collect(),
    );
    b.finding(
        "cyclic-two-uniform-only-at-3",
        two_at_three_only,
        format!(
            "the standard cyclic order on Z_n, 3 <= n <= {size}, is 2-uniform exactly when n = 3"
        ),
        claims.iter().skip(1).step_by(2).cloned().collect(),
    );
    if size >= 4 {
        let z4 = cyclic_order(4);
        let degrees = uniformity_degrees(&z4, 4)?;
        b.finding(
            "z4-degrees",
            degrees == [1, 3, 4],
            format!("uniformity degrees of Z_4 up to 4 are {degrees:?}"),
            vec![Claim::Degrees {
                structure: z4,
                max: 4,
                degrees,
            }],
        );
    }
    Ok(())
}

fn paley_probe(b: &mut Builder) -> Result<(), MinerError> {
    let s = paley7();
    let group = automorphism_group(&s).map_err(crate::schemes::SchemeError::from)?;
    let degrees = uniformity_degrees(&s, 3)?;
    b.tally("automorphisms", group.order() as u64);
    let classes3 = group.orbits(3, OrbitKind::Subsets).classes;
    b.tally("orbits_on_3_subsets", classes3.len() as u64);
    let mut claims = vec![Claim::AutOrder {
        structure: s.clone(),
        order: group.order(),
    }];
    for n in 1..=3 {
        claims.push(uniform_claim(&s, n, Mode::Orbits)?);
    }
    claims.push(Claim::Orbits {
        structure: s.clone(),
        k: 3,
        classes: classes3,
    });
    b.finding(
        "paley7-uniform-to-2-not-3",
        group.order() == 21 && degrees == [1, 2],
        format!(
            "the circulant tournament on Z_7 with connection set {{1,2,4}} has {} automorphisms and is n-uniform for n in {degrees:?} among 1..=3: a nontrivial binary structure that is 1- and 2-uniform but not 3-uniform",
            group.order()
        ),
        claims,
    );
    let t = c3();
    let r = t.relation("R").unwrap().tuples();
    let d3 = uniformity_degrees(&t, 3)?;
    b.finding(
        "c3-finitely-uniform",
        !is_trivial_binary(r) && is_not_very_simple(r) && d3 == [1, 2, 3],
        "the directed 3-cycle is nontrivial, not very simple, and n-uniform for every n, though it is no dense linear order".to_string(),
        vec![Claim::Degrees {
            structure: t,
            max: 3,
            degrees: d3,
        }],
    );
    Ok(())
}

fn q1_preorders<E: Executor>(b: &mut Builder, size: usize, exec: &E) -> Result<(), MinerError> {
    let mut all_pass = true;
    let mut claims = Vec::new();
    for n in 1..=size {
        let spec = EnumerationSpec::binary(n);
        let t = sweep(exec, &spec, |code, s, acc| {
            if classify_table(s.relation("R").unwrap().tuples()).total_preorder {
                acc.bump("total_preorders");
                if check_q1(s, "R", Mode::Orbits)
                    .expect("binary relation")
                    .holds
                {
                    acc.bump("pass");
                } else {
                    acc.sample("fail", code);
                }
                acc.sample("preorder", code);
            }
        })?;
        b.tally(&format!("total_preorders_u{n}"), t.get("total_preorders"));
        b.tally(&format!("q1_orbit_passes_u{n}"), t.get("pass"));
        all_pass &= t.get("pass") == t.get("total_preorders");
        for &c in t
            .samples("fail")
            .iter()
            .chain(t.samples("preorder").iter().take(3))
        {
            claims.push(Claim::Scheme {
                structure: spec.decode(c),
                scheme: Scheme::Q1,
                relation: "R".into(),
                mode: Mode::Orbits,
                holds: !t.samples("fail").contains(&c),
            });
        }
    }
    b.finding(
        "total-preorders-pass-q1-orbits",
        all_pass,
        format!("every total preorder on at most {size} elements satisfies the atomicity scheme over invariant sets"),
        claims,
    );
    let m = size.min(3);
    let spec = EnumerationSpec::binary(m);
    let t = sweep(exec, &spec, |code, s, acc| {
        if check_q1(s, "R", Mode::Subsets)
            .expect("binary relation")
            .holds
        {
            acc.bump("passers");
            acc.sample("passers", code);
            let r = classify_table(s.relation("R").unwrap().tuples());
            if r.reflexive.holds() && r.linear && r.transitive.holds() {
                acc.bump("preorders");
            }
        }
    })?;
    b.tally(&format!("q1_subsets_passers_u{m}"), t.get("passers"));
    b.tally(
        &format!("q1_subsets_passers_total_preorder_u{m}"),
        t.get("preorders"),
    );
    let claims = t
        .samples("passers")
        .iter()
        .map(|&c| Claim::Scheme {
            structure: spec.decode(c),
            scheme: Scheme::Q1,
            relation: "R".into(),
            mode: Mode::Subsets,
            holds: true,
        })
        .collect();
    b.finding(
        "q1-subsets-passers-are-total-preorders",
        t.get("passers") == t.get("preorders"),
        format!("every binary structure of size {m} satisfying the atomicity scheme over all subsets is reflexive, complete and transitive"),
        claims,
    );
    Ok(())
}

fn iso_counts<E: Executor>(b: &mut Builder, size: usize, exec: &E) -> Result<(), MinerError> {
    let mut ok = true;
    for n in 1..=size {
        let labeled = EnumerationSpec::binary(n);
        labeled.validate()?;
        let unlabeled = labeled.clone().unlabeled();
        let t = sweep(exec, &unlabeled, |_, _, acc| acc.bump("classes"))?;
        b.tally(&format!("labeled_u{n}"), labeled.count());
        b.tally(&format!("unlabeled_u{n}"), t.get("classes"));
        ok &= t.get("classes") <= labeled.count();
    }
    b.finding(
        "iso-counts",
        ok,
        format!("isomorphism classes of one binary relation on 1..={size} elements, by least code over relabelings"),
        Vec::new(),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::miner::Sequential;

    #[test]
    fn unknown_campaign() {
        assert_eq!(
            run_campaign("nope", &CampaignParams::default(), &Sequential),
            Err(MinerError::UnknownCampaign("nope".into()))
        );
    }

    #[test]
    fn minimality_passers_at_three() {
        let r = run_campaign("theorem4-count", &CampaignParams::size(3), &Sequential).unwrap();
        assert_eq!(r.tallies["passing"], 6);
        assert_eq!(r.tallies["reflexive_linear_orders"], 6);
        assert!(r.passed());
        for f in &r.findings {
            for c in &f.witnesses {
                assert!(c.replay().unwrap());
            }
        }
    }

    #[test]
    fn small_campaigns_pass_and_replay() {
        for name in [
            "lemma1-finite",
            "cyclic-ladder",
            "paley-probe",
            "iso-counts",
            "f-q-crosscheck",
        ] {
            let r = run_campaign(name, &CampaignParams::size(4), &Sequential).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.findings);
            for f in &r.findings {
                for c in &f.witnesses {
                    assert!(c.replay().unwrap(), "{name}");
                }
            }
        }
    }

    #[test]
    fn size_caps() {
        assert!(matches!(
            run_campaign("theorem4-count", &CampaignParams::size(6), &Sequential),
            Err(MinerError::SizeCapExceeded { .. })
        ));
        assert!(matches!(
            run_campaign("cyclic-ladder", &CampaignParams::size(9), &Sequential),
            Err(MinerError::SizeCapExceeded { .. })
        ));
    }
}
