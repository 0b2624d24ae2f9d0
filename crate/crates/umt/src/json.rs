//! JSON encodings of structures, verdicts and replayable witnesses.
//!
//! Objects are `serde_json` maps, which keep keys sorted, so equal inputs
//! always serialize to equal bytes.

use serde_json::{json, Map, Value};
use umt_core::miner::{CampaignReport, Claim};
use umt_core::schemes::{Mode, Scheme, SchemeVerdict, Witness};
use umt_core::{Element, Structure};

use crate::verify::Replay;

pub fn structure(s: &Structure) -> Value {
    let relations: Vec<Value> = s
        .relations()
        .map(|r| {
            json!({
                "name": r.name(),
                "arity": r.arity(),
                "tuples": r.to_vec(),
            })
        })
        .collect();
    json!({ "universe": s.universe_size(), "relations": relations })
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Formula(f) => json!({ "kind": "formula", "formula": f.to_string() }),
        Witness::Subset(set) => json!({ "kind": "subset", "set": set }),
        Witness::OrbitClasses(classes) => json!({ "kind": "orbit_classes", "classes": classes }),
    }
}

pub fn verdict(v: &SchemeVerdict) -> Value {
    let z_sets: Vec<Value> = v
        .z_sets
        .iter()
        .map(|z| json!({ "set": z.set, "z": z.z }))
        .collect();
    json!({
        "scheme": v.scheme.as_str(),
        "holds": v.holds,
        "mode": v.mode.to_string(),
        "n": v.n,
        "violation": v.violation.map(|k| k.as_str()),
        "witness": v.witness.as_ref().map(witness),
        "variables": v.variables,
        "witness_set": v.witness_set,
        "witness_tuple": v.witness_tuple,
        "falsifying_tuple": v.falsifying_tuple,
        "minimizers": v.minimizers,
        "separator": v.separator.as_ref().map(witness),
        "separator_set": v.separator_set,
        "z_sets": z_sets,
        "warnings": v.warnings,
    })
}

pub fn campaign(r: &CampaignReport) -> Value {
    let findings: Vec<Value> = r
        .findings
        .iter()
        .map(|f| {
            json!({
                "name": f.name,
                "holds": f.holds,
                "statement": f.statement,
                "witness_count": f.witnesses.len(),
            })
        })
        .collect();
    json!({
        "campaign": r.campaign,
        "params": r.params,
        "tallies": r.tallies,
        "findings": findings,
        "passed": r.passed(),
    })
}

pub fn replay(r: &Replay) -> Value {
    match r {
        Replay::Claim(c) => claim(c),
        Replay::FormulaInstance {
            structure: s,
            formula,
            variables,
            witness_tuple,
            falsifying_tuple,
        } => json!({
            "claim": "formula_instance",
            "structure": structure(s),
            "formula": formula,
            "variables": variables,
            "witness_tuple": witness_tuple,
            "falsifying_tuple": falsifying_tuple,
        }),
        Replay::MinimalSet {
            structure: s,
            scheme,
            relation,
            set,
            minimizers,
            separator_set,
        } => json!({
            "claim": "minimal_set",
            "structure": structure(s),
            "scheme": scheme.as_str(),
            "relation": relation,
            "set": set,
            "minimizers": minimizers,
            "separator_set": separator_set,
        }),
    }
}

pub fn claim(c: &Claim) -> Value {
    let s = structure(c.structure());
    match c {
        Claim::Uniform { n, mode, holds, .. } => json!({
            "claim": "uniform",
            "structure": s,
            "n": n,
            "mode": mode.to_string(),
            "holds": holds,
        }),
        Claim::Scheme {
            scheme,
            relation,
            mode,
            holds,
            ..
        } => json!({
            "claim": "scheme",
            "structure": s,
            "scheme": scheme.as_str(),
            "relation": relation,
            "mode": mode.to_string(),
            "holds": holds,
        }),
        Claim::AutOrder { order, .. } => json!({
            "claim": "aut_order",
            "structure": s,
            "order": order,
        }),
        Claim::Degrees { max, degrees, .. } => json!({
            "claim": "degrees",
            "structure": s,
            "max": max,
            "degrees": degrees,
        }),
        Claim::Orbits { k, classes, .. } => json!({
            "claim": "orbits",
            "structure": s,
            "k": k,
            "classes": classes,
        }),
    }
}

/// Decoding failures name the offending field.
pub type DecodeResult<T> = Result<T, String>;

fn field<'a>(v: &'a Value, key: &str) -> DecodeResult<&'a Value> {
    v.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn usize_of(v: &Value, key: &str) -> DecodeResult<usize> {
    field(v, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| format!("field {key:?} is not a count"))
}

fn bool_of(v: &Value, key: &str) -> DecodeResult<bool> {
    field(v, key)?
        .as_bool()
        .ok_or_else(|| format!("field {key:?} is not a boolean"))
}

fn str_of<'a>(v: &'a Value, key: &str) -> DecodeResult<&'a str> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| format!("field {key:?} is not a string"))
}

fn elements(v: &Value, key: &str) -> DecodeResult<Vec<Element>> {
    serde_json::from_value(field(v, key)?.clone()).map_err(|e| format!("field {key:?}: {e}"))
}

fn opt_elements(v: &Value, key: &str) -> DecodeResult<Option<Vec<Element>>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => elements(v, key).map(Some),
    }
}

pub fn structure_from(v: &Value) -> DecodeResult<Structure> {
    let mut s = Structure::new(usize_of(v, "universe")?).map_err(|e| e.to_string())?;
    let rels = field(v, "relations")?
        .as_array()
        .ok_or("field \"relations\" is not a list")?;
    for r in rels {
        let tuples: Vec<Vec<Element>> = serde_json::from_value(field(r, "tuples")?.clone())
            .map_err(|e| format!("field \"tuples\": {e}"))?;
        s.add_relation(str_of(r, "name")?, usize_of(r, "arity")?, &tuples)
            .map_err(|e| e.to_string())?;
    }
    Ok(s)
}

fn mode_of(v: &Value) -> DecodeResult<Mode> {
    str_of(v, "mode")?.parse()
}

fn scheme_of(v: &Value) -> DecodeResult<Scheme> {
    str_of(v, "scheme")?.parse()
}

pub fn replay_from(v: &Value) -> DecodeResult<Replay> {
    let structure = structure_from(field(v, "structure")?)?;
    Ok(match str_of(v, "claim")? {
        "uniform" => Replay::Claim(Claim::Uniform {
            structure,
            n: usize_of(v, "n")?,
            mode: mode_of(v)?,
            holds: bool_of(v, "holds")?,
        }),
        "scheme" => Replay::Claim(Claim::Scheme {
            structure,
            scheme: scheme_of(v)?,
            relation: str_of(v, "relation")?.to_string(),
            mode: mode_of(v)?,
            holds: bool_of(v, "holds")?,
        }),
        "aut_order" => Replay::Claim(Claim::AutOrder {
            structure,
            order: usize_of(v, "order")?,
        }),
        "degrees" => Replay::Claim(Claim::Degrees {
            structure,
            max: usize_of(v, "max")?,
            degrees: elements(v, "degrees")?,
        }),
        "orbits" => Replay::Claim(Claim::Orbits {
            structure,
            k: usize_of(v, "k")?,
            classes: serde_json::from_value(field(v, "classes")?.clone())
                .map_err(|e| format!("field \"classes\": {e}"))?,
        }),
        "formula_instance" => Replay::FormulaInstance {
            structure,
            formula: str_of(v, "formula")?.to_string(),
            variables: serde_json::from_value(field(v, "variables")?.clone())
                .map_err(|e| format!("field \"variables\": {e}"))?,
            witness_tuple: elements(v, "witness_tuple")?,
            falsifying_tuple: elements(v, "falsifying_tuple")?,
        },
        "minimal_set" => Replay::MinimalSet {
            structure,
            scheme: scheme_of(v)?,
            relation: str_of(v, "relation")?.to_string(),
            set: elements(v, "set")?,
            minimizers: elements(v, "minimizers")?,
            separator_set: opt_elements(v, "separator_set")?,
        },
        other => return Err(format!("unknown claim kind {other:?}")),
    })
}

/// Top-level document: `{command, params, verdict|report, witnesses}`.
pub fn document(
    command: &str,
    params: Map<String, Value>,
    body_key: &str,
    body: Value,
    witnesses: Vec<Value>,
) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), command.into());
    doc.insert("params".into(), Value::Object(params));
    doc.insert(body_key.into(), body);
    doc.insert("witnesses".into(), Value::Array(witnesses));
    Value::Object(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use umt_core::families::{chain, cyclic_order};

    #[test]
    fn structures_decode_to_themselves() {
        for s in [chain(4, true), cyclic_order(5), Structure::new(0).unwrap()] {
            assert_eq!(structure_from(&structure(&s)).unwrap(), s);
        }
    }

    #[test]
    fn claims_decode_to_themselves() {
        let c = Claim::Uniform {
            structure: chain(3, false),
            n: 1,
            mode: Mode::Formulas(2),
            holds: false,
        };
        match replay_from(&claim(&c)).unwrap() {
            Replay::Claim(d) => assert_eq!(d, c),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_fields_are_named() {
        let e = replay_from(
            &json!({"claim": "uniform", "structure": {"universe": 1, "relations": []}}),
        )
        .unwrap_err();
        assert!(e.contains("\"n\""), "{e}");
    }
}
