use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn umt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umt"))
        .args(args)
        .output()
        .expect("umt runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

#[test]
fn rigid_chain_fails_one_uniformity() {
    let o = umt(&[
        "check",
        "--scheme",
        "uniform",
        "--level",
        "1",
        "--mode",
        "orbits",
        "--rel",
        "R",
        &example("l3.fms"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("not_uniform"), "{out}");
    assert!(out.contains("class 2: {2}"), "{out}");
}

#[test]
fn classify_reports_strict_order() {
    let o = umt(&["classify", "--rel", "R", &example("l3.fms")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.contains("strict_order") && l.contains('✓')),
        "{out}"
    );
    assert!(
        out.lines().any(|l| l.contains("dense") && l.contains('✗')),
        "{out}"
    );
}

#[test]
fn mine_reports_passing_count() {
    let o = umt(&[
        "mine",
        "--campaign",
        "theorem4-count",
        "--size",
        "3",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["command"], "mine");
    assert_eq!(doc["report"]["tallies"]["passing"], 6);
    assert!(stdout(&o).contains("\"passing\": 6"));
}

#[test]
fn json_is_byte_identical_across_runs_and_workers() {
    let a = umt(&[
        "mine",
        "--campaign",
        "two-implies-one",
        "--size",
        "3",
        "--json",
        "--workers",
        "1",
    ]);
    let b = umt(&[
        "mine",
        "--campaign",
        "two-implies-one",
        "--size",
        "3",
        "--json",
        "--workers",
        "4",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = umt(&["aut", "--orbits", "2", &example("z4.fms"), "--json"]);
    let d = umt(&["aut", "--orbits", "2", &example("z4.fms"), "--json"]);
    assert_eq!(c.stdout, d.stdout);
    assert!(json(&c).get("elapsed_ms").is_none());
    let t = umt(&["aut", &example("z4.fms"), "--json", "--timing"]);
    assert!(json(&t).get("elapsed_ms").is_some());
}

fn replay(doc: &[u8]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    std::fs::write(&path, doc).unwrap();
    umt(&["verify-witness", path.to_str().unwrap(), "--json"])
}

#[test]
fn every_verdict_replays() {
    let runs: Vec<Vec<String>> = vec![
        vec!["check", "--scheme", "uniform", "--level", "1", "l3.fms"],
        vec![
            "check",
            "--scheme",
            "uniform",
            "--level",
            "1",
            "--mode",
            "formulas:2",
            "l3.fms",
        ],
        vec!["check", "--scheme", "uniform", "--level", "2", "z4.fms"],
        vec!["check", "--scheme", "uniform", "--level", "3", "paley7.fms"],
        vec![
            "check",
            "--scheme",
            "uniform",
            "--level",
            "2",
            "--mode",
            "formulas:2",
            "c3.fms",
        ],
        vec!["check", "--scheme", "q", "--rel", "R", "l3.fms"],
        vec!["check", "--scheme", "q", "--rel", "R", "rchain4.fms"],
        vec!["check", "--scheme", "f", "--rel", "R", "c3.fms"],
        vec!["check", "--scheme", "q1", "--rel", "R", "preorder3.fms"],
        vec![
            "check",
            "--scheme",
            "q1",
            "--mode",
            "orbits",
            "--rel",
            "R",
            "preorder3.fms",
        ],
        vec!["check", "--scheme", "q1", "--rel", "R", "l3.fms"],
        vec!["degree", "--max", "4", "z4.fms"],
        vec!["aut", "--orbits", "3", "paley7.fms"],
    ]
    .into_iter()
    .map(|r| {
        r.into_iter()
            .map(|a| {
                if a.ends_with(".fms") {
                    example(a)
                } else {
                    a.to_string()
                }
            })
            .collect()
    })
    .collect();
    for mut args in runs {
        args.push("--json".into());
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = umt(&argv);
        assert!(
            matches!(o.status.code(), Some(0 | 1)),
            "{argv:?}: {}",
            stderr(&o)
        );
        let doc = json(&o);
        let n = doc["witnesses"].as_array().unwrap().len();
        assert!(n > 0, "{argv:?} recorded no witnesses");
        if let Some(holds) = doc["verdict"]["holds"].as_bool() {
            assert_eq!(o.status.code() == Some(0), holds);
            assert_eq!(
                doc["witnesses"][0]["holds"].as_bool(),
                Some(holds),
                "{argv:?}"
            );
        }
        let r = replay(&o.stdout);
        assert_eq!(r.status.code(), Some(0), "{argv:?}: {}", stdout(&r));
        assert_eq!(json(&r)["report"]["reproduced"], n);
    }
}

#[test]
fn campaign_witnesses_replay() {
    let o = umt(&["mine", "--campaign", "paley-probe", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = replay(&o.stdout);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    let doc = json(&r);
    assert!(doc["report"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["claim"] == "orbits"
            && x["detail"].as_str().unwrap().contains("brute force true")));
}

#[test]
fn tampered_witness_is_caught() {
    let o = umt(&[
        "check",
        "--scheme",
        "uniform",
        "--level",
        "2",
        &example("z4.fms"),
        "--json",
    ]);
    let mut doc = json(&o);
    doc["witnesses"][0]["holds"] = true.into();
    let r = replay(serde_json::to_string(&doc).unwrap().as_bytes());
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["report"]["results"][0]["reproduced"], false);
}

#[test]
fn eval_sentences_and_truth_sets() {
    let yes = umt(&[
        "eval",
        "-f",
        "forall x. exists y. R(x,y)",
        &example("c3.fms"),
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let no = umt(&[
        "eval",
        "-f",
        "forall x. exists y. R(x,y)",
        &example("l3.fms"),
    ]);
    assert_eq!(no.status.code(), Some(1));
    let set = umt(&[
        "eval",
        "-f",
        "exists y. R(x,y)",
        &example("l3.fms"),
        "--json",
    ]);
    assert_eq!(
        json(&set)["report"]["tuples"],
        serde_json::json!([[0], [1]])
    );
}

#[test]
fn indicators_segments_degree() {
    let z4 = umt(&["indicators", "--depth", "3", &example("z4.fms"), "--json"]);
    assert_eq!(json(&z4)["report"]["indicators"], serde_json::json!([]));
    let l3 = umt(&["indicators", "--depth", "1", &example("l3.fms"), "--json"]);
    assert!(!json(&l3)["report"]["indicators"]
        .as_array()
        .unwrap()
        .is_empty());
    let seg = umt(&["segments", "--rel", "R", &example("rchain4.fms"), "--json"]);
    assert_eq!(
        json(&seg)["report"]["proper_segments"]
            .as_array()
            .unwrap()
            .len(),
        3
    );
    let deg = umt(&["degree", "--max", "4", &example("z4.fms"), "--json"]);
    assert_eq!(
        json(&deg)["report"]["degrees"],
        serde_json::json!([1, 3, 4])
    );
}

#[test]
fn errors_exit_2_with_kind() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fms");
    std::fs::write(&bad, "universe 2\nrel R/2 = (0,1)\nrel S/2 = (0,5)\n").unwrap();
    let bad = bad.to_str().unwrap();
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["classify", bad], "OutOfRange"),
        (vec!["classify", "/nonexistent.fms"], "IoError"),
        (vec!["mine", "--campaign", "nope"], "UnknownCampaign"),
        (
            vec!["mine", "--campaign", "theorem4-count", "--size", "6"],
            "SizeCapExceeded",
        ),
        (
            vec![
                "check", "--scheme", "f", "--mode", "orbits", "--rel", "R", "L3",
            ],
            "BadMode",
        ),
        (
            vec!["check", "--scheme", "uniform", "--mode", "subsets", "L3"],
            "BadMode",
        ),
        (
            vec!["check", "--scheme", "q", "--level", "2", "--rel", "R", "L3"],
            "UsageError",
        ),
        (
            vec!["check", "--scheme", "q", "--rel", "S", "L3"],
            "UnknownRelation",
        ),
        (
            vec!["eval", "-f", "R(x,y) & R(y,x) | R(x,x)", "L3"],
            "AmbiguousMix",
        ),
        (vec!["aut", "--kind", "tuples", "L3"], "UsageError"),
        (vec!["aut", "--limit", "2", "L3"], "AutLimitExceeded"),
        (vec!["segments", "--rel", "R", "C3"], "NotAnOrder"),
        (vec!["verify-witness", "L3"], "JsonError"),
    ];
    let l3 = example("l3.fms");
    let c3 = example("c3.fms");
    for (args, kind) in cases {
        let argv: Vec<&str> = args
            .iter()
            .map(|&a| match a {
                "L3" => l3.as_str(),
                "C3" => c3.as_str(),
                other => other,
            })
            .collect();
        let o = umt(&argv);
        assert_eq!(o.status.code(), Some(2), "{argv:?}");
        assert!(stderr(&o).contains(kind), "{argv:?}: {}", stderr(&o));
    }
    let o = umt(&["classify", bad]);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}
