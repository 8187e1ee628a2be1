mod common;

use std::path::Path;

use serde_json::Value;

use common::*;

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, report: &Value) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}\n{report:#}");
}

/// Drops every `elapsed_secs` field, the only run-dependent values.
fn without_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_secs");
            m.values_mut().for_each(without_timings);
        }
        Value::Array(xs) => xs.iter_mut().for_each(without_timings),
        _ => {}
    }
}

#[test]
fn symbols_exit_codes() {
    let clean = corpus("PUZ001+1.p");
    let o = premiss(&["symbols", p(&clean)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("no symbol occurs only once"));

    let (code, r) = json(&["symbols", p(&corpus("typo.p"))]);
    assert_eq!(code, 1);
    let flagged: Vec<&str> =
        r["payload"]["hapax"].as_array().unwrap().iter().map(|e| e["symbol"].as_str().unwrap()).collect();
    assert_eq!(flagged, ["conected_to", "connected_to"]);

    let o = premiss(&["symbols", "/nonexistent/problem.p"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("/nonexistent/problem.p"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.p", "fof(a1, axiom, p(a)).\nfof(a2, axiom, p(a, b)).\n");
    for cmd in ["symbols", "reprove", "independence", "consistency"] {
        let o = premiss(&[cmd, &bad]);
        assert_eq!(o.code, 2, "{cmd}");
        assert!(o.stderr.contains("bad.p:2:1"), "{cmd}: {}", o.stderr);
    }
}

#[test]
fn usage_errors_exit_2() {
    let f = corpus("crafted/chain3.p");
    for args in [
        vec!["reprove", p(&f), "--timeout", "0"],
        vec!["reprove", p(&f), "--parallel", "0"],
        vec!["reprove", p(&f), "--method", "magic"],
        vec!["reprove", p(&f), "--engine", "no-such-engine"],
        vec!["reprove", p(&f), "--engine-config", "/nonexistent.toml"],
        vec!["frobnicate", p(&f)],
        vec![],
    ] {
        assert_eq!(premiss(&args).code, 2, "{args:?}");
    }
    assert_eq!(premiss(&["--help"]).code, 0);
}

#[test]
fn reprove_trivial_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.p", "fof(a1, axiom, p). fof(c, conjecture, p).");
    let (code, r) = json(&["reprove", &f]);
    assert_eq!(code, 0);
    let trace = &r["payload"]["traces"][0];
    assert_eq!(trace["stages"].as_array().unwrap().len(), 1);
    assert_eq!(trace["fixpoint_reached"], true);
}

#[test]
fn reprove_unconfirmed_conjecture_exits_3() {
    for method in ["syntactic", "semantic"] {
        let o = premiss(&["reprove", p(&corpus("typo.p")), "--method", method]);
        assert_eq!(o.code, 3, "{method}");
    }
}

#[test]
fn reprove_without_conjecture_needs_unsat_flag() {
    let f = corpus("unsat/pq_core.p");
    let o = premiss(&["reprove", p(&f)]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--unsat"));
    let (code, r) = json(&["minimize", p(&f), "--unsat"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["minima"]["minima"], serde_json::json!([["c1", "c2", "c3"]]));
}

#[test]
fn minimize_reports_incomparable_minima() {
    let (code, r) = json(&["minimize", p(&corpus("crafted/disjunction.p"))]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["minima"]["minima"], serde_json::json!([["a1"], ["a2"]]));
    assert_eq!(r["extended_statuses"], serde_json::json!(["MultipleIncomparableMinima", "NonMinimalPremises"]));
    assert!(r["engine_calls"].as_u64().unwrap() > 0);
}

#[test]
fn semantic_from_syntactic_scope() {
    let (code, r) = json(&["reprove", p(&corpus("crafted/chain3.p")), "--method", "semantic", "--from-syntactic"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["scope"], "syntactic");
    let analyzed = r["payload"]["semantic"]["classification"]["analyzed"].as_array().unwrap().len();
    assert!(analyzed < 4, "syntactic reprove should have trimmed something");
}

#[test]
fn independence_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let indep = write(dir.path(), "pq.p", "fof(a1, axiom, p). fof(a2, axiom, q).");
    let chain = write(dir.path(), "chain.p", "fof(a1, axiom, p). fof(a2, axiom, p => q). fof(a3, axiom, q).");
    assert_eq!(premiss(&["independence", &indep]).code, 0);
    let (code, r) = json(&["independence", &chain, "--method", "failfast"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["report"]["witness"], serde_json::json!({"axiom": "a2", "subset": ["a3"]}));
    assert_eq!(r["extended_statuses"], serde_json::json!(["DependentAxioms"]));
    let o = premiss(&["independence", &indep, "--method", "random", "--trials", "10", "--seed", "7"]);
    assert_eq!(o.code, 4);
}

#[test]
fn independence_ignores_conjecture_with_warning() {
    let o = premiss(&["independence", p(&corpus("crafted/socrates.p"))]);
    assert!(o.stderr.contains("warning"), "{}", o.stderr);
    assert!(o.code == 0 || o.code == 1 || o.code == 4);
}

#[test]
fn consistency_rows() {
    let (code, r) = json(&["consistency", p(&corpus("PUZ001+1.p"))]);
    assert_eq!(code, 0);
    let rows = r["payload"]["rows"].as_array().unwrap();
    let statuses: Vec<&str> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["Satisfiable", "Satisfiable", "GaveUp"]);
    assert_eq!(rows[2]["exhausted_up_to"], 4);

    let dir = tempfile::tempdir().unwrap();
    let toy = write(dir.path(), "toy.p", "fof(a1, axiom, p). fof(c, conjecture, q).");
    let o = premiss(&["consistency", &toy]);
    assert!(o.stdout.contains("countermodel found"), "{}", o.stdout);
    let bad = write(dir.path(), "bad.p", "fof(a1, axiom, p). fof(a2, axiom, ~p).");
    let o = premiss(&["consistency", &bad]);
    assert!(o.stdout.contains("may be inconsistent"), "{}", o.stdout);
}

#[test]
fn includes_resolve_relative_and_via_include_dir() {
    let (code, r) = json(&["minimize", p(&corpus("include/ORD001+1.p"))]);
    assert_eq!(code, 0);
    assert_eq!(r["theory"]["premise_count"], 3);
    assert_eq!(r["payload"]["minima"]["minima"], serde_json::json!([["irreflexive", "transitive"]]));

    // the same problem copied elsewhere only finds its axioms via --include-dir
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus("include/ORD001+1.p")).unwrap();
    let copy = write(dir.path(), "ORD001+1.p", &text);
    assert_eq!(premiss(&["symbols", &copy]).code, 2);
    let include = corpus("include");
    let (code, r) = json(&["symbols", &copy, "--include-dir", p(&include)]);
    assert_ne!(code, 2);
    assert_eq!(r["theory"]["premise_count"], 3);
}

#[test]
fn reports_validate_against_schema() {
    let v = validator();
    let dir = tempfile::tempdir().unwrap();
    let chain = write(dir.path(), "chain.p", "fof(a1, axiom, p). fof(a2, axiom, p => q). fof(a3, axiom, q).");
    let toy = write(dir.path(), "toy.p", "fof(a1, axiom, p). fof(c, conjecture, q).");
    let runs: Vec<Vec<String>> = vec![
        vec!["symbols".into(), p(&corpus("typo.p")).into()],
        vec!["reprove".into(), p(&corpus("crafted/chain3.p")).into()],
        vec!["minimize".into(), p(&corpus("crafted/two_witnesses.p")).into()],
        vec!["reprove".into(), p(&corpus("typo.p")).into(), "--method".into(), "semantic".into()],
        vec!["independence".into(), chain.clone()],
        vec!["independence".into(), chain, "--method".into(), "random".into()],
        vec!["consistency".into(), toy],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, r) = json(&args);
        assert_valid(&v, &r);
    }
    let (_, mut r) = json(&["symbols", p(&corpus("typo.p"))]);
    r["payload"]["kind"] = "reprove".into();
    assert!(!v.is_valid(&r), "a mislabelled payload must not validate");
}

#[test]
fn json_is_deterministic_apart_from_timings() {
    let f = corpus("crafted/three_routes.p");
    let runs: Vec<Value> = (0..2)
        .map(|_| {
            let (_, mut r) = json(&["minimize", p(&f), "--seed", "3"]);
            without_timings(&mut r);
            r
        })
        .collect();
    assert_eq!(serde_json::to_string(&runs[0]).unwrap(), serde_json::to_string(&runs[1]).unwrap());
    let (_, mut a) = json(&["independence", p(&f), "--method", "random", "--seed", "11"]);
    let (_, mut b) = json(&["independence", p(&f), "--method", "random", "--seed", "11"]);
    without_timings(&mut a);
    without_timings(&mut b);
    assert_eq!(a, b);
}

#[test]
fn text_and_json_agree() {
    let f = corpus("crafted/chain3.p");
    let text = premiss(&["minimize", p(&f)]).stdout;
    let (_, r) = json(&["minimize", p(&f)]);
    for m in r["payload"]["minima"]["minima"].as_array().unwrap() {
        let names: Vec<&str> = m.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        assert!(text.contains(&format!("{{{}}}", names.join(", "))), "{text}");
    }
    for s in r["extended_statuses"].as_array().unwrap() {
        assert!(text.contains(s.as_str().unwrap()));
    }
}

#[test]
fn external_stub_engines_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "four.p",
        "fof(a1, axiom, p). fof(a2, axiom, q). fof(a3, axiom, r). fof(a4, axiom, s). fof(c, conjecture, p & r).",
    );
    let config = stub_config();
    let (code, r) = json(&["reprove", &f, "--engine-config", p(&config), "--engine", "stub-theorem"]);
    assert_eq!(code, 0);
    let stages = r["payload"]["traces"][0]["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 2);
    assert_eq!(stages[1]["premises"], serde_json::json!(["a1", "a3"]));

    let o = premiss(&["reprove", &f, "--engine-config", p(&config), "--engine", "stub-garbage"]);
    assert_eq!(o.code, 3);
    // a model-finding engine alone cannot reprove syntactically
    let o = premiss(&["reprove", &f, "--engine-config", p(&config), "--engine", "stub-satisfiable"]);
    assert_eq!(o.code, 2);
}
