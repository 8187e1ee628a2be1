use std::path::{Path, PathBuf};

use premiss::prover::{prove, ProverLimits};
use premiss::syntax::{parse_file, parse_problem, render_theory, NameSet, Role};
use premiss::verdict::SzsStatus;

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

#[test]
fn include_is_spliced_in_place() {
    let t = parse_file(&corpus("include/ORD001+1.p"), &[]).unwrap();
    let order: Vec<&str> = t.formulas.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(order, ["irreflexive", "transitive", "extra", "asymmetric"]);
    assert_eq!(t.conjecture().unwrap().role, Role::Conjecture);
    assert!(t.formulas[0].source.to_string().contains("ORD001+0.ax"), "{}", t.formulas[0].source);
}

#[test]
fn cnf_inputs_are_closed_universally() {
    let t = parse_file(&corpus("unsat/all_needed.p"), &[]).unwrap();
    assert_eq!(t.premises().count(), 4);
    let again = parse_problem(&render_theory(&t), &[]).unwrap();
    assert_eq!(again, t);
}

#[test]
fn dreadbury_mansion_needs_no_lives_facts() {
    let t = parse_file(&corpus("PUZ001+1.p"), &[]).unwrap();
    assert_eq!(t.premises().count(), 13);
    let out = prove(&t, &ProverLimits::default()).unwrap();
    assert_eq!(out.status, SzsStatus::Theorem);
    let lives: NameSet = ["pel55_2_1", "pel55_2_2", "pel55_2_3"].iter().map(|s| s.to_string()).collect();
    let expected: NameSet = t.premise_names().difference(&lives).cloned().collect();
    assert_eq!(out.used_premises, expected);
    assert!(!out.axioms_inconsistent);
}
