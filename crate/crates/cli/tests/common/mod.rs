//! Helpers shared by the integration tests: corpus locations and running
//! the command line in process.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use premiss::syntax::{parse_file, Theory};

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().expect("workspace root")
}

pub fn corpus(rel: &str) -> PathBuf {
    root().join("corpus").join(rel)
}

/// The `.p` files of a corpus directory, sorted by name.
pub fn corpus_dir(rel: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus(rel))
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "p"))
        .collect();
    files.sort();
    files
}

/// Every bundled problem: crafted theories, unsatisfiable sets, the typo
/// and include examples, and PUZ001+1.
pub fn all_problems() -> Vec<PathBuf> {
    let mut all = corpus_dir("crafted");
    all.extend(corpus_dir("unsat"));
    all.push(corpus("typo.p"));
    all.push(corpus("include/ORD001+1.p"));
    all.push(corpus("PUZ001+1.p"));
    all
}

pub fn load(path: &Path) -> Theory {
    parse_file(path, &[]).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line in process; `args` excludes the program name.
pub fn premiss(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("premiss").chain(args.iter().copied());
    let code = premiss_cli::run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

pub fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let o = premiss(&with_json);
    let v = serde_json::from_str(&o.stdout)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {}\nstderr: {}", o.stdout, o.stderr));
    (o.code, v)
}

pub fn stub_config() -> PathBuf {
    root().join("tools/stub-engines.toml")
}
