//! External SZS-speaking reasoners run as subprocesses.
//!
//! A problem is written to a temporary TPTP file, the engine is started in
//! its own process group, and the whole group is killed when the budget
//! runs out. The first `SZS status` line decides the status; used premises
//! come from `file(_, name)` source annotations in the derivation.

use std::collections::BTreeMap;
use std::io::Read;
use std::os::unix::process::CommandExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::syntax::{render_theory, NameSet, Theory};
use crate::verdict::SzsStatus;

/// Extra time granted past the budget for the kill to land and the output
/// pipes to drain.
pub const GRACE: Duration = Duration::from_secs(2);

const PRESETS: &str = include_str!("presets.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Capability {
    Proves,
    FindsModels,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineSpec {
    pub id: String,
    pub executable: PathBuf,
    pub args: Vec<String>,
    pub capabilities: Vec<Capability>,
    pub szs_expected: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("engine {id}: argument template must contain {{problem}} exactly once (found {count})")]
    ProblemPlaceholder { id: String, count: usize },
    #[error("engine {id}: no capabilities declared")]
    NoCapabilities { id: String },
    #[error("invalid engine configuration: {0}")]
    Syntax(String),
}

impl EngineSpec {
    pub fn new(
        id: &str,
        executable: impl Into<PathBuf>,
        args: Vec<String>,
        capabilities: Vec<Capability>,
    ) -> Result<EngineSpec, ConfigError> {
        let count = args.iter().map(|a| a.matches("{problem}").count()).sum();
        if count != 1 {
            return Err(ConfigError::ProblemPlaceholder { id: id.to_string(), count });
        }
        if capabilities.is_empty() {
            return Err(ConfigError::NoCapabilities { id: id.to_string() });
        }
        Ok(EngineSpec { id: id.to_string(), executable: executable.into(), args, capabilities, szs_expected: true })
    }

    pub fn can(&self, c: Capability) -> bool {
        self.capabilities.contains(&c)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    engines: BTreeMap<String, EngineEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EngineEntry {
    executable: PathBuf,
    args: Vec<String>,
    capabilities: Vec<Capability>,
    #[serde(default = "default_true")]
    szs_expected: bool,
}

fn default_true() -> bool {
    true
}

/// Parses an engine configuration file. Relative executable paths that
/// contain a slash are resolved against `base_dir`.
pub fn parse_engine_config(text: &str, base_dir: Option<&Path>) -> Result<Vec<EngineSpec>, ConfigError> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    file.engines
        .into_iter()
        .map(|(id, e)| {
            let executable = match base_dir {
                Some(dir) if e.executable.is_relative() && e.executable.components().count() > 1 => {
                    dir.join(&e.executable)
                }
                _ => e.executable,
            };
            let mut spec = EngineSpec::new(&id, executable, e.args, e.capabilities)?;
            spec.szs_expected = e.szs_expected;
            Ok(spec)
        })
        .collect()
}

/// The shipped presets for E, Vampire and Paradox.
pub fn presets() -> Vec<EngineSpec> {
    parse_engine_config(PRESETS, None).expect("bundled presets are valid")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EngineVerdict {
    pub engine_id: String,
    pub status: SzsStatus,
    pub used_premises: NameSet,
    /// Whether the engine reported which premises it used. When false, an
    /// empty `used_premises` carries no trimming information.
    pub usage_reported: bool,
    /// Hex SHA-256 of the raw engine output.
    pub raw_output_digest: String,
    pub elapsed_secs: f64,
    /// The refutation did not involve the conjecture.
    pub axioms_inconsistent: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExternalError {
    #[error("engine {id}: executable {path} not found")]
    ExecutableMissing { id: String, path: String },
    #[error("engine {id}: {message}")]
    Io { id: String, message: String },
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn resolve_executable(spec: &EngineSpec) -> Option<PathBuf> {
    let exe = &spec.executable;
    if exe.components().count() > 1 || exe.is_absolute() {
        return exe.is_file().then(|| exe.clone());
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|dir| dir.join(exe)).find(|p| p.is_file())
}

/// Runs `spec` on `t`. Engine misbehaviour (crashes, silence, garbage,
/// overruns) maps to a status; only configuration and I/O problems are
/// errors. Returns within `budget` plus [`GRACE`].
pub fn run_engine(spec: &EngineSpec, t: &Theory, budget: Duration) -> Result<EngineVerdict, ExternalError> {
    let io = |e: std::io::Error| ExternalError::Io { id: spec.id.clone(), message: e.to_string() };
    let exe = resolve_executable(spec).ok_or_else(|| ExternalError::ExecutableMissing {
        id: spec.id.clone(),
        path: spec.executable.display().to_string(),
    })?;
    let mut file = tempfile::Builder::new().prefix("premiss-").suffix(".p").tempfile().map_err(io)?;
    std::io::Write::write_all(&mut file, render_theory(t).as_bytes()).map_err(io)?;
    let problem = file.path().display().to_string();
    let seconds = budget.as_secs_f64().ceil().max(1.0).to_string();
    let args: Vec<String> =
        spec.args.iter().map(|a| a.replace("{problem}", &problem).replace("{timeout}", &seconds)).collect();

    let start = Instant::now();
    let mut child = Command::new(&exe)
        .args(&args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(io)?;
    let pgid = child.id() as libc::pid_t;

    let (tx, rx) = mpsc::channel::<(usize, Vec<u8>)>();
    let pipes: [Option<Box<dyn Read + Send>>; 2] = [
        child.stdout.take().map(|s| Box::new(s) as Box<dyn Read + Send>),
        child.stderr.take().map(|s| Box::new(s) as Box<dyn Read + Send>),
    ];
    for (slot, pipe) in pipes.into_iter().enumerate() {
        let tx = tx.clone();
        std::thread::spawn(move || {
            let mut buf = Vec::new();
            if let Some(mut p) = pipe {
                let _ = p.read_to_end(&mut buf);
            }
            let _ = tx.send((slot, buf));
        });
    }
    drop(tx);

    let mut timed_out = false;
    loop {
        match child.try_wait().map_err(io)? {
            Some(_) => break,
            None if start.elapsed() >= budget => {
                timed_out = true;
                break;
            }
            None => std::thread::sleep(Duration::from_millis(5)),
        }
    }
    // Kill the whole group: the engine on timeout, leftover helpers otherwise.
    // SAFETY: kill has no memory-safety preconditions; a stale group id
    // yields ESRCH, which is ignored.
    unsafe {
        libc::kill(-pgid, libc::SIGKILL);
    }
    let _ = child.wait();

    let mut outputs = [Vec::new(), Vec::new()];
    let drain_deadline = start + budget.max(start.elapsed()) + GRACE;
    for _ in 0..2 {
        let left = drain_deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(left) {
            Ok((slot, buf)) => outputs[slot] = buf,
            Err(_) => break,
        }
    }
    let elapsed = start.elapsed();
    let mut raw = outputs[0].clone();
    raw.extend_from_slice(&outputs[1]);
    let text = String::from_utf8_lossy(&raw);

    let mut status = parse_szs(&text);
    if timed_out && status == SzsStatus::Unknown {
        status = SzsStatus::Timeout;
    }
    let (used_premises, usage_reported, conjecture_cited) = if status.is_derivation() {
        let cited = file_sources(&text);
        let conj = t.conjecture().is_some_and(|c| cited.contains(&c.name));
        let premises = t.premise_names();
        (cited.intersection(&premises).cloned().collect(), !cited.is_empty(), conj)
    } else {
        (NameSet::new(), false, false)
    };
    let axioms_inconsistent =
        status == SzsStatus::Theorem && usage_reported && !conjecture_cited && t.conjecture().is_some();
    Ok(EngineVerdict {
        engine_id: spec.id.clone(),
        status,
        used_premises,
        usage_reported,
        raw_output_digest: digest(&raw),
        elapsed_secs: elapsed.as_secs_f64(),
        axioms_inconsistent,
    })
}

fn szs_status_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"SZS status\s+([A-Za-z]+)").unwrap())
}

/// The status named by the first `SZS status <Name>` occurrence; `Unknown`
/// when absent or unrecognised.
pub fn parse_szs(output: &str) -> SzsStatus {
    szs_status_re()
        .captures(output)
        .map_or(SzsStatus::Unknown, |c| c[1].parse().expect("status parsing is total"))
}

/// The derivation region, or the whole output when no markers are present.
fn derivation_region(output: &str) -> &str {
    let Some(start) = output.find("SZS output start") else {
        return output;
    };
    let body = &output[start..];
    let body = body.find('\n').map_or("", |nl| &body[nl + 1..]);
    match body.find("SZS output end") {
        Some(end) => &body[..end],
        None => body,
    }
}

fn file_source_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"file\(\s*(?:'(?:[^'\\]|\\.)*'|[^,()']+)\s*,\s*('(?:[^'\\]|\\.)+'|[a-z][A-Za-z0-9_]*|[0-9]+)\s*\)")
            .unwrap()
    })
}

fn file_sources(output: &str) -> NameSet {
    file_source_re()
        .captures_iter(derivation_region(output))
        .map(|c| {
            let name = &c[1];
            match name.strip_prefix('\'').and_then(|n| n.strip_suffix('\'')) {
                Some(inner) => inner.replace("\\'", "'").replace("\\\\", "\\"),
                None => name.to_string(),
            }
        })
        .collect()
}

/// Premise names of `t` cited as `file(_, name)` sources in the derivation
/// part of `output`.
pub fn extract_used_premises(output: &str, t: &Theory) -> NameSet {
    let premises = t.premise_names();
    file_sources(output).intersection(&premises).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;

    fn theory() -> Theory {
        parse_problem("fof(a1, axiom, p). fof(a2, axiom, q). fof(a3, axiom, r). fof(a4, axiom, s). fof(c, conjecture, p).", &[])
            .unwrap()
    }

    #[test]
    fn szs_lines() {
        assert_eq!(parse_szs("% SZS status Theorem for puz001"), SzsStatus::Theorem);
        assert_eq!(parse_szs("# SZS status CounterSatisfiable for x\n"), SzsStatus::CounterSatisfiable);
        assert_eq!(parse_szs("segmentation fault"), SzsStatus::Unknown);
        assert_eq!(parse_szs("% SZS status Splendid"), SzsStatus::Unknown);
        assert_eq!(parse_szs("SZS status GaveUp\nSZS status Theorem"), SzsStatus::GaveUp);
    }

    #[test]
    fn used_premises_from_file_leaves() {
        let t = theory();
        assert_eq!(extract_used_premises("fof(a1, axiom, p, file('prob.p', a1)).", &t), ["a1".to_string()].into());
        assert!(extract_used_premises("fof(f3, plain, p, inference(resolution, [], [f1, f2])).", &t).is_empty());
        let tstp = "% SZS output start CNFRefutation\n\
                    fof(a1, axiom, p, file('/tmp/x.p', a1)).\n\
                    fof(a3, axiom, r, file('/tmp/x.p', a3)).\n\
                    fof(c, conjecture, p, file('/tmp/x.p', c)).\n\
                    fof(zz, axiom, p, file('/tmp/x.p', zz)).\n\
                    % SZS output end CNFRefutation\n\
                    fof(a2, axiom, q, file('/tmp/x.p', a2)).\n";
        assert_eq!(extract_used_premises(tstp, &t), ["a1".to_string(), "a3".to_string()].into());
    }

    #[test]
    fn quoted_source_names() {
        let t = parse_problem("fof('my axiom', axiom, p). fof(c, conjecture, p).", &[]).unwrap();
        assert_eq!(extract_used_premises("file('x.p', 'my axiom')", &t), ["my axiom".to_string()].into());
    }

    #[test]
    fn placeholder_must_appear_once() {
        assert!(EngineSpec::new("e", "e", vec!["{problem}".into()], vec![Capability::Proves]).is_ok());
        assert_eq!(
            EngineSpec::new("e", "e", vec!["-x".into()], vec![Capability::Proves]),
            Err(ConfigError::ProblemPlaceholder { id: "e".into(), count: 0 })
        );
        assert!(EngineSpec::new("e", "e", vec!["{problem}".into(), "{problem}".into()], vec![Capability::Proves]).is_err());
    }

    #[test]
    fn presets_parse() {
        let ids: Vec<String> = presets().into_iter().map(|s| s.id).collect();
        assert_eq!(ids, ["eprover", "paradox", "vampire"]);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let text = "[engines.x]\nexecutable = \"x\"\nargs = [\"{problem}\"]\ncapabilities = [\"proves\"]\ncolour = 1\n";
        assert!(matches!(parse_engine_config(text, None), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn missing_executable_is_a_configuration_error() {
        let spec = EngineSpec::new("ghost", "/nonexistent/prover", vec!["{problem}".into()], vec![Capability::Proves]).unwrap();
        assert!(matches!(run_engine(&spec, &theory(), Duration::from_secs(1)), Err(ExternalError::ExecutableMissing { .. })));
    }

    fn sh(id: &str, script: &str) -> EngineSpec {
        EngineSpec::new(id, "/bin/sh", vec!["-c".into(), script.into(), "engine".into(), "{problem}".into()], vec![Capability::Proves])
            .unwrap()
    }

    #[test]
    fn silent_engine_times_out_within_grace() {
        let spec = sh("sleeper", "sleep 30 & sleep 30");
        let start = Instant::now();
        let v = run_engine(&spec, &theory(), Duration::from_secs(1)).unwrap();
        assert_eq!(v.status, SzsStatus::Timeout);
        assert!(start.elapsed() < Duration::from_secs(1) + GRACE);
    }

    #[test]
    fn engine_sees_the_rendered_problem() {
        let spec = sh("cat", "grep -q 'fof(a3, axiom, r)' \"$1\" && echo '% SZS status Theorem'");
        let v = run_engine(&spec, &theory(), Duration::from_secs(5)).unwrap();
        assert_eq!(v.status, SzsStatus::Theorem);
        assert!(!v.usage_reported);
        assert_eq!(v.raw_output_digest.len(), 64);
    }
}
