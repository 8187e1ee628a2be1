//! The `premiss` command line: argument handling, engine selection, and
//! report assembly. [`run`] is the whole program minus process exit.

mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use premiss::analysis::{
    consistency_triple, enumerate_minima, independence_failfast, independence_naive, independence_random,
    semantic_reprove, syntactic_reprove, AnalysisError, Confirmation, Goal, IndependenceVerdict, Judge, MinimaReport,
    Policy, ReproveStage, ReproveTrace,
};
use premiss::engine::{Engine, BUILTIN_MODEL_FINDER, BUILTIN_PROVER};
use premiss::external::{parse_engine_config, presets, Capability, EngineSpec};
use premiss::model::ModelLimits;
use premiss::prover::ProverLimits;
use premiss::syntax::{hapax_legomena, parse_file, signature_of, NameSet, Theory};
use premiss::verdict::{combine, extended_statuses, Entailment};

pub use report::{Payload, Report, ReprovePayload, TheorySummary};

pub mod exit {
    pub const OK: i32 = 0;
    pub const FINDING: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const UNCONFIRMED: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const CONFLICT: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "premiss", version, about = "Which premises does a proof really need?")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the signature and flag symbols that occur only once.
    Symbols(Common),
    /// Shrink the premises to those a proof needs.
    Reprove {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Syntactic)]
        method: Method,
        #[command(flatten)]
        opts: ReproveOpts,
    },
    /// Semantic reproving followed by minima enumeration.
    Minimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        opts: ReproveOpts,
    },
    /// Check whether any axiom follows from the others.
    Independence {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = IndependenceMethod::Naive)]
        method: IndependenceMethod,
        /// Trials for the random method.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest subset size for the fail-fast method (default: all others).
        #[arg(long)]
        max_subset_size: Option<usize>,
    },
    /// Look for models of the axioms, with the conjecture, and with its negation.
    Consistency(Common),
}

#[derive(Args, Debug)]
struct ReproveOpts {
    /// After semantic reproving, enumerate all minimal sufficient subsets.
    #[arg(long)]
    chain_minima: bool,
    /// Treat a problem without conjecture as an unsatisfiability problem.
    #[arg(long)]
    unsat: bool,
    /// Start semantic reproving from the syntactic result instead of all premises.
    #[arg(long)]
    from_syntactic: bool,
}

#[derive(Args, Debug)]
struct Common {
    /// TPTP problem file.
    problem: PathBuf,
    /// Directory searched for included files (repeatable).
    #[arg(long = "include-dir")]
    include_dirs: Vec<PathBuf>,
    /// Engine id: builtin-prover, builtin-model-finder, a preset, or one
    /// defined in --engine-config (repeatable, tried in order).
    #[arg(long = "engine")]
    engines: Vec<String>,
    /// TOML file defining additional engines.
    #[arg(long)]
    engine_config: Option<PathBuf>,
    /// Seconds per engine call.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    /// Concurrent engine calls.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    parallel: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Largest domain size the built-in model finder tries.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    max_domain_size: u64,
    /// Maximum entailment queries spent on minima enumeration.
    #[arg(long, default_value_t = 4096)]
    subset_budget: usize,
    /// Run every engine on every query and fail on disagreement.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Syntactic,
    Semantic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IndependenceMethod {
    Naive,
    Failfast,
    Random,
}

/// A failure that ends the run with an exit code and a diagnostic.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: exit::INPUT, message: message.into() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        let code = match e {
            AnalysisError::Conflict { .. } => exit::CONFLICT,
            AnalysisError::Engine(_) | AnalysisError::Precondition(_) => exit::INPUT,
            AnalysisError::Guard { .. } => exit::INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Common {
    fn load(&self) -> Result<Theory, Failure> {
        parse_file(&self.problem, &self.include_dirs).map_err(|e| Failure::input(format!("error: {e}")))
    }

    fn budget(&self) -> Duration {
        Duration::from_secs(self.timeout)
    }

    fn engines(&self) -> Result<Vec<Engine>, Failure> {
        let mut configured: Vec<EngineSpec> = Vec::new();
        if let Some(path) = &self.engine_config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("error: cannot read {}: {e}", path.display())))?;
            configured = parse_engine_config(&text, path.parent())
                .map_err(|e| Failure::input(format!("error: {}: {e}", path.display())))?;
        }
        let ids: Vec<String> = if self.engines.is_empty() {
            vec![BUILTIN_MODEL_FINDER.to_string(), BUILTIN_PROVER.to_string()]
        } else {
            self.engines.clone()
        };
        ids.iter()
            .map(|id| match id.as_str() {
                BUILTIN_PROVER => Ok(Engine::Prover(ProverLimits { wall_clock: self.budget(), ..ProverLimits::default() })),
                BUILTIN_MODEL_FINDER => Ok(Engine::ModelFinder(ModelLimits {
                    max_domain_size: self.max_domain_size as usize,
                    wall_clock: self.budget(),
                })),
                other => configured
                    .iter()
                    .chain(presets().iter())
                    .find(|s| s.id == other)
                    .cloned()
                    .map(|spec| Engine::External { spec, budget: self.budget() })
                    .ok_or_else(|| Failure::input(format!("error: unknown engine '{other}'"))),
            })
            .collect()
    }

    fn policy(&self) -> Policy {
        if self.cross_check {
            Policy::CrossCheck
        } else {
            Policy::FirstDefinite
        }
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let json = match &cli.command {
        Command::Symbols(c) | Command::Consistency(c) => c.json,
        Command::Reprove { common, .. } | Command::Minimize { common, .. } | Command::Independence { common, .. } => {
            common.json
        }
    };
    let outcome = match cli.command {
        Command::Symbols(c) => cmd_symbols(&c),
        Command::Reprove { common, method, opts } => cmd_reprove(&common, method, &opts, err),
        Command::Minimize { common, opts } => {
            let opts = ReproveOpts { chain_minima: true, ..opts };
            cmd_reprove(&common, Method::Semantic, &opts, err)
        }
        Command::Independence { common, method, trials, max_subset_size } => {
            cmd_independence(&common, method, trials, max_subset_size, err)
        }
        Command::Consistency(c) => cmd_consistency(&c),
    };
    match outcome {
        Ok((mut report, code)) => {
            report.elapsed_secs = start.elapsed().as_secs_f64();
            let text = if json {
                serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
            } else {
                report.to_text()
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn summary(t: &Theory, path: &Path) -> TheorySummary {
    TheorySummary {
        problem: path.display().to_string(),
        premise_count: t.premises().count(),
        conjecture: t.conjecture().map(|c| c.name.clone()),
        order: t.formulas.iter().map(|f| f.name.clone()).collect(),
    }
}

fn cmd_symbols(c: &Common) -> Result<(Report, i32), Failure> {
    let t = c.load()?;
    let hapax = hapax_legomena(&t);
    let code = if hapax.is_empty() { exit::OK } else { exit::FINDING };
    let payload = Payload::Symbols { signature: signature_of(&t), hapax };
    Ok((Report::new("symbols", summary(&t, &c.problem), payload), code))
}

fn cmd_reprove(c: &Common, method: Method, opts: &ReproveOpts, err: &mut dyn Write) -> Result<(Report, i32), Failure> {
    let mut t = c.load()?;
    if opts.unsat {
        if let Some(conj) = t.conjecture() {
            let _ = writeln!(err, "warning: --unsat ignores conjecture {}", conj.name);
            t = t.subtheory(&t.premise_names(), None);
        }
    } else if t.conjecture().is_none() {
        return Err(Failure::input(
            "error: the problem has no conjecture; pass --unsat to analyse it as an unsatisfiability problem",
        ));
    }
    let engines = c.engines()?;
    let provers: Vec<&Engine> = engines.iter().filter(|e| e.can(Capability::Proves)).collect();
    let judge = Judge::new(&t, engines.clone(), c.policy(), c.parallel as usize);
    let all = t.premise_names();
    let goal = Goal::of(&t);

    let mut traces = Vec::new();
    if method == Method::Syntactic || opts.from_syntactic {
        if provers.is_empty() {
            return Err(Failure::input("error: syntactic reproving needs an engine that proves"));
        }
        for p in &provers {
            traces.push(syntactic_reprove(&t, p)?);
        }
        if c.cross_check {
            check_traces_agree(&traces, &goal)?;
        }
    }

    let syntactic_calls = traces.iter().map(|tr| tr.stages.len()).sum::<usize>();
    let mut report_payload = report::ReprovePayload {
        method: match method {
            Method::Syntactic => "syntactic",
            Method::Semantic => "semantic",
        },
        scope: if opts.from_syntactic { "syntactic" } else { "all_premises" },
        traces,
        semantic: None,
        minima: None,
    };
    let summary = summary(&t, &c.problem);

    if method == Method::Syntactic {
        let proved = report_payload.traces.iter().any(|tr| tr.result().is_some());
        let code = if proved { exit::OK } else { exit::UNCONFIRMED };
        let mut r = Report::new("reprove", summary, Payload::Reprove(report_payload));
        r.engine_calls = syntactic_calls;
        return Ok((r, code));
    }

    let start: NameSet = if opts.from_syntactic {
        // Union over engines: their syntactic results are often incomparable.
        let results: Vec<&NameSet> = report_payload.traces.iter().filter_map(|tr| tr.result()).collect();
        if results.is_empty() {
            let mut r = Report::new("reprove", summary, Payload::Reprove(report_payload));
            r.engine_calls = syntactic_calls;
            return Ok((r, exit::UNCONFIRMED));
        }
        results.into_iter().flatten().cloned().collect()
    } else {
        if judge.entails(&all, &goal)? != Entailment::Proves {
            let mut r = Report::new("reprove", summary, Payload::Reprove(report_payload));
            r.engine_calls = syntactic_calls + judge.engine_calls();
            return Ok((r, exit::UNCONFIRMED));
        }
        all.clone()
    };
    let full_scope = start == all;

    let semantic = semantic_reprove(&judge, &start)?;
    let mut minima = None;
    if opts.chain_minima {
        minima = Some(enumerate_minima(&judge, &semantic.classification, c.subset_budget)?);
    } else if semantic.confirmation == Confirmation::ConfirmedMinimum && !semantic.classification.approximate {
        // Every sufficient subset contains all needed premises, so a
        // sufficient needed set is the only minimum.
        minima = Some(MinimaReport { minima: vec![semantic.t_star.clone()], exhaustive: true, budget_spent: 0 });
    }
    let code = if semantic.confirmation == Confirmation::Undetermined { exit::INCONCLUSIVE } else { exit::OK };
    let statuses = minima.as_ref().map(|m| {
        let global = MinimaReport { exhaustive: m.exhaustive && full_scope, ..m.clone() };
        extended_statuses(Some(&global), None, all.len())
    });
    report_payload.semantic = Some(semantic);
    report_payload.minima = minima;
    let mut r = Report::new("reprove", summary, Payload::Reprove(report_payload));
    r.extended_statuses = statuses.unwrap_or_default();
    r.engine_calls = syntactic_calls + judge.engine_calls();
    Ok((r, code))
}

/// Traces of different engines that reach the same premise set must not
/// give opposite answers on it.
fn check_traces_agree(traces: &[ReproveTrace], goal: &Goal) -> Result<(), Failure> {
    let mut seen: BTreeMap<&NameSet, Vec<&ReproveStage>> = BTreeMap::new();
    for st in traces.iter().flat_map(|tr| &tr.stages) {
        seen.entry(&st.premises).or_default().push(st);
    }
    for (premises, stages) in seen {
        let answers: Vec<Entailment> = stages.iter().map(|s| s.entailment).collect();
        if combine(&answers).is_err() {
            let verdicts = stages.iter().map(|s| s.verdict.clone()).collect();
            return Err(AnalysisError::Conflict { premises: premises.clone(), goal: goal.clone(), verdicts }.into());
        }
    }
    Ok(())
}

fn cmd_independence(
    c: &Common,
    method: IndependenceMethod,
    trials: usize,
    max_subset_size: Option<usize>,
    err: &mut dyn Write,
) -> Result<(Report, i32), Failure> {
    let t = c.load()?;
    if let Some(conj) = t.conjecture() {
        let _ = writeln!(err, "warning: independence ignores conjecture {}", conj.name);
    }
    let axioms = t.subtheory(&t.premise_names(), None);
    if axioms.formulas.is_empty() {
        return Err(Failure::input("error: the problem has no axioms"));
    }
    let judge = Judge::new(&axioms, c.engines()?, c.policy(), c.parallel as usize);
    let (name, report) = match method {
        IndependenceMethod::Naive => ("naive", independence_naive(&judge)?),
        IndependenceMethod::Failfast => ("failfast", independence_failfast(&judge, max_subset_size)?),
        IndependenceMethod::Random => ("random", independence_random(&judge, trials, c.seed)?),
    };
    let code = match report.verdict {
        IndependenceVerdict::Independent => exit::OK,
        IndependenceVerdict::Dependent => exit::FINDING,
        IndependenceVerdict::Inconclusive => exit::INCONCLUSIVE,
    };
    let statuses = extended_statuses(None, Some(&report), axioms.formulas.len());
    let mut r = Report::new("independence", summary(&t, &c.problem), Payload::Independence { method: name, report });
    r.extended_statuses = statuses;
    r.engine_calls = judge.engine_calls();
    Ok((r, code))
}

fn cmd_consistency(c: &Common) -> Result<(Report, i32), Failure> {
    let t = c.load()?;
    let engines = c.engines()?;
    let finder = engines
        .iter()
        .find(|e| e.can(Capability::FindsModels))
        .ok_or_else(|| Failure::input("error: consistency checks need an engine that finds models"))?;
    let report = consistency_triple(&t, finder)?;
    let calls = report.rows.len();
    let mut r = Report::new("consistency", summary(&t, &c.problem), Payload::Consistency(report));
    r.engine_calls = calls;
    Ok((r, exit::OK))
}
