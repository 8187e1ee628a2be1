//! Premise analyses built on entailment queries: reproving, needed-premise
//! classification, minima enumeration, axiom independence and consistency
//! checks.
//!
//! Every analysis asks questions of the form "do these premises entail that
//! goal?" through a [`Judge`], which runs the configured engines, turns
//! their statuses into [`Entailment`]s and caches the answers.

mod consistency;
mod independence;
mod minima;
mod reprove;

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{Engine, EngineError};
use crate::external::EngineVerdict;
use crate::syntax::{NameSet, Theory};
use crate::verdict::{classify, combine, Entailment, ProblemKind};

pub use consistency::{consistency_triple, ConsistencyCheck, ConsistencyReport, ConsistencyRow};
pub use independence::{
    independence_failfast, independence_naive, independence_random, IndependenceReport, IndependenceVerdict, Witness,
};
pub(crate) use minima::combinations as minima_combinations;
pub use minima::{brute_force_minima, enumerate_minima, MinimaReport, BRUTE_FORCE_LIMIT};
pub use reprove::{
    classify_needed, semantic_reprove, syntactic_reprove, Confirmation, NeededClassification, ReproveStage,
    ReproveTrace, SemanticOutcome,
};

/// What a query asks the premises to establish.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Goal {
    /// Derive the named formula of the theory.
    Conjecture(String),
    /// Show the premises unsatisfiable.
    Refute,
}

impl Goal {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Goal::Conjecture(_) => ProblemKind::HasConjecture,
            Goal::Refute => ProblemKind::NoConjectureUnsat,
        }
    }

    /// The goal of a theory: its conjecture, or refutation when it has none.
    pub fn of(t: &Theory) -> Goal {
        t.conjecture().map_or(Goal::Refute, |c| Goal::Conjecture(c.name.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Query {
    pub premises: NameSet,
    pub goal: Goal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Judgment {
    pub entailment: Entailment,
    pub verdicts: Vec<EngineVerdict>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("engines disagree on {premises:?} |- {goal:?}")]
    Conflict { premises: NameSet, goal: Goal, verdicts: Vec<EngineVerdict> },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{count} premises exceed the brute-force limit of {limit}")]
    Guard { count: usize, limit: usize },
    #[error("{0}")]
    Precondition(String),
}

/// How many engines answer each query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Engines are tried in order until one gives a definite answer.
    FirstDefinite,
    /// Every engine runs; definite answers must agree.
    CrossCheck,
}

/// Answers entailment queries about subsets of one theory.
pub struct Judge<'t> {
    theory: &'t Theory,
    engines: Vec<Engine>,
    policy: Policy,
    pool: rayon::ThreadPool,
    cache: Mutex<HashMap<Query, Judgment>>,
    engine_calls: AtomicUsize,
}

impl<'t> Judge<'t> {
    pub fn new(theory: &'t Theory, engines: Vec<Engine>, policy: Policy, parallelism: usize) -> Judge<'t> {
        assert!(!engines.is_empty(), "a judge needs at least one engine");
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism.max(1))
            .build()
            .expect("thread pool construction");
        Judge { theory, engines, policy, pool, cache: Mutex::new(HashMap::new()), engine_calls: AtomicUsize::new(0) }
    }

    pub fn theory(&self) -> &Theory {
        self.theory
    }

    pub fn engines(&self) -> &[Engine] {
        &self.engines
    }

    /// Number of engine runs so far (cache hits excluded).
    pub fn engine_calls(&self) -> usize {
        self.engine_calls.load(Ordering::Relaxed)
    }

    /// The theory restricted to `q`'s premises, with `q`'s goal as conjecture.
    pub fn problem(&self, q: &Query) -> Theory {
        match &q.goal {
            Goal::Conjecture(name) => self.theory.subtheory(&q.premises, Some(name)),
            Goal::Refute => self.theory.subtheory(&q.premises, None),
        }
    }

    pub fn judge(&self, q: &Query) -> Result<Judgment, AnalysisError> {
        if let Some(j) = self.cache.lock().expect("cache lock").get(q) {
            return Ok(j.clone());
        }
        let j = self.judge_uncached(q)?;
        self.cache.lock().expect("cache lock").insert(q.clone(), j.clone());
        Ok(j)
    }

    /// Answers a query afresh, bypassing the cache. Used to re-verify
    /// witnesses.
    pub fn judge_uncached(&self, q: &Query) -> Result<Judgment, AnalysisError> {
        let problem = self.problem(q);
        let kind = q.goal.kind();
        let mut verdicts = Vec::new();
        let mut entailments = Vec::new();
        for engine in &self.engines {
            self.engine_calls.fetch_add(1, Ordering::Relaxed);
            let v = engine.run(&problem)?;
            let e = classify(v.status, kind);
            verdicts.push(v);
            entailments.push(e);
            if self.policy == Policy::FirstDefinite && e != Entailment::Undetermined {
                break;
            }
        }
        match combine(&entailments) {
            Ok(entailment) => Ok(Judgment { entailment, verdicts }),
            Err(_) => Err(AnalysisError::Conflict { premises: q.premises.clone(), goal: q.goal.clone(), verdicts }),
        }
    }

    /// Judges independent queries concurrently; results are in query order.
    pub fn judge_all(&self, qs: &[Query]) -> Result<Vec<Judgment>, AnalysisError> {
        self.pool.install(|| qs.par_iter().map(|q| self.judge(q)).collect())
    }

    pub fn entails(&self, premises: &NameSet, goal: &Goal) -> Result<Entailment, AnalysisError> {
        Ok(self.judge(&Query { premises: premises.clone(), goal: goal.clone() })?.entailment)
    }
}
