//! Uniform access to built-in and external engines.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::external::{digest, run_engine, Capability, EngineSpec, EngineVerdict, ExternalError};
use crate::logic::{negate, Formula};
use crate::model::{find_model, ModelError, ModelLimits, ModelOutcome};
use crate::prover::{prove, refute, ProverError, ProverLimits};
use crate::syntax::{NameSet, Theory};
use crate::verdict::SzsStatus;

pub const BUILTIN_PROVER: &str = "builtin-prover";
pub const BUILTIN_MODEL_FINDER: &str = "builtin-model-finder";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Engine {
    Prover(ProverLimits),
    ModelFinder(ModelLimits),
    External { spec: EngineSpec, budget: Duration },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    External(#[from] ExternalError),
}

/// Formulas whose satisfiability the model finder checks: the premises,
/// plus the negated conjecture if there is one.
pub fn countermodel_problem(t: &Theory) -> Vec<(String, Formula)> {
    let mut fs: Vec<(String, Formula)> = t.premises().map(|f| (f.name.clone(), f.formula.clone())).collect();
    if let Some(c) = t.conjecture() {
        fs.push((c.name.clone(), negate(&c.formula)));
    }
    fs
}

impl Engine {
    pub fn id(&self) -> &str {
        match self {
            Engine::Prover(_) => BUILTIN_PROVER,
            Engine::ModelFinder(_) => BUILTIN_MODEL_FINDER,
            Engine::External { spec, .. } => &spec.id,
        }
    }

    pub fn can(&self, c: Capability) -> bool {
        match self {
            Engine::Prover(_) => c == Capability::Proves,
            Engine::ModelFinder(_) => c == Capability::FindsModels,
            Engine::External { spec, .. } => spec.can(c),
        }
    }

    /// Runs the engine on `t`: a theorem-proving problem if `t` has a
    /// conjecture, an unsatisfiability problem otherwise.
    pub fn run(&self, t: &Theory) -> Result<EngineVerdict, EngineError> {
        Ok(self.run_detailed(t)?.0)
    }

    /// Like [`Engine::run`], also returning the built-in model finder's raw
    /// outcome.
    pub fn run_detailed(&self, t: &Theory) -> Result<(EngineVerdict, Option<ModelOutcome>), EngineError> {
        let start = Instant::now();
        match self {
            Engine::Prover(limits) => {
                let out = if t.conjecture().is_some() { prove(t, limits)? } else { refute(t, limits)? };
                let fingerprint = format!("{} {:?} {}", out.status, out.used_premises, out.axioms_inconsistent);
                let verdict = EngineVerdict {
                    engine_id: self.id().to_string(),
                    status: out.status,
                    used_premises: out.used_premises,
                    usage_reported: out.status.is_derivation(),
                    raw_output_digest: digest(fingerprint.as_bytes()),
                    elapsed_secs: start.elapsed().as_secs_f64(),
                    axioms_inconsistent: out.axioms_inconsistent,
                };
                Ok((verdict, None))
            }
            Engine::ModelFinder(limits) => {
                let outcome = find_model(&countermodel_problem(t), limits)?;
                let status = match (&outcome, t.conjecture().is_some()) {
                    (ModelOutcome::ModelFound(_), true) => SzsStatus::CounterSatisfiable,
                    (ModelOutcome::ModelFound(_), false) => SzsStatus::Satisfiable,
                    (ModelOutcome::ExhaustedUpTo(_), _) => SzsStatus::GaveUp,
                    (ModelOutcome::ResourceOut, _) => SzsStatus::ResourceOut,
                };
                let fingerprint = match &outcome {
                    ModelOutcome::ModelFound(m) => m.to_string(),
                    other => format!("{other:?}"),
                };
                let verdict = EngineVerdict {
                    engine_id: self.id().to_string(),
                    status,
                    used_premises: NameSet::new(),
                    usage_reported: false,
                    raw_output_digest: digest(fingerprint.as_bytes()),
                    elapsed_secs: start.elapsed().as_secs_f64(),
                    axioms_inconsistent: false,
                };
                Ok((verdict, Some(outcome)))
            }
            Engine::External { spec, budget } => Ok((run_engine(spec, t, *budget)?, None)),
        }
    }
}
