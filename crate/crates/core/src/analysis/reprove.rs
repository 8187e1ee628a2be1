use serde::Serialize;

use super::{AnalysisError, Goal, Judge, Query};
use crate::engine::Engine;
use crate::external::EngineVerdict;
use crate::syntax::{NameSet, Theory};
use crate::verdict::{classify, Entailment};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproveStage {
    pub premises: NameSet,
    pub verdict: EngineVerdict,
    pub entailment: Entailment,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproveTrace {
    pub engine_id: String,
    pub stages: Vec<ReproveStage>,
    /// The last stage proved the goal using all of its premises.
    pub fixpoint_reached: bool,
}

impl ReproveTrace {
    /// Premises of the last stage that proved the goal.
    pub fn result(&self) -> Option<&NameSet> {
        self.stages.iter().rev().find(|s| s.entailment == Entailment::Proves).map(|s| &s.premises)
    }
}

/// Repeatedly proves the goal, each time keeping only the premises the
/// previous proof used, until the used set stops shrinking.
pub fn syntactic_reprove(t: &Theory, engine: &Engine) -> Result<ReproveTrace, AnalysisError> {
    let goal = Goal::of(t);
    let mut current = t.premise_names();
    let mut stages = Vec::new();
    let fixpoint_reached = loop {
        let problem = match &goal {
            Goal::Conjecture(c) => t.subtheory(&current, Some(c)),
            Goal::Refute => t.subtheory(&current, None),
        };
        let verdict = engine.run(&problem)?;
        let entailment = classify(verdict.status, goal.kind());
        let used = verdict.used_premises.clone();
        let reported = verdict.usage_reported;
        stages.push(ReproveStage { premises: current.clone(), verdict, entailment });
        if entailment != Entailment::Proves || !reported {
            break false;
        }
        if used == current {
            break true;
        }
        current = used;
    };
    Ok(ReproveTrace { engine_id: engine.id().to_string(), stages, fixpoint_reached })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeededClassification {
    /// The premise set the classification is relative to.
    pub analyzed: NameSet,
    pub needed: NameSet,
    pub eliminable: NameSet,
    pub unknown: NameSet,
    /// Some premise could not be classified, so `needed` is a lower bound.
    pub approximate: bool,
}

/// Classifies each premise of `start` by whether the goal still follows
/// when it alone is deleted.
pub fn classify_needed(judge: &Judge, start: &NameSet) -> Result<NeededClassification, AnalysisError> {
    let goal = Goal::of(judge.theory());
    let order = judge.theory().in_declaration_order(start);
    let queries: Vec<Query> = order
        .iter()
        .map(|phi| {
            let mut rest = start.clone();
            rest.remove(phi);
            Query { premises: rest, goal: goal.clone() }
        })
        .collect();
    let judgments = judge.judge_all(&queries)?;
    let mut cls = NeededClassification {
        analyzed: start.clone(),
        needed: NameSet::new(),
        eliminable: NameSet::new(),
        unknown: NameSet::new(),
        approximate: false,
    };
    for (phi, j) in order.into_iter().zip(judgments) {
        match j.entailment {
            Entailment::Proves => cls.eliminable.insert(phi),
            Entailment::DoesNotProve => cls.needed.insert(phi),
            Entailment::Undetermined => cls.unknown.insert(phi),
        };
    }
    cls.approximate = !cls.unknown.is_empty();
    Ok(cls)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Confirmation {
    ConfirmedMinimum,
    /// The needed premises alone do not prove the goal: several
    /// incomparable minima exist.
    NotSufficient,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemanticOutcome {
    pub classification: NeededClassification,
    /// Needed premises, plus unclassified ones, which are kept.
    pub t_star: NameSet,
    pub confirmation: Confirmation,
}

/// Classifies the premises of `start`, then checks whether the needed
/// ones suffice on their own.
pub fn semantic_reprove(judge: &Judge, start: &NameSet) -> Result<SemanticOutcome, AnalysisError> {
    let classification = classify_needed(judge, start)?;
    let t_star: NameSet = classification.needed.union(&classification.unknown).cloned().collect();
    let confirmation = match judge.entails(&t_star, &Goal::of(judge.theory()))? {
        Entailment::Proves => Confirmation::ConfirmedMinimum,
        Entailment::DoesNotProve => Confirmation::NotSufficient,
        Entailment::Undetermined => Confirmation::Undetermined,
    };
    Ok(SemanticOutcome { classification, t_star, confirmation })
}
