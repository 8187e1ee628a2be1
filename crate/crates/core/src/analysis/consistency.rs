use serde::Serialize;

use super::AnalysisError;
use crate::engine::Engine;
use crate::logic::{negate, Interpretation};
use crate::model::ModelOutcome;
use crate::syntax::{AnnotatedFormula, Role, Theory};
use crate::verdict::SzsStatus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyCheck {
    AxiomsOnly,
    AxiomsPlusConjecture,
    AxiomsPlusNegatedConjecture,
}

impl ConsistencyCheck {
    pub fn label(self) -> &'static str {
        match self {
            ConsistencyCheck::AxiomsOnly => "axioms",
            ConsistencyCheck::AxiomsPlusConjecture => "axioms + conjecture",
            ConsistencyCheck::AxiomsPlusNegatedConjecture => "axioms + negated conjecture",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub check: ConsistencyCheck,
    pub engine_id: String,
    /// The engine's limits or budget.
    pub limits: String,
    pub status: SzsStatus,
    pub model: Option<Interpretation>,
    pub exhausted_up_to: Option<usize>,
    pub reading: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
}

impl ConsistencyReport {
    pub fn row(&self, check: ConsistencyCheck) -> Option<&ConsistencyRow> {
        self.rows.iter().find(|r| r.check == check)
    }
}

fn reading(check: ConsistencyCheck, status: SzsStatus, exhausted: Option<usize>) -> String {
    use ConsistencyCheck::*;
    match (check, status) {
        (AxiomsOnly, SzsStatus::Satisfiable) => "axioms are consistent".into(),
        (AxiomsOnly, SzsStatus::Unsatisfiable) => "axioms are inconsistent".into(),
        (AxiomsPlusConjecture, SzsStatus::Satisfiable) => "conjecture is consistent with the axioms".into(),
        (AxiomsPlusConjecture, SzsStatus::Unsatisfiable) => "conjecture contradicts the axioms".into(),
        (AxiomsPlusNegatedConjecture, SzsStatus::Satisfiable) => {
            "conjecture is countersatisfiable and not derivable".into()
        }
        (AxiomsPlusNegatedConjecture, SzsStatus::Unsatisfiable) => "conjecture is a theorem".into(),
        _ => match exhausted {
            Some(n) => format!("no model up to domain size {n}"),
            None => format!("undecided ({status})"),
        },
    }
}

fn limits_of(engine: &Engine) -> String {
    match engine {
        Engine::Prover(l) => format!("{}s, {} clauses", l.wall_clock.as_secs_f64(), l.max_clauses),
        Engine::ModelFinder(l) => format!("{}s, domain size <= {}", l.wall_clock.as_secs_f64(), l.max_domain_size),
        Engine::External { budget, .. } => format!("{}s", budget.as_secs_f64()),
    }
}

fn run_row(engine: &Engine, check: ConsistencyCheck, t: &Theory) -> Result<ConsistencyRow, AnalysisError> {
    let (verdict, outcome) = engine.run_detailed(t)?;
    let (model, exhausted_up_to) = match outcome {
        Some(ModelOutcome::ModelFound(m)) => (Some(m), None),
        Some(ModelOutcome::ExhaustedUpTo(n)) => (None, Some(n)),
        _ => (None, None),
    };
    Ok(ConsistencyRow {
        check,
        engine_id: engine.id().to_string(),
        limits: limits_of(engine),
        status: verdict.status,
        reading: reading(check, verdict.status, exhausted_up_to),
        model,
        exhausted_up_to,
    })
}

/// Checks for models of the axioms, the axioms with the conjecture, and
/// the axioms with the negated conjecture. Without a conjecture only the
/// first check runs.
pub fn consistency_triple(t: &Theory, engine: &Engine) -> Result<ConsistencyReport, AnalysisError> {
    let premises: Vec<AnnotatedFormula> = t.premises().cloned().collect();
    let build = |extra: Option<AnnotatedFormula>| {
        let mut fs = premises.clone();
        fs.extend(extra);
        Theory::new(fs, &t.origin).expect("premises of a valid theory stay valid")
    };
    let mut rows = vec![run_row(engine, ConsistencyCheck::AxiomsOnly, &build(None))?];
    if let Some(c) = t.conjecture() {
        let as_axiom = AnnotatedFormula { role: Role::Axiom, ..c.clone() };
        rows.push(run_row(engine, ConsistencyCheck::AxiomsPlusConjecture, &build(Some(as_axiom)))?);
        let negated = AnnotatedFormula { role: Role::Axiom, formula: negate(&c.formula), ..c.clone() };
        rows.push(run_row(engine, ConsistencyCheck::AxiomsPlusNegatedConjecture, &build(Some(negated)))?);
    }
    Ok(ConsistencyReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::testing::theory;
    use crate::model::ModelLimits;

    fn statuses(src: &str) -> Vec<SzsStatus> {
        let t = theory(src);
        let r = consistency_triple(&t, &Engine::ModelFinder(ModelLimits::default())).unwrap();
        r.rows.iter().map(|r| r.status).collect()
    }

    #[test]
    fn triple_examples() {
        assert_eq!(
            statuses("fof(a1, axiom, p). fof(c, conjecture, p)."),
            vec![SzsStatus::Satisfiable, SzsStatus::Satisfiable, SzsStatus::GaveUp]
        );
        assert_eq!(
            statuses("fof(a1, axiom, p). fof(c, conjecture, q)."),
            vec![SzsStatus::Satisfiable, SzsStatus::Satisfiable, SzsStatus::Satisfiable]
        );
        assert_eq!(statuses("fof(a1, axiom, p). fof(a2, axiom, ~p)."), vec![SzsStatus::GaveUp]);
    }

    #[test]
    fn countersatisfiable_row_carries_a_model() {
        let t = theory("fof(a1, axiom, p). fof(c, conjecture, q).");
        let r = consistency_triple(&t, &Engine::ModelFinder(ModelLimits::default())).unwrap();
        let row = r.row(ConsistencyCheck::AxiomsPlusNegatedConjecture).unwrap();
        assert!(row.model.is_some());
        assert!(row.reading.contains("countersatisfiable"));
    }
}
