//! The report every subcommand produces. JSON output serializes it as is;
//! text output is rendered from the same value.

use std::fmt::Write as _;

use serde::Serialize;

use premiss::analysis::{ConsistencyCheck, ConsistencyReport, IndependenceReport, MinimaReport, ReproveTrace, SemanticOutcome};
use premiss::syntax::{NameSet, SignatureEntry};
use premiss::verdict::ExtendedStatus;

#[derive(Clone, Debug, Serialize)]
pub struct TheorySummary {
    #[serde(skip)]
    pub problem: String,
    pub premise_count: usize,
    pub conjecture: Option<String>,
    /// Formula names in declaration order, for listing sets in text output.
    #[serde(skip)]
    pub order: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReprovePayload {
    pub method: &'static str,
    /// Where semantic reproving started: all premises or the syntactic result.
    pub scope: &'static str,
    pub traces: Vec<ReproveTrace>,
    pub semantic: Option<SemanticOutcome>,
    pub minima: Option<MinimaReport>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Symbols { signature: Vec<SignatureEntry>, hapax: Vec<SignatureEntry> },
    Reprove(ReprovePayload),
    Independence { method: &'static str, report: IndependenceReport },
    Consistency(ConsistencyReport),
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub problem: String,
    pub theory: TheorySummary,
    pub payload: Payload,
    pub extended_statuses: Vec<ExtendedStatus>,
    pub engine_calls: usize,
    pub elapsed_secs: f64,
}

impl Report {
    pub fn new(command: &'static str, theory: TheorySummary, payload: Payload) -> Report {
        Report {
            command,
            problem: theory.problem.clone(),
            theory,
            payload,
            extended_statuses: Vec::new(),
            engine_calls: 0,
            elapsed_secs: 0.0,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let t = &self.theory;
        let _ = writeln!(s, "problem: {}", self.problem);
        let _ = writeln!(
            s,
            "premises: {}, conjecture: {}",
            t.premise_count,
            t.conjecture.as_deref().unwrap_or("none")
        );
        match &self.payload {
            Payload::Symbols { signature, hapax } => symbols_text(&mut s, signature, hapax),
            Payload::Reprove(p) => reprove_text(&mut s, t, p),
            Payload::Independence { method, report } => {
                let _ = writeln!(s, "independence ({method}): {:?}", report.verdict);
                if let Some(w) = &report.witness {
                    let _ = writeln!(s, "witness: {} follows from {}", w.axiom, t.set(&w.subset));
                }
                for (axiom, e) in &report.per_axiom {
                    let _ = writeln!(s, "  {axiom}: {e}");
                }
            }
            Payload::Consistency(r) => {
                for row in &r.rows {
                    let _ = writeln!(
                        s,
                        "{:<28} {:<20} {:<18} [{}] {}",
                        row.check.label(),
                        row.engine_id,
                        row.status.as_str(),
                        row.limits,
                        row.reading
                    );
                    if let Some(m) = &row.model {
                        for line in m.to_string().lines() {
                            let _ = writeln!(s, "    {line}");
                        }
                    }
                    match (row.check, &row.model) {
                        (ConsistencyCheck::AxiomsOnly, None) => {
                            let _ = writeln!(s, "warning: no model of the axioms found; they may be inconsistent");
                        }
                        (ConsistencyCheck::AxiomsPlusNegatedConjecture, Some(_)) => {
                            let _ = writeln!(s, "warning: countermodel found, the conjecture does not follow");
                        }
                        _ => {}
                    }
                }
            }
        }
        if !self.extended_statuses.is_empty() {
            let names: Vec<String> = self.extended_statuses.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "status: {}", names.join(", "));
        }
        let _ = writeln!(s, "engine calls: {}, {:.2}s", self.engine_calls, self.elapsed_secs);
        s
    }
}

impl TheorySummary {
    fn set(&self, s: &NameSet) -> String {
        let names: Vec<&str> = self.order.iter().filter(|n| s.contains(*n)).map(String::as_str).collect();
        format!("{{{}}}", names.join(", "))
    }
}

fn symbols_text(s: &mut String, signature: &[SignatureEntry], hapax: &[SignatureEntry]) {
    for e in signature {
        let _ = writeln!(
            s,
            "  {}/{} {:?} x{} in {}",
            e.symbol,
            e.arity,
            e.kind,
            e.occurrence_count,
            e.occurring_in.join(", ")
        );
    }
    if hapax.is_empty() {
        let _ = writeln!(s, "no symbol occurs only once");
    } else {
        for e in hapax {
            let _ = writeln!(s, "occurs once: {}/{} in {}", e.symbol, e.arity, e.occurring_in.join(", "));
        }
    }
}

fn reprove_text(s: &mut String, t: &TheorySummary, p: &ReprovePayload) {
    for tr in &p.traces {
        let _ = writeln!(s, "syntactic reprove with {}:", tr.engine_id);
        for (i, st) in tr.stages.iter().enumerate() {
            let used = if st.verdict.usage_reported { t.set(&st.verdict.used_premises) } else { "not reported".into() };
            let _ = writeln!(
                s,
                "  stage {}: {} premises -> {} ({}), used {used}",
                i + 1,
                st.premises.len(),
                st.verdict.status.as_str(),
                st.entailment
            );
        }
        match tr.result() {
            Some(r) => {
                let _ = writeln!(
                    s,
                    "  result: {}{}",
                    t.set(r),
                    if tr.fixpoint_reached { "" } else { " (no fixpoint)" }
                );
            }
            None => {
                let _ = writeln!(s, "  result: not proved");
            }
        }
    }
    if let Some(sem) = &p.semantic {
        let c = &sem.classification;
        let _ = writeln!(s, "semantic reprove over {} premises ({}):", c.analyzed.len(), p.scope);
        let _ = writeln!(s, "  needed: {}", t.set(&c.needed));
        let _ = writeln!(s, "  eliminable: {}", t.set(&c.eliminable));
        if !c.unknown.is_empty() {
            let _ = writeln!(s, "  unknown: {}", t.set(&c.unknown));
        }
        let _ = writeln!(s, "  T*: {} ({:?})", t.set(&sem.t_star), sem.confirmation);
    } else if p.method == "semantic" {
        let _ = writeln!(s, "semantic reprove not run: the goal was not proved from the starting premises");
    }
    if let Some(m) = &p.minima {
        let _ = writeln!(
            s,
            "minima ({}, {} queries):",
            if m.exhaustive { "exhaustive" } else { "partial" },
            m.budget_spent
        );
        for x in &m.minima {
            let _ = writeln!(s, "  {}", t.set(x));
        }
    }
}
