//! SZS statuses, the entailment judgments derived from them, and the
//! extended statuses summarising minimality and independence analyses.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{IndependenceReport, IndependenceVerdict, MinimaReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SzsStatus {
    Theorem,
    CounterSatisfiable,
    Satisfiable,
    Unsatisfiable,
    Timeout,
    GaveUp,
    ResourceOut,
    Unknown,
}

impl SzsStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SzsStatus::Theorem => "Theorem",
            SzsStatus::CounterSatisfiable => "CounterSatisfiable",
            SzsStatus::Satisfiable => "Satisfiable",
            SzsStatus::Unsatisfiable => "Unsatisfiable",
            SzsStatus::Timeout => "Timeout",
            SzsStatus::GaveUp => "GaveUp",
            SzsStatus::ResourceOut => "ResourceOut",
            SzsStatus::Unknown => "Unknown",
        }
    }

    /// Statuses that establish derivability and may carry used premises.
    pub fn is_derivation(self) -> bool {
        matches!(self, SzsStatus::Theorem | SzsStatus::Unsatisfiable)
    }
}

/// Total: any unrecognised token is `Unknown`.
impl FromStr for SzsStatus {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Theorem" => SzsStatus::Theorem,
            "CounterSatisfiable" => SzsStatus::CounterSatisfiable,
            "Satisfiable" => SzsStatus::Satisfiable,
            "Unsatisfiable" => SzsStatus::Unsatisfiable,
            "Timeout" => SzsStatus::Timeout,
            "GaveUp" => SzsStatus::GaveUp,
            "ResourceOut" => SzsStatus::ResourceOut,
            _ => SzsStatus::Unknown,
        })
    }
}

impl fmt::Display for SzsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether a query asks for a theorem (axioms ⊢ conjecture) or for
/// unsatisfiability of a conjecture-free premise set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    HasConjecture,
    NoConjectureUnsat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Entailment {
    Proves,
    DoesNotProve,
    Undetermined,
}

impl fmt::Display for Entailment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entailment::Proves => "Proves",
            Entailment::DoesNotProve => "DoesNotProve",
            Entailment::Undetermined => "Undetermined",
        })
    }
}

pub fn classify(status: SzsStatus, kind: ProblemKind) -> Entailment {
    use SzsStatus::*;
    match (kind, status) {
        (ProblemKind::HasConjecture, Theorem) | (ProblemKind::NoConjectureUnsat, Unsatisfiable) => Entailment::Proves,
        (ProblemKind::HasConjecture, CounterSatisfiable) | (ProblemKind::NoConjectureUnsat, Satisfiable) => {
            Entailment::DoesNotProve
        }
        _ => Entailment::Undetermined,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("engines disagree: at least one proves the query and at least one refutes it")]
pub struct VerdictConflict;

/// Merges judgments on the same query. Undetermined never overrides a
/// definite answer; opposite definite answers are a conflict.
pub fn combine(verdicts: &[Entailment]) -> Result<Entailment, VerdictConflict> {
    let proves = verdicts.contains(&Entailment::Proves);
    let refutes = verdicts.contains(&Entailment::DoesNotProve);
    match (proves, refutes) {
        (true, true) => Err(VerdictConflict),
        (true, false) => Ok(Entailment::Proves),
        (false, true) => Ok(Entailment::DoesNotProve),
        (false, false) => Ok(Entailment::Undetermined),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExtendedStatus {
    IndependentAxioms,
    DependentAxioms,
    MinimalPremises,
    NonMinimalPremises,
    UniqueMinimum,
    MultipleIncomparableMinima,
}

impl fmt::Display for ExtendedStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Statuses justified by the given reports, in a fixed order: minima count,
/// then minimality, then independence.
///
/// `MinimalPremises` and `UniqueMinimum` need an exhaustive minima search;
/// `NonMinimalPremises` and `MultipleIncomparableMinima` only need the
/// verified minima that were found.
pub fn extended_statuses(
    minima: Option<&MinimaReport>,
    indep: Option<&IndependenceReport>,
    premise_count: usize,
) -> Vec<ExtendedStatus> {
    let mut out = Vec::new();
    if let Some(m) = minima.filter(|m| !m.minima.is_empty()) {
        if m.minima.len() >= 2 {
            out.push(ExtendedStatus::MultipleIncomparableMinima);
        } else if m.exhaustive {
            out.push(ExtendedStatus::UniqueMinimum);
        }
        if m.minima.iter().any(|s| s.len() < premise_count) {
            out.push(ExtendedStatus::NonMinimalPremises);
        } else if m.exhaustive {
            out.push(ExtendedStatus::MinimalPremises);
        }
    }
    match indep.map(|r| r.verdict) {
        Some(IndependenceVerdict::Independent) => out.push(ExtendedStatus::IndependentAxioms),
        Some(IndependenceVerdict::Dependent) => out.push(ExtendedStatus::DependentAxioms),
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::NameSet;
    use Entailment::*;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(SzsStatus::Theorem, ProblemKind::HasConjecture), Proves);
        assert_eq!(classify(SzsStatus::Satisfiable, ProblemKind::NoConjectureUnsat), DoesNotProve);
        assert_eq!(classify(SzsStatus::Timeout, ProblemKind::HasConjecture), Undetermined);
        // mismatched statuses
        assert_eq!(classify(SzsStatus::Unsatisfiable, ProblemKind::HasConjecture), Undetermined);
        assert_eq!(classify(SzsStatus::Theorem, ProblemKind::NoConjectureUnsat), Undetermined);
    }

    #[test]
    fn resource_statuses_never_decide() {
        for s in [SzsStatus::Timeout, SzsStatus::GaveUp, SzsStatus::ResourceOut, SzsStatus::Unknown] {
            for k in [ProblemKind::HasConjecture, ProblemKind::NoConjectureUnsat] {
                assert_eq!(classify(s, k), Undetermined);
            }
        }
    }

    #[test]
    fn combine_examples() {
        assert_eq!(combine(&[Proves, Undetermined]), Ok(Proves));
        assert_eq!(combine(&[Undetermined, Undetermined]), Ok(Undetermined));
        assert_eq!(combine(&[Proves, DoesNotProve]), Err(VerdictConflict));
        assert_eq!(combine(&[]), Ok(Undetermined));
    }

    #[test]
    fn combine_is_order_independent() {
        let all = [Proves, DoesNotProve, Undetermined];
        for a in all {
            for b in all {
                for c in all {
                    let abc = combine(&[a, b, c]);
                    assert_eq!(abc, combine(&[c, a, b]));
                    // associativity through nesting
                    let nested = combine(&[a, b]).and_then(|ab| combine(&[ab, c]));
                    assert_eq!(abc, nested);
                }
            }
        }
    }

    #[test]
    fn szs_parsing_is_total() {
        assert_eq!("CounterSatisfiable".parse::<SzsStatus>().unwrap(), SzsStatus::CounterSatisfiable);
        assert_eq!("Bogus".parse::<SzsStatus>().unwrap(), SzsStatus::Unknown);
    }

    fn names(xs: &[&str]) -> NameSet {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn report(minima: Vec<NameSet>, exhaustive: bool) -> MinimaReport {
        MinimaReport { minima, exhaustive, budget_spent: 0 }
    }

    #[test]
    fn unique_proper_minimum() {
        let ten: Vec<String> = (1..=10).map(|i| format!("a{i}")).collect();
        let m = report(vec![ten.into_iter().collect()], true);
        assert_eq!(
            extended_statuses(Some(&m), None, 13),
            vec![ExtendedStatus::UniqueMinimum, ExtendedStatus::NonMinimalPremises]
        );
    }

    #[test]
    fn multiple_minima() {
        let m = report(vec![names(&["a1"]), names(&["a2"])], true);
        assert!(extended_statuses(Some(&m), None, 2).contains(&ExtendedStatus::MultipleIncomparableMinima));
    }

    #[test]
    fn full_set_is_minimal() {
        let m = report(vec![names(&["a1", "a2"])], true);
        assert_eq!(
            extended_statuses(Some(&m), None, 2),
            vec![ExtendedStatus::UniqueMinimum, ExtendedStatus::MinimalPremises]
        );
    }

    #[test]
    fn non_exhaustive_search_claims_nothing_unique() {
        let m = report(vec![names(&["a1"])], false);
        assert_eq!(extended_statuses(Some(&m), None, 3), vec![ExtendedStatus::NonMinimalPremises]);
        let m = report(vec![names(&["a1", "a2", "a3"])], false);
        assert!(extended_statuses(Some(&m), None, 3).is_empty());
    }
}
