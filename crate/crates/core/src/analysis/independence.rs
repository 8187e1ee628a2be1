use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AnalysisError, Goal, Judge, Query};
use crate::syntax::NameSet;
use crate::verdict::Entailment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IndependenceVerdict {
    Independent,
    Dependent,
    Inconclusive,
}

/// `subset` proves `axiom`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: String,
    pub subset: NameSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub verdict: IndependenceVerdict,
    pub witness: Option<Witness>,
    /// Whether the other axioms prove each axiom, as far as checked.
    pub per_axiom: BTreeMap<String, Entailment>,
}

fn axioms(judge: &Judge) -> Vec<String> {
    judge.theory().premises().map(|f| f.name.clone()).collect()
}

fn others(all: &[String], phi: &str) -> NameSet {
    all.iter().filter(|a| *a != phi).cloned().collect()
}

fn query(subset: &NameSet, phi: &str) -> Query {
    Query { premises: subset.clone(), goal: Goal::Conjecture(phi.to_string()) }
}

/// Re-derives a witness without the cache; a witness that does not
/// re-verify is dropped.
fn confirmed(judge: &Judge, w: Witness) -> Result<Option<Witness>, AnalysisError> {
    let again = judge.judge_uncached(&query(&w.subset, &w.axiom))?;
    Ok((again.entailment == Entailment::Proves).then_some(w))
}

/// Asks, for every axiom, whether all the others prove it.
pub fn independence_naive(judge: &Judge) -> Result<IndependenceReport, AnalysisError> {
    let all = axioms(judge);
    if all.is_empty() {
        return Err(AnalysisError::Precondition("independence needs at least one axiom".into()));
    }
    let queries: Vec<Query> = all.iter().map(|phi| query(&others(&all, phi), phi)).collect();
    let judgments = judge.judge_all(&queries)?;
    let per_axiom: BTreeMap<String, Entailment> =
        all.iter().cloned().zip(judgments.iter().map(|j| j.entailment)).collect();
    let mut witness = None;
    for (q, j) in queries.iter().zip(&judgments) {
        if j.entailment == Entailment::Proves {
            let Goal::Conjecture(axiom) = &q.goal else { unreachable!() };
            witness = confirmed(judge, Witness { axiom: axiom.clone(), subset: q.premises.clone() })?;
            if witness.is_some() {
                break;
            }
        }
    }
    let verdict = if witness.is_some() {
        IndependenceVerdict::Dependent
    } else if per_axiom.values().all(|e| *e == Entailment::DoesNotProve) {
        IndependenceVerdict::Independent
    } else {
        IndependenceVerdict::Inconclusive
    };
    Ok(IndependenceReport { verdict, witness, per_axiom })
}

/// Tries ever larger subsets of the other axioms, stopping at the first
/// derivation. `max_subset_size` defaults to `n - 1`; with a smaller bound
/// the verdict is never `Independent`.
pub fn independence_failfast(judge: &Judge, max_subset_size: Option<usize>) -> Result<IndependenceReport, AnalysisError> {
    let all = axioms(judge);
    let n = all.len();
    if n < 2 {
        return Err(AnalysisError::Precondition("fail-fast independence needs at least two axioms".into()));
    }
    let max = max_subset_size.unwrap_or(n - 1).min(n - 1);
    let mut per_axiom: BTreeMap<String, Entailment> =
        all.iter().map(|a| (a.clone(), Entailment::Undetermined)).collect();
    let mut undetermined = false;
    for k in 1..=max {
        let mut queries = Vec::new();
        for phi in &all {
            let rest: Vec<String> = others(&all, phi).into_iter().collect();
            let rest = judge.theory().in_declaration_order(&rest);
            for idx in super::minima_combinations(rest.len(), k) {
                let subset: NameSet = idx.iter().map(|&i| rest[i].clone()).collect();
                queries.push(query(&subset, phi));
            }
        }
        let judgments = judge.judge_all(&queries)?;
        for (q, j) in queries.iter().zip(&judgments) {
            let Goal::Conjecture(axiom) = &q.goal else { unreachable!() };
            match j.entailment {
                Entailment::Proves => {
                    if let Some(w) = confirmed(judge, Witness { axiom: axiom.clone(), subset: q.premises.clone() })? {
                        per_axiom.insert(axiom.clone(), Entailment::Proves);
                        return Ok(IndependenceReport {
                            verdict: IndependenceVerdict::Dependent,
                            witness: Some(w),
                            per_axiom,
                        });
                    }
                    undetermined = true;
                }
                Entailment::Undetermined => undetermined = true,
                Entailment::DoesNotProve if k == n - 1 => {
                    per_axiom.insert(axiom.clone(), Entailment::DoesNotProve);
                }
                Entailment::DoesNotProve => {}
            }
        }
    }
    let verdict = if !undetermined && max == n - 1 {
        IndependenceVerdict::Independent
    } else {
        IndependenceVerdict::Inconclusive
    };
    Ok(IndependenceReport { verdict, witness: None, per_axiom })
}

/// Samples an axiom and a random nonempty subset of the others per trial.
/// Finds dependencies only; never concludes `Independent`.
pub fn independence_random(judge: &Judge, trials: usize, seed: u64) -> Result<IndependenceReport, AnalysisError> {
    let all = axioms(judge);
    if all.is_empty() {
        return Err(AnalysisError::Precondition("independence needs at least one axiom".into()));
    }
    if trials == 0 {
        return Err(AnalysisError::Precondition("random independence needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_axiom: BTreeMap<String, Entailment> =
        all.iter().map(|a| (a.clone(), Entailment::Undetermined)).collect();
    for _ in 0..trials {
        let phi = &all[rng.gen_range(0..all.len())];
        let rest = judge.theory().in_declaration_order(&others(&all, phi));
        let subset: NameSet = loop {
            let s: NameSet = rest.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            if !s.is_empty() || rest.is_empty() {
                break s;
            }
        };
        if judge.judge(&query(&subset, phi))?.entailment == Entailment::Proves {
            if let Some(w) = confirmed(judge, Witness { axiom: phi.clone(), subset })? {
                per_axiom.insert(phi.clone(), Entailment::Proves);
                return Ok(IndependenceReport { verdict: IndependenceVerdict::Dependent, witness: Some(w), per_axiom });
            }
        }
    }
    Ok(IndependenceReport { verdict: IndependenceVerdict::Inconclusive, witness: None, per_axiom })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::testing::*;
    use crate::analysis::Policy;

    fn judge_for(src: &str, f: impl FnOnce(&Judge) -> IndependenceReport) -> IndependenceReport {
        let t = theory(src);
        let judge = Judge::new(&t, builtins(), Policy::FirstDefinite, 1);
        f(&judge)
    }

    const CHAIN: &str = "fof(a1, axiom, p). fof(a2, axiom, p => q). fof(a3, axiom, q).";

    #[test]
    fn naive_examples() {
        let r = judge_for("fof(a1, axiom, p). fof(a2, axiom, q).", |j| independence_naive(j).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Independent);
        let r = judge_for(CHAIN, |j| independence_naive(j).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Dependent);
        // q proves p => q, so a2 comes first in declaration order
        let w = r.witness.unwrap();
        assert!(w == Witness { axiom: "a2".into(), subset: names(&["a1", "a3"]) }
            || w == Witness { axiom: "a3".into(), subset: names(&["a1", "a2"]) });
        assert_eq!(r.per_axiom["a1"], Entailment::DoesNotProve);
        let r = judge_for("fof(a1, axiom, p | ~p).", |j| independence_naive(j).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Dependent);
        assert_eq!(r.witness, Some(Witness { axiom: "a1".into(), subset: NameSet::new() }));
    }

    #[test]
    fn failfast_examples() {
        let r = judge_for(CHAIN, |j| independence_failfast(j, None).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Dependent);
        // a3 alone proves a2, found at k = 1
        assert_eq!(r.witness, Some(Witness { axiom: "a2".into(), subset: names(&["a3"]) }));
        let r = judge_for("fof(a1, axiom, p). fof(a2, axiom, q & p).", |j| independence_failfast(j, None).unwrap());
        assert_eq!(r.witness, Some(Witness { axiom: "a1".into(), subset: names(&["a2"]) }));
        let r = judge_for("fof(a1, axiom, p). fof(a2, axiom, q).", |j| independence_failfast(j, None).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Independent);
    }

    #[test]
    fn failfast_with_a_small_bound_is_inconclusive() {
        let r = judge_for("fof(a1, axiom, p). fof(a2, axiom, q). fof(a3, axiom, r).", |j| {
            independence_failfast(j, Some(1)).unwrap()
        });
        assert_eq!(r.verdict, IndependenceVerdict::Inconclusive);
    }

    #[test]
    fn random_examples() {
        let r = judge_for(CHAIN, |j| independence_random(j, 50, 7).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Dependent);
        let r = judge_for("fof(a1, axiom, p). fof(a2, axiom, q).", |j| independence_random(j, 10, 7).unwrap());
        assert_eq!(r.verdict, IndependenceVerdict::Inconclusive);
        let t = theory("fof(a1, axiom, p).");
        let judge = Judge::new(&t, builtins(), Policy::FirstDefinite, 1);
        assert!(matches!(independence_random(&judge, 0, 1), Err(AnalysisError::Precondition(_))));
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let a = judge_for(CHAIN, |j| independence_random(j, 50, 3).unwrap());
        let b = judge_for(CHAIN, |j| independence_random(j, 50, 3).unwrap());
        assert_eq!(a, b);
    }
}
