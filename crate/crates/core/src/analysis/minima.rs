use serde::Serialize;

use super::{AnalysisError, Goal, Judge, NeededClassification, Query};
use crate::syntax::{NameSet, Theory};
use crate::verdict::Entailment;

/// Largest premise count [`brute_force_minima`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimaReport {
    /// Minimal sufficient premise sets, by ascending size and then
    /// declaration order.
    pub minima: Vec<NameSet>,
    /// Every candidate was decided; the list is complete.
    pub exhaustive: bool,
    /// Entailment queries issued.
    pub budget_spent: usize,
}

fn declaration_key(t: &Theory, s: &NameSet) -> (usize, Vec<usize>) {
    let order: Vec<String> = t.premises().map(|f| f.name.clone()).collect();
    let mut idx: Vec<usize> = s.iter().filter_map(|n| order.iter().position(|o| o == n)).collect();
    idx.sort_unstable();
    (s.len(), idx)
}

/// Everything known so far about which sets prove the goal; entailment is
/// monotone in the premises.
struct Knowledge {
    sufficient: Vec<NameSet>,
    insufficient: Vec<NameSet>,
}

impl Knowledge {
    fn infer(&self, s: &NameSet) -> Option<Entailment> {
        if self.insufficient.iter().any(|x| s.is_subset(x)) {
            Some(Entailment::DoesNotProve)
        } else if self.sufficient.iter().any(|x| s.is_superset(x)) {
            Some(Entailment::Proves)
        } else {
            None
        }
    }

    fn record(&mut self, s: &NameSet, e: Entailment) {
        match e {
            Entailment::Proves => self.sufficient.push(s.clone()),
            Entailment::DoesNotProve => self.insufficient.push(s.clone()),
            Entailment::Undetermined => {}
        }
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Decides every set in `sets` not settled by `know`, within the budget.
/// Returns `None` if the budget would be exceeded.
fn decide(
    judge: &Judge,
    goal: &Goal,
    sets: &[NameSet],
    know: &mut Knowledge,
    spent: &mut usize,
    budget: usize,
) -> Result<Option<Vec<Entailment>>, AnalysisError> {
    let mut open: Vec<NameSet> = sets.iter().filter(|s| know.infer(s).is_none()).cloned().collect();
    open.sort();
    open.dedup();
    if *spent + open.len() > budget {
        return Ok(None);
    }
    *spent += open.len();
    let queries: Vec<Query> = open.iter().map(|s| Query { premises: s.clone(), goal: goal.clone() }).collect();
    let mut fresh = std::collections::HashMap::new();
    for (s, j) in open.into_iter().zip(judge.judge_all(&queries)?) {
        know.record(&s, j.entailment);
        fresh.insert(s, j.entailment);
    }
    Ok(Some(sets.iter().map(|s| know.infer(s).or_else(|| fresh.get(s).copied()).unwrap_or(Entailment::Undetermined)).collect()))
}

/// Finds the minimal sufficient subsets of the classified premise set.
///
/// Needed premises belong to every sufficient subset, so candidates are
/// `needed ∪ unknown ∪ E` for subsets `E` of the eliminable premises, in
/// ascending size and then declaration order. Supersets of found minima
/// and subsets of known insufficient sets are skipped.
pub fn enumerate_minima(
    judge: &Judge,
    cls: &NeededClassification,
    subset_budget: usize,
) -> Result<MinimaReport, AnalysisError> {
    let t = judge.theory();
    let goal = Goal::of(t);
    let base: NameSet = cls.needed.union(&cls.unknown).cloned().collect();
    let eliminable = t.in_declaration_order(&cls.eliminable);
    let without = |phi: &String| -> NameSet {
        let mut s = cls.analyzed.clone();
        s.remove(phi);
        s
    };
    let mut know = Knowledge {
        sufficient: cls.eliminable.iter().map(without).collect(),
        insufficient: cls.needed.iter().map(without).collect(),
    };
    let mut minima: Vec<NameSet> = Vec::new();
    let mut exhaustive = cls.unknown.is_empty();
    let mut spent = 0;

    'levels: for k in 0..=eliminable.len() {
        let candidates: Vec<NameSet> = combinations(eliminable.len(), k)
            .into_iter()
            .map(|idx| base.iter().cloned().chain(idx.iter().map(|&i| eliminable[i].clone())).collect::<NameSet>())
            .filter(|s| !minima.iter().any(|m| m.is_subset(s)))
            .collect();
        let Some(verdicts) = decide(judge, &goal, &candidates, &mut know, &mut spent, subset_budget)? else {
            exhaustive = false;
            break;
        };
        let mut proving = Vec::new();
        for (s, e) in candidates.into_iter().zip(verdicts) {
            match e {
                Entailment::Proves => proving.push(s),
                Entailment::Undetermined => exhaustive = false,
                Entailment::DoesNotProve => {}
            }
        }
        for s in proving {
            let deletions: Vec<NameSet> = s
                .iter()
                .map(|phi| {
                    let mut d = s.clone();
                    d.remove(phi);
                    d
                })
                .collect();
            let Some(verdicts) = decide(judge, &goal, &deletions, &mut know, &mut spent, subset_budget)? else {
                exhaustive = false;
                break 'levels;
            };
            if verdicts.iter().all(|e| *e == Entailment::DoesNotProve) {
                minima.push(s);
            } else if !verdicts.contains(&Entailment::Proves) {
                exhaustive = false;
            }
        }
    }
    minima.sort_by_key(|m| declaration_key(t, m));
    Ok(MinimaReport { minima, exhaustive, budget_spent: spent })
}

/// Decides every subset of the premises and returns those with no
/// sufficient proper subset. A testing oracle for [`enumerate_minima`].
pub fn brute_force_minima(judge: &Judge) -> Result<MinimaReport, AnalysisError> {
    let t = judge.theory();
    let premises: Vec<String> = t.premises().map(|f| f.name.clone()).collect();
    let n = premises.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(AnalysisError::Guard { count: n, limit: BRUTE_FORCE_LIMIT });
    }
    let goal = Goal::of(t);
    let subsets: Vec<NameSet> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| premises[i].clone()).collect())
        .collect();
    let queries: Vec<Query> = subsets.iter().map(|s| Query { premises: s.clone(), goal: goal.clone() }).collect();
    let judgments = judge.judge_all(&queries)?;
    let exhaustive = judgments.iter().all(|j| j.entailment != Entailment::Undetermined);
    let sufficient: Vec<&NameSet> =
        subsets.iter().zip(&judgments).filter(|(_, j)| j.entailment == Entailment::Proves).map(|(s, _)| s).collect();
    let mut minima: Vec<NameSet> = sufficient
        .iter()
        .filter(|s| !sufficient.iter().any(|o| o.len() < s.len() && o.is_subset(s)))
        .map(|s| (*s).clone())
        .collect();
    minima.sort_by_key(|m| declaration_key(t, m));
    Ok(MinimaReport { minima, exhaustive, budget_spent: subsets.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::testing::*;
    use crate::analysis::{classify_needed, Policy};

    fn both(src: &str) -> (MinimaReport, MinimaReport) {
        let t = theory(src);
        let judge = Judge::new(&t, builtins(), Policy::FirstDefinite, 1);
        let cls = classify_needed(&judge, &t.premise_names()).unwrap();
        let fresh = Judge::new(&t, builtins(), Policy::FirstDefinite, 1);
        (enumerate_minima(&judge, &cls, 10_000).unwrap(), brute_force_minima(&fresh).unwrap())
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn two_minima_for_a_disjunction() {
        let (e, b) = both("fof(a1, axiom, p). fof(a2, axiom, q). fof(c, conjecture, p | q).");
        assert_eq!(e.minima, vec![names(&["a1"]), names(&["a2"])]);
        assert!(e.exhaustive);
        assert_eq!(e, MinimaReport { budget_spent: e.budget_spent, ..b });
    }

    #[test]
    fn brute_force_examples() {
        let (_, b) = both("fof(a1, axiom, p). fof(c, conjecture, p).");
        assert_eq!(b.minima, vec![names(&["a1"])]);
        let (e, b) = both("fof(a1, axiom, p). fof(a2, axiom, p). fof(c, conjecture, p).");
        assert_eq!(b.minima, vec![names(&["a1"]), names(&["a2"])]);
        assert_eq!(e.minima, b.minima);
        let (e, b) = both("fof(a1, axiom, p). fof(a2, axiom, p => q). fof(a3, axiom, r). fof(c, conjecture, q).");
        assert_eq!(b.minima, vec![names(&["a1", "a2"])]);
        assert_eq!(b.budget_spent, 8);
        assert_eq!(e.minima, b.minima);
    }

    #[test]
    fn guard_rejects_large_theories() {
        let src: String = (0..13).map(|i| format!("fof(a{i}, axiom, p{i}). ")).collect::<String>() + "fof(c, conjecture, p0).";
        let t = theory(&src);
        let judge = Judge::new(&t, builtins(), Policy::FirstDefinite, 1);
        assert_eq!(brute_force_minima(&judge), Err(AnalysisError::Guard { count: 13, limit: 12 }));
    }

    #[test]
    fn tiny_budget_is_not_exhaustive() {
        let t = theory("fof(a1, axiom, p). fof(a2, axiom, q). fof(a3, axiom, p & q). fof(c, conjecture, p | q).");
        let judge = Judge::new(&t, builtins(), Policy::FirstDefinite, 1);
        let cls = classify_needed(&judge, &t.premise_names()).unwrap();
        let report = enumerate_minima(&judge, &cls, 1).unwrap();
        assert!(!report.exhaustive);
        assert!(report.budget_spent <= 1);
    }
}
