//! A given-clause resolution prover that reports which input premises the
//! refutation used.
//!
//! Calculus: binary resolution and positive factoring, with forward and
//! backward subsumption and tautology deletion. Equality is axiomatised by
//! reflexivity, symmetry, transitivity and one substitution axiom per
//! argument position of every symbol; those axioms carry the reserved
//! origin [`EQUALITY_ORIGIN`] and never count as used premises.

mod terms;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::logic::{clausify, negate, Formula, Term, EQUALITY};
use crate::syntax::{NameSet, Theory};
use crate::verdict::SzsStatus;
use terms::{match_lit, normalize_vars, Lit, Subst, Symbols, T};

/// Origin of the negated conjecture's clauses.
pub const CONJECTURE_ORIGIN: &str = "$conjecture";
/// Origin of the equality axioms.
pub const EQUALITY_ORIGIN: &str = "$equality";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProverLimits {
    pub wall_clock: Duration,
    /// Cap on clauses kept (active plus passive).
    pub max_clauses: usize,
    /// Generated clauses heavier than this are discarded. Discarding makes
    /// saturation incomplete, so closure then yields `GaveUp`.
    pub max_weight: Option<u32>,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits { wall_clock: Duration::from_secs(60), max_clauses: 50000, max_weight: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ProverStats {
    pub generated: usize,
    pub kept: usize,
    pub given: usize,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProofOutcome {
    pub status: SzsStatus,
    /// Input premises among the ancestors of the empty clause.
    pub used_premises: NameSet,
    /// The refutation did not involve the negated conjecture.
    pub axioms_inconsistent: bool,
    pub stats: ProverStats,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProverError {
    #[error("the theory has no conjecture; use refute for unsatisfiability problems")]
    NoConjecture,
    #[error("the theory has a conjecture; use prove")]
    ConjecturePresent,
    #[error("prover limits must be strictly positive")]
    InvalidLimits,
}

/// Tries to derive the conjecture from the other formulas by refuting them
/// together with its negation.
pub fn prove(t: &Theory, limits: &ProverLimits) -> Result<ProofOutcome, ProverError> {
    let conj = t.conjecture().ok_or(ProverError::NoConjecture)?;
    let mut named: Vec<(String, Formula)> = t.premises().map(|f| (f.name.clone(), f.formula.clone())).collect();
    named.push((CONJECTURE_ORIGIN.to_string(), negate(&conj.formula)));
    let mut out = saturate(&named, limits)?;
    match out.status {
        SzsStatus::Unsatisfiable => out.status = SzsStatus::Theorem,
        SzsStatus::Satisfiable => out.status = SzsStatus::CounterSatisfiable,
        _ => {}
    }
    Ok(out)
}

/// Tries to refute a conjecture-free theory.
pub fn refute(t: &Theory, limits: &ProverLimits) -> Result<ProofOutcome, ProverError> {
    if t.conjecture().is_some() {
        return Err(ProverError::ConjecturePresent);
    }
    let named: Vec<(String, Formula)> = t.premises().map(|f| (f.name.clone(), f.formula.clone())).collect();
    let mut out = saturate(&named, limits)?;
    out.axioms_inconsistent = false;
    Ok(out)
}

/// Small bitset over origin indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Origins(Vec<u64>);

impl Origins {
    fn single(i: usize, width: usize) -> Origins {
        let mut v = vec![0u64; width.div_ceil(64).max(1)];
        v[i / 64] |= 1 << (i % 64);
        Origins(v)
    }

    fn union(&self, other: &Origins) -> Origins {
        Origins(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
}

struct PClause {
    lits: Vec<Lit>,
    origins: Origins,
    weight: u32,
    nvars: u32,
    /// Hash of (sign, predicate) pairs; a subsumer's mask is a subset of
    /// the subsumed clause's mask.
    mask: u64,
    /// The selected negative literal, if the clause has one.
    selected: Option<usize>,
}

impl PClause {
    fn eligible(&self, i: usize) -> bool {
        self.selected.is_none_or(|s| s == i)
    }
}

type Key = (u32, bool);

fn key(l: &Lit) -> Key {
    (l.pred, l.pos)
}

fn lit_mask(l: &Lit) -> u64 {
    let h = (l.pred as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (l.pos as u64);
    1 << (h.wrapping_mul(0xBF58_476D_1CE4_E5B9) >> 58)
}

/// Picks the heaviest negative literal, preferring non-equality ones.
fn select(lits: &[Lit], eq: Option<u32>) -> Option<usize> {
    lits.iter()
        .enumerate()
        .filter(|(_, l)| !l.pos)
        .max_by_key(|(i, l)| (l.weight(), Some(l.pred) != eq, Reverse(*i)))
        .map(|(i, _)| i)
}

/// `c` subsumes `d` when some substitution maps every literal of `c` onto a
/// literal of `d`.
fn subsumes(c: &PClause, d: &PClause) -> bool {
    if c.lits.len() > d.lits.len() || c.mask & !d.mask != 0 {
        return false;
    }
    fn search(c: &[Lit], d: &[Lit], theta: &mut Vec<Option<T>>) -> bool {
        let Some((first, rest)) = c.split_first() else {
            return true;
        };
        for target in d {
            let mut trial = theta.clone();
            if match_lit(first, target, &mut trial) && search(rest, d, &mut trial) {
                *theta = trial;
                return true;
            }
        }
        false
    }
    search(&c.lits, &d.lits, &mut Vec::with_capacity(c.nvars as usize))
}

struct Saturation<'a> {
    limits: &'a ProverLimits,
    eq_pred: Option<u32>,
    store: Vec<PClause>,
    deleted: Vec<bool>,
    passive: BinaryHeap<Reverse<(u32, usize)>>,
    /// Kept clauses by the key of their first literal (forward subsumption).
    by_first: HashMap<Key, Vec<usize>>,
    /// Kept clauses by every key they contain (backward subsumption).
    by_any: HashMap<Key, Vec<usize>>,
    /// Eligible literals of active clauses.
    active_index: HashMap<Key, Vec<usize>>,
    stats: ProverStats,
    discarded_heavy: bool,
    alive_count: usize,
}

enum Step {
    Refuted(usize),
    Continue,
    OutOfResources,
}

impl Saturation<'_> {
    fn make_clause(&self, mut lits: Vec<Lit>, origins: Origins) -> Option<PClause> {
        // t != t is false under reflexivity; drop such literals.
        if let Some(eq) = self.eq_pred {
            lits.retain(|l| !(l.pred == eq && !l.pos && l.args[0] == l.args[1]));
            if lits.iter().any(|l| l.pred == eq && l.pos && l.args[0] == l.args[1]) {
                return None;
            }
        }
        let mut uniq: Vec<Lit> = Vec::with_capacity(lits.len());
        for l in lits {
            if !uniq.contains(&l) {
                uniq.push(l);
            }
        }
        for (i, a) in uniq.iter().enumerate() {
            for b in &uniq[i + 1..] {
                if a.pred == b.pred && a.pos != b.pos && a.args == b.args {
                    return None;
                }
            }
        }
        let nvars = normalize_vars(&mut uniq);
        let weight = uniq.iter().map(Lit::weight).sum();
        let mask = uniq.iter().fold(0, |m, l| m | lit_mask(l));
        let selected = select(&uniq, self.eq_pred);
        Some(PClause { lits: uniq, origins, weight, nvars, mask, selected })
    }

    fn forward_subsumed(&self, c: &PClause) -> bool {
        let mut keys: Vec<Key> = c.lits.iter().map(key).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().filter_map(|k| self.by_first.get(k)).flatten().any(|&id| !self.deleted[id] && subsumes(&self.store[id], c))
    }

    fn backward_subsume(&mut self, c: &PClause) {
        let Some(first) = c.lits.first() else {
            return;
        };
        if let Some(ids) = self.by_any.get(&key(first)) {
            for &id in ids {
                if !self.deleted[id] && subsumes(c, &self.store[id]) {
                    self.deleted[id] = true;
                    self.alive_count -= 1;
                }
            }
        }
    }

    /// Filters and stores a new clause. Returns its id if it is empty.
    fn add(&mut self, c: PClause) -> Option<usize> {
        if self.limits.max_weight.is_some_and(|w| c.weight > w) {
            self.discarded_heavy = true;
            return None;
        }
        let id = self.store.len();
        if c.lits.is_empty() {
            self.store.push(c);
            self.deleted.push(false);
            return Some(id);
        }
        if self.forward_subsumed(&c) {
            return None;
        }
        self.backward_subsume(&c);
        self.by_first.entry(key(&c.lits[0])).or_default().push(id);
        let mut keys: Vec<Key> = c.lits.iter().map(key).collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            self.by_any.entry(k).or_default().push(id);
        }
        self.passive.push(Reverse((c.weight, id)));
        self.store.push(c);
        self.deleted.push(false);
        self.alive_count += 1;
        self.stats.kept += 1;
        if self.stats.kept.is_multiple_of(4096) {
            let deleted = &self.deleted;
            for index in [&mut self.by_first, &mut self.by_any, &mut self.active_index] {
                index.values_mut().for_each(|ids| ids.retain(|&i| !deleted[i]));
            }
        }
        None
    }

    fn resolvents(&self, given: usize, partner: usize, out: &mut Vec<(Vec<Lit>, Origins)>) {
        let g = &self.store[given];
        let p = &self.store[partner];
        let shift = g.nvars;
        let p_lits: Vec<Lit> = p.lits.iter().map(|l| l.shifted(shift)).collect();
        let origins = g.origins.union(&p.origins);
        for (i, gl) in g.lits.iter().enumerate().filter(|(i, _)| g.eligible(*i)) {
            for (j, pl) in p_lits.iter().enumerate().filter(|(j, _)| p.eligible(*j)) {
                if gl.pred != pl.pred || gl.pos == pl.pos {
                    continue;
                }
                let mut s = Subst::new(shift + p.nvars);
                if !s.unify_args(&gl.args, &pl.args) {
                    continue;
                }
                let lits = g
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, l)| s.apply_lit(l))
                    .chain(p_lits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| s.apply_lit(l)))
                    .collect();
                out.push((lits, origins.clone()));
            }
        }
    }

    fn factors(&self, given: usize, out: &mut Vec<(Vec<Lit>, Origins)>) {
        let g = &self.store[given];
        if g.selected.is_some() {
            return;
        }
        for i in 0..g.lits.len() {
            for j in i + 1..g.lits.len() {
                let (a, b) = (&g.lits[i], &g.lits[j]);
                if a.pred != b.pred {
                    continue;
                }
                let mut s = Subst::new(g.nvars);
                if s.unify_args(&a.args, &b.args) {
                    let lits = g.lits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| s.apply_lit(l)).collect();
                    out.push((lits, g.origins.clone()));
                }
            }
        }
    }

    fn step(&mut self, start: Instant) -> Option<Step> {
        let Reverse((_, given)) = self.passive.pop()?;
        if self.deleted[given] {
            return Some(Step::Continue);
        }
        self.stats.given += 1;
        let g = &self.store[given];
        let eligible: Vec<Key> =
            g.lits.iter().enumerate().filter(|(i, _)| g.eligible(*i)).map(|(_, l)| key(l)).collect();
        for k in &eligible {
            let ids = self.active_index.entry(*k).or_default();
            if ids.last() != Some(&given) {
                ids.push(given);
            }
        }

        let mut partners: Vec<usize> = Vec::new();
        for (pred, pos) in eligible {
            if let Some(ids) = self.active_index.get(&(pred, !pos)) {
                partners.extend(ids.iter().copied().filter(|id| !self.deleted[*id]));
            }
        }
        partners.sort_unstable();
        partners.dedup();

        let mut products = Vec::new();
        self.factors(given, &mut products);
        for p in partners {
            self.resolvents(given, p, &mut products);
        }
        for (lits, origins) in products {
            self.stats.generated += 1;
            if let Some(c) = self.make_clause(lits, origins) {
                if let Some(empty) = self.add(c) {
                    return Some(Step::Refuted(empty));
                }
            }
            if self.alive_count > self.limits.max_clauses
                || (self.stats.generated.is_multiple_of(256) && start.elapsed() > self.limits.wall_clock)
            {
                return Some(Step::OutOfResources);
            }
        }
        if start.elapsed() > self.limits.wall_clock {
            return Some(Step::OutOfResources);
        }
        Some(Step::Continue)
    }
}

fn lower_term(t: &Term, syms: &mut Symbols, vars: &mut HashMap<String, u32>) -> T {
    match t {
        Term::Var(v) => {
            let next = vars.len() as u32;
            T::Var(*vars.entry(v.clone()).or_insert(next))
        }
        Term::App(f, args) => T::App(syms.intern(f), args.iter().map(|a| lower_term(a, syms, vars)).collect()),
    }
}

/// Congruence axioms for every function and predicate symbol.
fn equality_axioms(eq: u32, functions: &BTreeMap<u32, usize>, predicates: &BTreeMap<u32, usize>) -> Vec<Vec<Lit>> {
    let lit = |pos, pred, args: Vec<T>| Lit { pos, pred, args };
    let v = T::Var;
    let mut out = vec![
        vec![lit(true, eq, vec![v(0), v(0)])],
        vec![lit(false, eq, vec![v(0), v(1)]), lit(true, eq, vec![v(1), v(0)])],
        vec![lit(false, eq, vec![v(0), v(1)]), lit(false, eq, vec![v(1), v(2)]), lit(true, eq, vec![v(0), v(2)])],
    ];
    let positional = |arity: usize, k: usize, replaced: u32| -> Vec<T> {
        (0..arity).map(|i| if i == k { v(replaced) } else { v(2 + i as u32) }).collect()
    };
    for (&f, &arity) in functions {
        for k in 0..arity {
            out.push(vec![
                lit(false, eq, vec![v(0), v(1)]),
                lit(true, eq, vec![T::App(f, positional(arity, k, 0)), T::App(f, positional(arity, k, 1))]),
            ]);
        }
    }
    for (&p, &arity) in predicates {
        for k in 0..arity {
            out.push(vec![
                lit(false, eq, vec![v(0), v(1)]),
                lit(false, p, positional(arity, k, 0)),
                lit(true, p, positional(arity, k, 1)),
            ]);
        }
    }
    out
}

fn collect_functions(t: &T, out: &mut BTreeMap<u32, usize>) {
    if let T::App(f, args) = t {
        if !args.is_empty() {
            out.insert(*f, args.len());
        }
        args.iter().for_each(|a| collect_functions(a, out));
    }
}

/// Saturates the clausal form of `named`. Reports `Unsatisfiable` with the
/// used origins, `Satisfiable` on genuine closure, `ResourceOut` on budget
/// exhaustion, or `GaveUp` when closure was reached only after discarding
/// heavy clauses.
fn saturate(named: &[(String, Formula)], limits: &ProverLimits) -> Result<ProofOutcome, ProverError> {
    if limits.max_clauses == 0 || limits.wall_clock.is_zero() || limits.max_weight == Some(0) {
        return Err(ProverError::InvalidLimits);
    }
    let start = Instant::now();
    let clauses = clausify(named);

    let mut origin_names: Vec<String> = named.iter().map(|(n, _)| n.clone()).collect();
    origin_names.push(EQUALITY_ORIGIN.to_string());
    let width = origin_names.len();
    let origin_index: HashMap<&str, usize> = origin_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

    let mut syms = Symbols::default();
    let eq = syms.intern(EQUALITY);
    let mut inputs: Vec<(Vec<Lit>, Origins)> = Vec::new();
    let mut uses_equality = false;
    let mut functions = BTreeMap::new();
    let mut predicates = BTreeMap::new();
    for c in &clauses.clauses {
        let mut vars = HashMap::new();
        let lits: Vec<Lit> = c
            .literals
            .iter()
            .map(|l| Lit {
                pos: l.positive,
                pred: syms.intern(&l.atom.pred),
                args: l.atom.args.iter().map(|a| lower_term(a, &mut syms, &mut vars)).collect(),
            })
            .collect();
        for l in &lits {
            if l.pred == eq {
                uses_equality = true;
            } else {
                predicates.insert(l.pred, l.args.len());
            }
            l.args.iter().for_each(|a| collect_functions(a, &mut functions));
        }
        let name = c.origins.iter().next().expect("clausified clauses have one origin");
        inputs.push((lits, Origins::single(origin_index[name.as_str()], width)));
    }
    if uses_equality {
        let eq_origin = Origins::single(origin_index[EQUALITY_ORIGIN], width);
        for lits in equality_axioms(eq, &functions, &predicates) {
            inputs.push((lits, eq_origin.clone()));
        }
    }

    let mut sat = Saturation {
        limits,
        eq_pred: uses_equality.then_some(eq),
        store: Vec::new(),
        deleted: Vec::new(),
        passive: BinaryHeap::new(),
        by_first: HashMap::new(),
        by_any: HashMap::new(),
        active_index: HashMap::new(),
        stats: ProverStats::default(),
        discarded_heavy: false,
        alive_count: 0,
    };

    let finish = |sat: &Saturation, status: SzsStatus, used: Option<&Origins>| {
        let mut stats = sat.stats.clone();
        stats.elapsed_secs = start.elapsed().as_secs_f64();
        let (used_premises, axioms_inconsistent) = match used {
            Some(o) => {
                let names: NameSet = origin_names
                    .iter()
                    .enumerate()
                    .filter(|(i, n)| o.contains(*i) && !n.starts_with('$'))
                    .map(|(_, n)| n.clone())
                    .collect();
                let conj = origin_index.get(CONJECTURE_ORIGIN).is_some_and(|&i| o.contains(i));
                (names, !conj)
            }
            None => (NameSet::new(), false),
        };
        ProofOutcome { status, used_premises, axioms_inconsistent, stats }
    };

    let mut refuted = None;
    for (lits, origins) in inputs {
        if let Some(c) = sat.make_clause(lits, origins) {
            if let Some(id) = sat.add(c) {
                refuted = Some(id);
                break;
            }
        }
    }
    if refuted.is_none() {
        loop {
            match sat.step(start) {
                None => {
                    let status = if sat.discarded_heavy { SzsStatus::GaveUp } else { SzsStatus::Satisfiable };
                    return Ok(finish(&sat, status, None));
                }
                Some(Step::Continue) => {}
                Some(Step::OutOfResources) => return Ok(finish(&sat, SzsStatus::ResourceOut, None)),
                Some(Step::Refuted(id)) => {
                    refuted = Some(id);
                    break;
                }
            }
        }
    }
    let id = refuted.expect("loop exits only on refutation");
    let origins = sat.store[id].origins.clone();
    Ok(finish(&sat, SzsStatus::Unsatisfiable, Some(&origins)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;

    fn run(src: &str) -> ProofOutcome {
        let t = parse_problem(src, &[]).unwrap();
        if t.conjecture().is_some() {
            prove(&t, &ProverLimits::default()).unwrap()
        } else {
            refute(&t, &ProverLimits::default()).unwrap()
        }
    }

    fn names(xs: &[&str]) -> NameSet {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn unused_premise_is_not_reported() {
        let out = run("fof(c_ax, axiom, c). fof(a, axiom, a). fof(ab, axiom, a => b). fof(goal, conjecture, b).");
        assert_eq!(out.status, SzsStatus::Theorem);
        assert_eq!(out.used_premises, names(&["a", "ab"]));
        assert!(!out.axioms_inconsistent);
    }

    #[test]
    fn tautology_needs_no_premises() {
        let out = run("fof(goal, conjecture, p | ~p).");
        assert_eq!(out.status, SzsStatus::Theorem);
        assert!(out.used_premises.is_empty());
    }

    #[test]
    fn non_theorem_saturates() {
        let out = run("fof(a, axiom, p). fof(goal, conjecture, q).");
        assert_eq!(out.status, SzsStatus::CounterSatisfiable);
        assert!(out.used_premises.is_empty());
    }

    #[test]
    fn refute_examples() {
        let out = run("fof(a, axiom, p). fof(b, axiom, ~p).");
        assert_eq!(out.status, SzsStatus::Unsatisfiable);
        assert_eq!(out.used_premises, names(&["a", "b"]));
        assert_eq!(run("fof(a, axiom, p).").status, SzsStatus::Satisfiable);
        let out = run("fof(a, axiom, p | q). fof(b, axiom, ~p). fof(c, axiom, ~q).");
        assert_eq!(out.status, SzsStatus::Unsatisfiable);
        assert_eq!(out.used_premises, names(&["a", "b", "c"]));
    }

    #[test]
    fn inconsistent_axioms_are_flagged() {
        let out = run("fof(a, axiom, p). fof(b, axiom, ~p). fof(goal, conjecture, q).");
        assert_eq!(out.status, SzsStatus::Theorem);
        assert!(out.axioms_inconsistent);
        assert_eq!(out.used_premises, names(&["a", "b"]));
    }

    #[test]
    fn quantified_reasoning() {
        let out = run(
            "fof(human, axiom, ! [X] : (man(X) => mortal(X))).
             fof(socrates, axiom, man(socrates)).
             fof(noise, axiom, ! [X] : (dog(X) => barks(X))).
             fof(goal, conjecture, ? [Y] : mortal(Y)).",
        );
        assert_eq!(out.status, SzsStatus::Theorem);
        assert_eq!(out.used_premises, names(&["human", "socrates"]));
    }

    #[test]
    fn factoring_is_needed() {
        let out = run("fof(a, axiom, ! [X,Y] : (p(X) | p(Y))). fof(b, axiom, ! [X,Y] : (~p(X) | ~p(Y))).");
        assert_eq!(out.status, SzsStatus::Unsatisfiable);
    }

    #[test]
    fn equality_reasoning() {
        let out = run(
            "fof(e1, axiom, a = b). fof(e2, axiom, b = c). fof(pa, axiom, p(f(a))).
             fof(goal, conjecture, p(f(c))).",
        );
        assert_eq!(out.status, SzsStatus::Theorem);
        assert_eq!(out.used_premises, names(&["e1", "e2", "pa"]));
    }

    #[test]
    fn infinite_search_runs_out_of_resources() {
        let t = parse_problem(
            "fof(a, axiom, ! [X] : (p(X) => p(s(X)))). fof(b, axiom, p(z)). fof(goal, conjecture, q).",
            &[],
        )
        .unwrap();
        let limits = ProverLimits { max_clauses: 200, ..ProverLimits::default() };
        assert_eq!(prove(&t, &limits).unwrap().status, SzsStatus::ResourceOut);
        let limits = ProverLimits { max_weight: Some(6), ..ProverLimits::default() };
        assert_eq!(prove(&t, &limits).unwrap().status, SzsStatus::GaveUp);
    }

    #[test]
    fn wrong_mode_is_an_error() {
        let t = parse_problem("fof(a, axiom, p).", &[]).unwrap();
        assert_eq!(prove(&t, &ProverLimits::default()), Err(ProverError::NoConjecture));
        let t = parse_problem("fof(a, axiom, p). fof(c, conjecture, p).", &[]).unwrap();
        assert_eq!(refute(&t, &ProverLimits::default()), Err(ProverError::ConjecturePresent));
    }

    #[test]
    fn deterministic_statistics() {
        let src = "fof(a, axiom, ! [X] : (p(X) => q(f(X)))). fof(b, axiom, p(c)). fof(g, conjecture, ? [Y] : q(Y)).";
        let a = run(src);
        let b = run(src);
        assert_eq!((a.stats.generated, a.stats.kept, a.stats.given), (b.stats.generated, b.stats.kept, b.stats.given));
    }
}
