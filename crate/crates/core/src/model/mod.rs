//! MACE-style finite model search.
//!
//! Clauses are flattened so that every literal mentions at most one
//! function symbol applied to variables, then grounded over domains of
//! increasing size and handed to a DPLL solver. Satisfying assignments are
//! decoded into interpretations and checked against the input formulas.

mod dpll;

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::logic::{clausify, evaluate, tuple_at, EvalError, Formula, Interpretation, Table, Term};
use dpll::{lit, SatResult, Solver};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelLimits {
    pub max_domain_size: usize,
    pub wall_clock: Duration,
}

impl Default for ModelLimits {
    fn default() -> Self {
        ModelLimits { max_domain_size: 4, wall_clock: Duration::from_secs(10) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ModelOutcome {
    ModelFound(Interpretation),
    /// No model of any size up to and including this one.
    ExhaustedUpTo(usize),
    ResourceOut,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("max_domain_size must be at least 1 and the time budget positive")]
    InvalidLimits,
}

/// True iff every formula holds in `m`.
pub fn verify_model(m: &Interpretation, formulas: &[Formula]) -> Result<bool, EvalError> {
    for f in formulas {
        if !evaluate(m, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches domain sizes `1..=max_domain_size` in order, so a returned model
/// has the least size for which one exists.
pub fn find_model(formulas: &[(String, Formula)], limits: &ModelLimits) -> Result<ModelOutcome, ModelError> {
    if limits.max_domain_size == 0 || limits.wall_clock.is_zero() {
        return Err(ModelError::InvalidLimits);
    }
    let deadline = Instant::now() + limits.wall_clock;
    let mut sig = Signature::default();
    for (_, f) in formulas {
        sig.scan_formula(f);
    }
    let clauses = clausify(formulas);
    let flat: Vec<FlatClause> = clauses
        .clauses
        .iter()
        .filter_map(|c| {
            let lits: Vec<(bool, &str, &[Term])> =
                c.literals.iter().map(|l| (l.positive, l.atom.pred.as_str(), l.atom.args.as_slice())).collect();
            flatten(&lits, &mut sig)
        })
        .collect();

    for n in 1..=limits.max_domain_size {
        let Some(solver) = ground(&flat, &sig, n, deadline) else {
            return Ok(ModelOutcome::ResourceOut);
        };
        match solver.solve(Some(deadline)) {
            SatResult::Unsat => {}
            SatResult::OutOfTime => return Ok(ModelOutcome::ResourceOut),
            SatResult::Sat(assignment) => {
                let m = decode(&sig, n, &assignment);
                let originals: Vec<Formula> = formulas.iter().map(|(_, f)| f.clone()).collect();
                assert_eq!(verify_model(&m, &originals), Ok(true), "decoded model fails verification");
                return Ok(ModelOutcome::ModelFound(m));
            }
        }
    }
    Ok(ModelOutcome::ExhaustedUpTo(limits.max_domain_size))
}

#[derive(Default)]
struct Signature {
    /// Predicates and functions in first-seen order, with arities.
    preds: Vec<(String, usize)>,
    funs: Vec<(String, usize)>,
    pred_ids: HashMap<String, usize>,
    fun_ids: HashMap<String, usize>,
    /// Symbols of the input formulas, as opposed to Skolem symbols.
    original_preds: usize,
    original_funs: usize,
}

impl Signature {
    fn pred(&mut self, name: &str, arity: usize) -> usize {
        if let Some(&id) = self.pred_ids.get(name) {
            return id;
        }
        self.preds.push((name.to_string(), arity));
        self.pred_ids.insert(name.to_string(), self.preds.len() - 1);
        self.preds.len() - 1
    }

    fn fun(&mut self, name: &str, arity: usize) -> usize {
        if let Some(&id) = self.fun_ids.get(name) {
            return id;
        }
        self.funs.push((name.to_string(), arity));
        self.fun_ids.insert(name.to_string(), self.funs.len() - 1);
        self.funs.len() - 1
    }

    fn scan_term(&mut self, t: &Term) {
        if let Term::App(f, args) = t {
            self.fun(f, args.len());
            args.iter().for_each(|a| self.scan_term(a));
        }
    }

    fn scan_formula(&mut self, f: &Formula) {
        match f {
            Formula::Bool(_) => {}
            Formula::Atom(p, args) => {
                self.pred(p, args.len());
                args.iter().for_each(|a| self.scan_term(a));
            }
            Formula::Eq(l, r) => {
                self.scan_term(l);
                self.scan_term(r);
            }
            Formula::Not(g) | Formula::Quantified(_, _, g) => self.scan_formula(g),
            Formula::Binary(_, l, r) => {
                self.scan_formula(l);
                self.scan_formula(r);
            }
        }
        self.original_preds = self.preds.len();
        self.original_funs = self.funs.len();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum FlatLit {
    Pred { pred: usize, args: Vec<u32>, pos: bool },
    /// `f(args) = res`
    Fun { fun: usize, args: Vec<u32>, res: u32, pos: bool },
    VarEq { a: u32, b: u32, pos: bool },
}

impl FlatLit {
    fn vars_mut(&mut self) -> Vec<&mut u32> {
        match self {
            FlatLit::Pred { args, .. } => args.iter_mut().collect(),
            FlatLit::Fun { args, res, .. } => args.iter_mut().chain(std::iter::once(res)).collect(),
            FlatLit::VarEq { a, b, .. } => vec![a, b],
        }
    }
}

struct FlatClause {
    lits: Vec<FlatLit>,
    nvars: u32,
}

struct Flattener<'a> {
    sig: &'a mut Signature,
    vars: HashMap<String, u32>,
    next: u32,
    memo: HashMap<(usize, Vec<u32>), u32>,
    defs: Vec<FlatLit>,
}

impl Flattener<'_> {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next - 1
    }

    /// The variable standing for `t`; defining literals `f(..) != v` are
    /// emitted once per distinct subterm.
    fn var_for(&mut self, t: &Term) -> u32 {
        match t {
            Term::Var(name) => match self.vars.get(name) {
                Some(&v) => v,
                None => {
                    let v = self.fresh();
                    self.vars.insert(name.clone(), v);
                    v
                }
            },
            Term::App(f, args) => {
                let arg_vars: Vec<u32> = args.iter().map(|a| self.var_for(a)).collect();
                let fun = self.sig.fun(f, args.len());
                if let Some(&v) = self.memo.get(&(fun, arg_vars.clone())) {
                    return v;
                }
                let v = self.fresh();
                self.memo.insert((fun, arg_vars.clone()), v);
                self.defs.push(FlatLit::Fun { fun, args: arg_vars, res: v, pos: false });
                v
            }
        }
    }

    fn literal(&mut self, positive: bool, pred: &str, args: &[Term]) -> FlatLit {
        if pred == crate::logic::EQUALITY {
            let (l, r) = (&args[0], &args[1]);
            return match (l, r) {
                (Term::App(f, fargs), other) | (other, Term::App(f, fargs)) => {
                    let res = self.var_for(other);
                    let arg_vars = fargs.iter().map(|a| self.var_for(a)).collect();
                    let fun = self.sig.fun(f, fargs.len());
                    FlatLit::Fun { fun, args: arg_vars, res, pos: positive }
                }
                _ => FlatLit::VarEq { a: self.var_for(l), b: self.var_for(r), pos: positive },
            };
        }
        let arg_vars = args.iter().map(|a| self.var_for(a)).collect();
        FlatLit::Pred { pred: self.sig.pred(pred, args.len()), args: arg_vars, pos: positive }
    }
}

/// Flattens one clause; `None` if it is a tautology.
fn flatten(lits: &[(bool, &str, &[Term])], sig: &mut Signature) -> Option<FlatClause> {
    let mut fl = Flattener { sig, vars: HashMap::new(), next: 0, memo: HashMap::new(), defs: Vec::new() };
    let mut out: Vec<FlatLit> = lits.iter().map(|(pos, p, args)| fl.literal(*pos, p, args)).collect();
    out.append(&mut fl.defs);

    // x != y | C  is equivalent to  C[x := y].
    while let Some(i) = out.iter().position(|l| matches!(l, FlatLit::VarEq { pos: false, .. })) {
        let FlatLit::VarEq { a, b, .. } = out.remove(i) else { unreachable!() };
        if a != b {
            for l in &mut out {
                for v in l.vars_mut() {
                    if *v == a {
                        *v = b;
                    }
                }
            }
        }
    }
    if out.iter().any(|l| matches!(l, FlatLit::VarEq { a, b, pos: true } if a == b)) {
        return None;
    }
    let mut uniq: Vec<FlatLit> = Vec::with_capacity(out.len());
    for l in out {
        if !uniq.contains(&l) {
            uniq.push(l);
        }
    }
    let mut renumber: HashMap<u32, u32> = HashMap::new();
    for l in &mut uniq {
        for v in l.vars_mut() {
            let next = renumber.len() as u32;
            *v = *renumber.entry(*v).or_insert(next);
        }
    }
    Some(FlatClause { lits: uniq, nvars: renumber.len() as u32 })
}

struct Layout {
    n: usize,
    pred_base: Vec<usize>,
    fun_base: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(sig: &Signature, n: usize) -> Layout {
        let mut total = 0;
        let mut pred_base = Vec::new();
        for (_, arity) in &sig.preds {
            pred_base.push(total);
            total += n.pow(*arity as u32);
        }
        let mut fun_base = Vec::new();
        for (_, arity) in &sig.funs {
            fun_base.push(total);
            total += n.pow(*arity as u32 + 1);
        }
        Layout { n, pred_base, fun_base, total }
    }

    fn index(&self, args: impl Iterator<Item = usize>) -> usize {
        args.fold(0, |acc, a| acc * self.n + a)
    }

    fn pred_var(&self, p: usize, args: &[u32], env: &[usize]) -> usize {
        self.pred_base[p] + self.index(args.iter().map(|&v| env[v as usize]))
    }

    fn fun_var(&self, f: usize, args: &[u32], res: u32, env: &[usize]) -> usize {
        self.fun_base[f] + self.index(args.iter().chain(std::iter::once(&res)).map(|&v| env[v as usize]))
    }
}

/// Builds the propositional encoding for domain size `n`; `None` when the
/// deadline passes while grounding.
fn ground(clauses: &[FlatClause], sig: &Signature, n: usize, deadline: Instant) -> Option<Solver> {
    let layout = Layout::new(sig, n);
    let mut solver = Solver::new(layout.total);
    let mut emitted = 0usize;
    for c in clauses {
        let k = c.nvars as usize;
        let mut env = vec![0usize; k];
        'assignments: loop {
            let mut ground_clause = Vec::with_capacity(c.lits.len());
            let mut satisfied = false;
            for l in &c.lits {
                match l {
                    FlatLit::VarEq { a, b, pos } => {
                        if (env[*a as usize] == env[*b as usize]) == *pos {
                            satisfied = true;
                            break;
                        }
                    }
                    FlatLit::Pred { pred, args, pos } => ground_clause.push(lit(layout.pred_var(*pred, args, &env), *pos)),
                    FlatLit::Fun { fun, args, res, pos } => {
                        ground_clause.push(lit(layout.fun_var(*fun, args, *res, &env), *pos))
                    }
                }
            }
            if !satisfied {
                solver.add_clause(ground_clause);
            }
            emitted += 1;
            if emitted.is_multiple_of(4096) && Instant::now() > deadline {
                return None;
            }
            // next assignment, last variable fastest
            for slot in env.iter_mut().rev() {
                *slot += 1;
                if *slot < n {
                    continue 'assignments;
                }
                *slot = 0;
            }
            break;
        }
    }
    for (f, (_, arity)) in sig.funs.iter().enumerate() {
        for t in 0..n.pow(*arity as u32) {
            let base = layout.fun_base[f] + t * n;
            solver.add_clause((0..n).map(|v| lit(base + v, true)).collect());
            for v in 0..n {
                for w in v + 1..n {
                    solver.add_clause(vec![lit(base + v, false), lit(base + w, false)]);
                }
            }
        }
    }
    // Any model can be permuted so that the first constant denotes 0.
    if let Some(c) = sig.funs.iter().position(|(_, arity)| *arity == 0) {
        solver.add_clause(vec![lit(layout.fun_base[c], true)]);
    }
    Some(solver)
}

fn decode(sig: &Signature, n: usize, assignment: &[bool]) -> Interpretation {
    let layout = Layout::new(sig, n);
    let mut m = Interpretation::new(n);
    let mut preds = BTreeMap::new();
    for (p, (name, arity)) in sig.preds.iter().enumerate().take(sig.original_preds) {
        let size = n.pow(*arity as u32);
        let values = (0..size).map(|t| assignment[layout.pred_base[p] + t]).collect();
        preds.insert(name.clone(), Table { arity: *arity, values });
    }
    let mut funs = BTreeMap::new();
    for (f, (name, arity)) in sig.funs.iter().enumerate().take(sig.original_funs) {
        let mut table = Table::filled(*arity, n, 0);
        for t in 0..n.pow(*arity as u32) {
            let base = layout.fun_base[f] + t * n;
            let v = (0..n).find(|&v| assignment[base + v]).expect("totality clauses hold");
            table.set(n, &tuple_at(n, *arity, t), v);
        }
        funs.insert(name.clone(), table);
    }
    m.predicates = preds;
    m.functions = funs;
    m
}
