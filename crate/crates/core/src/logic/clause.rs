use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::formula::{Connective, Formula, Quantifier, Term};

/// Predicate name used for equality atoms inside clauses.
pub const EQUALITY: &str = "=";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn is_equality(&self) -> bool {
        self.pred == EQUALITY && self.args.len() == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }
}

/// A disjunction of literals with the names of the input formulas it
/// descends from. Variables are implicitly universally quantified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub origins: BTreeSet<String>,
}

impl Clause {
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        fn walk(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(v) => {
                    out.insert(v.clone());
                }
                Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.args.iter().for_each(|a| walk(a, &mut out));
        }
        out
    }

    /// The universal closure of the clause as a formula.
    pub fn to_formula(&self) -> Formula {
        let mut body = self
            .literals
            .iter()
            .map(literal_formula)
            .reduce(Formula::or)
            .unwrap_or(Formula::Bool(false));
        let vars = self.variables();
        if !vars.is_empty() {
            body = Formula::Quantified(Quantifier::Forall, vars.into_iter().collect(), Box::new(body));
        }
        body
    }
}

fn literal_formula(l: &Literal) -> Formula {
    let atom = if l.atom.is_equality() {
        Formula::Eq(l.atom.args[0].clone(), l.atom.args[1].clone())
    } else {
        Formula::Atom(l.atom.pred.clone(), l.atom.args.clone())
    };
    if l.positive {
        atom
    } else {
        Formula::Not(Box::new(atom))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", literal_formula(self))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            f.write_str("$false")?;
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        let origins: Vec<&str> = self.origins.iter().map(String::as_str).collect();
        write!(f, "  [{}]", origins.join(","))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

/// Negation normal form with quantifiers still present.
#[derive(Clone, Debug)]
enum Nnf {
    Const(bool),
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(String, Box<Nnf>),
    Exists(String, Box<Nnf>),
}

struct Clausifier {
    fresh_var: usize,
    skolem_counter: usize,
    reserved: BTreeSet<String>,
}

impl Clausifier {
    fn fresh_var(&mut self) -> String {
        self.fresh_var += 1;
        format!("V{}", self.fresh_var)
    }

    fn fresh_skolem(&mut self) -> String {
        loop {
            self.skolem_counter += 1;
            let name = format!("sk{}", self.skolem_counter);
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }

    /// Pushes negations inwards, eliminates all connectives except `&`/`|`
    /// and renames bound variables apart.
    fn nnf(&mut self, f: &Formula, positive: bool, renaming: &HashMap<String, String>) -> Nnf {
        match f {
            Formula::Bool(b) => Nnf::Const(*b == positive),
            Formula::Atom(p, args) => Nnf::Lit(Literal {
                positive,
                atom: Atom { pred: p.clone(), args: args.iter().map(|t| rename(t, renaming)).collect() },
            }),
            Formula::Eq(l, r) => Nnf::Lit(Literal {
                positive,
                atom: Atom { pred: EQUALITY.to_string(), args: vec![rename(l, renaming), rename(r, renaming)] },
            }),
            Formula::Not(g) => self.nnf(g, !positive, renaming),
            Formula::Binary(op, l, r) => {
                use Connective::*;
                let (l, r) = (l.as_ref(), r.as_ref());
                match (op, positive) {
                    (And, true) | (Or, false) => {
                        Nnf::And(vec![self.nnf(l, positive, renaming), self.nnf(r, positive, renaming)])
                    }
                    (Or, true) | (And, false) => {
                        Nnf::Or(vec![self.nnf(l, positive, renaming), self.nnf(r, positive, renaming)])
                    }
                    (Implies, true) => Nnf::Or(vec![self.nnf(l, false, renaming), self.nnf(r, true, renaming)]),
                    (Implies, false) => Nnf::And(vec![self.nnf(l, true, renaming), self.nnf(r, false, renaming)]),
                    (Implied, _) => self.nnf(&Formula::binary(Implies, r.clone(), l.clone()), positive, renaming),
                    (Nor, _) => self.nnf(&Formula::binary(Or, l.clone(), r.clone()), !positive, renaming),
                    (Nand, _) => self.nnf(&Formula::binary(And, l.clone(), r.clone()), !positive, renaming),
                    (Xor, _) => self.nnf(&Formula::binary(Iff, l.clone(), r.clone()), !positive, renaming),
                    (Iff, true) => Nnf::And(vec![
                        Nnf::Or(vec![self.nnf(l, false, renaming), self.nnf(r, true, renaming)]),
                        Nnf::Or(vec![self.nnf(l, true, renaming), self.nnf(r, false, renaming)]),
                    ]),
                    (Iff, false) => Nnf::Or(vec![
                        Nnf::And(vec![self.nnf(l, true, renaming), self.nnf(r, false, renaming)]),
                        Nnf::And(vec![self.nnf(l, false, renaming), self.nnf(r, true, renaming)]),
                    ]),
                }
            }
            Formula::Quantified(q, vars, body) => {
                let mut inner = renaming.clone();
                let mut fresh = Vec::with_capacity(vars.len());
                for v in vars {
                    let nv = self.fresh_var();
                    inner.insert(v.clone(), nv.clone());
                    fresh.push(nv);
                }
                let mut out = self.nnf(body, positive, &inner);
                let universal = (*q == Quantifier::Forall) == positive;
                for v in fresh.into_iter().rev() {
                    out = if universal { Nnf::Forall(v, Box::new(out)) } else { Nnf::Exists(v, Box::new(out)) };
                }
                out
            }
        }
    }

    /// Replaces each existential by a Skolem term over all enclosing
    /// universal variables and drops the universal quantifiers.
    fn skolemize(&mut self, f: Nnf, universals: &mut Vec<String>, subst: &mut HashMap<String, Term>) -> Nnf {
        match f {
            Nnf::Const(_) => f,
            Nnf::Lit(mut l) => {
                l.atom.args = l.atom.args.iter().map(|t| substitute(t, subst)).collect();
                Nnf::Lit(l)
            }
            Nnf::And(parts) => Nnf::And(parts.into_iter().map(|p| self.skolemize(p, universals, subst)).collect()),
            Nnf::Or(parts) => Nnf::Or(parts.into_iter().map(|p| self.skolemize(p, universals, subst)).collect()),
            Nnf::Forall(v, body) => {
                universals.push(v);
                let out = self.skolemize(*body, universals, subst);
                universals.pop();
                out
            }
            Nnf::Exists(v, body) => {
                let name = self.fresh_skolem();
                let term = Term::App(name, universals.iter().map(|u| Term::Var(u.clone())).collect());
                subst.insert(v.clone(), term);
                let out = self.skolemize(*body, universals, subst);
                subst.remove(&v);
                out
            }
        }
    }
}

fn rename(t: &Term, renaming: &HashMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(renaming.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename(a, renaming)).collect()),
    }
}

fn substitute(t: &Term, subst: &HashMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| substitute(a, subst)).collect()),
    }
}

/// Distributes disjunction over conjunction. Each inner vector is a clause.
fn distribute(f: &Nnf) -> Vec<Vec<Literal>> {
    match f {
        Nnf::Const(true) => Vec::new(),
        Nnf::Const(false) => vec![Vec::new()],
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(parts) => parts.iter().flat_map(distribute).collect(),
        Nnf::Or(parts) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for p in parts {
                let rhs = distribute(p);
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for a in &acc {
                    for b in &rhs {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::Forall(..) | Nnf::Exists(..) => unreachable!("quantifiers removed by skolemization"),
    }
}

/// Removes duplicate literals and trivially false equalities; returns `None`
/// for tautologies.
fn tidy(literals: Vec<Literal>) -> Option<Vec<Literal>> {
    let mut out: Vec<Literal> = Vec::with_capacity(literals.len());
    for l in literals {
        if l.atom.is_equality() && l.atom.args[0] == l.atom.args[1] {
            if l.positive {
                return None;
            }
            continue;
        }
        if out.contains(&l) {
            continue;
        }
        if out.iter().any(|o| o.atom == l.atom && o.positive != l.positive) {
            return None;
        }
        out.push(l);
    }
    Some(out)
}

/// Renames the variables of a clause to `X0, X1, ...` in order of first
/// occurrence.
fn canonical_vars(literals: Vec<Literal>) -> Vec<Literal> {
    fn walk(t: &Term, map: &mut BTreeMap<String, String>, next: &mut usize) -> Term {
        match t {
            Term::Var(v) => {
                let name = map.entry(v.clone()).or_insert_with(|| {
                    let n = format!("X{next}");
                    *next += 1;
                    n
                });
                Term::Var(name.clone())
            }
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| walk(a, map, next)).collect()),
        }
    }
    let mut map = BTreeMap::new();
    let mut next = 0;
    literals
        .into_iter()
        .map(|mut l| {
            l.atom.args = l.atom.args.iter().map(|a| walk(a, &mut map, &mut next)).collect();
            l
        })
        .collect()
}

pub(crate) fn collect_symbols(f: &Formula, out: &mut BTreeSet<String>) {
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        if let Term::App(name, args) = t {
            out.insert(name.clone());
            args.iter().for_each(|a| term(a, out));
        }
    }
    match f {
        Formula::Bool(_) => {}
        Formula::Atom(p, args) => {
            out.insert(p.clone());
            args.iter().for_each(|a| term(a, out));
        }
        Formula::Eq(l, r) => {
            term(l, out);
            term(r, out);
        }
        Formula::Not(g) => collect_symbols(g, out),
        Formula::Binary(_, l, r) => {
            collect_symbols(l, out);
            collect_symbols(r, out);
        }
        Formula::Quantified(_, _, body) => collect_symbols(body, out),
    }
}

/// Converts closed formulas to an equisatisfiable clause set. Every clause
/// carries the name of the formula it came from as its only origin; Skolem
/// symbols are named `sk1, sk2, ...` per call, skipping names already used.
pub fn clausify(named: &[(String, Formula)]) -> ClauseSet {
    let mut reserved = BTreeSet::new();
    for (_, f) in named {
        collect_symbols(f, &mut reserved);
    }
    let mut cl = Clausifier { fresh_var: 0, skolem_counter: 0, reserved };
    let mut clauses = Vec::new();
    for (name, f) in named {
        let nnf = cl.nnf(f, true, &HashMap::new());
        let ground = cl.skolemize(nnf, &mut Vec::new(), &mut HashMap::new());
        for lits in distribute(&ground) {
            if let Some(lits) = tidy(lits) {
                clauses.push(Clause { literals: canonical_vars(lits), origins: BTreeSet::from([name.clone()]) });
            }
        }
    }
    ClauseSet { clauses }
}
