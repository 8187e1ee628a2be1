use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::formula::{Connective, Formula, Quantifier, Term};

/// A symbol table over a finite domain. Argument tuples are indexed in
/// mixed radix with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table<T> {
    pub arity: usize,
    pub values: Vec<T>,
}

impl<T: Copy> Table<T> {
    pub fn filled(arity: usize, domain_size: usize, value: T) -> Self {
        Table { arity, values: vec![value; domain_size.pow(arity as u32)] }
    }

    pub fn get(&self, domain_size: usize, args: &[usize]) -> T {
        self.values[tuple_index(domain_size, args)]
    }

    pub fn set(&mut self, domain_size: usize, args: &[usize], value: T) {
        let i = tuple_index(domain_size, args);
        self.values[i] = value;
    }
}

pub fn tuple_index(domain_size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * domain_size + a)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(domain_size: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % domain_size;
        index /= domain_size;
    }
    out
}

/// A finite interpretation over the domain `0..domain_size`. Equality is
/// identity on domain elements and needs no table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    pub domain_size: usize,
    pub predicates: BTreeMap<String, Table<bool>>,
    pub functions: BTreeMap<String, Table<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("symbol {name}/{arity} is not covered by the interpretation")]
    MissingSymbol { name: String, arity: usize },
    #[error("variable {0} is not bound by any quantifier")]
    UnboundVariable(String),
}

impl Interpretation {
    pub fn new(domain_size: usize) -> Self {
        assert!(domain_size >= 1, "domain must be nonempty");
        Interpretation { domain_size, predicates: BTreeMap::new(), functions: BTreeMap::new() }
    }

    fn term(&self, t: &Term, env: &HashMap<&str, usize>) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => env.get(v.as_str()).copied().ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::App(f, args) => {
                let table = self
                    .functions
                    .get(f)
                    .filter(|t| t.arity == args.len())
                    .ok_or_else(|| EvalError::MissingSymbol { name: f.clone(), arity: args.len() })?;
                let vals = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
                Ok(table.get(self.domain_size, &vals))
            }
        }
    }

    fn eval<'a>(&self, f: &'a Formula, env: &mut HashMap<&'a str, usize>) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Bool(b) => *b,
            Formula::Atom(p, args) => {
                let table = self
                    .predicates
                    .get(p)
                    .filter(|t| t.arity == args.len())
                    .ok_or_else(|| EvalError::MissingSymbol { name: p.clone(), arity: args.len() })?;
                let vals = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>, _>>()?;
                table.get(self.domain_size, &vals)
            }
            Formula::Eq(l, r) => self.term(l, env)? == self.term(r, env)?,
            Formula::Not(g) => !self.eval(g, env)?,
            Formula::Binary(op, l, r) => {
                let a = self.eval(l, env)?;
                let b = self.eval(r, env)?;
                match op {
                    Connective::And => a && b,
                    Connective::Or => a || b,
                    Connective::Implies => !a || b,
                    Connective::Implied => a || !b,
                    Connective::Iff => a == b,
                    Connective::Xor => a != b,
                    Connective::Nor => !(a || b),
                    Connective::Nand => !(a && b),
                }
            }
            Formula::Quantified(q, vars, body) => self.quantify(*q, vars, body, env)?,
        })
    }

    fn quantify<'a>(
        &self,
        q: Quantifier,
        vars: &'a [String],
        body: &'a Formula,
        env: &mut HashMap<&'a str, usize>,
    ) -> Result<bool, EvalError> {
        let Some((first, rest)) = vars.split_first() else {
            return self.eval(body, env);
        };
        let saved = env.get(first.as_str()).copied();
        let mut result = q == Quantifier::Forall;
        for d in 0..self.domain_size {
            env.insert(first.as_str(), d);
            let v = self.quantify(q, rest, body, env)?;
            if v != result {
                result = v;
                break;
            }
        }
        match saved {
            Some(s) => env.insert(first.as_str(), s),
            None => env.remove(first.as_str()),
        };
        Ok(result)
    }
}

/// Tarskian truth value of a closed formula.
pub fn evaluate(m: &Interpretation, f: &Formula) -> Result<bool, EvalError> {
    m.eval(f, &mut HashMap::new())
}

/// Stable text rendering: domain size, then function tables, then predicate
/// tables, each sorted by symbol name.
impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.domain_size;
        writeln!(f, "domain size: {n}")?;
        for (name, table) in &self.functions {
            if table.arity == 0 {
                writeln!(f, "  {name} = {}", table.values[0])?;
                continue;
            }
            for (i, v) in table.values.iter().enumerate() {
                writeln!(f, "  {name}({}) = {v}", join(&tuple_at(n, table.arity, i)))?;
            }
        }
        for (name, table) in &self.predicates {
            if table.arity == 0 {
                writeln!(f, "  {name} : {}", table.values[0])?;
                continue;
            }
            let holds: Vec<String> = table
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v)
                .map(|(i, _)| format!("({})", join(&tuple_at(n, table.arity, i))))
                .collect();
            writeln!(f, "  {name} : {{{}}}", holds.join(", "))?;
        }
        Ok(())
    }
}

fn join(vals: &[usize]) -> String {
    vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: &str) -> Term {
        Term::var(v)
    }

    #[test]
    fn propositional_atom() {
        let mut m = Interpretation::new(1);
        m.predicates.insert("p".into(), Table { arity: 0, values: vec![true] });
        assert_eq!(evaluate(&m, &Formula::prop("p")), Ok(true));
    }

    #[test]
    fn universal_fails_on_one_element() {
        let mut m = Interpretation::new(2);
        m.predicates.insert("p".into(), Table { arity: 1, values: vec![true, false] });
        let f = Formula::forall(&["X"], Formula::atom("p", vec![var("X")]));
        assert_eq!(evaluate(&m, &f), Ok(false));
    }

    #[test]
    fn two_distinct_elements() {
        let m = Interpretation::new(2);
        let f = Formula::exists(&["X"], Formula::exists(&["Y"], Formula::Not(Box::new(Formula::Eq(var("X"), var("Y"))))));
        assert_eq!(evaluate(&m, &f), Ok(true));
        assert_eq!(evaluate(&Interpretation::new(1), &f), Ok(false));
    }

    #[test]
    fn missing_symbol_is_an_error() {
        let m = Interpretation::new(1);
        assert_eq!(
            evaluate(&m, &Formula::atom("q", vec![Term::constant("a")])),
            Err(EvalError::MissingSymbol { name: "q".into(), arity: 1 })
        );
    }

    #[test]
    fn shadowed_variables_restore_outer_binding() {
        let mut m = Interpretation::new(2);
        m.predicates.insert("p".into(), Table { arity: 1, values: vec![true, false] });
        // ? [X] : (p(X) & (! [X] : (X = X)) & p(X))
        let inner = Formula::forall(&["X"], Formula::Eq(var("X"), var("X")));
        let px = Formula::atom("p", vec![var("X")]);
        let f = Formula::exists(&["X"], Formula::and(Formula::and(px.clone(), inner), px));
        assert_eq!(evaluate(&m, &f), Ok(true));
    }

    #[test]
    fn tuple_index_round_trip() {
        for i in 0..27 {
            assert_eq!(tuple_index(3, &tuple_at(3, 3, i)), i);
        }
    }

    #[test]
    fn display_is_stable() {
        let mut m = Interpretation::new(2);
        m.functions.insert("a".into(), Table { arity: 0, values: vec![1] });
        m.functions.insert("f".into(), Table { arity: 1, values: vec![1, 0] });
        m.predicates.insert("r".into(), Table { arity: 2, values: vec![false, true, false, false] });
        assert_eq!(m.to_string(), "domain size: 2\n  a = 1\n  f(0) = 1\n  f(1) = 0\n  r : {(0,1)}\n");
    }
}
