use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// A first-order term. Constants are applications with no arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Binary connectives of FOF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Connective {
    And,
    Or,
    Implies,
    /// `<=`, reverse implication.
    Implied,
    Iff,
    /// `<~>`, exclusive or.
    Xor,
    /// `~|`
    Nor,
    /// `~&`
    Nand,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "=>",
            Connective::Implied => "<=",
            Connective::Iff => "<=>",
            Connective::Xor => "<~>",
            Connective::Nor => "~|",
            Connective::Nand => "~&",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    /// `$true` / `$false`
    Bool(bool),
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quantified(Quantifier, Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.to_string(), args)
    }

    pub fn prop(pred: &str) -> Formula {
        Formula::Atom(pred.to_string(), Vec::new())
    }

    pub fn binary(op: Connective, lhs: Formula, rhs: Formula) -> Formula {
        Formula::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::And, lhs, rhs)
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::Or, lhs, rhs)
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::binary(Connective::Implies, lhs, rhs)
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        Formula::Quantified(
            Quantifier::Forall,
            vars.iter().map(|v| v.to_string()).collect(),
            Box::new(body),
        )
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        Formula::Quantified(
            Quantifier::Exists,
            vars.iter().map(|v| v.to_string()).collect(),
            Box::new(body),
        )
    }

    pub fn is_closed(&self) -> bool {
        free_variables(self).is_empty()
    }
}

/// Wraps `f` in a negation node. No simplification is performed.
pub fn negate(f: &Formula) -> Formula {
    Formula::Not(Box::new(f.clone()))
}

pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match f {
            Formula::Bool(_) => {}
            Formula::Atom(_, args) => args.iter().for_each(|a| add_term(a, bound, out)),
            Formula::Eq(l, r) => {
                add_term(l, bound, out);
                add_term(r, bound, out);
            }
            Formula::Not(g) => walk(g, bound, out),
            Formula::Binary(_, l, r) => {
                walk(l, bound, out);
                walk(r, bound, out);
            }
            Formula::Quantified(_, vars, body) => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                walk(body, bound, out);
                bound.truncate(depth);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

/// True when `name` can be written without quotes as a TPTP lower word.
pub(crate) fn is_lower_word(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn write_atomic_word(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_lower_word(name) {
        f.write_str(name)
    } else {
        let escaped = name.replace('\\', "\\\\").replace('\'', "\\'");
        write!(f, "'{escaped}'")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(name, args) => {
                write_atomic_word(f, name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// Renders TPTP FOF syntax. Every binary formula is parenthesised so that
/// re-parsing yields the same tree regardless of associativity.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bool(true) => f.write_str("$true"),
            Formula::Bool(false) => f.write_str("$false"),
            Formula::Atom(p, args) => {
                write_atomic_word(f, p)?;
                write_args(f, args)
            }
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Eq(l, r) => write!(f, "{l} != {r}"),
                g => {
                    f.write_str("~ ")?;
                    write_operand(f, g)
                }
            },
            Formula::Binary(op, l, r) => {
                write!(f, "(")?;
                write_operand(f, l)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, r)?;
                write!(f, ")")
            }
            Formula::Quantified(q, vars, body) => {
                let sym = match q {
                    Quantifier::Forall => "!",
                    Quantifier::Exists => "?",
                };
                write!(f, "{sym} [{}] : ", vars.join(","))?;
                write_operand(f, body)
            }
        }
    }
}

/// Infix (in)equalities must be parenthesised when they appear as operands
/// of unary or binary connectives.
fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    match g {
        Formula::Eq(..) => write!(f, "({g})"),
        Formula::Not(inner) if matches!(inner.as_ref(), Formula::Eq(..)) => write!(f, "({g})"),
        _ => write!(f, "{g}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negate_wraps_without_simplifying() {
        let p = Formula::prop("p");
        assert_eq!(negate(&p), Formula::Not(Box::new(p.clone())));
        assert_eq!(negate(&p).to_string(), "~ p");

        let all = Formula::forall(&["X"], Formula::atom("p", vec![Term::var("X")]));
        assert_eq!(negate(&all).to_string(), "~ ! [X] : p(X)");

        let t = Formula::Bool(true);
        assert_eq!(negate(&t), Formula::Not(Box::new(Formula::Bool(true))));
    }

    #[test]
    fn free_variables_examples() {
        let px = Formula::atom("p", vec![Term::var("X")]);
        assert_eq!(free_variables(&px), BTreeSet::from(["X".to_string()]));
        assert!(free_variables(&Formula::forall(&["X"], px)).is_empty());
        let pxy = Formula::atom("p", vec![Term::var("X"), Term::var("Y")]);
        assert_eq!(
            free_variables(&Formula::forall(&["X"], pxy)),
            BTreeSet::from(["Y".to_string()])
        );
    }

    #[test]
    fn quoted_symbols_render_with_quotes() {
        let f = Formula::atom("Big name", vec![Term::constant("it's")]);
        assert_eq!(f.to_string(), r"'Big name'('it\'s')");
    }

    #[test]
    fn equality_operands_are_parenthesised() {
        let eq = Formula::Eq(Term::constant("a"), Term::constant("b"));
        let f = Formula::and(negate(&eq), eq.clone());
        assert_eq!(f.to_string(), "((a != b) & (a = b))");
        assert_eq!(negate(&negate(&eq)).to_string(), "~ (a != b)");
    }
}
