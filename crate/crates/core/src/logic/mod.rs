//! First-order formulas, clauses with origin tracking, and finite
//! interpretations.

mod clause;
mod formula;
mod interp;

pub use clause::{clausify, Atom, Clause, ClauseSet, Literal, EQUALITY};
pub(crate) use clause::collect_symbols;
pub use formula::{free_variables, negate, Connective, Formula, Quantifier, Term};
pub(crate) use formula::is_lower_word;
pub use interp::{evaluate, tuple_at, tuple_index, EvalError, Interpretation, Table};
