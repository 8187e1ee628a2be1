//! The FOF fragment of TPTP: parsing (with include resolution and lifted
//! CNF), rendering, and signature analysis.

mod lexer;
mod parser;
mod signature;

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::logic::{collect_symbols, is_lower_word, Formula};

pub use parser::{parse_file, parse_problem, parse_problem_at};
pub use signature::{hapax_legomena, signature_of, SignatureEntry, SymbolKind};

/// Premise names, ordered for deterministic reports.
pub type NameSet = BTreeSet<String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Position {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn memory() -> Self {
        Position { file: "<memory>".into(), line: 0, column: 0 }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Axiom,
    Hypothesis,
    Definition,
    Lemma,
    Theorem,
    Conjecture,
    NegatedConjecture,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Definition => "definition",
            Role::Lemma => "lemma",
            Role::Theorem => "theorem",
            Role::Conjecture => "conjecture",
            Role::NegatedConjecture => "negated_conjecture",
        }
    }
}

impl FromStr for Role {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "axiom" => Role::Axiom,
            "hypothesis" => Role::Hypothesis,
            "definition" => Role::Definition,
            "lemma" => Role::Lemma,
            "theorem" => Role::Theorem,
            "conjecture" => Role::Conjecture,
            "negated_conjecture" => Role::NegatedConjecture,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named, role-tagged formula. Equality ignores `source`.
#[derive(Clone, Debug, Serialize)]
pub struct AnnotatedFormula {
    pub name: String,
    pub role: Role,
    pub formula: Formula,
    pub source: Position,
}

impl AnnotatedFormula {
    pub fn new(name: &str, role: Role, formula: Formula) -> Self {
        AnnotatedFormula { name: name.to_string(), role, formula, source: Position::memory() }
    }
}

impl PartialEq for AnnotatedFormula {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.role == other.role && self.formula == other.formula
    }
}

impl Eq for AnnotatedFormula {}

/// A symbol used with two different kinds or arities.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{at}: symbol '{symbol}' used as {found} but as {expected} at {first}")]
pub struct SymbolClash {
    pub at: Position,
    pub symbol: String,
    pub found: String,
    pub expected: String,
    pub first: Position,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{at}: syntax error: {message}")]
    Syntax { at: Position, message: String },
    #[error("{at}: cannot resolve include '{name}'")]
    UnresolvedInclude { at: Position, name: String },
    #[error("{at}: {message}")]
    Unsupported { at: Position, message: String },
    #[error("{at}: duplicate formula name '{name}' (first declared at {first})")]
    DuplicateName { at: Position, name: String, first: Position },
    #[error("{at}: second conjecture '{name}' (first conjecture '{first}'); at most one is allowed")]
    MultipleConjectures { at: Position, name: String, first: String },
    #[error("{0}")]
    InconsistentSymbol(Box<SymbolClash>),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

/// An ordered collection of annotated formulas with at most one conjecture.
#[derive(Clone, Debug, Serialize)]
pub struct Theory {
    pub formulas: Vec<AnnotatedFormula>,
    pub origin: String,
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.formulas == other.formulas
    }
}

impl Theory {
    /// Builds a theory, enforcing unique names, at most one conjecture, and
    /// consistent symbol use.
    pub fn new(formulas: Vec<AnnotatedFormula>, origin: &str) -> Result<Theory, ParseError> {
        parser::validate(&formulas)?;
        Ok(Theory { formulas, origin: origin.to_string() })
    }

    pub fn empty() -> Theory {
        Theory { formulas: Vec::new(), origin: "<memory>".into() }
    }

    pub fn get(&self, name: &str) -> Option<&AnnotatedFormula> {
        self.formulas.iter().find(|f| f.name == name)
    }

    pub fn conjecture(&self) -> Option<&AnnotatedFormula> {
        self.formulas.iter().find(|f| f.role == Role::Conjecture)
    }

    /// Every formula except the conjecture, in declaration order.
    pub fn premises(&self) -> impl Iterator<Item = &AnnotatedFormula> {
        self.formulas.iter().filter(|f| f.role != Role::Conjecture)
    }

    pub fn premise_names(&self) -> NameSet {
        self.premises().map(|f| f.name.clone()).collect()
    }

    /// Orders names by their declaration position in this theory.
    pub fn in_declaration_order<'a>(&self, names: impl IntoIterator<Item = &'a String>) -> Vec<String> {
        let wanted: BTreeSet<&String> = names.into_iter().collect();
        self.formulas.iter().filter(|f| wanted.contains(&f.name)).map(|f| f.name.clone()).collect()
    }

    /// The theory made of `premises` (in declaration order) plus, when
    /// given, the formula named `goal` as its conjecture. Unknown names are
    /// ignored.
    pub fn subtheory(&self, premises: &NameSet, goal: Option<&str>) -> Theory {
        let mut formulas: Vec<AnnotatedFormula> = self
            .formulas
            .iter()
            .filter(|f| premises.contains(&f.name) && Some(f.name.as_str()) != goal && f.role != Role::Conjecture)
            .cloned()
            .collect();
        if let Some(g) = goal.and_then(|g| self.get(g)) {
            let mut g = g.clone();
            g.role = Role::Conjecture;
            formulas.push(g);
        }
        Theory { formulas, origin: self.origin.clone() }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in &self.formulas {
            collect_symbols(&f.formula, &mut out);
        }
        out
    }
}

fn render_name(name: &str) -> String {
    if is_lower_word(name) || (!name.is_empty() && name.chars().all(|c| c.is_ascii_digit())) {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Renders the theory as TPTP FOF, one annotated formula per line.
pub fn render_theory(t: &Theory) -> String {
    let mut out = String::new();
    for f in &t.formulas {
        out.push_str(&format!("fof({}, {}, {}).\n", render_name(&f.name), f.role, f.formula));
    }
    out
}
