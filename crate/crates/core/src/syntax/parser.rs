use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::lexer::{tokenize, Spanned, Tok};
use super::{AnnotatedFormula, ParseError, Position, Role, SymbolClash, Theory};
use crate::logic::{Connective, Formula, Quantifier, Term};

/// Parses TPTP text held in memory. Includes are searched in
/// `include_dirs`, then under `$TPTP`.
pub fn parse_problem(source: &str, include_dirs: &[PathBuf]) -> Result<Theory, ParseError> {
    parse_problem_at(source, "<memory>", None, include_dirs)
}

/// Parses TPTP text whose includes are also resolved relative to `base_dir`.
pub fn parse_problem_at(
    source: &str,
    label: &str,
    base_dir: Option<&Path>,
    include_dirs: &[PathBuf],
) -> Result<Theory, ParseError> {
    let mut loader = Loader { include_dirs, stack: Vec::new(), formulas: Vec::new() };
    loader.load_text(source, label, base_dir)?;
    validate(&loader.formulas)?;
    Ok(Theory { formulas: loader.formulas, origin: label.to_string() })
}

pub fn parse_file(path: &Path, include_dirs: &[PathBuf]) -> Result<Theory, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    let canonical = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    let mut loader = Loader { include_dirs, stack: vec![canonical], formulas: Vec::new() };
    let label = path.display().to_string();
    loader.load_text(&text, &label, path.parent())?;
    validate(&loader.formulas)?;
    Ok(Theory { formulas: loader.formulas, origin: label })
}

struct Loader<'a> {
    include_dirs: &'a [PathBuf],
    stack: Vec<PathBuf>,
    formulas: Vec<AnnotatedFormula>,
}

impl Loader<'_> {
    fn load_text(&mut self, text: &str, label: &str, base_dir: Option<&Path>) -> Result<(), ParseError> {
        let toks = tokenize(text, label)?;
        let mut p = Parser { toks, i: 0, file: label.to_string(), scope: Vec::new(), free: None };
        loop {
            let at = p.pos();
            match p.next() {
                Tok::Eof => return Ok(()),
                Tok::Lower(kw) if kw == "fof" || kw == "cnf" => {
                    let f = p.annotated(kw == "cnf", at)?;
                    self.formulas.push(f);
                }
                Tok::Lower(kw) if kw == "include" => {
                    let name = p.include()?;
                    self.include(&name, at, base_dir)?;
                }
                Tok::Lower(kw) if kw == "tff" || kw == "thf" || kw == "tcf" => {
                    return Err(ParseError::Unsupported { at, message: format!("{kw} formulas are not supported") });
                }
                t => return Err(p.error_at(at, format!("expected fof(, cnf( or include(, found {}", t.describe()))),
            }
        }
    }

    fn include(&mut self, name: &str, at: Position, base_dir: Option<&Path>) -> Result<(), ParseError> {
        let mut candidates: Vec<PathBuf> = self.include_dirs.iter().map(|d| d.join(name)).collect();
        if let Some(b) = base_dir {
            candidates.push(b.join(name));
        }
        if let Ok(root) = std::env::var("TPTP") {
            candidates.push(PathBuf::from(root).join(name));
        }
        let Some(path) = candidates.into_iter().find(|c| c.is_file()) else {
            return Err(ParseError::UnresolvedInclude { at, name: name.to_string() });
        };
        let canonical = path.canonicalize().unwrap_or_else(|_| path.clone());
        if self.stack.contains(&canonical) {
            return Err(ParseError::Unsupported { at, message: format!("include cycle through '{name}'") });
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ParseError::Io { path: path.clone(), message: e.to_string() })?;
        self.stack.push(canonical);
        let label = path.display().to_string();
        let result = self.load_text(&text, &label, path.parent());
        self.stack.pop();
        result
    }
}

struct Parser {
    toks: Vec<Spanned>,
    i: usize,
    file: String,
    /// Variables bound by enclosing quantifiers.
    scope: Vec<String>,
    /// In CNF mode, free variables in order of first occurrence.
    free: Option<Vec<String>>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Position {
        let s = &self.toks[self.i];
        Position { file: self.file.clone(), line: s.line, column: s.column }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if t != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn error_at(&self, at: Position, message: String) -> ParseError {
        ParseError::Syntax { at, message }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error_at(self.pos(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn include(&mut self) -> Result<String, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let name = match self.next() {
            Tok::Quoted(s) => s,
            _ => return Err(self.error_at(self.pos(), "expected a quoted file name".into())),
        };
        if *self.peek() == Tok::Comma {
            return Err(ParseError::Unsupported {
                at: self.pos(),
                message: "include selection lists are not supported".into(),
            });
        }
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Dot, "'.'")?;
        Ok(name)
    }

    fn annotated(&mut self, cnf: bool, at: Position) -> Result<AnnotatedFormula, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let name = match self.next() {
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Number(s) => s,
            t => return Err(self.error_at(at, format!("expected a formula name, found {}", t.describe()))),
        };
        self.expect(Tok::Comma, "','")?;
        let role_at = self.pos();
        let role = match self.next() {
            Tok::Lower(r) => r
                .parse::<Role>()
                .map_err(|_| self.error_at(role_at.clone(), format!("unknown or unsupported role '{r}'")))?,
            t => return Err(self.error_at(role_at, format!("expected a role, found {}", t.describe()))),
        };
        self.expect(Tok::Comma, "','")?;
        let formula = if cnf {
            self.free = Some(Vec::new());
            let body = self.disjunction()?;
            let vars = self.free.take().unwrap_or_default();
            if vars.is_empty() {
                body
            } else {
                Formula::Quantified(Quantifier::Forall, vars, Box::new(body))
            }
        } else {
            self.free = None;
            self.logic_formula()?
        };
        if *self.peek() == Tok::Comma {
            self.next();
            self.skip_annotations()?;
        }
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Dot, "'.'")?;
        Ok(AnnotatedFormula { name, role, formula, source: at })
    }

    /// Skips source and useful-info annotations up to the closing paren.
    fn skip_annotations(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return Err(self.unexpected("')'")),
                Tok::LParen | Tok::LBrack => depth += 1,
                Tok::RParen if depth == 0 => return Ok(()),
                Tok::RParen | Tok::RBrack => depth = depth.saturating_sub(1),
                _ => {}
            }
            self.next();
        }
    }

    fn binary_op(tok: &Tok) -> Option<Connective> {
        Some(match tok {
            Tok::And => Connective::And,
            Tok::Or => Connective::Or,
            Tok::Implies => Connective::Implies,
            Tok::Implied => Connective::Implied,
            Tok::Iff => Connective::Iff,
            Tok::Xor => Connective::Xor,
            Tok::Nor => Connective::Nor,
            Tok::Nand => Connective::Nand,
            _ => return None,
        })
    }

    fn logic_formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unitary()?;
        let Some(op) = Self::binary_op(self.peek()) else {
            return Ok(lhs);
        };
        self.next();
        let rhs = self.unitary()?;
        lhs = Formula::binary(op, lhs, rhs);
        if matches!(op, Connective::And | Connective::Or) {
            while Self::binary_op(self.peek()) == Some(op) {
                self.next();
                let rhs = self.unitary()?;
                lhs = Formula::binary(op, lhs, rhs);
            }
        }
        if Self::binary_op(self.peek()).is_some() {
            return Err(self.error_at(
                self.pos(),
                format!("{} cannot follow {} without parentheses", self.peek().describe(), op.symbol()),
            ));
        }
        Ok(lhs)
    }

    fn unitary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang | Tok::Question => {
                let q = if self.next() == Tok::Bang { Quantifier::Forall } else { Quantifier::Exists };
                self.expect(Tok::LBrack, "'['")?;
                let mut vars = Vec::new();
                loop {
                    match self.next() {
                        Tok::Upper(v) => vars.push(v),
                        _ => return Err(self.error_at(self.pos(), "expected a variable in quantifier list".into())),
                    }
                    match self.next() {
                        Tok::Comma => continue,
                        Tok::RBrack => break,
                        _ => return Err(self.error_at(self.pos(), "expected ',' or ']' in quantifier list".into())),
                    }
                }
                self.expect(Tok::Colon, "':'")?;
                let depth = self.scope.len();
                self.scope.extend(vars.iter().cloned());
                let body = self.unitary();
                self.scope.truncate(depth);
                Ok(Formula::Quantified(q, vars, Box::new(body?)))
            }
            Tok::Tilde => {
                self.next();
                Ok(Formula::Not(Box::new(self.unitary()?)))
            }
            Tok::LParen => {
                self.next();
                let f = self.logic_formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        let at = self.pos();
        if let Tok::Dollar(w) = self.peek().clone() {
            self.next();
            return match w.as_str() {
                "true" => Ok(Formula::Bool(true)),
                "false" => Ok(Formula::Bool(false)),
                _ => Err(ParseError::Unsupported { at, message: format!("defined symbol '${w}' is not supported") }),
            };
        }
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq | Tok::Neq => {
                let negated = self.next() == Tok::Neq;
                let rhs = self.term()?;
                let eq = Formula::Eq(lhs, rhs);
                Ok(if negated { Formula::Not(Box::new(eq)) } else { eq })
            }
            _ => match lhs {
                Term::App(p, args) => Ok(Formula::Atom(p, args)),
                Term::Var(v) => Err(self.error_at(at, format!("variable {v} used as a formula"))),
            },
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.pos();
        match self.next() {
            Tok::Upper(v) => {
                if !self.scope.contains(&v) {
                    match &mut self.free {
                        Some(free) => {
                            if !free.contains(&v) {
                                free.push(v.clone());
                            }
                        }
                        None => return Err(self.error_at(at, format!("variable {v} is not bound by a quantifier"))),
                    }
                }
                Ok(Term::Var(v))
            }
            Tok::Lower(name) | Tok::Quoted(name) => {
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.next();
                    loop {
                        args.push(self.term()?);
                        match self.next() {
                            Tok::Comma => continue,
                            Tok::RParen => break,
                            t => {
                                return Err(self.error_at(self.pos(), format!("expected ',' or ')', found {}", t.describe())))
                            }
                        }
                    }
                }
                Ok(Term::App(name, args))
            }
            Tok::Number(n) => Ok(Term::App(n, Vec::new())),
            Tok::Distinct(_) => {
                Err(ParseError::Unsupported { at, message: "distinct object terms are not supported".into() })
            }
            t => Err(self.error_at(at, format!("expected a term, found {}", t.describe()))),
        }
    }

    /// CNF bodies: literals joined by `|`, optionally parenthesised.
    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::LParen {
            self.next();
            let f = self.disjunction()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(f);
        }
        let mut f = self.cnf_literal()?;
        while *self.peek() == Tok::Or {
            self.next();
            let rhs = self.cnf_literal()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn cnf_literal(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.next();
            return Ok(Formula::Not(Box::new(self.atomic()?)));
        }
        self.atomic()
    }
}

/// Checks unique names, the single-conjecture convention, and that each
/// symbol has one kind and arity throughout.
pub(crate) fn validate(formulas: &[AnnotatedFormula]) -> Result<(), ParseError> {
    let mut names: HashMap<&str, &Position> = HashMap::new();
    let mut conjecture: Option<&str> = None;
    let mut symbols: HashMap<String, (bool, usize, Position)> = HashMap::new();
    for f in formulas {
        if let Some(first) = names.insert(&f.name, &f.source) {
            return Err(ParseError::DuplicateName { at: f.source.clone(), name: f.name.clone(), first: first.clone() });
        }
        if f.role == Role::Conjecture {
            if let Some(first) = conjecture {
                return Err(ParseError::MultipleConjectures {
                    at: f.source.clone(),
                    name: f.name.clone(),
                    first: first.to_string(),
                });
            }
            conjecture = Some(&f.name);
        }
        let mut uses = Vec::new();
        symbol_uses(&f.formula, &mut uses);
        for (sym, is_pred, arity) in uses {
            match symbols.get(sym) {
                None => {
                    symbols.insert(sym.to_string(), (is_pred, arity, f.source.clone()));
                }
                Some((p, a, first)) if *p != is_pred || *a != arity => {
                    return Err(ParseError::InconsistentSymbol(Box::new(SymbolClash {
                        at: f.source.clone(),
                        symbol: sym.to_string(),
                        found: describe_use(is_pred, arity),
                        expected: describe_use(*p, *a),
                        first: first.clone(),
                    })));
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}

fn describe_use(is_pred: bool, arity: usize) -> String {
    match (is_pred, arity) {
        (true, a) => format!("predicate of arity {a}"),
        (false, 0) => "constant".to_string(),
        (false, a) => format!("function of arity {a}"),
    }
}

fn symbol_uses<'a>(f: &'a Formula, out: &mut Vec<(&'a str, bool, usize)>) {
    fn term<'a>(t: &'a Term, out: &mut Vec<(&'a str, bool, usize)>) {
        if let Term::App(name, args) = t {
            out.push((name, false, args.len()));
            args.iter().for_each(|a| term(a, out));
        }
    }
    match f {
        Formula::Bool(_) => {}
        Formula::Atom(p, args) => {
            out.push((p, true, args.len()));
            args.iter().for_each(|a| term(a, out));
        }
        Formula::Eq(l, r) => {
            term(l, out);
            term(r, out);
        }
        Formula::Not(g) => symbol_uses(g, out),
        Formula::Binary(_, l, r) => {
            symbol_uses(l, out);
            symbol_uses(r, out);
        }
        Formula::Quantified(_, _, b) => symbol_uses(b, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::render_theory;

    fn parse(s: &str) -> Result<Theory, ParseError> {
        parse_problem(s, &[])
    }

    #[test]
    fn minimal_problem() {
        let t = parse("fof(a1, axiom, p). fof(c, conjecture, p).").unwrap();
        assert_eq!(t.formulas.len(), 2);
        assert_eq!(t.conjecture().unwrap().name, "c");
    }

    #[test]
    fn unbalanced_parenthesis_reports_end_of_input() {
        let err = parse("fof(a1, axiom, p & q").unwrap_err();
        match err {
            ParseError::Syntax { message, .. } => assert!(message.contains("end of input"), "{message}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn associative_chains_and_precedence() {
        let t = parse("fof(a, axiom, ~ p & q & r | s => t).");
        assert!(t.is_err(), "mixed connectives need parentheses");
        let t = parse("fof(a, axiom, (~ p & q & r) => t).").unwrap();
        let f = &t.formulas[0].formula;
        assert_eq!(f.to_string(), "(((~ p & q) & r) => t)");
    }

    #[test]
    fn quantifiers_and_equality() {
        let t = parse("fof(a, axiom, ! [X,Y] : (f(X) = Y => ? [Z] : Z != X)).").unwrap();
        let reparsed = parse(&render_theory(&t)).unwrap();
        assert_eq!(t, reparsed);
    }

    #[test]
    fn unbound_variable_in_fof_is_an_error() {
        let err = parse("fof(a, axiom, p(X)).").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { ref message, .. } if message.contains("not bound")), "{err}");
    }

    #[test]
    fn cnf_is_lifted_to_universal_closure() {
        let t = parse("cnf(c1, negated_conjecture, ~ p(X) | q(Y,X)).").unwrap();
        assert_eq!(t.formulas[0].formula.to_string(), "! [X,Y] : (~ p(X) | q(Y,X))");
        assert_eq!(t.formulas[0].role, Role::NegatedConjecture);
    }

    #[test]
    fn annotations_are_skipped() {
        let t = parse("fof(a1, axiom, p, file('prob.p', a1), [status(thm), inference(x,[],[a])]).").unwrap();
        assert_eq!(t.formulas[0].name, "a1");
    }

    #[test]
    fn unknown_role_is_rejected() {
        assert!(parse("fof(a1, plain, p).").is_err());
        assert!(parse("fof(a1, type, p).").is_err());
    }

    #[test]
    fn duplicate_names_carry_positions() {
        let err = parse("fof(a1, axiom, p).\nfof(a1, axiom, q).").unwrap_err();
        match err {
            ParseError::DuplicateName { at, first, .. } => {
                assert_eq!((at.line, at.column), (2, 1));
                assert_eq!((first.line, first.column), (1, 1));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn arity_conflicts_carry_positions() {
        let err = parse("fof(a1, axiom, p(a)).\n  fof(a2, axiom, p(a,b)).").unwrap_err();
        match err {
            ParseError::InconsistentSymbol(clash) => {
                assert_eq!(clash.symbol, "p");
                assert_eq!((clash.at.line, clash.at.column), (2, 3));
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse("fof(a1, axiom, p(a) & a)."), Err(ParseError::InconsistentSymbol(_))));
    }

    #[test]
    fn multiple_conjectures_rejected() {
        assert!(matches!(
            parse("fof(c1, conjecture, p). fof(c2, conjecture, q)."),
            Err(ParseError::MultipleConjectures { .. })
        ));
    }

    #[test]
    fn include_selection_lists_rejected() {
        assert!(matches!(parse("include('Axioms/X.ax', [a1])."), Err(ParseError::Unsupported { .. })));
        assert!(matches!(parse("include('nowhere/X.ax')."), Err(ParseError::UnresolvedInclude { .. })));
    }

    #[test]
    fn typed_dialects_rejected() {
        assert!(matches!(parse("tff(a, axiom, p)."), Err(ParseError::Unsupported { .. })));
    }
}
