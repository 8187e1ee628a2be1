use std::collections::BTreeMap;

use serde::Serialize;

use super::Theory;
use crate::logic::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Predicate,
    Function,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureEntry {
    pub symbol: String,
    pub kind: SymbolKind,
    pub arity: usize,
    /// Every syntactic occurrence counts, not just per-formula presence.
    pub occurrence_count: usize,
    /// Formula names in declaration order, without repeats.
    pub occurring_in: Vec<String>,
}

/// One entry per non-variable symbol, sorted by symbol name.
pub fn signature_of(t: &Theory) -> Vec<SignatureEntry> {
    let mut entries: BTreeMap<(String, SymbolKind, usize), SignatureEntry> = BTreeMap::new();
    for af in &t.formulas {
        let mut uses = Vec::new();
        uses_in(&af.formula, &mut uses);
        for (symbol, kind, arity) in uses {
            let e = entries.entry((symbol.to_string(), kind, arity)).or_insert_with(|| SignatureEntry {
                symbol: symbol.to_string(),
                kind,
                arity,
                occurrence_count: 0,
                occurring_in: Vec::new(),
            });
            e.occurrence_count += 1;
            if e.occurring_in.last() != Some(&af.name) {
                e.occurring_in.push(af.name.clone());
            }
        }
    }
    entries.into_values().collect()
}

/// Symbols that occur exactly once: likely typos.
pub fn hapax_legomena(t: &Theory) -> Vec<SignatureEntry> {
    signature_of(t).into_iter().filter(|e| e.occurrence_count == 1).collect()
}

fn uses_in<'a>(f: &'a Formula, out: &mut Vec<(&'a str, SymbolKind, usize)>) {
    fn term<'a>(t: &'a Term, out: &mut Vec<(&'a str, SymbolKind, usize)>) {
        if let Term::App(name, args) = t {
            let kind = if args.is_empty() { SymbolKind::Constant } else { SymbolKind::Function };
            out.push((name, kind, args.len()));
            args.iter().for_each(|a| term(a, out));
        }
    }
    match f {
        Formula::Bool(_) => {}
        Formula::Atom(p, args) => {
            out.push((p, SymbolKind::Predicate, args.len()));
            args.iter().for_each(|a| term(a, out));
        }
        Formula::Eq(l, r) => {
            term(l, out);
            term(r, out);
        }
        Formula::Not(g) => uses_in(g, out),
        Formula::Binary(_, l, r) => {
            uses_in(l, out);
            uses_in(r, out);
        }
        Formula::Quantified(_, _, b) => uses_in(b, out),
    }
}
