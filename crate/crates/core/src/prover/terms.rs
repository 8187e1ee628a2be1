//! Interned terms and literals with unification and one-way matching.

use std::collections::HashMap;

pub(crate) type Sym = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum T {
    Var(u32),
    App(Sym, Vec<T>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Lit {
    pub pos: bool,
    pub pred: Sym,
    pub args: Vec<T>,
}

#[derive(Default)]
pub(crate) struct Symbols {
    ids: HashMap<String, Sym>,
    names: Vec<String>,
}

impl Symbols {
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as Sym;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    #[allow(dead_code)]
    pub fn name(&self, id: Sym) -> &str {
        &self.names[id as usize]
    }
}

impl T {
    pub fn size(&self) -> u32 {
        match self {
            T::Var(_) => 1,
            T::App(_, args) => 1 + args.iter().map(T::size).sum::<u32>(),
        }
    }

    pub fn shifted(&self, by: u32) -> T {
        match self {
            T::Var(v) => T::Var(v + by),
            T::App(f, args) => T::App(*f, args.iter().map(|a| a.shifted(by)).collect()),
        }
    }
}

impl Lit {
    pub fn weight(&self) -> u32 {
        1 + self.args.iter().map(T::size).sum::<u32>()
    }

    pub fn shifted(&self, by: u32) -> Lit {
        Lit { pos: self.pos, pred: self.pred, args: self.args.iter().map(|a| a.shifted(by)).collect() }
    }
}

/// A triangular substitution indexed by variable number.
pub(crate) struct Subst {
    bindings: Vec<Option<T>>,
}

impl Subst {
    pub fn new(nvars: u32) -> Self {
        Subst { bindings: vec![None; nvars as usize] }
    }

    fn get(&self, v: u32) -> Option<&T> {
        self.bindings.get(v as usize).and_then(Option::as_ref)
    }

    fn bind(&mut self, v: u32, t: T) {
        let i = v as usize;
        if i >= self.bindings.len() {
            self.bindings.resize(i + 1, None);
        }
        self.bindings[i] = Some(t);
    }

    fn resolve<'a>(&'a self, mut t: &'a T) -> &'a T {
        while let T::Var(v) = t {
            match self.get(*v) {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: u32, t: &T) -> bool {
        match self.resolve(t) {
            T::Var(w) => *w == v,
            T::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    pub fn unify(&mut self, a: &T, b: &T) -> bool {
        let (a, b) = (self.resolve(a).clone(), self.resolve(b).clone());
        match (&a, &b) {
            (T::Var(x), T::Var(y)) if x == y => true,
            (T::Var(x), t) | (t, T::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.bind(*x, t.clone());
                true
            }
            (T::App(f, xs), T::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    pub fn unify_args(&mut self, xs: &[T], ys: &[T]) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
    }

    pub fn apply(&self, t: &T) -> T {
        match self.resolve(t) {
            T::Var(v) => T::Var(*v),
            T::App(f, args) => T::App(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_lit(&self, l: &Lit) -> Lit {
        Lit { pos: l.pos, pred: l.pred, args: l.args.iter().map(|a| self.apply(a)).collect() }
    }
}

/// One-way matching: binds only pattern variables; target variables are
/// treated as constants.
pub(crate) fn match_term(pattern: &T, target: &T, theta: &mut Vec<Option<T>>) -> bool {
    match pattern {
        T::Var(v) => {
            let i = *v as usize;
            if i >= theta.len() {
                theta.resize(i + 1, None);
            }
            match &theta[i] {
                Some(bound) => bound == target,
                None => {
                    theta[i] = Some(target.clone());
                    true
                }
            }
        }
        T::App(f, args) => match target {
            T::App(g, targs) if f == g && args.len() == targs.len() => {
                args.iter().zip(targs).all(|(p, t)| match_term(p, t, theta))
            }
            _ => false,
        },
    }
}

pub(crate) fn match_lit(pattern: &Lit, target: &Lit, theta: &mut Vec<Option<T>>) -> bool {
    pattern.pos == target.pos
        && pattern.pred == target.pred
        && pattern.args.iter().zip(&target.args).all(|(p, t)| match_term(p, t, theta))
}

/// Renumbers variables to `0..n` in order of first occurrence; returns `n`.
pub(crate) fn normalize_vars(lits: &mut [Lit]) -> u32 {
    fn walk(t: &mut T, map: &mut HashMap<u32, u32>) {
        match t {
            T::Var(v) => {
                let next = map.len() as u32;
                *v = *map.entry(*v).or_insert(next);
            }
            T::App(_, args) => args.iter_mut().for_each(|a| walk(a, map)),
        }
    }
    let mut map = HashMap::new();
    for l in lits.iter_mut() {
        l.args.iter_mut().for_each(|a| walk(a, &mut map));
    }
    map.len() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(f: Sym) -> T {
        T::App(f, vec![])
    }

    #[test]
    fn unify_with_occurs_check() {
        let mut s = Subst::new(2);
        assert!(!s.unify(&T::Var(0), &T::App(1, vec![T::Var(0)])));
        let mut s = Subst::new(2);
        assert!(s.unify(&T::App(1, vec![T::Var(0), c(2)]), &T::App(1, vec![c(3), T::Var(1)])));
        assert_eq!(s.apply(&T::Var(0)), c(3));
        assert_eq!(s.apply(&T::Var(1)), c(2));
    }

    #[test]
    fn unify_chains_bindings() {
        let mut s = Subst::new(3);
        assert!(s.unify(&T::Var(0), &T::Var(1)));
        assert!(s.unify(&T::Var(1), &T::App(5, vec![T::Var(2)])));
        assert!(s.unify(&T::Var(2), &c(7)));
        assert_eq!(s.apply(&T::Var(0)), T::App(5, vec![c(7)]));
    }

    #[test]
    fn matching_is_one_way() {
        let mut theta = Vec::new();
        assert!(match_term(&T::App(1, vec![T::Var(0), T::Var(0)]), &T::App(1, vec![c(2), c(2)]), &mut theta));
        let mut theta = Vec::new();
        assert!(!match_term(&T::App(1, vec![T::Var(0), T::Var(0)]), &T::App(1, vec![c(2), c(3)]), &mut theta));
        let mut theta = Vec::new();
        assert!(!match_term(&c(2), &T::Var(0), &mut theta));
    }
}
