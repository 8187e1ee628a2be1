//! DPLL with two watched literals and chronological backtracking.
//!
//! Literals are `2 * var + sign`, sign 1 meaning negated. Branching takes
//! the lowest unassigned variable, true first.

use std::time::Instant;

pub(crate) fn lit(var: usize, positive: bool) -> u32 {
    (var as u32) << 1 | u32::from(!positive)
}

fn var_of(l: u32) -> usize {
    (l >> 1) as usize
}

pub(crate) enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    OutOfTime,
}

pub(crate) struct Solver {
    nvars: usize,
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<u32>,
    /// Trail position of each decision and whether it has been flipped.
    decisions: Vec<(usize, bool)>,
    qhead: usize,
    trivially_unsat: bool,
    units: Vec<u32>,
}

impl Solver {
    pub fn new(nvars: usize) -> Self {
        Solver {
            nvars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            value: vec![None; nvars],
            trail: Vec::new(),
            decisions: Vec::new(),
            qhead: 0,
            trivially_unsat: false,
            units: Vec::new(),
        }
    }

    pub fn add_clause(&mut self, mut c: Vec<u32>) {
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        match c.len() {
            0 => self.trivially_unsat = true,
            1 => self.units.push(c[0]),
            _ => {
                let id = self.clauses.len();
                self.watches[c[0] as usize].push(id);
                self.watches[c[1] as usize].push(id);
                self.clauses.push(c);
            }
        }
    }

    fn lit_value(&self, l: u32) -> Option<bool> {
        self.value[var_of(l)].map(|v| v == (l & 1 == 0))
    }

    fn assign(&mut self, l: u32) {
        self.value[var_of(l)] = Some(l & 1 == 0);
        self.trail.push(l);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let mut watching = std::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut conflict = false;
            while i < watching.len() {
                let cid = watching[i];
                let c = &mut self.clauses[cid];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let other = c[0];
                if self.value[var_of(other)].map(|v| v == (other & 1 == 0)) == Some(true) {
                    i += 1;
                    continue;
                }
                let replacement = (2..c.len()).find(|&k| {
                    let l = c[k];
                    self.value[var_of(l)].map(|v| v == (l & 1 == 0)) != Some(false)
                });
                if let Some(k) = replacement {
                    c.swap(1, k);
                    let new_watch = c[1];
                    self.watches[new_watch as usize].push(cid);
                    watching.swap_remove(i);
                    continue;
                }
                match self.lit_value(other) {
                    Some(false) => {
                        conflict = true;
                        break;
                    }
                    _ => self.assign(other),
                }
                i += 1;
            }
            self.watches[falsified as usize].extend(watching);
            if conflict {
                return false;
            }
        }
        true
    }

    /// Undoes the latest unflipped decision and asserts its negation.
    fn backtrack(&mut self) -> bool {
        while let Some((pos, flipped)) = self.decisions.pop() {
            let decided = self.trail[pos];
            for l in self.trail.drain(pos..) {
                self.value[var_of(l)] = None;
            }
            self.qhead = pos;
            if !flipped {
                self.decisions.push((pos, true));
                self.assign(decided ^ 1);
                return true;
            }
        }
        false
    }

    pub fn solve(mut self, deadline: Option<Instant>) -> SatResult {
        if self.trivially_unsat {
            return SatResult::Unsat;
        }
        for l in std::mem::take(&mut self.units) {
            match self.lit_value(l) {
                Some(true) => {}
                Some(false) => return SatResult::Unsat,
                None => self.assign(l),
            }
        }
        let mut next_var = 0;
        let mut steps: u64 = 0;
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    return SatResult::Unsat;
                }
                next_var = 0;
                continue;
            }
            steps += 1;
            if steps.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() > d) {
                return SatResult::OutOfTime;
            }
            while next_var < self.nvars && self.value[next_var].is_some() {
                next_var += 1;
            }
            if next_var == self.nvars {
                return SatResult::Sat(self.value.iter().map(|v| v.unwrap_or(false)).collect());
            }
            self.decisions.push((self.trail.len(), false));
            self.assign(lit(next_var, true));
        }
    }
}
