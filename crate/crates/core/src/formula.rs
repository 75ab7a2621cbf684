//! Clause database with an exact occurrence index.
//!
//! Clauses are kept normalized (sorted, duplicate free, never tautological).
//! Deletion only flips a flag; ids stay stable until [`Formula::compact`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lit::{Lit, Var};

pub type ClauseId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    lits: Vec<Lit>,
    deleted: bool,
}

impl Clause {
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_deleted(&self) -> bool {
        self.deleted
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Clause(Vec<Lit>),
    Tautology,
}

/// Sorts, removes duplicate literals and detects complementary pairs.
pub fn normalize_clause(lits: &[Lit]) -> Normalized {
    let mut out = lits.to_vec();
    out.sort_unstable();
    out.dedup();
    if out.windows(2).any(|w| w[0].var() == w[1].var()) {
        Normalized::Tautology
    } else {
        Normalized::Clause(out)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("variable {0} does not occur with opposite signs in the two clauses")]
    NoClash(Var),
}

/// Resolvent of `c` and `d` on `pivot`. The pivot must occur positively in one
/// clause and negatively in the other.
pub fn resolve(c: &[Lit], d: &[Lit], pivot: Var) -> Result<Normalized, ResolveError> {
    let (p, n) = (pivot.positive(), pivot.negative());
    let clash = (c.contains(&p) && d.contains(&n)) || (c.contains(&n) && d.contains(&p));
    if !clash {
        return Err(ResolveError::NoClash(pivot));
    }
    let union: Vec<Lit> = c
        .iter()
        .chain(d.iter())
        .copied()
        .filter(|l| l.var() != pivot)
        .collect();
    Ok(normalize_clause(&union))
}

/// Outcome of inserting a clause into a [`Formula`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Added {
    Clause(ClauseId),
    Tautology,
}

#[derive(Clone, Debug, Default)]
pub struct Formula {
    clauses: Vec<Clause>,
    num_vars: u32,
    occurs: Vec<Vec<ClauseId>>,
    units: BTreeSet<ClauseId>,
    empty: BTreeSet<ClauseId>,
    active: usize,
}

impl Formula {
    pub fn new(num_vars: u32) -> Formula {
        let mut f = Formula::default();
        f.reserve_vars(num_vars);
        f
    }

    /// Builds a formula from DIMACS-style integer clauses. Tautologies are
    /// dropped.
    pub fn from_clauses<I, C>(num_vars: u32, clauses: I) -> Formula
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[i32]>,
    {
        let mut f = Formula::new(num_vars);
        for c in clauses {
            let lits: Vec<Lit> = c.as_ref().iter().map(|&v| Lit::from_dimacs(v)).collect();
            f.add_clause(&lits);
        }
        f
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Grows the variable range to at least `n`.
    pub fn reserve_vars(&mut self, n: u32) {
        if n > self.num_vars {
            self.num_vars = n;
        }
        let need = 2 * (self.num_vars as usize + 1);
        if self.occurs.len() < need {
            self.occurs.resize_with(need, Vec::new);
        }
    }

    /// Allocates a variable past the current range.
    pub fn fresh_var(&mut self) -> Var {
        self.reserve_vars(self.num_vars + 1);
        Var::new(self.num_vars)
    }

    /// Normalizes and inserts a clause.
    pub fn add_clause(&mut self, lits: &[Lit]) -> Added {
        match normalize_clause(lits) {
            Normalized::Tautology => Added::Tautology,
            Normalized::Clause(lits) => Added::Clause(self.push_normalized(lits)),
        }
    }

    fn push_normalized(&mut self, lits: Vec<Lit>) -> ClauseId {
        if let Some(max) = lits.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max);
        }
        let id = self.clauses.len();
        self.clauses.push(Clause {
            lits,
            deleted: false,
        });
        self.link(id);
        id
    }

    fn link(&mut self, id: ClauseId) {
        let clause = &self.clauses[id];
        for &l in &clause.lits {
            self.occurs[l.code()].push(id);
        }
        match clause.lits.len() {
            0 => {
                self.empty.insert(id);
            }
            1 => {
                self.units.insert(id);
            }
            _ => {}
        }
        self.active += 1;
    }

    fn unlink(&mut self, id: ClauseId) {
        let clause = &self.clauses[id];
        for &l in &clause.lits {
            let list = &mut self.occurs[l.code()];
            if let Some(pos) = list.iter().position(|&c| c == id) {
                list.remove(pos);
            }
        }
        self.units.remove(&id);
        self.empty.remove(&id);
        self.active -= 1;
    }

    pub fn delete(&mut self, id: ClauseId) {
        if self.clauses[id].deleted {
            return;
        }
        self.unlink(id);
        self.clauses[id].deleted = true;
    }

    /// Replaces the literals of an active clause. A tautological replacement
    /// deletes the clause and returns `Added::Tautology`.
    pub fn replace(&mut self, id: ClauseId, lits: &[Lit]) -> Added {
        debug_assert!(!self.clauses[id].deleted);
        match normalize_clause(lits) {
            Normalized::Tautology => {
                self.delete(id);
                Added::Tautology
            }
            Normalized::Clause(lits) => {
                if let Some(max) = lits.iter().map(|l| l.var().index()).max() {
                    self.reserve_vars(max);
                }
                self.unlink(id);
                self.clauses[id].lits = lits;
                self.link(id);
                Added::Clause(id)
            }
        }
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id]
    }

    /// All slots, including deleted ones.
    pub fn num_slots(&self) -> usize {
        self.clauses.len()
    }

    pub fn num_active(&self) -> usize {
        self.active
    }

    pub fn active_ids(&self) -> impl Iterator<Item = ClauseId> + '_ {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.deleted)
            .map(|(i, _)| i)
    }

    pub fn active_clauses(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        self.clauses
            .iter()
            .filter(|c| !c.deleted)
            .map(|c| c.lits.as_slice())
    }

    /// Active clauses containing `lit`. Ids are not necessarily sorted.
    pub fn occurrences(&self, lit: Lit) -> &[ClauseId] {
        self.occurs
            .get(lit.code())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn occurrence_count(&self, var: Var) -> usize {
        self.occurrences(var.positive()).len() + self.occurrences(var.negative()).len()
    }

    pub fn unit_ids(&self) -> impl Iterator<Item = ClauseId> + '_ {
        self.units.iter().copied()
    }

    pub fn has_empty_clause(&self) -> bool {
        !self.empty.is_empty()
    }

    /// Variables occurring in at least one active clause, ascending.
    pub fn live_vars(&self) -> Vec<Var> {
        (1..=self.num_vars)
            .map(Var::new)
            .filter(|&v| self.occurrence_count(v) > 0)
            .collect()
    }

    pub fn max_live_var(&self) -> u32 {
        self.live_vars().last().map_or(0, |v| v.index())
    }

    /// Recomputes the occurrence index, unit and empty sets from scratch.
    pub fn rebuild_occurrences(&mut self) {
        for list in &mut self.occurs {
            list.clear();
        }
        self.units.clear();
        self.empty.clear();
        self.active = 0;
        for id in 0..self.clauses.len() {
            if !self.clauses[id].deleted {
                self.link(id);
            }
        }
    }

    /// Drops deleted slots and renumbers the remaining clauses densely,
    /// preserving their order.
    pub fn compact(&mut self) {
        self.clauses.retain(|c| !c.deleted);
        self.rebuild_occurrences();
    }

    /// True iff the occurrence index matches the active clauses exactly.
    pub fn occurrences_consistent(&self) -> bool {
        let mut expected: Vec<Vec<ClauseId>> = vec![Vec::new(); self.occurs.len()];
        for (id, c) in self.clauses.iter().enumerate() {
            if c.deleted {
                continue;
            }
            for &l in &c.lits {
                match expected.get_mut(l.code()) {
                    Some(list) => list.push(id),
                    None => return false,
                }
            }
        }
        expected.iter().zip(&self.occurs).all(|(want, have)| {
            let mut have = have.clone();
            have.sort_unstable();
            *want == have
        })
    }

    /// Clauses as DIMACS integer vectors, in database order.
    pub fn to_int_clauses(&self) -> Vec<Vec<i32>> {
        self.active_clauses()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }
}
