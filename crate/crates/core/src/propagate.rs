//! Partial assignments and unit propagation over occurrence lists.

use crate::formula::{ClauseId, Formula};
use crate::lit::{Lit, Var};

/// A partial truth assignment together with the order in which literals
/// were made true.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
    trail: Vec<Lit>,
}

impl Assignment {
    pub fn new(num_vars: u32) -> Assignment {
        Assignment {
            values: vec![None; num_vars as usize + 1],
            trail: Vec::new(),
        }
    }

    fn ensure(&mut self, var: Var) {
        let i = var.index() as usize;
        if i >= self.values.len() {
            self.values.resize(i + 1, None);
        }
    }

    pub fn var_value(&self, var: Var) -> Option<bool> {
        self.values.get(var.index() as usize).copied().flatten()
    }

    /// Value of a literal: `Some(true)` if it is satisfied.
    pub fn value(&self, lit: Lit) -> Option<bool> {
        self.var_value(lit.var()).map(|v| v == lit.is_positive())
    }

    pub fn is_assigned(&self, var: Var) -> bool {
        self.var_value(var).is_some()
    }

    /// Makes `lit` true. The variable must be unassigned.
    pub fn assign(&mut self, lit: Lit) {
        self.ensure(lit.var());
        debug_assert!(self.values[lit.var().index() as usize].is_none());
        self.values[lit.var().index() as usize] = Some(lit.is_positive());
        self.trail.push(lit);
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    /// Unassigns everything past the first `len` trail entries.
    pub fn truncate(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            self.values[l.var().index() as usize] = None;
        }
    }

    pub fn clear(&mut self) {
        self.truncate(0);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    Consistent,
    Conflict,
}

/// Unit propagation from `roots` (and from any unit clause of `f`) to fixpoint.
///
/// The assignment is extended in place. On conflict it is left as it was when
/// the conflict was detected.
pub fn bcp(f: &Formula, a: &mut Assignment, roots: &[Lit]) -> Propagation {
    bcp_masked(f, a, roots, None)
}

/// Like [`bcp`], but the clause `skip` does not take part in propagation.
pub fn bcp_masked(
    f: &Formula,
    a: &mut Assignment,
    roots: &[Lit],
    skip: Option<ClauseId>,
) -> Propagation {
    let mut head = a.trail().len();
    for &r in roots {
        match a.value(r) {
            Some(true) => {}
            Some(false) => return Propagation::Conflict,
            None => a.assign(r),
        }
    }
    for id in f.unit_ids() {
        if Some(id) == skip {
            continue;
        }
        let u = f.clause(id).lits()[0];
        match a.value(u) {
            Some(true) => {}
            Some(false) => return Propagation::Conflict,
            None => a.assign(u),
        }
    }
    if f.has_empty_clause() {
        return Propagation::Conflict;
    }
    while head < a.trail().len() {
        let lit = a.trail()[head];
        head += 1;
        for &id in f.occurrences(!lit) {
            if Some(id) == skip {
                continue;
            }
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in f.clause(id).lits() {
                match a.value(l) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                        if open > 1 {
                            break;
                        }
                    }
                }
            }
            if satisfied || open > 1 {
                continue;
            }
            match unassigned {
                None => return Propagation::Conflict,
                Some(u) => a.assign(u),
            }
        }
    }
    Propagation::Consistent
}
