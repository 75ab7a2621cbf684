use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{ClauseId, Formula};
use crate::lit::{Lit, Var};
use crate::reconstruct::{UndoStack, UndoStep};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BceError {
    #[error("literal {0} is not part of the clause")]
    NotInClause(Lit),
}

/// True iff every resolvent of clause `c` on `l` with a clause containing
/// `!l` is a tautology.
pub fn is_blocked(f: &Formula, c: ClauseId, l: Lit) -> Result<bool, BceError> {
    let clause = f.clause(c);
    if !clause.contains(l) {
        return Err(BceError::NotInClause(l));
    }
    Ok(f.occurrences(!l).iter().all(|&d| {
        let other = f.clause(d);
        clause.lits().iter().any(|&m| m != l && other.contains(!m))
    }))
}

fn blocking_literal(f: &Formula, c: ClauseId, whitelist: &BTreeSet<Var>) -> Option<Lit> {
    f.clause(c)
        .lits()
        .iter()
        .copied()
        .filter(|l| !whitelist.contains(&l.var()))
        .find(|&l| is_blocked(f, c, l).expect("literal taken from the clause"))
}

/// Removes blocked clauses until none is left, visiting clauses in database
/// order. Returns the number of removed clauses.
pub fn bce_pass(f: &mut Formula, undo: &mut UndoStack, whitelist: &BTreeSet<Var>) -> usize {
    let order: Vec<ClauseId> = f.active_ids().collect();
    bce_pass_ordered(f, undo, whitelist, &order)
}

/// [`bce_pass`] with an explicit visitation order. Clauses missing from
/// `order` are not considered.
pub fn bce_pass_ordered(
    f: &mut Formula,
    undo: &mut UndoStack,
    whitelist: &BTreeSet<Var>,
    order: &[ClauseId],
) -> usize {
    let mut removed = 0;
    loop {
        let mut progress = false;
        for &id in order {
            if f.clause(id).is_deleted() {
                continue;
            }
            if let Some(l) = blocking_literal(f, id, whitelist) {
                undo.push(UndoStep::Bce {
                    blocking: l,
                    clause: f.clause(id).lits().to_vec(),
                });
                f.delete(id);
                removed += 1;
                progress = true;
            }
        }
        if !progress {
            return removed;
        }
    }
}
