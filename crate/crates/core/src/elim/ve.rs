use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{resolve, ClauseId, Formula, Normalized};
use crate::lit::{Lit, Var};
use crate::reconstruct::{UndoStack, UndoStep};

/// Variables whose clause product exceeds this are not tried unless forced.
const MAX_RESOLUTION_PAIRS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VeOutcome {
    Eliminated,
    Skipped,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VeError {
    #[error("variable {0} does not occur in the formula")]
    NotPresent(Var),
}

/// Clauses containing `x`, in id order.
fn clause_set(f: &Formula, x: Var) -> Vec<ClauseId> {
    let mut ids: Vec<ClauseId> = f
        .occurrences(x.positive())
        .iter()
        .chain(f.occurrences(x.negative()))
        .copied()
        .collect();
    ids.sort_unstable();
    ids
}

/// Non-tautological resolvents on `x`, or `None` once more than `bound` have
/// been produced.
fn resolvents(f: &Formula, x: Var, bound: Option<usize>) -> Option<Vec<Vec<Lit>>> {
    let mut out = Vec::new();
    for &p in f.occurrences(x.positive()) {
        for &n in f.occurrences(x.negative()) {
            let r = resolve(f.clause(p).lits(), f.clause(n).lits(), x)
                .expect("clauses clash on the pivot");
            if let Normalized::Clause(r) = r {
                out.push(r);
                if bound.is_some_and(|b| out.len() > b) {
                    return None;
                }
            }
        }
    }
    Some(out)
}

fn replace_by_resolvents(f: &mut Formula, x: Var, undo: &mut UndoStack, res: Vec<Vec<Lit>>) {
    let ids = clause_set(f, x);
    let stored = ids.iter().map(|&id| f.clause(id).lits().to_vec()).collect();
    undo.push(UndoStep::Ve {
        var: x,
        clauses: stored,
    });
    // resolvents take over the slots of the removed clauses, so they keep
    // their place in database order
    let mut res = res.into_iter();
    for id in ids {
        match res.next() {
            Some(r) => {
                f.replace(id, &r);
            }
            None => f.delete(id),
        }
    }
    for r in res {
        f.add_clause(&r);
    }
}

/// Replaces all clauses containing `x` by their non-tautological resolvents
/// on `x`, provided that does not increase the clause count (or `force`).
pub fn eliminate_variable(
    f: &mut Formula,
    x: Var,
    undo: &mut UndoStack,
    force: bool,
) -> Result<VeOutcome, VeError> {
    let occurrences = f.occurrence_count(x);
    if occurrences == 0 {
        return Err(VeError::NotPresent(x));
    }
    let bound = if force { None } else { Some(occurrences) };
    match resolvents(f, x, bound) {
        None => Ok(VeOutcome::Skipped),
        Some(res) => {
            replace_by_resolvents(f, x, undo, res);
            Ok(VeOutcome::Eliminated)
        }
    }
}

/// One elimination sweep.
///
/// Candidates are ordered by how many clauses their elimination saves (most
/// first, ties to the larger index). Once a variable is eliminated, every
/// variable sharing a clause with it is left for the next sweep, so the
/// scores computed up front stay exact. Whitelisted variables are never
/// touched; blacklisted ones are eliminated unconditionally at the end in
/// ascending order.
pub fn ve_pass(
    f: &mut Formula,
    undo: &mut UndoStack,
    whitelist: &BTreeSet<Var>,
    blacklist: &BTreeSet<Var>,
) -> usize {
    let mut scored: Vec<(usize, Var)> = Vec::new();
    for v in f.live_vars() {
        if whitelist.contains(&v) || blacklist.contains(&v) {
            continue;
        }
        let pos = f.occurrences(v.positive()).len();
        let neg = f.occurrences(v.negative()).len();
        if pos * neg > MAX_RESOLUTION_PAIRS {
            continue;
        }
        if let Some(res) = resolvents(f, v, Some(pos + neg)) {
            scored.push((pos + neg - res.len(), v));
        }
    }
    scored.sort_by(|a, b| b.cmp(a));

    let mut frozen: BTreeSet<Var> = BTreeSet::new();
    let mut eliminated = 0;
    for (_, v) in scored {
        if frozen.contains(&v) || f.occurrence_count(v) == 0 {
            continue;
        }
        let neighbours: Vec<Var> = clause_set(f, v)
            .into_iter()
            .flat_map(|id| f.clause(id).lits().iter().map(|l| l.var()))
            .collect();
        if eliminate_variable(f, v, undo, false) == Ok(VeOutcome::Eliminated) {
            eliminated += 1;
            frozen.extend(neighbours);
        }
    }
    for &v in blacklist {
        if f.occurrence_count(v) > 0 {
            eliminate_variable(f, v, undo, true).expect("variable occurs");
            eliminated += 1;
        }
    }
    eliminated
}
