use crate::formula::{ClauseId, Formula};
use crate::lit::Lit;
use crate::propagate::{bcp_masked, Assignment, Propagation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vivified {
    Unchanged,
    Replaced(Vec<Lit>),
}

/// Assumes the negations of the clause literals one at a time, with the
/// clause itself masked, and stops at the first of:
///
/// 1. a conflict after `i < n` literals: keep the first `i` literals;
/// 2. some later literal `l_j` (`j < n`) became true: keep the first `i`
///    literals plus `l_j`;
/// 3. the negation of some later literal `l_j` became true: drop `l_j`.
pub fn vivify_clause(f: &Formula, c: ClauseId) -> Vivified {
    let lits = f.clause(c).lits().to_vec();
    let n = lits.len();
    let mut a = Assignment::new(f.num_vars());
    for i in 1..=n {
        if bcp_masked(f, &mut a, &[!lits[i - 1]], Some(c)) == Propagation::Conflict {
            return if i < n {
                Vivified::Replaced(lits[..i].to_vec())
            } else {
                Vivified::Unchanged
            };
        }
        if let Some(j) = (i + 1..n).find(|&j| a.value(lits[j - 1]) == Some(true)) {
            let mut shorter = lits[..i].to_vec();
            shorter.push(lits[j - 1]);
            return Vivified::Replaced(shorter);
        }
        if let Some(j) = (i + 1..=n).find(|&j| a.value(lits[j - 1]) == Some(false)) {
            let mut shorter = lits.clone();
            shorter.remove(j - 1);
            return Vivified::Replaced(shorter);
        }
    }
    Vivified::Unchanged
}

/// Vivifies every clause of length at least 3 in database order. Returns
/// the number of shortened clauses.
pub fn vivify_pass(f: &mut Formula) -> usize {
    let ids: Vec<ClauseId> = f.active_ids().collect();
    let mut changed = 0;
    for id in ids {
        if f.clause(id).is_deleted() || f.clause(id).len() < 3 {
            continue;
        }
        if let Vivified::Replaced(lits) = vivify_clause(f, id) {
            f.replace(id, &lits);
            changed += 1;
        }
    }
    changed
}
