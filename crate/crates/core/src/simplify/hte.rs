use std::collections::BTreeSet;

use crate::formula::{ClauseId, Formula};
use crate::lit::Lit;

/// Hidden literal addition: closes the literals of clause `c` under
/// "`l` in the set and `[l', l]` an active binary clause other than `c`
/// implies `!l'` in the set". Literals are returned in the order they were
/// added, starting with the clause itself.
///
/// Extension stops as soon as the set contains a complementary pair, since
/// the clause is then known to be a hidden tautology. Otherwise the result
/// is the full closure.
pub fn hla(f: &Formula, c: ClauseId) -> Vec<Lit> {
    hla_ordered(f, c, |_| {})
}

/// [`hla`] with a hook that may reorder the work queue after every step.
/// For clauses that are not hidden tautologies the resulting set does not
/// depend on the order; tests use this to check exactly that.
pub fn hla_ordered(f: &Formula, c: ClauseId, mut reorder: impl FnMut(&mut Vec<Lit>)) -> Vec<Lit> {
    let mut seen: BTreeSet<Lit> = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue: Vec<Lit> = Vec::new();
    for &l in f.clause(c).lits() {
        if seen.insert(l) {
            out.push(l);
            queue.push(l);
        }
    }
    queue.reverse();
    reorder(&mut queue);
    while let Some(l) = queue.pop() {
        for &d in f.occurrences(l) {
            if d == c {
                continue;
            }
            let lits = f.clause(d).lits();
            if lits.len() != 2 {
                continue;
            }
            let other = if lits[0] == l { lits[1] } else { lits[0] };
            let added = !other;
            if seen.insert(added) {
                out.push(added);
                if seen.contains(&!added) {
                    return out;
                }
                queue.insert(0, added);
            }
        }
        reorder(&mut queue);
    }
    out
}

fn is_tautology(lits: &[Lit]) -> bool {
    let set: BTreeSet<Lit> = lits.iter().copied().collect();
    set.iter().any(|&l| set.contains(&!l))
}

/// Deletes every clause whose hidden literal closure is tautological.
/// Clauses are visited in database order against the current formula.
pub fn hte_pass(f: &mut Formula) -> usize {
    let ids: Vec<ClauseId> = f.active_ids().collect();
    let mut removed = 0;
    for id in ids {
        if f.clause(id).is_deleted() || f.clause(id).len() < 2 {
            continue;
        }
        if is_tautology(&hla(f, id)) {
            f.delete(id);
            removed += 1;
        }
    }
    removed
}
