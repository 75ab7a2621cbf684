use crate::formula::{ClauseId, Formula};
use crate::lit::Lit;

fn signature(lits: &[Lit]) -> u64 {
    lits.iter()
        .fold(0, |s, l| s | 1u64 << (l.var().index() % 64))
}

enum Relation {
    Subsumes,
    /// `c` subsumes `d` after flipping this literal of `d`.
    Strengthens(Lit),
    None,
}

fn relation(c: &[Lit], d: &[Lit]) -> Relation {
    let mut flipped = None;
    for &l in c {
        if d.binary_search(&l).is_ok() {
            continue;
        }
        if flipped.is_none() && d.binary_search(&!l).is_ok() {
            flipped = Some(!l);
            continue;
        }
        return Relation::None;
    }
    match flipped {
        None => Relation::Subsumes,
        Some(l) => Relation::Strengthens(l),
    }
}

/// Subsumption and self-subsuming resolution to fixpoint. Candidates are
/// tried shortest first. Returns `(removed, strengthened)`.
pub fn subsumption_pass(f: &mut Formula) -> (usize, usize) {
    let mut removed = 0;
    let mut strengthened = 0;
    loop {
        let mut order: Vec<ClauseId> = f.active_ids().collect();
        order.sort_by_key(|&id| (f.clause(id).len(), id));
        let mut progress = false;
        for c in order {
            if f.clause(c).is_deleted() {
                continue;
            }
            let lits = f.clause(c).lits().to_vec();
            let Some(&pivot) = lits
                .iter()
                .min_by_key(|&&l| f.occurrences(l).len() + f.occurrences(!l).len())
            else {
                continue;
            };
            let sig = signature(&lits);
            let mut candidates: Vec<ClauseId> = f
                .occurrences(pivot)
                .iter()
                .chain(f.occurrences(!pivot))
                .copied()
                .filter(|&d| d != c)
                .collect();
            candidates.sort_unstable();
            for d in candidates {
                if f.clause(c).is_deleted() {
                    break;
                }
                let other = f.clause(d);
                if other.is_deleted() || other.len() < lits.len() {
                    continue;
                }
                if sig & !signature(other.lits()) != 0 {
                    continue;
                }
                match relation(&lits, other.lits()) {
                    Relation::Subsumes => {
                        f.delete(d);
                        removed += 1;
                        progress = true;
                    }
                    Relation::Strengthens(l) => {
                        let shorter: Vec<Lit> =
                            other.lits().iter().copied().filter(|&m| m != l).collect();
                        f.replace(d, &shorter);
                        strengthened += 1;
                        progress = true;
                    }
                    Relation::None => {}
                }
            }
        }
        if !progress {
            return (removed, strengthened);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_superset_is_removed() {
        let mut f = Formula::from_clauses(3, [vec![1, 2], vec![1, 2, 3]]);
        assert_eq!(subsumption_pass(&mut f), (1, 0));
        assert_eq!(f.to_int_clauses(), vec![vec![1, 2]]);
    }

    #[test]
    fn self_subsumption_strengthens() {
        let mut f = Formula::from_clauses(3, [vec![1, 2], vec![-1, 2, 3]]);
        assert_eq!(subsumption_pass(&mut f), (0, 1));
        assert_eq!(f.to_int_clauses(), vec![vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn incomparable_clauses() {
        let mut f = Formula::from_clauses(4, [vec![1, 2], vec![3, 4], vec![-1, -3]]);
        assert_eq!(subsumption_pass(&mut f), (0, 0));
    }

    #[test]
    fn duplicates_keep_one_copy() {
        let mut f = Formula::from_clauses(2, [vec![1, 2], vec![2, 1]]);
        assert_eq!(subsumption_pass(&mut f), (1, 0));
        assert_eq!(f.num_active(), 1);
    }

    #[test]
    fn strengthening_cascades() {
        // [1, 2] and [-1, 2] give [2], which then subsumes [1, 2]
        let mut f = Formula::from_clauses(2, [vec![1, 2], vec![-1, 2]]);
        let (removed, strengthened) = subsumption_pass(&mut f);
        assert_eq!(f.to_int_clauses(), vec![vec![2]]);
        assert_eq!((removed, strengthened), (1, 1));
    }
}
