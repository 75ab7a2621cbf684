use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{ClauseId, Formula};
use crate::lit::{Lit, Var};

/// `new_variable == left | right`, encoded by `[!left, v]`, `[!right, v]`
/// and `[left, right, !v]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErDefinition {
    pub new_variable: Var,
    pub left: Lit,
    pub right: Lit,
}

impl ErDefinition {
    pub fn clauses(&self) -> [Vec<Lit>; 3] {
        let v = self.new_variable.positive();
        [
            vec![!self.left, v],
            vec![!self.right, v],
            vec![self.left, self.right, !v],
        ]
    }
}

pub fn er_pass(
    f: &mut Formula,
    max_definitions: usize,
    min_pair_occurrences: usize,
) -> Vec<ErDefinition> {
    er_pass_filtered(f, max_definitions, min_pair_occurrences, &BTreeSet::new())
}

fn most_frequent_pair(f: &Formula, excluded: &BTreeSet<Var>) -> Option<((Lit, Lit), usize)> {
    let mut counts: BTreeMap<(Lit, Lit), usize> = BTreeMap::new();
    for c in f.active_clauses().filter(|c| c.len() >= 3) {
        for (i, &a) in c.iter().enumerate() {
            if excluded.contains(&a.var()) {
                continue;
            }
            for &b in &c[i + 1..] {
                if !excluded.contains(&b.var()) {
                    *counts.entry((a, b)).or_default() += 1;
                }
            }
        }
    }
    // the map iterates pairs in ascending order, so `>` keeps the smallest
    // pair among equal counts
    let mut best: Option<((Lit, Lit), usize)> = None;
    for (pair, n) in counts {
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((pair, n));
        }
    }
    best
}

/// Extended resolution: repeatedly replaces the most frequent literal pair
/// of clauses with at least three literals by a fresh variable. Pairs that
/// touch `excluded` variables are never chosen.
pub fn er_pass_filtered(
    f: &mut Formula,
    max_definitions: usize,
    min_pair_occurrences: usize,
    excluded: &BTreeSet<Var>,
) -> Vec<ErDefinition> {
    let mut defs = Vec::new();
    while defs.len() < max_definitions {
        let Some(((left, right), count)) = most_frequent_pair(f, excluded) else {
            break;
        };
        if count < min_pair_occurrences.max(1) {
            break;
        }
        let v = f.fresh_var();
        let both: Vec<ClauseId> = f
            .occurrences(left)
            .iter()
            .copied()
            .filter(|&id| f.clause(id).contains(right))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for id in both {
            let mut lits: Vec<Lit> = f
                .clause(id)
                .lits()
                .iter()
                .copied()
                .filter(|&l| l != left && l != right)
                .collect();
            lits.push(v.positive());
            f.replace(id, &lits);
        }
        let def = ErDefinition {
            new_variable: v,
            left,
            right,
        };
        for c in def.clauses() {
            f.add_clause(&c);
        }
        defs.push(def);
    }
    defs
}
