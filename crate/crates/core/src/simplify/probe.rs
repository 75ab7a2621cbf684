use std::collections::BTreeSet;

use crate::formula::{ClauseId, Formula};
use crate::lit::{Lit, Var};
use crate::propagate::{bcp, Assignment, Propagation};

/// What probing a single variable found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbeResult {
    /// Literals implied by both polarities.
    pub units: BTreeSet<Lit>,
    /// Pairs `(v, x)` with `v -> x` and `!v -> !x`, i.e. `v == x`.
    pub equivalences: Vec<(Lit, Lit)>,
    /// Set when one polarity fails; the other polarity must hold.
    pub conflict_unit: Option<Lit>,
}

impl ProbeResult {
    pub fn is_empty(&self) -> bool {
        self.units.is_empty() && self.equivalences.is_empty() && self.conflict_unit.is_none()
    }
}

fn implied(f: &Formula, root: Lit) -> Option<Vec<Lit>> {
    let mut a = Assignment::new(f.num_vars());
    match bcp(f, &mut a, &[root]) {
        Propagation::Conflict => None,
        Propagation::Consistent => Some(a.trail().to_vec()),
    }
}

pub fn probe_variable(f: &Formula, v: Var) -> ProbeResult {
    probe_variable_counted(f, v).0
}

/// [`probe_variable`] that also reports how many literals were propagated,
/// for budgeting.
pub fn probe_variable_counted(f: &Formula, v: Var) -> (ProbeResult, usize) {
    let pos = implied(f, v.positive());
    let neg = implied(f, v.negative());
    let steps = pos.as_ref().map_or(1, Vec::len) + neg.as_ref().map_or(1, Vec::len);
    let result = match (pos, neg) {
        (None, None) => ProbeResult {
            // both sides fail: report one of them; propagating the unit
            // then yields the empty clause
            conflict_unit: Some(v.negative()),
            ..ProbeResult::default()
        },
        (None, Some(_)) => ProbeResult {
            conflict_unit: Some(v.negative()),
            ..ProbeResult::default()
        },
        (Some(_), None) => ProbeResult {
            conflict_unit: Some(v.positive()),
            ..ProbeResult::default()
        },
        (Some(pos), Some(neg)) => {
            let neg: BTreeSet<Lit> = neg.into_iter().collect();
            let mut units = BTreeSet::new();
            let mut equivalences = Vec::new();
            for &x in &pos {
                if x.var() == v {
                    continue;
                }
                if neg.contains(&x) {
                    units.insert(x);
                } else if neg.contains(&!x) {
                    equivalences.push((v.positive(), x));
                }
            }
            equivalences.sort_unstable();
            ProbeResult {
                units,
                equivalences,
                conflict_unit: None,
            }
        }
    };
    (result, steps)
}

/// Outcome of probing all literals of a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseProbe {
    /// Literals implied by every non-failing branch.
    Units(BTreeSet<Lit>),
    /// Every branch failed.
    Unsatisfiable,
}

pub fn probe_clause(f: &Formula, c: ClauseId) -> ClauseProbe {
    let mut common: Option<BTreeSet<Lit>> = None;
    for &l in f.clause(c).lits() {
        let Some(trail) = implied(f, l) else { continue };
        let trail: BTreeSet<Lit> = trail.into_iter().collect();
        common = Some(match common {
            None => trail,
            Some(prev) => prev.intersection(&trail).copied().collect(),
        });
    }
    match common {
        Some(units) => ClauseProbe::Units(units),
        None => ClauseProbe::Unsatisfiable,
    }
}

/// Variables occurring in at least two binary clauses, ascending.
pub fn probe_candidates(f: &Formula) -> Vec<Var> {
    let mut count = vec![0usize; f.num_vars() as usize + 1];
    for c in f.active_clauses() {
        if c.len() == 2 {
            for l in c {
                count[l.var().index() as usize] += 1;
            }
        }
    }
    (1..=f.num_vars())
        .filter(|&v| count[v as usize] >= 2)
        .map(Var::new)
        .collect()
}
