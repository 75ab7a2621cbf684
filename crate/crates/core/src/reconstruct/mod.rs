//! Undo information and model reconstruction.
//!
//! Satisfiability-preserving techniques push [`UndoStep`]s as they run. The
//! stack, the accumulated equivalence classes and an optional variable
//! compression form a [`MapFile`], which is all that is needed to turn a
//! model of the reduced formula back into a model of the input.

mod compress;
mod extend;
mod mapfile;

use std::collections::BTreeMap;

use crate::lit::{Lit, Var};

pub use compress::{compress, CompressError, CompressionTable};
pub use extend::{check_extension, extend_model, ExtendError};
pub use mapfile::{parse_map_file, write_map_file, MapError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UndoStep {
    /// Variable elimination: the clauses that were replaced by resolvents.
    Ve { var: Var, clauses: Vec<Vec<Lit>> },
    /// Blocked clause elimination: the removed clause and its blocking literal.
    Bce { blocking: Lit, clause: Vec<Lit> },
    /// Equivalence substitution happened at this point.
    Ee,
}

impl UndoStep {
    /// Checks the per-step invariant (the eliminated or blocking literal
    /// occurs in the stored clauses).
    pub fn is_well_formed(&self) -> bool {
        match self {
            UndoStep::Ve { var, clauses } => {
                clauses.iter().all(|c| c.iter().any(|l| l.var() == *var))
            }
            UndoStep::Bce { blocking, clause } => clause.contains(blocking),
            UndoStep::Ee => true,
        }
    }
}

/// Elimination steps in the order they were performed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndoStack {
    steps: Vec<UndoStep>,
}

impl UndoStack {
    pub fn new() -> UndoStack {
        UndoStack::default()
    }

    pub fn push(&mut self, step: UndoStep) {
        debug_assert!(step.is_well_formed());
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[UndoStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn max_var(&self) -> u32 {
        let lit_max = |c: &[Lit]| c.iter().map(|l| l.var().index()).max().unwrap_or(0);
        self.steps
            .iter()
            .map(|s| match s {
                UndoStep::Ve { var, clauses } => clauses
                    .iter()
                    .map(|c| lit_max(c))
                    .max()
                    .unwrap_or(0)
                    .max(var.index()),
                UndoStep::Bce { clause, .. } => lit_max(clause),
                UndoStep::Ee => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

impl From<Vec<UndoStep>> for UndoStack {
    fn from(steps: Vec<UndoStep>) -> UndoStack {
        UndoStack { steps }
    }
}

/// Equivalence classes accumulated over a run. Each class is sorted by
/// variable, its first literal is the positive representative and every
/// other literal is equivalent to it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EeTable {
    classes: Vec<Vec<Lit>>,
}

impl EeTable {
    pub fn new() -> EeTable {
        EeTable::default()
    }

    /// Takes classes verbatim (as read from a map file).
    pub fn from_classes(classes: Vec<Vec<Lit>>) -> EeTable {
        EeTable { classes }
    }

    pub fn classes(&self) -> &[Vec<Lit>] {
        &self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Unions `new` into the table. Classes sharing a variable are merged;
    /// the result is re-normalized to smallest-variable representatives and
    /// ordered by representative.
    pub fn merge(&mut self, new: &[Vec<Lit>]) {
        // parent pointers with parity: value(v) = value(parent) xor parity
        let mut parent: BTreeMap<Var, (Var, bool)> = BTreeMap::new();

        fn find(parent: &mut BTreeMap<Var, (Var, bool)>, v: Var) -> (Var, bool) {
            let (p, par) = *parent.entry(v).or_insert((v, false));
            if p == v {
                return (v, false);
            }
            let (root, rp) = find(parent, p);
            parent.insert(v, (root, par ^ rp));
            (root, par ^ rp)
        }

        for class in self.classes.iter().chain(new) {
            let Some(&rep) = class.first() else { continue };
            find(&mut parent, rep.var());
            for &m in &class[1..] {
                let (ra, pa) = find(&mut parent, rep.var());
                let (rb, pb) = find(&mut parent, m.var());
                // m == rep  <=>  value(m.var) xor value(rep.var) = m.neg xor rep.neg
                let rel = m.is_negative() ^ rep.is_negative();
                if ra != rb {
                    parent.insert(rb, (ra, pa ^ pb ^ rel));
                }
            }
        }

        let vars: Vec<Var> = parent.keys().copied().collect();
        let mut groups: BTreeMap<Var, Vec<(Var, bool)>> = BTreeMap::new();
        for v in vars {
            let (root, par) = find(&mut parent, v);
            groups.entry(root).or_default().push((v, par));
        }
        let mut classes: Vec<Vec<Lit>> = groups
            .into_values()
            .filter(|g| g.len() > 1)
            .map(|mut g| {
                g.sort();
                let (_, rep_par) = g[0];
                g.into_iter()
                    .map(|(v, par)| v.lit(!(par ^ rep_par)))
                    .collect()
            })
            .collect();
        classes.sort_by_key(|c| c[0].var());
        self.classes = classes;
    }

    pub(crate) fn max_var(&self) -> u32 {
        self.classes
            .iter()
            .flatten()
            .map(|l| l.var().index())
            .max()
            .unwrap_or(0)
    }
}

/// Everything needed to map a model of the reduced formula back to the input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapFile {
    pub original_variables: u32,
    pub compression: Option<CompressionTable>,
    pub ee_table: EeTable,
    pub stack: UndoStack,
}
