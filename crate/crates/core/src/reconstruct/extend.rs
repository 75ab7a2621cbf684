use thiserror::Error;

use super::{MapFile, UndoStep};
use crate::dimacs::ModelDocument;
use crate::lit::{Lit, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtendError {
    #[error("model assigns variable {var}, but the compression table only has {table} variables")]
    VariableOutOfRange { var: u32, table: usize },
}

struct Values(Vec<bool>);

impl Values {
    fn get(&self, lit: Lit) -> bool {
        self.0[lit.var().index() as usize] == lit.is_positive()
    }

    fn set(&mut self, lit: Lit) {
        self.0[lit.var().index() as usize] = lit.is_positive();
    }

    fn satisfies(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|&l| self.get(l))
    }
}

/// Turns a model of the reduced formula into a model of the original one.
///
/// Variables the model leaves open start out false. The undo stack is
/// replayed last step first; the result covers `1..=original_variables`.
pub fn extend_model(model: &ModelDocument, map: &MapFile) -> Result<ModelDocument, ExtendError> {
    let mut n = map
        .original_variables
        .max(map.stack.max_var())
        .max(map.ee_table.max_var());
    if let Some(t) = &map.compression {
        n = n
            .max(t.original_variable_count)
            .max(t.forward.iter().map(|v| v.index()).max().unwrap_or(0))
            .max(t.units.iter().map(|l| l.var().index()).max().unwrap_or(0));
    } else {
        n = n.max(model.max_var());
    }
    let mut values = Values(vec![false; n as usize + 1]);

    match &map.compression {
        Some(t) => {
            for &l in &model.literals {
                let lit = t.decompress(l).ok_or(ExtendError::VariableOutOfRange {
                    var: l.var().index(),
                    table: t.forward.len(),
                })?;
                values.set(lit);
            }
            for &u in &t.units {
                values.set(u);
            }
        }
        None => {
            for &l in &model.literals {
                values.set(l);
            }
        }
    }

    for step in map.stack.steps().iter().rev() {
        match step {
            UndoStep::Ve { var, clauses } => {
                if let Some(c) = clauses.iter().find(|c| !values.satisfies(c)) {
                    let lit = c
                        .iter()
                        .copied()
                        .find(|l| l.var() == *var)
                        .expect("eliminated variable occurs in its clauses");
                    values.set(lit);
                }
            }
            UndoStep::Bce { blocking, clause } => {
                if !values.satisfies(clause) {
                    values.set(*blocking);
                }
            }
            UndoStep::Ee => {
                for class in map.ee_table.classes() {
                    let rep = class[0];
                    let rep_value = values.get(rep);
                    for &member in &class[1..] {
                        values.set(if rep_value { member } else { !member });
                    }
                }
            }
        }
    }

    Ok(ModelDocument::new(
        (1..=map.original_variables)
            .map(|i| Var::new(i).lit(values.0[i as usize]))
            .collect(),
    ))
}

/// Cross-checks an extended model against the map: every stored clause and
/// every equivalence that only mentions original variables must hold.
/// Stored clauses are consequences of the input formula, so any model of
/// the input passes.
pub fn check_extension(extended: &ModelDocument, map: &MapFile) -> bool {
    let limit = map.original_variables;
    let mut values = vec![None; limit as usize + 1];
    for l in &extended.literals {
        if l.var().index() <= limit {
            values[l.var().index() as usize] = Some(l.is_positive());
        }
    }
    let value = |l: Lit| -> Option<bool> {
        values
            .get(l.var().index() as usize)
            .copied()
            .flatten()
            .map(|v| v == l.is_positive())
    };
    let in_range = |c: &[Lit]| c.iter().all(|l| l.var().index() <= limit);
    let clause_ok = |c: &[Lit]| !in_range(c) || c.iter().any(|&l| value(l) == Some(true));

    for step in map.stack.steps() {
        let ok = match step {
            UndoStep::Ve { clauses, .. } => clauses.iter().all(|c| clause_ok(c)),
            UndoStep::Bce { clause, .. } => clause_ok(clause),
            UndoStep::Ee => true,
        };
        if !ok {
            return false;
        }
    }
    map.ee_table
        .classes()
        .iter()
        .all(|class| !in_range(class) || class.iter().all(|&m| value(m) == value(class[0])))
}
