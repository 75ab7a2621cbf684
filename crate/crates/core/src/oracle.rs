//! Brute-force reference solver used as ground truth in tests.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dimacs::ModelDocument;
use crate::formula::Formula;
use crate::lit::{Lit, Var};
use crate::propagate::{bcp, Assignment, Propagation};

pub const DEFAULT_VAR_LIMIT: usize = 26;
pub const ENUMERATION_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// A total assignment over the live variables.
    Satisfiable(ModelDocument),
    Unsatisfiable,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{found} variables exceed the oracle limit of {limit}")]
    TooManyVariables { found: usize, limit: usize },
}

fn search(f: &Formula, vars: &[Var], a: &mut Assignment) -> bool {
    let Some(&v) = vars.iter().find(|&&v| !a.is_assigned(v)) else {
        return true;
    };
    for lit in [v.positive(), v.negative()] {
        let mark = a.trail().len();
        if bcp(f, a, &[lit]) == Propagation::Consistent && search(f, vars, a) {
            return true;
        }
        a.truncate(mark);
    }
    false
}

/// Backtracking with propagation over the live variables in ascending order,
/// trying `true` before `false`. Among the models the first one in that
/// order is returned.
pub fn solve_exhaustive(f: &Formula, var_limit: usize) -> Result<OracleVerdict, OracleError> {
    let vars = f.live_vars();
    if vars.len() > var_limit {
        return Err(OracleError::TooManyVariables {
            found: vars.len(),
            limit: var_limit,
        });
    }
    let mut a = Assignment::new(f.num_vars());
    if f.has_empty_clause() {
        return Ok(OracleVerdict::Unsatisfiable);
    }
    // Units are decided like any other variable so that the search order
    // stays lexicographic; propagation prunes the wrong branch at once.
    if !search(f, &vars, &mut a) {
        return Ok(OracleVerdict::Unsatisfiable);
    }
    Ok(OracleVerdict::Satisfiable(ModelDocument::new(
        vars.iter()
            .map(|&v| v.lit(a.var_value(v).expect("search assigns every variable")))
            .collect(),
    )))
}

/// True iff every active clause has a literal the model makes true.
/// Variables missing from the model count as unassigned.
pub fn check_model(f: &Formula, model: &ModelDocument) -> bool {
    f.active_clauses().all(|c| {
        c.iter()
            .any(|&l| model.value(l.var()) == Some(l.is_positive()))
    })
}

/// Projections of all models of `f` onto `vars`, each as a sorted literal
/// list.
pub fn enumerate_models(
    f: &Formula,
    vars: &BTreeSet<Var>,
) -> Result<BTreeSet<Vec<Lit>>, OracleError> {
    if vars.len() > ENUMERATION_LIMIT {
        return Err(OracleError::TooManyVariables {
            found: vars.len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let vars: Vec<Var> = vars.iter().copied().collect();
    let others: Vec<Var> = f
        .live_vars()
        .into_iter()
        .filter(|v| vars.binary_search(v).is_err())
        .collect();
    if others.len() > DEFAULT_VAR_LIMIT {
        return Err(OracleError::TooManyVariables {
            found: others.len(),
            limit: DEFAULT_VAR_LIMIT,
        });
    }
    let mut out = BTreeSet::new();
    if f.has_empty_clause() {
        return Ok(out);
    }
    for bits in 0u32..(1u32 << vars.len()) {
        let mut a = Assignment::new(f.num_vars());
        let roots: Vec<Lit> = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| v.lit(bits >> i & 1 == 1))
            .collect();
        if bcp(f, &mut a, &roots) == Propagation::Consistent && search(f, &others, &mut a) {
            let mut projection = roots;
            projection.sort_unstable();
            out.insert(projection);
        }
    }
    Ok(out)
}

/// Convenience: satisfiability only.
pub fn is_satisfiable(f: &Formula) -> Result<bool, OracleError> {
    Ok(matches!(
        solve_exhaustive(f, DEFAULT_VAR_LIMIT)?,
        OracleVerdict::Satisfiable(_)
    ))
}
