#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;
use satprep::dimacs::ModelDocument;
use satprep::oracle::{check_model, solve_exhaustive, OracleVerdict};
use satprep::pipeline::{preprocess, Outcome, PipelineConfig};
use satprep::reconstruct::{check_extension, extend_model, parse_map_file, write_map_file};
use satprep::{Formula, Var};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Clause widths 1 to 4, mostly 2 and 3.
pub fn width(rng: &mut dyn rand::RngCore) -> usize {
    match rng.gen_range(0..20) {
        0 => 1,
        1..=7 => 2,
        8..=15 => 3,
        _ => 4,
    }
}

pub fn random_formula(rng: &mut impl Rng, max_vars: u32, max_clauses: usize) -> Formula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(0..=max_clauses);
    random_formula_exact(rng, n, m, width)
}

pub fn random_formula_exact(
    rng: &mut impl Rng,
    n: u32,
    m: usize,
    mut width: impl FnMut(&mut dyn rand::RngCore) -> usize,
) -> Formula {
    let clauses: Vec<Vec<i32>> = (0..m)
        .map(|_| {
            let w = width(&mut *rng);
            (0..w)
                .map(|_| {
                    let v = rng.gen_range(1..=n) as i32;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    Formula::from_clauses(n, clauses)
}

pub fn vars_of(f: &Formula) -> BTreeSet<Var> {
    (1..=f.num_vars()).map(Var::new).collect()
}

pub fn satisfiable(f: &Formula) -> bool {
    matches!(
        solve_exhaustive(f, 40).unwrap(),
        OracleVerdict::Satisfiable(_)
    )
}

/// Preprocesses `original` and checks, against the oracle, that the result
/// is equisatisfiable and that a model of the reduced formula extends to a
/// model of the original. The map goes through its text form on the way.
pub fn check_round_trip(original: &Formula, cfg: &PipelineConfig) -> Result<(), String> {
    let expected = satisfiable(original);
    let outcome = preprocess(original.clone(), cfg).map_err(|e| e.to_string())?;
    match outcome {
        Outcome::Unsatisfiable { .. } => {
            if expected {
                return Err("satisfiable formula reported unsatisfiable".into());
            }
        }
        Outcome::Reduced { formula, map, .. } => {
            if !formula.occurrences_consistent() {
                return Err("occurrence index out of sync".into());
            }
            let verdict = solve_exhaustive(&formula, 40).unwrap();
            let model = match verdict {
                OracleVerdict::Unsatisfiable if expected => {
                    return Err("reduced formula lost all models".into())
                }
                OracleVerdict::Unsatisfiable => return Ok(()),
                OracleVerdict::Satisfiable(_) if !expected => {
                    return Err("unsatisfiable formula became satisfiable".into())
                }
                OracleVerdict::Satisfiable(m) => m,
            };
            let text = write_map_file(&map);
            let parsed = parse_map_file(&text).map_err(|e| format!("map re-parse: {e}"))?;
            if parsed != map {
                return Err("map file does not survive a round trip".into());
            }
            let extended = extend_model(&model, &parsed).map_err(|e| e.to_string())?;
            if extended.literals.len() != original.num_vars() as usize {
                return Err("extended model has the wrong length".into());
            }
            if !check_model(original, &extended) {
                return Err(format!(
                    "extended model {:?} violates the original",
                    extended.literals
                ));
            }
            if !check_extension(&extended, &parsed) {
                return Err("sanity replay rejects a valid model".into());
            }
        }
    }
    Ok(())
}

pub fn describe(f: &Formula) -> String {
    format!("{} vars {:?}", f.num_vars(), f.to_int_clauses())
}

pub fn model(lits: &[i32]) -> ModelDocument {
    ModelDocument::new(satprep::lit::lits(lits))
}
