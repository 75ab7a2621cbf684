//! DIMACS CNF, model files and variable lists.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use log::warn;
use thiserror::Error;

use crate::formula::Formula;
use crate::lit::{Lit, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected a 'p cnf <vars> <clauses>' header before any clause")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header: {text}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: invalid integer '{token}'")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds the declared {declared} variables")]
    LiteralOutOfRange {
        line: usize,
        lit: i64,
        declared: u32,
    },
    #[error("clause not terminated by 0 at end of input")]
    UnterminatedClause,
    #[error("missing terminating 0")]
    MissingTerminator,
    #[error("variable {0} assigned twice")]
    DuplicateVariable(u32),
    #[error("line {line}: variable list entries must be positive, got {value}")]
    BadListEntry { line: usize, value: i64 },
}

/// A parsed CNF file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimacsDocument {
    pub declared_variables: u32,
    pub declared_clauses: usize,
    pub clauses: Vec<Vec<Lit>>,
    pub comments: Vec<String>,
}

impl DimacsDocument {
    /// Loads the clauses into a formula. Returns the formula and the number
    /// of tautological input clauses that were dropped.
    pub fn to_formula(&self) -> (Formula, usize) {
        let mut f = Formula::new(self.declared_variables);
        let mut tautologies = 0;
        for c in &self.clauses {
            if f.add_clause(c) == crate::formula::Added::Tautology {
                tautologies += 1;
            }
        }
        (f, tautologies)
    }
}

fn parse_int(token: &str, line: usize) -> Result<i64, ParseError> {
    token.parse::<i64>().map_err(|_| ParseError::BadToken {
        line,
        token: token.to_string(),
    })
}

pub fn parse_dimacs(text: &str) -> Result<DimacsDocument, ParseError> {
    let mut doc = DimacsDocument::default();
    let mut header = false;
    let mut current: Vec<Lit> = Vec::new();
    let mut open = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                doc.comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if trimmed.starts_with('%') {
            // SATLIB end-of-body marker
            break;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let bad = || ParseError::BadHeader {
                line,
                text: trimmed.to_string(),
            };
            if header || parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad());
            }
            doc.declared_variables = parts[2].parse().map_err(|_| bad())?;
            doc.declared_clauses = parts[3].parse().map_err(|_| bad())?;
            header = true;
            continue;
        }
        if !header {
            return Err(ParseError::MissingHeader { line });
        }
        for token in trimmed.split_whitespace() {
            let v = parse_int(token, line)?;
            if v == 0 {
                doc.clauses.push(std::mem::take(&mut current));
                open = false;
                continue;
            }
            if v.unsigned_abs() > doc.declared_variables as u64 {
                return Err(ParseError::LiteralOutOfRange {
                    line,
                    lit: v,
                    declared: doc.declared_variables,
                });
            }
            current.push(Lit::from_dimacs(v as i32));
            open = true;
        }
    }
    if open {
        return Err(ParseError::UnterminatedClause);
    }
    if !header {
        return Err(ParseError::MissingHeader { line: 1 });
    }
    if doc.clauses.len() != doc.declared_clauses {
        warn!(
            "header declares {} clauses, found {}",
            doc.declared_clauses,
            doc.clauses.len()
        );
    }
    Ok(doc)
}

fn write_lits(out: &mut String, lits: &[Lit]) {
    for l in lits {
        let _ = write!(out, "{} ", l);
    }
    out.push_str("0\n");
}

/// Active clauses in database order. The variable count in the header is the
/// highest variable that occurs.
pub fn write_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.max_live_var(), f.num_active());
    for c in f.active_clauses() {
        write_lits(&mut out, c);
    }
    out
}

/// A (possibly partial) assignment read from a solver's output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelDocument {
    pub literals: Vec<Lit>,
}

impl ModelDocument {
    pub fn new(literals: Vec<Lit>) -> ModelDocument {
        ModelDocument { literals }
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.literals
            .iter()
            .find(|l| l.var() == var)
            .map(|l| l.is_positive())
    }

    pub fn max_var(&self) -> u32 {
        self.literals
            .iter()
            .map(|l| l.var().index())
            .max()
            .unwrap_or(0)
    }
}

/// Accepts competition output (`s` lines ignored, one or more `v` lines) or
/// bare 0-terminated literal runs.
pub fn parse_model(text: &str) -> Result<ModelDocument, ParseError> {
    let mut literals = Vec::new();
    let mut seen = BTreeSet::new();
    let mut terminated = true;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_whitespace().peekable();
        match tokens.peek() {
            None => continue,
            Some(&"s") | Some(&"c") => continue,
            Some(&"v") => {
                tokens.next();
            }
            Some(_) => {}
        }
        for token in tokens {
            let v = parse_int(token, line)?;
            if v == 0 {
                terminated = true;
                continue;
            }
            let lit = Lit::try_from_dimacs(v).ok_or_else(|| ParseError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if !seen.insert(lit.var()) {
                return Err(ParseError::DuplicateVariable(lit.var().index()));
            }
            literals.push(lit);
            terminated = false;
        }
    }
    if !terminated {
        return Err(ParseError::MissingTerminator);
    }
    Ok(ModelDocument { literals })
}

/// Single `v` line, no status line.
pub fn write_model(model: &ModelDocument) -> String {
    let mut out = String::from("v ");
    write_lits(&mut out, &model.literals);
    out
}

/// Whitespace separated positive variable indices; a trailing 0 is ignored.
pub fn parse_variable_list(text: &str) -> Result<BTreeSet<Var>, ParseError> {
    let mut out = BTreeSet::new();
    let mut tokens: Vec<(usize, i64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        for token in raw.split_whitespace() {
            tokens.push((i + 1, parse_int(token, i + 1)?));
        }
    }
    if matches!(tokens.last(), Some((_, 0))) {
        tokens.pop();
    }
    for (line, value) in tokens {
        if value <= 0 || value > i32::MAX as i64 {
            return Err(ParseError::BadListEntry { line, value });
        }
        out.insert(Var::new(value as u32));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::lits;
    use proptest::prelude::*;

    #[test]
    fn minimal_file() {
        let d = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(d.declared_variables, 2);
        assert_eq!(d.clauses, vec![lits(&[1, -2])]);
    }

    #[test]
    fn worked_formula_on_one_line() {
        let d = parse_dimacs("p cnf 4 6\n1 -2 0 -1 2 0 1 2 3 0 -1 -3 0 -3 4 0 -1 -4 0\n").unwrap();
        assert_eq!(
            d.clauses,
            vec![
                lits(&[1, -2]),
                lits(&[-1, 2]),
                lits(&[1, 2, 3]),
                lits(&[-1, -3]),
                lits(&[-3, 4]),
                lits(&[-1, -4]),
            ]
        );
    }

    #[test]
    fn empty_clause() {
        let d = parse_dimacs("p cnf 1 1\n0\n").unwrap();
        assert_eq!(d.clauses, vec![vec![]]);
        assert!(d.to_formula().0.has_empty_clause());
    }

    #[test]
    fn comments_are_kept_in_order() {
        let d = parse_dimacs("c first\nc second one\np cnf 1 1\nc body\n1 0\n").unwrap();
        assert_eq!(d.comments, vec!["first", "second one", "body"]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_dimacs("1 2 0\n"),
            Err(ParseError::MissingHeader { line: 1 })
        );
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 3 0\n"),
            Err(ParseError::LiteralOutOfRange { lit: 3, .. })
        ));
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(ParseError::UnterminatedClause)
        );
        assert!(matches!(
            parse_dimacs("p cnf x 1\n"),
            Err(ParseError::BadHeader { .. })
        ));
    }

    #[test]
    fn count_mismatch_is_tolerated() {
        let d = parse_dimacs("p cnf 2 5\n1 2 0\n").unwrap();
        assert_eq!(d.clauses.len(), 1);
        assert_eq!(d.declared_clauses, 5);
    }

    #[test]
    fn write_examples() {
        assert_eq!(write_dimacs(&Formula::new(0)), "p cnf 0 0\n");
        let f = Formula::from_clauses(4, [[1, 4], [-1, -4]]);
        assert_eq!(write_dimacs(&f), "p cnf 4 2\n1 4 0\n-1 -4 0\n");
        let mut g = Formula::new(3);
        g.add_clause(&[]);
        assert_eq!(write_dimacs(&g), "p cnf 0 1\n0\n");
    }

    #[test]
    fn model_formats() {
        assert_eq!(
            parse_model("s SATISFIABLE\nv 1 -2 0\n").unwrap().literals,
            lits(&[1, -2])
        );
        assert_eq!(parse_model("1 -2 3 0").unwrap().literals, lits(&[1, -2, 3]));
        assert_eq!(
            parse_model("v 1 0\nv 1 0"),
            Err(ParseError::DuplicateVariable(1))
        );
        assert_eq!(parse_model("v 1 2"), Err(ParseError::MissingTerminator));
        assert_eq!(
            parse_model("v 1 2\nv 3 0\n").unwrap().literals,
            lits(&[1, 2, 3])
        );
        assert!(parse_model("").unwrap().literals.is_empty());
        assert_eq!(
            write_model(&ModelDocument::new(lits(&[1, -2]))),
            "v 1 -2 0\n"
        );
        assert_eq!(write_model(&ModelDocument::default()), "v 0\n");
    }

    #[test]
    fn variable_lists() {
        let set = |v: &[u32]| v.iter().map(|&i| Var::new(i)).collect::<BTreeSet<_>>();
        assert_eq!(parse_variable_list("3 7 0").unwrap(), set(&[3, 7]));
        assert_eq!(parse_variable_list("").unwrap(), set(&[]));
        assert_eq!(parse_variable_list("5\n9").unwrap(), set(&[5, 9]));
        assert!(matches!(
            parse_variable_list("3 0 4"),
            Err(ParseError::BadListEntry { value: 0, .. })
        ));
        assert!(matches!(
            parse_variable_list("-3"),
            Err(ParseError::BadListEntry { value: -3, .. })
        ));
    }

    proptest! {
        #[test]
        fn write_then_parse_round_trips(
            clauses in prop::collection::vec(
                prop::collection::vec((1i32..10, any::<bool>()), 0..5), 0..10)
        ) {
            let ints: Vec<Vec<i32>> = clauses
                .iter()
                .map(|c| c.iter().map(|&(v, s)| if s { v } else { -v }).collect())
                .collect();
            let f = Formula::from_clauses(9, &ints);
            let text = write_dimacs(&f);
            let doc = parse_dimacs(&text).unwrap();
            let (g, tautologies) = doc.to_formula();
            prop_assert_eq!(tautologies, 0);
            prop_assert_eq!(g.to_int_clauses(), f.to_int_clauses());
            prop_assert_eq!(doc.declared_variables, f.max_live_var());
            prop_assert_eq!(write_dimacs(&g), text);
        }
    }
}
