//! Text serialization of [`MapFile`].
//!
//! ```text
//! original variables
//! <n>
//! compress tables | no table
//!   table 0 <v> / <forward> 0 / units 0 / <units> 0 / end table
//! ee table
//! <class> 0 ...
//! postprocess stack
//! ee | bce <l> + <clause> 0 | ve <v> <n> + n x <clause> 0
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{CompressionTable, EeTable, MapFile, UndoStack, UndoStep};
use crate::lit::{Lit, Var};

const ORIGINAL: &str = "original variables";
const COMPRESS: &str = "compress tables";
const COMPRESS_SINGULAR: &str = "compress table";
const NO_TABLE: &str = "no table";
const END_TABLE: &str = "end table";
const EE_TABLE: &str = "ee table";
const STACK: &str = "postprocess stack";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("line {line}: expected \"{expected}\", found {found:?}")]
    Expected {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("missing section \"{0}\" before end of input")]
    MissingSection(&'static str),
    #[error("line {line} ({section}): literal line is not terminated by 0")]
    Unterminated { line: usize, section: &'static str },
    #[error("line {line} ({section}): invalid number {token:?}")]
    BadNumber {
        line: usize,
        section: &'static str,
        token: String,
    },
    #[error("line {line}: only compression table 0 is supported, found table {index}")]
    UnsupportedTable { line: usize, index: u32 },
    #[error("line {line} (postprocess stack): \"ve {var} {expected}\" is followed by only {found} clause lines")]
    TruncatedVe {
        line: usize,
        var: u32,
        expected: usize,
        found: usize,
    },
    #[error("line {line} (postprocess stack): unknown entry {text:?}")]
    UnknownEntry { line: usize, text: String },
}

fn push_lits<'a>(out: &mut String, lits: impl IntoIterator<Item = &'a Lit>) {
    for l in lits {
        let _ = write!(out, "{} ", l);
    }
    out.push_str("0\n");
}

pub fn write_map_file(m: &MapFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{ORIGINAL}\n{}", m.original_variables);
    match &m.compression {
        None => {
            let _ = writeln!(out, "{NO_TABLE}");
        }
        Some(t) => {
            let _ = writeln!(out, "{COMPRESS}");
            let _ = writeln!(out, "table {} {}", t.index, t.original_variable_count);
            let forward: Vec<Lit> = t.forward.iter().map(|v| v.positive()).collect();
            push_lits(&mut out, &forward);
            let _ = writeln!(out, "units {}", t.index);
            push_lits(&mut out, &t.units);
            let _ = writeln!(out, "{END_TABLE}");
        }
    }
    let _ = writeln!(out, "{EE_TABLE}");
    for class in m.ee_table.classes() {
        push_lits(&mut out, class);
    }
    let _ = writeln!(out, "{STACK}");
    for step in m.stack.steps() {
        match step {
            UndoStep::Ee => out.push_str("ee\n"),
            UndoStep::Bce { blocking, clause } => {
                let _ = writeln!(out, "bce {blocking}");
                push_lits(&mut out, clause);
            }
            UndoStep::Ve { var, clauses } => {
                let _ = writeln!(out, "ve {var} {}", clauses.len());
                for c in clauses {
                    push_lits(&mut out, c);
                }
            }
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
        }
    }

    fn skip_blank(&mut self) {
        while matches!(self.inner.peek(), Some((_, l)) if l.trim().is_empty()) {
            self.inner.next();
        }
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.peek().map(|&(i, l)| (i + 1, l.trim()))
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.next().map(|(i, l)| (i + 1, l.trim()))
    }

    /// Next line, which must be one of `keywords`.
    fn keyword(&mut self, keywords: &[&'static str]) -> Result<(usize, &'a str), MapError> {
        match self.next() {
            None => Err(MapError::MissingSection(keywords[0])),
            Some((line, text)) if keywords.contains(&text) => Ok((line, text)),
            Some((line, text)) => Err(MapError::Expected {
                line,
                expected: keywords[0],
                found: text.to_string(),
            }),
        }
    }
}

fn number<T: std::str::FromStr>(
    token: &str,
    line: usize,
    section: &'static str,
) -> Result<T, MapError> {
    token.parse().map_err(|_| MapError::BadNumber {
        line,
        section,
        token: token.to_string(),
    })
}

fn lit_line(text: &str, line: usize, section: &'static str) -> Result<Vec<Lit>, MapError> {
    let mut values: Vec<i64> = Vec::new();
    for token in text.split_whitespace() {
        values.push(number(token, line, section)?);
    }
    if values.pop() != Some(0) {
        return Err(MapError::Unterminated { line, section });
    }
    values
        .into_iter()
        .map(|v| {
            Lit::try_from_dimacs(v).ok_or_else(|| MapError::BadNumber {
                line,
                section,
                token: v.to_string(),
            })
        })
        .collect()
}

fn next_lit_line(
    lines: &mut Lines<'_>,
    section: &'static str,
) -> Result<(usize, Vec<Lit>), MapError> {
    let (line, text) = lines.next().ok_or(MapError::MissingSection(section))?;
    Ok((line, lit_line(text, line, section)?))
}

fn is_stack_keyword(text: &str) -> bool {
    text == "ee" || text.starts_with("bce ") || text.starts_with("ve ")
}

pub fn parse_map_file(text: &str) -> Result<MapFile, MapError> {
    let mut lines = Lines::new(text);

    lines.keyword(&[ORIGINAL])?;
    let (line, count) = lines.next().ok_or(MapError::MissingSection(ORIGINAL))?;
    let original_variables: u32 = number(count, line, ORIGINAL)?;

    let (_, kind) = lines.keyword(&[COMPRESS, NO_TABLE, COMPRESS_SINGULAR])?;
    let compression = if kind == NO_TABLE {
        None
    } else {
        let (line, header) = lines.next().ok_or(MapError::MissingSection("table"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "table" {
            return Err(MapError::Expected {
                line,
                expected: "table <k> <v>",
                found: header.to_string(),
            });
        }
        let index: u32 = number(parts[1], line, COMPRESS)?;
        if index != 0 {
            return Err(MapError::UnsupportedTable { line, index });
        }
        let original_variable_count: u32 = number(parts[2], line, COMPRESS)?;
        let (line, forward) = next_lit_line(&mut lines, COMPRESS)?;
        let forward = forward
            .into_iter()
            .map(|l| {
                if l.is_positive() {
                    Ok(l.var())
                } else {
                    Err(MapError::BadNumber {
                        line,
                        section: COMPRESS,
                        token: l.to_string(),
                    })
                }
            })
            .collect::<Result<Vec<Var>, _>>()?;
        let (line, units_header) = lines.next().ok_or(MapError::MissingSection("units 0"))?;
        if units_header != "units 0" {
            return Err(MapError::Expected {
                line,
                expected: "units 0",
                found: units_header.to_string(),
            });
        }
        let (_, units) = next_lit_line(&mut lines, COMPRESS)?;
        if let Some((line, t)) = lines.peek() {
            if t.starts_with("table ") {
                let index = t
                    .split_whitespace()
                    .nth(1)
                    .and_then(|s| s.parse().ok())
                    .unwrap_or(0);
                return Err(MapError::UnsupportedTable { line, index });
            }
        }
        lines.keyword(&[END_TABLE])?;
        Some(CompressionTable {
            index,
            original_variable_count,
            forward,
            units,
        })
    };

    lines.keyword(&[EE_TABLE])?;
    let mut classes = Vec::new();
    loop {
        match lines.peek() {
            None => return Err(MapError::MissingSection(STACK)),
            Some((_, STACK)) => break,
            Some(_) => classes.push(next_lit_line(&mut lines, EE_TABLE)?.1),
        }
    }
    lines.keyword(&[STACK])?;

    let mut steps = Vec::new();
    while let Some((line, entry)) = lines.next() {
        let parts: Vec<&str> = entry.split_whitespace().collect();
        match parts.as_slice() {
            ["ee"] => steps.push(UndoStep::Ee),
            ["bce", l] => {
                let blocking = number::<i64>(l, line, STACK)?;
                let blocking = Lit::try_from_dimacs(blocking).ok_or(MapError::BadNumber {
                    line,
                    section: STACK,
                    token: l.to_string(),
                })?;
                let (_, clause) = next_lit_line(&mut lines, STACK)?;
                steps.push(UndoStep::Bce { blocking, clause });
            }
            ["ve", v, n] => {
                let var: u32 = number(v, line, STACK)?;
                if var == 0 || var > i32::MAX as u32 {
                    return Err(MapError::BadNumber {
                        line,
                        section: STACK,
                        token: v.to_string(),
                    });
                }
                let n: usize = number(n, line, STACK)?;
                let mut clauses = Vec::with_capacity(n);
                for found in 0..n {
                    match lines.peek() {
                        Some((_, t)) if !is_stack_keyword(t) => {
                            clauses.push(next_lit_line(&mut lines, STACK)?.1);
                        }
                        _ => {
                            return Err(MapError::TruncatedVe {
                                line,
                                var,
                                expected: n,
                                found,
                            })
                        }
                    }
                }
                steps.push(UndoStep::Ve {
                    var: Var::new(var),
                    clauses,
                });
            }
            _ => {
                return Err(MapError::UnknownEntry {
                    line,
                    text: entry.to_string(),
                })
            }
        }
    }

    Ok(MapFile {
        original_variables,
        compression,
        ee_table: EeTable::from_classes(classes),
        stack: UndoStack::from(steps),
    })
}
