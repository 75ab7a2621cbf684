use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::lit::{Lit, Var};

/// Renaming of the live variables onto `1..=k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompressionTable {
    /// Table number. Only a single table (0) is supported.
    pub index: u32,
    /// Variable count before compression.
    pub original_variable_count: u32,
    /// `forward[i - 1]` is the variable represented by compressed variable `i`.
    pub forward: Vec<Var>,
    /// Literals fixed to true, in uncompressed numbering.
    pub units: Vec<Lit>,
}

impl CompressionTable {
    pub fn decompress(&self, lit: Lit) -> Option<Lit> {
        let i = lit.var().index() as usize;
        self.forward.get(i - 1).map(|v| v.lit(lit.is_positive()))
    }

    /// Inverse of [`CompressionTable::decompress`].
    pub fn compress_lit(&self, lit: Lit) -> Option<Lit> {
        self.forward
            .binary_search(&lit.var())
            .ok()
            .map(|i| Var::new(i as u32 + 1).lit(lit.is_positive()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompressError {
    #[error("variable compression cannot be combined with a whitelist")]
    WhitelistNotEmpty,
}

/// Renames the live variables of `f` densely, preserving their relative
/// order, and records `fixed_units` for reconstruction.
pub fn compress(
    f: &Formula,
    fixed_units: &[Lit],
    whitelist: &BTreeSet<Var>,
) -> Result<(Formula, CompressionTable), CompressError> {
    if !whitelist.is_empty() {
        return Err(CompressError::WhitelistNotEmpty);
    }
    let forward = f.live_vars();
    let table = CompressionTable {
        index: 0,
        original_variable_count: f.num_vars(),
        units: fixed_units
            .iter()
            .copied()
            .filter(|u| forward.binary_search(&u.var()).is_err())
            .collect(),
        forward,
    };
    let mut out = Formula::new(table.forward.len() as u32);
    for c in f.active_clauses() {
        let renamed: Vec<Lit> = c
            .iter()
            .map(|&l| table.compress_lit(l).expect("live variable"))
            .collect();
        out.add_clause(&renamed);
    }
    Ok((out, table))
}
