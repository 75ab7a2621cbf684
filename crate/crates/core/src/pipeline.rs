//! The technique loop.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::{debug, info};
use thiserror::Error;

use crate::dimacs::{write_dimacs, DimacsDocument};
use crate::elim::{
    apply_equivalences, bce_pass, build_big, find_equivalences, ve_pass, EquivalenceClasses,
    Equivalences,
};
use crate::formula::{ClauseId, Formula};
use crate::lit::{Lit, Var};
use crate::propagate::{bcp, Assignment, Propagation};
use crate::reconstruct::{compress, write_map_file, EeTable, MapFile, UndoStack};
use crate::simplify::{
    er_pass_filtered, hte_pass, probe_candidates, probe_clause, probe_variable_counted,
    subsumption_pass, vivify_pass, ClauseProbe,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technique {
    Subsume,
    Ee,
    Hte,
    Probe,
    Vivify,
    Ve,
    Bce,
    Er,
}

impl Technique {
    /// Execution order within one iteration.
    pub const ORDER: [Technique; 8] = [
        Technique::Subsume,
        Technique::Ee,
        Technique::Hte,
        Technique::Probe,
        Technique::Vivify,
        Technique::Ve,
        Technique::Bce,
        Technique::Er,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Technique::Subsume => "subsume",
            Technique::Ee => "ee",
            Technique::Hte => "hte",
            Technique::Probe => "probe",
            Technique::Vivify => "vivify",
            Technique::Ve => "ve",
            Technique::Bce => "bce",
            Technique::Er => "er",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown technique `{0}` (expected one of ve, bce, ee, hte, probe, vivify, subsume, er)")]
pub struct UnknownTechnique(pub String);

impl FromStr for Technique {
    type Err = UnknownTechnique;

    fn from_str(s: &str) -> Result<Technique, UnknownTechnique> {
        Technique::ORDER
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| UnknownTechnique(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub enabled: BTreeSet<Technique>,
    pub loop_limit: usize,
    /// Variables whose models must survive unchanged.
    pub whitelist: BTreeSet<Var>,
    /// Variables eliminated by VE regardless of growth.
    pub blacklist: BTreeSet<Var>,
    pub compress_output: bool,
    pub er_max_definitions: usize,
    pub er_min_pair: usize,
    /// Propagated literals allowed per probing pass.
    pub probe_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            enabled: Technique::ORDER
                .into_iter()
                .filter(|&t| t != Technique::Er)
                .collect(),
            loop_limit: 5,
            whitelist: BTreeSet::new(),
            blacklist: BTreeSet::new(),
            compress_output: false,
            er_max_definitions: 0,
            er_min_pair: 4,
            probe_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("variable compression cannot be combined with a whitelist")]
    CompressWithWhitelist,
    #[error("variable {0} is both whitelisted and blacklisted")]
    ListOverlap(Var),
}

impl PipelineConfig {
    /// Only the given techniques, other settings at their defaults.
    pub fn with_techniques(techniques: &[Technique]) -> PipelineConfig {
        PipelineConfig {
            enabled: techniques.iter().copied().collect(),
            ..PipelineConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.compress_output && !self.whitelist.is_empty() {
            return Err(ConfigError::CompressWithWhitelist);
        }
        if let Some(&v) = self.whitelist.intersection(&self.blacklist).next() {
            return Err(ConfigError::ListOverlap(v));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineStats {
    pub variables_before: usize,
    pub variables_after: usize,
    pub clauses_before: usize,
    pub clauses_after: usize,
    pub iterations: usize,
    pub root_units: usize,
    pub subsumed: usize,
    pub strengthened: usize,
    pub ee_classes: usize,
    pub ee_literals_replaced: usize,
    pub hte_removed: usize,
    pub probe_units: usize,
    pub probe_equivalences: usize,
    pub vivified: usize,
    pub ve_eliminated: usize,
    pub bce_removed: usize,
    pub er_definitions: usize,
    pub wall_time: Duration,
}

impl PipelineStats {
    /// Relative clause reduction in percent; negative when clauses were added.
    pub fn clause_reduction(&self) -> f64 {
        if self.clauses_before == 0 {
            return 0.0;
        }
        100.0 * (self.clauses_before as f64 - self.clauses_after as f64)
            / self.clauses_before as f64
    }

    /// `(name, value)` pairs of the technique counters, in a fixed order.
    pub fn counters(&self) -> [(&'static str, usize); 13] {
        [
            ("iterations", self.iterations),
            ("units", self.root_units),
            ("subsume.removed", self.subsumed),
            ("subsume.strengthened", self.strengthened),
            ("ee.classes", self.ee_classes),
            ("ee.replaced", self.ee_literals_replaced),
            ("hte.removed", self.hte_removed),
            ("probe.units", self.probe_units),
            ("probe.equivalences", self.probe_equivalences),
            ("vivify.strengthened", self.vivified),
            ("ve.eliminated", self.ve_eliminated),
            ("bce.removed", self.bce_removed),
            ("er.definitions", self.er_definitions),
        ]
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Reduced {
        formula: Formula,
        map: MapFile,
        stats: PipelineStats,
    },
    Unsatisfiable {
        map: MapFile,
        stats: PipelineStats,
    },
}

impl Outcome {
    pub fn map(&self) -> &MapFile {
        match self {
            Outcome::Reduced { map, .. } | Outcome::Unsatisfiable { map, .. } => map,
        }
    }

    pub fn stats(&self) -> &PipelineStats {
        match self {
            Outcome::Reduced { stats, .. } | Outcome::Unsatisfiable { stats, .. } => stats,
        }
    }
}

/// Marker for "the empty clause was derived".
struct Unsat;

struct Run<'a> {
    cfg: &'a PipelineConfig,
    f: Formula,
    root: Assignment,
    /// Trail prefix already applied to the clause database.
    applied: usize,
    undo: UndoStack,
    ee_table: EeTable,
    stats: PipelineStats,
}

impl Run<'_> {
    /// Propagates pending unit clauses at the root and removes satisfied
    /// clauses and false literals. Returns whether anything was fixed.
    fn root_simplify(&mut self) -> Result<bool, Unsat> {
        let start = self.applied;
        loop {
            if self.f.has_empty_clause() {
                return Err(Unsat);
            }
            if self.f.unit_ids().next().is_none() {
                break;
            }
            if bcp(&self.f, &mut self.root, &[]) == Propagation::Conflict {
                return Err(Unsat);
            }
            while self.applied < self.root.trail().len() {
                let lit = self.root.trail()[self.applied];
                self.applied += 1;
                for id in self.f.occurrences(lit).to_vec() {
                    self.f.delete(id);
                }
                for id in self.f.occurrences(!lit).to_vec() {
                    let rest: Vec<Lit> = self
                        .f
                        .clause(id)
                        .lits()
                        .iter()
                        .copied()
                        .filter(|&l| l != !lit)
                        .collect();
                    self.f.replace(id, &rest);
                }
            }
        }
        self.stats.root_units += self.applied - start;
        Ok(self.applied > start)
    }

    fn add_units(&mut self, units: impl IntoIterator<Item = Lit>) -> usize {
        let mut added = 0;
        for u in units {
            if self.root.value(u) != Some(true) {
                self.f.add_clause(&[u]);
                added += 1;
            }
        }
        added
    }

    /// Filters classes against the whitelist and applies them.
    fn substitute(&mut self, mut classes: EquivalenceClasses) -> bool {
        let whitelist = &self.cfg.whitelist;
        classes.retain(|c| c[1..].iter().all(|l| !whitelist.contains(&l.var())));
        if classes.is_empty() {
            return false;
        }
        self.stats.ee_classes += classes.len();
        self.stats.ee_literals_replaced +=
            apply_equivalences(&mut self.f, &classes, &mut self.undo, &mut self.ee_table);
        true
    }

    fn ee(&mut self) -> Result<bool, Unsat> {
        match find_equivalences(&build_big(&self.f)) {
            Equivalences::Contradiction(_) => Err(Unsat),
            Equivalences::Classes(c) => Ok(self.substitute(c)),
        }
    }

    fn probe(&mut self) -> Result<bool, Unsat> {
        let mut budget = self.cfg.probe_budget;
        let mut changed = false;
        let mut pairs: Vec<(Lit, Lit)> = Vec::new();
        for v in probe_candidates(&self.f) {
            if budget == 0 {
                break;
            }
            if self.root.is_assigned(v) || self.f.occurrence_count(v) == 0 {
                continue;
            }
            let (r, steps) = probe_variable_counted(&self.f, v);
            budget = budget.saturating_sub(steps);
            let units: Vec<Lit> = match r.conflict_unit {
                Some(u) => vec![u],
                None => {
                    pairs.extend(r.equivalences);
                    r.units.into_iter().collect()
                }
            };
            let added = self.add_units(units);
            if added > 0 {
                self.stats.probe_units += added;
                changed = true;
                self.root_simplify()?;
            }
        }

        let ids: Vec<ClauseId> = self
            .f
            .active_ids()
            .filter(|&id| (2..=3).contains(&self.f.clause(id).len()))
            .collect();
        for id in ids {
            if budget == 0 {
                break;
            }
            let clause = self.f.clause(id);
            if clause.is_deleted() || clause.len() < 2 {
                continue;
            }
            budget = budget.saturating_sub(clause.len());
            match probe_clause(&self.f, id) {
                ClauseProbe::Unsatisfiable => return Err(Unsat),
                ClauseProbe::Units(units) => {
                    let added = self.add_units(units);
                    if added > 0 {
                        self.stats.probe_units += added;
                        changed = true;
                        self.root_simplify()?;
                    }
                }
            }
        }

        // units found after an equivalence was recorded may have fixed one
        // of its sides; those pairs are dropped
        let root = &self.root;
        let f = &self.f;
        pairs.retain(|(a, b)| {
            [a, b]
                .iter()
                .all(|l| !root.is_assigned(l.var()) && f.occurrence_count(l.var()) > 0)
        });
        if !pairs.is_empty() {
            match EquivalenceClasses::from_pairs(&pairs) {
                Equivalences::Contradiction(_) => return Err(Unsat),
                Equivalences::Classes(c) => {
                    let before = self.stats.ee_classes;
                    if self.substitute(c) {
                        self.stats.probe_equivalences += self.stats.ee_classes - before;
                        self.stats.ee_classes = before;
                        changed = true;
                    }
                }
            }
        }
        Ok(changed)
    }

    fn run_technique(&mut self, t: Technique) -> Result<bool, Unsat> {
        let cfg = self.cfg;
        let changed = match t {
            Technique::Subsume => {
                let (removed, strengthened) = subsumption_pass(&mut self.f);
                self.stats.subsumed += removed;
                self.stats.strengthened += strengthened;
                removed + strengthened > 0
            }
            Technique::Ee => self.ee()?,
            Technique::Hte => {
                let n = hte_pass(&mut self.f);
                self.stats.hte_removed += n;
                n > 0
            }
            Technique::Probe => self.probe()?,
            Technique::Vivify => {
                let n = vivify_pass(&mut self.f);
                self.stats.vivified += n;
                n > 0
            }
            Technique::Ve => {
                let n = ve_pass(&mut self.f, &mut self.undo, &cfg.whitelist, &cfg.blacklist);
                self.stats.ve_eliminated += n;
                n > 0
            }
            Technique::Bce => {
                let n = bce_pass(&mut self.f, &mut self.undo, &cfg.whitelist);
                self.stats.bce_removed += n;
                n > 0
            }
            Technique::Er => {
                let left = cfg.er_max_definitions - self.stats.er_definitions;
                let defs = er_pass_filtered(&mut self.f, left, cfg.er_min_pair, &cfg.whitelist);
                self.stats.er_definitions += defs.len();
                !defs.is_empty()
            }
        };
        let fixed = self.root_simplify()?;
        Ok(changed || fixed)
    }

    fn iterate(&mut self) -> Result<(), Unsat> {
        self.root_simplify()?;
        for i in 0..self.cfg.loop_limit {
            let mut changed = false;
            for t in Technique::ORDER {
                if self.cfg.enabled.contains(&t) {
                    let c = self.run_technique(t)?;
                    debug!(
                        "iteration {i}: {t} changed={c}, {} clauses",
                        self.f.num_active()
                    );
                    changed |= c;
                }
            }
            self.f.compact();
            self.stats.iterations += 1;
            if !changed {
                break;
            }
        }
        Ok(())
    }

    /// Root-level assignments, sorted by variable.
    fn fixed_units(&self) -> Vec<Lit> {
        let mut units = self.root.trail().to_vec();
        units.sort_unstable();
        units
    }
}

/// Runs the enabled techniques on `f`.
pub fn preprocess(f: Formula, cfg: &PipelineConfig) -> Result<Outcome, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let original_variables = f.num_vars();
    let mut run = Run {
        cfg,
        root: Assignment::new(f.num_vars()),
        applied: 0,
        undo: UndoStack::new(),
        ee_table: EeTable::new(),
        stats: PipelineStats {
            variables_before: f.live_vars().len(),
            clauses_before: f.num_active(),
            ..PipelineStats::default()
        },
        f,
    };
    let result = run.iterate();
    let units = run.fixed_units();
    let mut map = MapFile {
        original_variables,
        compression: None,
        ee_table: run.ee_table,
        stack: run.undo,
    };
    let mut stats = run.stats;
    let outcome = match result {
        Err(Unsat) => {
            stats.variables_after = 0;
            stats.clauses_after = 1;
            stats.wall_time = started.elapsed();
            Outcome::Unsatisfiable { map, stats }
        }
        Ok(()) => {
            let mut f = run.f;
            f.compact();
            let formula = if cfg.compress_output {
                let (g, table) =
                    compress(&f, &units, &cfg.whitelist).expect("configuration was validated");
                map.compression = Some(table);
                g
            } else {
                for &u in &units {
                    f.add_clause(&[u]);
                }
                f
            };
            stats.variables_after = formula.live_vars().len();
            stats.clauses_after = formula.num_active();
            stats.wall_time = started.elapsed();
            Outcome::Reduced {
                formula,
                map,
                stats,
            }
        }
    };
    info!(
        "preprocessed {} -> {} clauses in {:?}",
        outcome.stats().clauses_before,
        outcome.stats().clauses_after,
        outcome.stats().wall_time
    );
    Ok(outcome)
}

pub const UNSAT_DIMACS: &str = "p cnf 0 1\n0\n";

#[derive(Debug, Error)]
pub enum EmitError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
}

/// Preprocesses a parsed document and writes the reduced formula and the map
/// file. Returns the outcome for callers that want the statistics.
pub fn preprocess_and_emit(
    input: &DimacsDocument,
    cfg: &PipelineConfig,
    out_formula: &mut dyn Write,
    out_map: &mut dyn Write,
) -> Result<Outcome, EmitError> {
    let (f, tautologies) = input.to_formula();
    if tautologies > 0 {
        debug!("dropped {tautologies} tautological input clauses");
    }
    let outcome = preprocess(f, cfg)?;
    match &outcome {
        Outcome::Reduced { formula, map, .. } => {
            out_formula.write_all(write_dimacs(formula).as_bytes())?;
            out_map.write_all(write_map_file(map).as_bytes())?;
        }
        Outcome::Unsatisfiable { map, .. } => {
            out_formula.write_all(UNSAT_DIMACS.as_bytes())?;
            out_map.write_all(write_map_file(map).as_bytes())?;
        }
    }
    Ok(outcome)
}
