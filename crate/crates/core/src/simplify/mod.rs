//! Equivalence-preserving simplifications. None of these need undo
//! information, with the exception of equivalences found by probing, which
//! are handed over to [`crate::elim::apply_equivalences`].

mod er;
mod hte;
mod probe;
mod subsume;
mod vivify;

pub use er::{er_pass, er_pass_filtered, ErDefinition};
pub use hte::{hla, hla_ordered, hte_pass};
pub use probe::{
    probe_candidates, probe_clause, probe_variable, probe_variable_counted, ClauseProbe,
    ProbeResult,
};
pub use subsume::subsumption_pass;
pub use vivify::{vivify_clause, vivify_pass, Vivified};
