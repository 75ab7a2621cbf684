//! Satisfiability-preserving techniques. Each one records what it removed on
//! the undo stack so a model of the result can be repaired afterwards.

mod bce;
mod ee;
mod ve;

pub use bce::{bce_pass, bce_pass_ordered, is_blocked, BceError};
pub use ee::{
    apply_equivalences, build_big, find_equivalences, EquivalenceClasses, Equivalences,
    ImplicationGraph,
};
pub use ve::{eliminate_variable, ve_pass, VeError, VeOutcome};
