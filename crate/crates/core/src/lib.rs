//! A standalone CNF preprocessor.
//!
//! A formula is simplified by a loop of techniques. Some keep the set of
//! models ([`simplify`]), others only satisfiability ([`elim`]); the latter
//! record undo steps so that a model of the reduced formula can be extended
//! to a model of the input ([`reconstruct`]).
//!
//! ```
//! use satprep::formula::Formula;
//! use satprep::pipeline::{preprocess, Outcome, PipelineConfig};
//!
//! let f = Formula::from_clauses(2, [[1, 2], [-1, 2]]);
//! match preprocess(f, &PipelineConfig::default()).unwrap() {
//!     Outcome::Reduced { formula, .. } => assert!(formula.num_active() <= 2),
//!     Outcome::Unsatisfiable { .. } => unreachable!(),
//! }
//! ```

pub mod cli;
pub mod dimacs;
pub mod elim;
pub mod formula;
pub mod lit;
pub mod oracle;
pub mod pipeline;
pub mod propagate;
pub mod reconstruct;
pub mod simplify;

pub use formula::Formula;
pub use lit::{Lit, Var};

// Keeps the guide's snippets compiling and passing under `cargo test`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/elimination.md")]
    mod elimination {}
    #[doc = include_str!("../../../book/src/simplification.md")]
    mod simplification {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
}
