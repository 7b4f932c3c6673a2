//! Finite-model workbench for an intuitionistic modal logic interpreted
//! over pre-ordered neighborhood frames.
//!
//! The crate provides:
//!
//! - [`formula`]: the object language (parser, printer, substitution);
//! - [`model`]: frames, models, the JSON exchange format, and validators
//!   for every frame/model condition the workbench knows about;
//! - [`semantics`]: forcing and extensions under several necessity
//!   interpretations, plus the two-world relational refutation harness;
//! - [`search`]: exhaustive enumeration of small frames and countermodel
//!   search for axiom schemes;
//! - [`proof`]: a checker for Hilbert-style derivations in the base
//!   system (intuitionistic axioms plus `[]a -> a`, modus ponens, and
//!   the extensionality rule);
//! - [`replicate`]: self-contained scenarios re-establishing the key
//!   semantic facts, used by the `replicate` CLI command.
//!
//! All values are immutable after construction and evaluation is pure,
//! so everything here is safe to share across threads without locks.

pub mod builtin;
pub mod formula;
pub mod model;
pub mod proof;
pub mod replicate;
pub mod search;
pub mod semantics;

pub use formula::Formula;
pub use model::{Frame, Model, WorldSet};
pub use semantics::BoxMode;
