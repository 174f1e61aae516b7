//! peakwise verifies axioms of public-good location rules on a finite grid
//! of alternatives where agents hold single-peaked preferences or abstain
//! into full indifference, and exhaustively searches the (tiny) rule spaces
//! where such verification doubles as a characterization check.
//!
//! The pieces:
//!
//! * [`domain`]: the grid, admissible preferences, profiles, efficiency.
//! * [`rules`]: built-in rule families and the universal table form.
//! * [`axioms`]: exhaustive checkers returning re-checkable witnesses.
//! * [`search`]: pruned backtracking enumeration of rule tables.
//! * [`scenarios`]: canned end-to-end suites with frozen expectations.
//! * [`report`]: JSON rendering with deterministic layout.

pub mod axioms;
pub mod domain;
pub mod error;
pub mod report;
pub mod rules;
pub mod scenarios;
pub mod search;

pub use error::{Error, Result};
