//! Process line engine.
//!
//! Derives process variants from a reference process model by executing the
//! typed variability operations declared in extension models, and reports
//! which operation types a family of variants defines and uses.

#[macro_use]
mod macros;

pub mod analytics;
pub mod atomic;
pub mod catalog;
pub mod cli;
pub mod issue;
pub mod merge;
pub mod model;
pub mod xml;

pub use issue::Issue;
