//! Covariate-shift audits for inspected customer samples.
//!
//! The crate measures how well a decision tree can tell inspected customers
//! apart from the rest of the population. A model that separates them well
//! (high Matthews correlation) means the inspected sample does not represent
//! the population for the audited features. Audits run per feature, per
//! feature combination, and per spatial division, with nearest-neighbour
//! rasters for mapping local shift.

pub mod audit;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod metrics;
pub mod report;
pub mod rng;
pub mod spatial;
pub mod synthgen;
pub mod tree;

pub use error::{Error, Result};
