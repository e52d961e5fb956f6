//! Evaluation of ordinal survey attributes at the level of individual answer
//! values.
//!
//! * [`ordeval`] estimates upward and downward reinforcement factors among
//!   similar respondents;
//! * [`significance`] builds permutation null distributions and their
//!   box-and-whiskers statistics;
//! * [`kano`] turns factors into Kano types and threshold values;
//! * [`predict`] trains naive Bayes and decision trees, cross-validates them
//!   and ranks unlabeled units;
//! * [`report`] writes the canonical JSON report and SVG plots.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod kano;
pub mod ordeval;
pub mod pipeline;
pub mod predict;
pub mod report;
pub mod significance;

pub use error::{Error, Result};
