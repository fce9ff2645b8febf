//! Inflation attention thresholds.
//!
//! Agents pay little attention to inflation while it is low and switch to a
//! high-attention regime once lagged inflation crosses a threshold. This crate
//! estimates the threshold and the per-regime attention levels from survey
//! expectations, embeds the regime switch into a three-equation New Keynesian
//! model, and runs the impulse-response, simulation and welfare experiments
//! built on top of it.
//!
//! Rates are quarterly percentage points throughout; annualized values are
//! four times the quarterly value and only appear at reporting boundaries.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beliefs;
pub mod econometrics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod rng;

pub use error::{Error, Result};

/// Quarterly percentage points to annualized percentage points.
pub fn annualize(quarterly: f64) -> f64 {
    4.0 * quarterly
}

/// Annualized percentage points to quarterly percentage points.
pub fn deannualize(annual: f64) -> f64 {
    annual / 4.0
}
