//! Standardized Error: mean absolute error as a percentage of the error a
//! guessing baseline would make.
//!
//! ```text
//! SE = 100 * mean|actual_i - predicted_i| / mean|actual_i - sampled|
//! ```
//!
//! `sampled` is the mean of [`BASELINE_DRAWS`] seeded draws, with
//! replacement, from the baseline (training) efforts.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::rng;

pub const BASELINE_DRAWS: usize = 1000;

pub fn baseline_guess(baseline: &[f64], seed: u64) -> Result<f64> {
    if baseline.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rng = rng(seed);
    let total: f64 = (0..BASELINE_DRAWS).map(|_| baseline[rng.random_range(0..baseline.len())]).sum();
    Ok(total / BASELINE_DRAWS as f64)
}

/// SE against an already drawn baseline guess.
pub fn standardized_error_against(pairs: &[(f64, f64)], sampled: f64) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = pairs.len() as f64;
    let numerator = pairs.iter().map(|(actual, predicted)| (actual - predicted).abs()).sum::<f64>() / n;
    let denominator = pairs.iter().map(|(actual, _)| (actual - sampled).abs()).sum::<f64>() / n;
    if !(denominator > 0.0) || !denominator.is_finite() {
        return Err(Error::UndefinedStandardizedError);
    }
    Ok(100.0 * numerator / denominator)
}

/// `pairs` are `(actual, predicted)`.
pub fn standardized_error(pairs: &[(f64, f64)], baseline: &[f64], seed: u64) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    standardized_error_against(pairs, baseline_guess(baseline, seed)?)
}
