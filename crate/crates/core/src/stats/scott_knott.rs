//! Scott-Knott ranking of treatments.
//!
//! Treatments are sorted by median error. The sorted list is cut where the
//! expected squared shift of the pooled means is largest,
//!
//! ```text
//! E(delta) = |m|/|l| * (mu_m - mu_l)^2 + |n|/|l| * (mu_n - mu_l)^2
//! ```
//!
//! and both halves are ranked recursively only when the bootstrap says the
//! pooled halves differ *and* the A12 effect is at least the threshold.
//! Otherwise the whole list is one group.

use super::a12::a12_magnitude;
use super::bootstrap::{bootstrap_different, StatConfig};
use super::descriptive::{iqr, mean, median};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, SeedPart};

#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentResult {
    pub name: String,
    pub errors: Vec<f64>,
}

impl TreatmentResult {
    pub fn new(name: impl Into<String>, errors: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if errors.is_empty() {
            return Err(Error::InvalidConfig(format!("treatment `{name}` has no measurements")));
        }
        if let Some(e) = errors.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidConfig(format!("treatment `{name}` has invalid measurement {e}")));
        }
        Ok(TreatmentResult { name, errors })
    }

    pub fn median(&self) -> f64 {
        median(&self.errors)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedMember {
    pub name: String,
    pub median: f64,
    pub iqr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedGroup {
    pub rank: usize,
    pub members: Vec<RankedMember>,
}

fn expected_delta(left: &[f64], right: &[f64], whole_mean: f64) -> f64 {
    let total = (left.len() + right.len()) as f64;
    left.len() as f64 / total * (mean(left) - whole_mean).powi(2)
        + right.len() as f64 / total * (mean(right) - whole_mean).powi(2)
}

fn pool(items: &[&TreatmentResult]) -> Vec<f64> {
    items.iter().flat_map(|t| t.errors.iter().copied()).collect()
}

/// Index `k` of the best cut `items[..k] | items[k..]`, leftmost on ties.
pub(crate) fn best_cut(items: &[&TreatmentResult]) -> Option<usize> {
    if items.len() < 2 {
        return None;
    }
    let whole_mean = mean(&pool(items));
    let mut best: Option<(usize, f64)> = None;
    for k in 1..items.len() {
        let score = expected_delta(&pool(&items[..k]), &pool(&items[k..]), whole_mean);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((k, score));
        }
    }
    best.map(|(k, _)| k)
}

fn divide<'a>(items: &[&'a TreatmentResult], offset: usize, cfg: &StatConfig, out: &mut Vec<Vec<&'a TreatmentResult>>) {
    if let Some(k) = best_cut(items) {
        let (left, right) = (pool(&items[..k]), pool(&items[k..]));
        let node_cfg = StatConfig {
            seed: derive_seed(cfg.seed, &[SeedPart::Int(offset as u64), SeedPart::Int(items.len() as u64)]),
            ..cfg.clone()
        };
        if a12_magnitude(&right, &left) >= cfg.a12_threshold && bootstrap_different(&left, &right, &node_cfg) {
            divide(&items[..k], offset, cfg, out);
            divide(&items[k..], offset + k, cfg, out);
            return;
        }
    }
    out.push(items.to_vec());
}

pub fn scott_knott(treatments: &[TreatmentResult], cfg: &StatConfig) -> Result<Vec<RankedGroup>> {
    cfg.validate()?;
    let mut sorted: Vec<&TreatmentResult> = treatments.iter().collect();
    let medians: Vec<f64> = sorted.iter().map(|t| t.median()).collect();
    let mut order: Vec<usize> = (0..sorted.len()).collect();
    order.sort_by(|&i, &j| medians[i].total_cmp(&medians[j]));
    sorted = order.into_iter().map(|i| sorted[i]).collect();

    let mut groups = Vec::new();
    divide(&sorted, 0, cfg, &mut groups);
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(i, members)| RankedGroup {
            rank: i + 1,
            members: members
                .into_iter()
                .map(|t| RankedMember { name: t.name.clone(), median: t.median(), iqr: iqr(&t.errors) })
                .collect(),
        })
        .collect())
}
