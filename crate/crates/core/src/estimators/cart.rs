//! Regression tree grown by variance reduction.
//!
//! Candidate splits are `feature <= threshold` with thresholds at midpoints
//! between consecutive distinct training values. The chosen split minimizes
//! the size-weighted variance of the two sides, must leave at least
//! `min_leaf` rows on each side, and must strictly lower the node's
//! variance. Leaves predict their mean effort. Ties go to the earlier
//! feature, then the lower threshold.

use super::{features, Estimator, EstimatorSpec, FitContext, FittedModel, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::model::{Dataset, Project};
use crate::stats::{mean, variance};

pub const DEFAULT_MIN_LEAF: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf { value: f64, size: usize },
    Split { feature: usize, threshold: f64, left: Box<Node>, right: Box<Node> },
}

impl Node {
    fn predict(&self, x: &[f64; FEATURE_COUNT]) -> f64 {
        match self {
            Node::Leaf { value, .. } => *value,
            Node::Split { feature, threshold, left, right } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }

    pub fn leaves(&self) -> Vec<f64> {
        match self {
            Node::Leaf { value, .. } => vec![*value],
            Node::Split { left, right, .. } => {
                let mut out = left.leaves();
                out.extend(right.leaves());
                out
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub score: f64,
}

/// Best admissible split of `rows`, if any.
pub fn best_split(rows: &[([f64; FEATURE_COUNT], f64)], min_leaf: usize) -> Option<Split> {
    let n = rows.len();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let parent = variance(&ys);
    let mut best: Option<Split> = None;
    for feature in 0..FEATURE_COUNT {
        let mut values: Vec<f64> = rows.iter().map(|r| r.0[feature]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (x, y) in rows {
                if x[feature] <= threshold {
                    left.push(*y);
                } else {
                    right.push(*y);
                }
            }
            if left.len() < min_leaf || right.len() < min_leaf {
                continue;
            }
            let score = (left.len() as f64 * variance(&left) + right.len() as f64 * variance(&right)) / n as f64;
            if score < parent && best.is_none_or(|b| score < b.score) {
                best = Some(Split { feature, threshold, score });
            }
        }
    }
    best
}

fn grow(rows: &[([f64; FEATURE_COUNT], f64)], min_leaf: usize) -> Node {
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let leaf = Node::Leaf { value: mean(&ys), size: rows.len() };
    if variance(&ys) == 0.0 {
        return leaf;
    }
    match best_split(rows, min_leaf) {
        None => leaf,
        Some(s) => {
            let (left, right): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.0[s.feature] <= s.threshold);
            Node::Split {
                feature: s.feature,
                threshold: s.threshold,
                left: Box::new(grow(&left, min_leaf)),
                right: Box::new(grow(&right, min_leaf)),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cart {
    pub min_leaf: usize,
}

impl Default for Cart {
    fn default() -> Self {
        Cart { min_leaf: DEFAULT_MIN_LEAF }
    }
}

impl Cart {
    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&["min_leaf"])?;
        let min_leaf = spec.hyper_or("min_leaf", DEFAULT_MIN_LEAF as f64);
        if !(min_leaf >= 1.0 && min_leaf.fract() == 0.0) {
            return Err(Error::BadLearnerSpec {
                spec: spec.to_string(),
                reason: "min_leaf must be a positive integer".into(),
            });
        }
        Ok(Cart { min_leaf: min_leaf as usize })
    }

    pub fn grow(&self, training: &Dataset) -> Result<Node> {
        if training.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let rows: Vec<_> = training.projects().iter().map(features).zip(training.efforts()).collect();
        Ok(grow(&rows, self.min_leaf))
    }
}

#[derive(Debug, Clone)]
pub struct CartModel {
    pub tree: Node,
}

impl FittedModel for CartModel {
    fn estimate(&self, project: &Project) -> Result<f64> {
        Ok(self.tree.predict(&features(project)))
    }
}

impl Estimator for Cart {
    fn fit(&self, training: &Dataset, _ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(CartModel { tree: self.grow(training)? }))
    }
}
