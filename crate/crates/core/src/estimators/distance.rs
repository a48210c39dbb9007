//! Weighted Euclidean distance over min-max normalized features.
//!
//! ```text
//! dist(x, y) = sqrt( sum_i w_i * (x_i - y_i)^2 )
//! ```
//!
//! Each feature is scaled to `0..1` by the training data's observed range.
//! A feature whose training range is empty contributes nothing.

use super::{feature_name, features, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::model::{Dataset, Project};

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceWeights {
    w: [f64; FEATURE_COUNT],
}

impl Default for DistanceWeights {
    fn default() -> Self {
        DistanceWeights { w: [1.0; FEATURE_COUNT] }
    }
}

impl DistanceWeights {
    pub fn uniform() -> Self {
        Self::default()
    }

    pub fn from_array(w: [f64; FEATURE_COUNT]) -> Result<Self> {
        if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidConfig(format!("distance weight must be finite and >= 0, got {bad}")));
        }
        Ok(DistanceWeights { w })
    }

    /// Only the kloc feature counts.
    pub fn kloc_only() -> Self {
        let mut w = [0.0; FEATURE_COUNT];
        w[super::KLOC_FEATURE] = 1.0;
        DistanceWeights { w }
    }

    /// Set the weight for a mnemonic or `kloc`.
    pub fn set(&mut self, name: &str, weight: f64) -> Result<()> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidConfig(format!("distance weight must be finite and >= 0, got {weight}")));
        }
        let i = (0..FEATURE_COUNT)
            .find(|&i| feature_name(i).eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
        self.w[i] = weight;
        Ok(())
    }

    pub fn get(&self, i: usize) -> f64 {
        self.w[i]
    }

    pub fn as_array(&self) -> &[f64; FEATURE_COUNT] {
        &self.w
    }
}

/// Per-feature training range.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    lo: [f64; FEATURE_COUNT],
    hi: [f64; FEATURE_COUNT],
}

impl Normalizer {
    pub fn fit(training: &Dataset) -> Self {
        let mut lo = [f64::INFINITY; FEATURE_COUNT];
        let mut hi = [f64::NEG_INFINITY; FEATURE_COUNT];
        for p in training.projects() {
            for (i, v) in features(p).into_iter().enumerate() {
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        Normalizer { lo, hi }
    }

    /// Values outside the training range map outside `0..1`; they are not clamped.
    pub fn normalize(&self, raw: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        let mut out = [0.0; FEATURE_COUNT];
        for i in 0..FEATURE_COUNT {
            let span = self.hi[i] - self.lo[i];
            out[i] = if span > 0.0 { (raw[i] - self.lo[i]) / span } else { 0.0 };
        }
        out
    }

    pub fn project(&self, p: &Project) -> [f64; FEATURE_COUNT] {
        self.normalize(&features(p))
    }
}

pub(crate) fn weighted_distance(x: &[f64; FEATURE_COUNT], y: &[f64; FEATURE_COUNT], w: &DistanceWeights) -> f64 {
    x.iter().zip(y).zip(w.as_array()).map(|((a, b), w)| w * (a - b) * (a - b)).sum::<f64>().sqrt()
}

pub fn distance(x: &Project, y: &Project, training: &Dataset, w: &DistanceWeights) -> f64 {
    let norm = Normalizer::fit(training);
    weighted_distance(&norm.project(x), &norm.project(y), w)
}

/// Indices of `points` ordered by distance to `query`; equal distances keep
/// their original order.
pub(crate) fn nearest_order(
    query: &[f64; FEATURE_COUNT],
    points: &[[f64; FEATURE_COUNT]],
    w: &DistanceWeights,
) -> Vec<(usize, f64)> {
    let mut order: Vec<(usize, f64)> =
        points.iter().enumerate().map(|(i, p)| (i, weighted_distance(query, p, w))).collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Attribute, RatingLevel, Ratings};

    fn proj(id: &str, cplx: u8, kloc: f64) -> Project {
        let r = Ratings::nominal().with(Attribute::Cplx, RatingLevel::new(cplx as i64).unwrap());
        Project::new(id, r, kloc, Some(10.0))
    }

    #[test]
    fn identical_is_zero() {
        let d = Dataset::new("d", vec![proj("a", 2, 10.0), proj("b", 5, 30.0)]).unwrap();
        let p = &d.projects()[0];
        assert_eq!(distance(p, p, &d, &DistanceWeights::default()), 0.0);
    }

    #[test]
    fn extremes_of_one_attribute_are_one_apart() {
        let d = Dataset::new("d", vec![proj("a", 2, 10.0), proj("b", 5, 10.0)]).unwrap();
        let (a, b) = (&d.projects()[0], &d.projects()[1]);
        assert_eq!(distance(a, b, &d, &DistanceWeights::default()), 1.0);
    }

    #[test]
    fn constant_feature_contributes_nothing() {
        let d = Dataset::new("d", vec![proj("a", 3, 10.0), proj("b", 3, 10.0)]).unwrap();
        let q = proj("q", 6, 10.0);
        assert_eq!(distance(&q, &d.projects()[0], &d, &DistanceWeights::default()), 0.0);
    }

    #[test]
    fn weights() {
        let mut w = DistanceWeights::default();
        w.set("CPLX", 4.0).unwrap();
        let d = Dataset::new("d", vec![proj("a", 2, 10.0), proj("b", 5, 10.0)]).unwrap();
        assert_eq!(distance(&d.projects()[0], &d.projects()[1], &d, &w), 2.0);
        assert!(w.set("nope", 1.0).is_err());
        assert!(w.set("kloc", -1.0).is_err());
    }
}
