//! Analogy-based estimation: LOC(n) uses only size, Knear(n) uses every
//! attribute. Both combine the efforts of the `n` nearest training projects.

use super::distance::{nearest_order, DistanceWeights, Normalizer};
use super::{Estimator, EstimatorSpec, FitContext, FittedModel, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::model::{Dataset, Project};

/// Rank-weighted mean, nearest first: `sum (n-i+1) e_i / sum (n-i+1)`.
pub fn triangle_combine(efforts: &[f64]) -> Result<f64> {
    if efforts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = efforts.len();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, e) in efforts.iter().enumerate() {
        let w = (n - i) as f64;
        num += w * e;
        den += w;
    }
    Ok(num / den)
}

#[derive(Debug, Clone)]
pub struct NearestNeighbors {
    n: usize,
    weights: DistanceWeights,
}

impl NearestNeighbors {
    pub fn loc(n: usize) -> Self {
        NearestNeighbors { n, weights: DistanceWeights::kloc_only() }
    }

    pub fn knear(n: usize) -> Self {
        NearestNeighbors { n, weights: DistanceWeights::uniform() }
    }

    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&[])?;
        let n = spec.neighbors.unwrap_or(1);
        Ok(if spec.kind == "loc" { Self::loc(n) } else { Self::knear(n) })
    }
}

struct NeighborModel {
    n: usize,
    weights: DistanceWeights,
    norm: Normalizer,
    points: Vec<[f64; FEATURE_COUNT]>,
    efforts: Vec<f64>,
}

impl FittedModel for NeighborModel {
    fn estimate(&self, project: &Project) -> Result<f64> {
        let order = nearest_order(&self.norm.project(project), &self.points, &self.weights);
        let nearest: Vec<f64> = order.iter().take(self.n).map(|(i, _)| self.efforts[*i]).collect();
        triangle_combine(&nearest)
    }
}

impl Estimator for NearestNeighbors {
    fn fit(&self, training: &Dataset, _ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        if training.len() < self.n {
            return Err(Error::InsufficientTraining { need: self.n, have: training.len() });
        }
        let norm = Normalizer::fit(training);
        Ok(Box::new(NeighborModel {
            n: self.n,
            weights: self.weights.clone(),
            points: training.projects().iter().map(|p| norm.project(p)).collect(),
            efforts: training.efforts(),
            norm,
        }))
    }
}

pub fn loc_estimate(p: &Project, training: &Dataset, n: usize) -> Result<f64> {
    NearestNeighbors::loc(n).fit(training, &FitContext::default())?.estimate(p)
}

pub fn knear_estimate(p: &Project, training: &Dataset, n: usize) -> Result<f64> {
    NearestNeighbors::knear(n).fit(training, &FitContext::default())?.estimate(p)
}
