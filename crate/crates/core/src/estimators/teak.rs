//! Cluster-tree pruning before nearest-neighbor estimation.
//!
//! Training projects are merged bottom-up by single linkage over the
//! normalized distance. Walking down from the root, any subtree whose
//! effort variance exceeds `alpha` times its parent's is dropped together
//! with everything below it. Queries get the effort of their nearest
//! surviving project.

use super::distance::{nearest_order, weighted_distance, DistanceWeights, Normalizer};
use super::{Estimator, EstimatorSpec, FitContext, FittedModel, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::model::{Dataset, Project};
use crate::stats::variance;

pub const DEFAULT_ALPHA: f64 = 1.0;

/// A node of the cluster tree; `members` index the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub children: Option<Box<(Cluster, Cluster)>>,
}

/// Single-linkage agglomeration. The closest pair of clusters merges first;
/// ties go to the pair with the smallest indices in the current list.
pub fn agglomerate(points: &[[f64; FEATURE_COUNT]], w: &DistanceWeights) -> Option<Cluster> {
    let mut clusters: Vec<Cluster> = (0..points.len()).map(|i| Cluster { members: vec![i], children: None }).collect();
    while clusters.len() > 1 {
        let mut best = (0, 1, f64::INFINITY);
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let d = clusters[i]
                    .members
                    .iter()
                    .flat_map(|a| clusters[j].members.iter().map(move |b| (*a, *b)))
                    .map(|(a, b)| weighted_distance(&points[a], &points[b], w))
                    .fold(f64::INFINITY, f64::min);
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        let (i, j, _) = best;
        let right = clusters.remove(j);
        let left = clusters.remove(i);
        let mut members = left.members.clone();
        members.extend(&right.members);
        clusters.insert(i, Cluster { members, children: Some(Box::new((left, right))) });
    }
    clusters.pop()
}

/// Members of every subtree that survives pruning.
pub fn survivors(root: &Cluster, efforts: &[f64], alpha: f64) -> Vec<usize> {
    let var = |c: &Cluster| variance(&c.members.iter().map(|i| efforts[*i]).collect::<Vec<_>>());
    fn walk(node: &Cluster, var: &dyn Fn(&Cluster) -> f64, alpha: f64, out: &mut Vec<usize>) {
        match &node.children {
            None => out.extend(&node.members),
            Some(pair) => {
                let parent = var(node);
                for child in [&pair.0, &pair.1] {
                    if var(child) <= alpha * parent {
                        walk(child, var, alpha, out);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(root, &var, alpha, &mut out);
    out.sort_unstable();
    out
}

#[derive(Debug, Clone)]
pub struct Teak {
    pub alpha: f64,
}

impl Default for Teak {
    fn default() -> Self {
        Teak { alpha: DEFAULT_ALPHA }
    }
}

impl Teak {
    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&["alpha"])?;
        let alpha = spec.hyper_or("alpha", DEFAULT_ALPHA);
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::BadLearnerSpec { spec: spec.to_string(), reason: "alpha must be >= 0".into() });
        }
        Ok(Teak { alpha })
    }

    pub fn fit_model(&self, training: &Dataset) -> Result<TeakModel> {
        if training.len() < 2 {
            return Err(Error::InsufficientTraining { need: 2, have: training.len() });
        }
        let norm = Normalizer::fit(training);
        let points: Vec<_> = training.projects().iter().map(|p| norm.project(p)).collect();
        let efforts = training.efforts();
        let weights = DistanceWeights::uniform();
        let root = agglomerate(&points, &weights).ok_or(Error::EmptyTraining)?;
        let mut kept = survivors(&root, &efforts, self.alpha);
        let fell_back = kept.is_empty();
        if fell_back {
            kept = (0..points.len()).collect();
        }
        Ok(TeakModel {
            norm,
            weights,
            points: kept.iter().map(|i| points[*i]).collect(),
            efforts: kept.iter().map(|i| efforts[*i]).collect(),
            kept,
            fell_back,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TeakModel {
    norm: Normalizer,
    weights: DistanceWeights,
    points: Vec<[f64; FEATURE_COUNT]>,
    efforts: Vec<f64>,
    /// Training indices that survived pruning.
    pub kept: Vec<usize>,
    pub fell_back: bool,
}

impl FittedModel for TeakModel {
    fn estimate(&self, project: &Project) -> Result<f64> {
        let order = nearest_order(&self.norm.project(project), &self.points, &self.weights);
        Ok(self.efforts[order[0].0])
    }

    fn degenerate(&self) -> bool {
        self.fell_back
    }
}

impl Estimator for Teak {
    fn fit(&self, training: &Dataset, _ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(self.fit_model(training)?))
    }
}
