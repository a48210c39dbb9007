//! Prototype-based estimation with effort-aware feature weights.
//!
//! 1. Each attribute is weighted by how much grouping on it reduces effort
//!    variance, `w = max(0, V - E) / V`; kloc keeps weight 1. When all
//!    efforts are equal the weights are uniform.
//! 2. The weighted, normalized training data is projected onto its leading
//!    principal axes (power iteration with deflation, until 90% of the
//!    variance is explained, at most three axes).
//! 3. The first axis is cut into `ceil(sqrt(N))` equal-width cells. Each
//!    non-empty cell becomes a cluster whose prototype is the per-feature
//!    median of its members.
//! 4. A query goes to the nearest prototype. Within that cluster its two
//!    nearest members, at distances `n1 <= n2` with efforts `E1`, `E2`,
//!    give `E1 * n2 / n + E2 * n1 / n` where `n = n1 + n2`.

use super::distance::{nearest_order, DistanceWeights, Normalizer};
use super::{Estimator, EstimatorSpec, FitContext, FittedModel, FEATURE_COUNT, KLOC_FEATURE};
use crate::cocomo::reduce::column_scores;
use crate::error::{Error, Result};
use crate::model::{Dataset, Project};
use crate::stats::{median, variance};

pub const VARIANCE_EXPLAINED: f64 = 0.9;
pub const MAX_COMPONENTS: usize = 3;

/// `max(0, V - E_i) / V` per attribute, 1 for kloc.
pub fn variance_weights(training: &Dataset) -> DistanceWeights {
    let v = variance(&training.efforts());
    if !(v > 0.0) {
        return DistanceWeights::uniform();
    }
    let mut w = [1.0; FEATURE_COUNT];
    for (attr, e) in column_scores(training) {
        w[attr.index()] = (v - e).max(0.0) / v;
    }
    w[KLOC_FEATURE] = 1.0;
    DistanceWeights::from_array(w).unwrap_or_default()
}

/// Two nearest members at distances `n1 <= n2` with efforts `e1`, `e2`.
pub fn extrapolate(e1: f64, n1: f64, e2: f64, n2: f64) -> f64 {
    let n = n1 + n2;
    if n == 0.0 {
        (e1 + e2) / 2.0
    } else {
        e1 * n2 / n + e2 * n1 / n
    }
}

type Point = [f64; FEATURE_COUNT];

fn dot(a: &Point, b: &Point) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Leading eigenvectors of the covariance of `rows`, until `explained` of
/// the total variance is covered or `max` are found.
pub fn principal_axes(rows: &[Point], explained: f64, max: usize) -> Vec<Point> {
    let n = rows.len() as f64;
    let mut centre = [0.0; FEATURE_COUNT];
    for r in rows {
        for j in 0..FEATURE_COUNT {
            centre[j] += r[j] / n;
        }
    }
    let mut cov = [[0.0; FEATURE_COUNT]; FEATURE_COUNT];
    for r in rows {
        for i in 0..FEATURE_COUNT {
            for j in 0..FEATURE_COUNT {
                cov[i][j] += (r[i] - centre[i]) * (r[j] - centre[j]) / n;
            }
        }
    }
    let total: f64 = (0..FEATURE_COUNT).map(|i| cov[i][i]).sum();
    let mut axes = Vec::new();
    if !(total > 0.0) {
        return axes;
    }
    let mut covered = 0.0;
    while axes.len() < max && covered < explained * total {
        // start from the column with the largest norm
        let start =
            (0..FEATURE_COUNT).max_by(|a, b| dot(&cov[*a], &cov[*a]).total_cmp(&dot(&cov[*b], &cov[*b]))).unwrap_or(0);
        let mut v = cov[start];
        let norm = dot(&v, &v).sqrt();
        if norm <= total * 1e-12 {
            break;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let mut lambda = 0.0;
        for _ in 0..1000 {
            let mut next = [0.0; FEATURE_COUNT];
            for i in 0..FEATURE_COUNT {
                next[i] = dot(&cov[i], &v);
            }
            let len = dot(&next, &next).sqrt();
            if len == 0.0 {
                break;
            }
            next.iter_mut().for_each(|x| *x /= len);
            let done = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < 1e-12;
            v = next;
            lambda = len;
            if done {
                break;
            }
        }
        if lambda <= total * 1e-12 {
            break;
        }
        for i in 0..FEATURE_COUNT {
            for j in 0..FEATURE_COUNT {
                cov[i][j] -= lambda * v[i] * v[j];
            }
        }
        covered += lambda;
        axes.push(v);
    }
    axes
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeCluster {
    pub prototype: Point,
    pub members: Vec<usize>,
}

/// Equal-width cells along `scores`; empty cells are dropped.
pub fn grid_cells(scores: &[f64], cells: usize) -> Vec<Vec<usize>> {
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / cells as f64;
    let mut out = vec![Vec::new(); cells];
    for (i, s) in scores.iter().enumerate() {
        let cell = if width > 0.0 { (((s - lo) / width) as usize).min(cells - 1) } else { 0 };
        out[cell].push(i);
    }
    out.retain(|c| !c.is_empty());
    out
}

#[derive(Debug, Clone, Default)]
pub struct Peeking2 {
    /// Cells along the first axis; `ceil(sqrt(N))` when unset.
    pub cells: Option<usize>,
}

impl Peeking2 {
    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&["cells"])?;
        let cells = match spec.hyper.get("cells") {
            None => None,
            Some(c) if *c >= 1.0 && c.fract() == 0.0 => Some(*c as usize),
            Some(_) => {
                return Err(Error::BadLearnerSpec {
                    spec: spec.to_string(),
                    reason: "cells must be a positive integer".into(),
                })
            }
        };
        Ok(Peeking2 { cells })
    }

    pub fn fit_model(&self, training: &Dataset) -> Result<PeekingModel> {
        if training.len() < 2 {
            return Err(Error::InsufficientTraining { need: 2, have: training.len() });
        }
        let weights = variance_weights(training);
        let norm = Normalizer::fit(training);
        let points: Vec<Point> = training.projects().iter().map(|p| norm.project(p)).collect();
        let scaled: Vec<Point> = points.iter().map(|p| std::array::from_fn(|j| p[j] * weights.get(j).sqrt())).collect();
        let axes = principal_axes(&scaled, VARIANCE_EXPLAINED, MAX_COMPONENTS);
        let cells = self.cells.unwrap_or_else(|| (training.len() as f64).sqrt().ceil() as usize);
        let groups = match axes.first() {
            Some(axis) => grid_cells(&scaled.iter().map(|p| dot(p, axis)).collect::<Vec<_>>(), cells),
            None => vec![(0..points.len()).collect()],
        };
        let clusters = groups
            .into_iter()
            .map(|members| PrototypeCluster {
                prototype: std::array::from_fn(|j| median(&members.iter().map(|i| points[*i][j]).collect::<Vec<_>>())),
                members,
            })
            .collect();
        Ok(PeekingModel { norm, weights, points, efforts: training.efforts(), components: axes.len(), clusters })
    }
}

#[derive(Debug, Clone)]
pub struct PeekingModel {
    norm: Normalizer,
    weights: DistanceWeights,
    points: Vec<Point>,
    efforts: Vec<f64>,
    pub components: usize,
    pub clusters: Vec<PrototypeCluster>,
}

impl FittedModel for PeekingModel {
    fn estimate(&self, project: &Project) -> Result<f64> {
        let q = self.norm.project(project);
        let prototypes: Vec<Point> = self.clusters.iter().map(|c| c.prototype).collect();
        let cluster = &self.clusters[nearest_order(&q, &prototypes, &self.weights)[0].0];
        if cluster.members.len() == 1 {
            return Ok(self.efforts[cluster.members[0]]);
        }
        let member_points: Vec<Point> = cluster.members.iter().map(|i| self.points[*i]).collect();
        let order = nearest_order(&q, &member_points, &self.weights);
        let (a, b) = (order[0], order[1]);
        let e1 = self.efforts[cluster.members[a.0]];
        let e2 = self.efforts[cluster.members[b.0]];
        Ok(extrapolate(e1, a.1, e2, b.1))
    }
}

impl Estimator for Peeking2 {
    fn fit(&self, training: &Dataset, _ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(self.fit_model(training)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Ratings;

    #[test]
    fn extrapolation_formula() {
        assert!((extrapolate(10.0, 1.0, 40.0, 2.0) - 20.0).abs() < 1e-12);
        assert_eq!(extrapolate(10.0, 3.0, 40.0, 3.0), 25.0);
        assert_eq!(extrapolate(10.0, 0.0, 40.0, 0.0), 25.0);
        assert_eq!(extrapolate(10.0, 0.0, 40.0, 5.0), 10.0);
    }

    #[test]
    fn grid_drops_empty_cells() {
        let cells = grid_cells(&[0.0, 0.1, 0.9, 1.0], 3);
        assert_eq!(cells, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(grid_cells(&[2.0, 2.0], 2), vec![vec![0, 1]]);
    }

    #[test]
    fn axes_of_a_line() {
        let rows: Vec<Point> = (0..5)
            .map(|i| {
                let mut p = [0.0; FEATURE_COUNT];
                p[0] = i as f64;
                p[1] = 2.0 * i as f64;
                p
            })
            .collect();
        let axes = principal_axes(&rows, 0.9, 3);
        assert_eq!(axes.len(), 1);
        let s = 5f64.sqrt();
        assert!((axes[0][0].abs() - 1.0 / s).abs() < 1e-9);
        assert!((axes[0][1].abs() - 2.0 / s).abs() < 1e-9);
    }

    #[test]
    fn constant_efforts_give_uniform_weights() {
        let d = Dataset::new(
            "d",
            [1.0, 2.0, 3.0].iter().map(|k| Project::new("p", Ratings::nominal(), *k, Some(9.0))).collect(),
        )
        .unwrap();
        assert_eq!(variance_weights(&d), DistanceWeights::uniform());
        let m = Peeking2::default().fit_model(&d).unwrap();
        assert_eq!(m.estimate(&d.projects()[1]).unwrap(), 9.0);
    }
}
