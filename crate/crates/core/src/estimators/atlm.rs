//! Automatically transformed linear model.
//!
//! Every predictor (the 22 ratings taken as numbers, plus kloc) gets the
//! transform among log, square root and identity that makes its training
//! distribution least skewed. Effort, untransformed, is then regressed on
//! the transformed predictors plus an intercept by least squares. When the
//! design matrix is rank deficient the minimum-norm solution is used and the
//! model is flagged degenerate.

use nalgebra::{DMatrix, DVector};

use super::{features, Estimator, EstimatorSpec, FitContext, FittedModel, FEATURE_COUNT};
use crate::error::{Error, Result};
use crate::model::{Dataset, Project};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Log,
    Sqrt,
    Identity,
}

impl Transform {
    /// Preference order on skewness ties.
    pub const CANDIDATES: [Transform; 3] = [Transform::Log, Transform::Sqrt, Transform::Identity];

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Log => x.ln(),
            Transform::Sqrt => x.sqrt(),
            Transform::Identity => x,
        }
    }
}

/// Population-moment skewness `m3 / m2^1.5`; zero for a constant sample.
pub fn skewness(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mu = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mu).powi(3)).sum::<f64>() / n;
    if m2 <= f64::EPSILON * mu.abs().max(1.0) {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

/// Transform with the smallest absolute skewness. Values within a relative
/// 1e-9 of the best count as tied; ties go to the earlier candidate.
pub fn choose_transform(xs: &[f64]) -> Transform {
    let usable = |t: Transform| match t {
        Transform::Log => xs.iter().all(|x| *x > 0.0),
        Transform::Sqrt => xs.iter().all(|x| *x >= 0.0),
        Transform::Identity => true,
    };
    let scored: Vec<(Transform, f64)> = Transform::CANDIDATES
        .into_iter()
        .filter(|t| usable(*t))
        .map(|t| {
            let ys: Vec<f64> = xs.iter().map(|x| t.apply(*x)).collect();
            (t, skewness(&ys).abs())
        })
        .collect();
    let best = scored.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * best.max(1.0);
    scored.into_iter().find(|s| s.1 <= best + tol).map(|s| s.0).unwrap_or(Transform::Identity)
}

#[derive(Debug, Clone, Default)]
pub struct Atlm;

impl Atlm {
    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&[])?;
        Ok(Atlm)
    }

    pub fn fit_model(&self, training: &Dataset) -> Result<AtlmModel> {
        if training.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let rows: Vec<[f64; FEATURE_COUNT]> = training.projects().iter().map(features).collect();
        let mut transforms = [Transform::Identity; FEATURE_COUNT];
        for (j, t) in transforms.iter_mut().enumerate() {
            let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            *t = choose_transform(&column);
        }
        let design = DMatrix::from_fn(rows.len(), FEATURE_COUNT + 1, |i, j| {
            if j == 0 {
                1.0
            } else {
                transforms[j - 1].apply(rows[i][j - 1])
            }
        });
        let y = DVector::from_vec(training.efforts());
        let svd = design.clone().svd(true, true);
        let max_sv = svd.singular_values.max();
        let eps = max_sv * (rows.len().max(FEATURE_COUNT + 1) as f64) * f64::EPSILON * 16.0;
        let rank = svd.rank(eps);
        let beta = svd.solve(&y, eps).map_err(|e| Error::InvalidConfig(format!("least squares failed: {e}")))?;
        Ok(AtlmModel {
            transforms,
            intercept: beta[0],
            weights: std::array::from_fn(|j| beta[j + 1]),
            degenerate: rank < FEATURE_COUNT + 1,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtlmModel {
    pub transforms: [Transform; FEATURE_COUNT],
    pub intercept: f64,
    pub weights: [f64; FEATURE_COUNT],
    pub degenerate: bool,
}

impl FittedModel for AtlmModel {
    fn estimate(&self, project: &Project) -> Result<f64> {
        let x = features(project);
        Ok(self.intercept + (0..FEATURE_COUNT).map(|j| self.weights[j] * self.transforms[j].apply(x[j])).sum::<f64>())
    }

    fn degenerate(&self) -> bool {
        self.degenerate
    }
}

impl Estimator for Atlm {
    fn fit(&self, training: &Dataset, _ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(self.fit_model(training)?))
    }
}
