//! COCOMO-II as an estimator, with fixed or locally calibrated `(a, b)`.

use super::{Estimator, EstimatorSpec, FitContext, FittedModel};
use crate::cocomo::{cocomo2_estimate, coconut_calibrate, CoconutConfig};
use crate::error::{Error, Result};
use crate::model::{CalibrationParams, Dataset, Project, TuningTable};

#[derive(Debug, Clone)]
pub struct Cocomo2 {
    pub params: CalibrationParams,
}

impl Default for Cocomo2 {
    fn default() -> Self {
        Cocomo2 { params: CalibrationParams::DEFAULT }
    }
}

impl Cocomo2 {
    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&["a", "b"])?;
        let d = CalibrationParams::DEFAULT;
        Ok(Cocomo2 { params: CalibrationParams::new(spec.hyper_or("a", d.a()), spec.hyper_or("b", d.b()))? })
    }
}

#[derive(Debug, Clone)]
pub struct ParametricModel {
    pub params: CalibrationParams,
    pub table: TuningTable,
}

impl FittedModel for ParametricModel {
    fn estimate(&self, project: &Project) -> Result<f64> {
        cocomo2_estimate(project, self.params, &self.table)
    }
}

impl Estimator for Cocomo2 {
    fn fit(&self, _training: &Dataset, ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(ParametricModel { params: self.params, table: ctx.table.clone() }))
    }
}

/// COCOMO-II with `(a, b)` fitted to the training data by COCONUT. The
/// search seed comes from the fit context.
#[derive(Debug, Clone, Default)]
pub struct Coconut {
    pub config: CoconutConfig,
}

impl Coconut {
    pub fn from_spec(spec: &EstimatorSpec) -> Result<Self> {
        spec.check_hyper(&["depth", "repeats", "constricting"])?;
        let d = CoconutConfig::default();
        let count = |key: &str, default: usize| -> Result<usize> {
            let v = spec.hyper_or(key, default as f64);
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::BadLearnerSpec { spec: spec.to_string(), reason: format!("{key} must be a whole number") })
            }
        };
        let config = CoconutConfig {
            depth: count("depth", d.depth)?,
            repeats: count("repeats", d.repeats)?,
            constricting: spec.hyper_or("constricting", d.constricting),
            ..d
        };
        config.validate()?;
        Ok(Coconut { config })
    }
}

impl Estimator for Coconut {
    fn fit(&self, training: &Dataset, ctx: &FitContext) -> Result<Box<dyn FittedModel>> {
        let cfg = CoconutConfig { seed: ctx.seed, ..self.config.clone() };
        let params = coconut_calibrate(training, &cfg, &ctx.table)?;
        Ok(Box::new(ParametricModel { params, table: ctx.table.clone() }))
    }
}
