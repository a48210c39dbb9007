//! The COCOMO-II effort equation and the procedures built directly on it:
//! local calibration ([`coconut`]) and table/data reductions ([`reduce`]).
//!
//! ```text
//! effort = a * prod(EM_i) * kloc ^ (b + 0.01 * sum(SF_j))
//! ```

pub mod coconut;
pub mod reduce;

pub use coconut::{coconut_calibrate, coconut_calibrate_traced, CoconutConfig, CoconutLevel, CoconutTrace};
pub use reduce::{
    rank_columns, reduce_columns, reduce_ranges, reduce_rows, ColumnFraction, RangeMode, ReductionSpec, RowLimit,
};

use crate::error::{Error, Result};
use crate::model::{validate_project, Attribute, CalibrationParams, Dataset, Project, RatingLevel, TuningTable};

/// Sum of scale-factor weights and product of effort multipliers for a project.
fn drivers(project: &Project, table: &TuningTable) -> (f64, f64) {
    let sfs: f64 = Attribute::scale_factors().map(|a| table.value(a, project.level(a))).sum();
    let ems: f64 = Attribute::effort_multipliers().map(|a| table.value(a, project.level(a))).product();
    (sfs, ems)
}

/// Effort in person-months. Undefined tuning cells are clamped; unrated
/// attributes count as nominal.
pub fn cocomo2_estimate(project: &Project, params: CalibrationParams, table: &TuningTable) -> Result<f64> {
    let report = validate_project(project, table);
    if report.has_errors() {
        return Err(Error::Validation { id: project.id.clone(), diagnostics: report.errors().cloned().collect() });
    }
    let (sfs, ems) = drivers(project, table);
    Ok(params.a() * ems * project.kloc.powf(params.b() + 0.01 * sfs))
}

/// Mean relative error `|predicted - actual| / actual` over the training data.
pub fn assess(training: &Dataset, params: CalibrationParams, table: &TuningTable) -> Result<f64> {
    if training.is_empty() {
        return Err(Error::EmptyTraining);
    }
    let mut total = 0.0;
    for project in training.projects() {
        let predicted = cocomo2_estimate(project, params, table)?;
        let actual = project.actual_effort()?;
        total += (predicted - actual).abs() / actual;
    }
    Ok(total / training.len() as f64)
}

/// Extreme forms of the effort equation over every rating combination a
/// table allows: `min_const * kloc^min_exp` and `max_const * kloc^max_exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffortBounds {
    pub min_const: f64,
    pub min_exp: f64,
    pub max_const: f64,
    pub max_exp: f64,
}

impl EffortBounds {
    /// Closed interval holding every estimate at this size. For `kloc >= 1`
    /// this is `[min_const*kloc^min_exp, max_const*kloc^max_exp]`; below one
    /// KLOC the smaller exponent gives the larger power, so both exponents
    /// are tried at each end.
    pub fn range(&self, kloc: f64) -> (f64, f64) {
        let lo_pow = kloc.powf(self.min_exp).min(kloc.powf(self.max_exp));
        let hi_pow = kloc.powf(self.min_exp).max(kloc.powf(self.max_exp));
        (self.min_const * lo_pow, self.max_const * hi_pow)
    }

    pub fn const_ratio(&self) -> f64 {
        self.max_const / self.min_const
    }

    pub fn exp_gap(&self) -> f64 {
        self.max_exp - self.min_exp
    }
}

/// Bounds over the very-low to very-high ratings, the span in which every
/// attribute of the standard table has a calibrated value. Extra-high cells
/// are left out; use [`effort_bounds_through`] with
/// [`RatingLevel::EXTRA_HIGH`] for an envelope over every defined cell.
pub fn effort_bounds(table: &TuningTable, params: CalibrationParams) -> EffortBounds {
    effort_bounds_through(table, params, RatingLevel::VERY_HIGH)
}

/// Bounds over the defined cells rated at or below `top`. A row with no
/// defined cell in that span falls back to all its defined cells.
pub fn effort_bounds_through(table: &TuningTable, params: CalibrationParams, top: RatingLevel) -> EffortBounds {
    let cells = |a: Attribute| -> Vec<f64> {
        let within: Vec<f64> = table.row(a)[..=top.slot()].iter().flatten().copied().collect();
        if within.is_empty() {
            table.defined_values(a).collect()
        } else {
            within
        }
    };
    let row_min = |a: Attribute| cells(a).into_iter().fold(f64::INFINITY, f64::min);
    let row_max = |a: Attribute| cells(a).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let min_em: f64 = Attribute::effort_multipliers().map(row_min).product();
    let max_em: f64 = Attribute::effort_multipliers().map(row_max).product();
    let min_sf: f64 = Attribute::scale_factors().map(row_min).sum();
    let max_sf: f64 = Attribute::scale_factors().map(row_max).sum();
    EffortBounds {
        min_const: params.a() * min_em,
        min_exp: params.b() + 0.01 * min_sf,
        max_const: params.a() * max_em,
        max_exp: params.b() + 0.01 * max_sf,
    }
}
