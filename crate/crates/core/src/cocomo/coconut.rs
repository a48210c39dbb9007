//! COCONUT local calibration: a constricting random search over `(a, b)`.
//!
//! Each level draws `repeats` guesses uniformly from a box around the current
//! best guess, `[a1 - delta_a, a1 + delta_a] x [b1 - delta_b, b1 + delta_b]`,
//! where `(a1, b1)` moves to every improving guess as the level proceeds.
//! The level's best is compared against a fresh sentinel (not against the
//! parent's error), so any valid draw counts as "useful". If a level found
//! something it recurses with both deltas scaled by `constricting`; the
//! search stops when a level finds nothing or `depth` levels have run.
//!
//! Draws with `a <= 0` or `b <= 0` are rejected and still use up one of the
//! level's `repeats`. The returned parameters are the lowest-error point seen
//! on the search path, the starting point included.

use rand::Rng as _;

use super::assess;
use crate::error::{Error, Result};
use crate::model::{CalibrationParams, Dataset, TuningTable};
use crate::rng::rng;

const SENTINEL: f64 = 1e32;

#[derive(Debug, Clone, PartialEq)]
pub struct CoconutConfig {
    pub initial_a: f64,
    pub initial_b: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub depth: usize,
    pub constricting: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for CoconutConfig {
    fn default() -> Self {
        CoconutConfig {
            initial_a: 10.0,
            initial_b: 1.0,
            delta_a: 10.0,
            delta_b: 0.5,
            depth: 10,
            constricting: 0.66,
            repeats: 20,
            seed: 0,
        }
    }
}

impl CoconutConfig {
    pub fn with_seed(seed: u64) -> Self {
        CoconutConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::InvalidConfig("coconut repeats must be >= 1".into()));
        }
        if !(self.constricting > 0.0 && self.constricting < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "coconut constricting must lie in (0,1), got {}",
                self.constricting
            )));
        }
        if !(self.delta_a >= 0.0 && self.delta_b >= 0.0) {
            return Err(Error::InvalidConfig("coconut deltas must be non-negative".into()));
        }
        CalibrationParams::new(self.initial_a, self.initial_b)?;
        Ok(())
    }
}

/// One level of the search.
#[derive(Debug, Clone, PartialEq)]
pub struct CoconutLevel {
    pub delta_a: f64,
    pub delta_b: f64,
    /// Best guess found at this level, if any draw was valid.
    pub best: Option<(CalibrationParams, f64)>,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoconutTrace {
    pub initial_error: f64,
    pub levels: Vec<CoconutLevel>,
    pub result: CalibrationParams,
    pub result_error: f64,
}

pub fn coconut_calibrate(training: &Dataset, cfg: &CoconutConfig, table: &TuningTable) -> Result<CalibrationParams> {
    coconut_calibrate_traced(training, cfg, table).map(|t| t.result)
}

pub fn coconut_calibrate_traced(training: &Dataset, cfg: &CoconutConfig, table: &TuningTable) -> Result<CoconutTrace> {
    if training.is_empty() {
        return Err(Error::EmptyTraining);
    }
    cfg.validate()?;
    let mut rng = rng(cfg.seed);

    let start = CalibrationParams::new(cfg.initial_a, cfg.initial_b)?;
    let initial_error = assess(training, start, table)?;
    let mut incumbent = (start, initial_error);
    let (mut a, mut b) = (cfg.initial_a, cfg.initial_b);
    let mut levels = Vec::new();

    for level in 0..cfg.depth {
        // powi rather than repeated multiplication, so the live range is
        // exactly constricting^level of the initial one
        let shrink = cfg.constricting.powi(level as i32);
        let delta_a = cfg.delta_a * shrink;
        let delta_b = cfg.delta_b * shrink;

        let (mut a1, mut b1, mut least) = (a, b, SENTINEL);
        let mut useful = false;
        let mut rejected = 0;
        let mut best = None;
        for _ in 0..cfg.repeats {
            let a_guess = a1 - delta_a + 2.0 * delta_a * rng.random::<f64>();
            let b_guess = b1 - delta_b + 2.0 * delta_b * rng.random::<f64>();
            let Ok(guess) = CalibrationParams::new(a_guess, b_guess) else {
                rejected += 1;
                continue;
            };
            let error = assess(training, guess, table)?;
            if error < least {
                useful = true;
                a1 = a_guess;
                b1 = b_guess;
                least = error;
                best = Some((guess, error));
            }
        }
        levels.push(CoconutLevel { delta_a, delta_b, best, rejected });

        if !useful {
            break;
        }
        if least < incumbent.1 {
            incumbent = (CalibrationParams::new(a1, b1)?, least);
        }
        a = a1;
        b = b1;
    }

    Ok(CoconutTrace { initial_error, levels, result: incumbent.0, result_error: incumbent.1 })
}
