//! Two-sample bootstrap test for a difference in means.
//!
//! The null hypothesis is that both samples come from populations sharing
//! the pooled mean: each sample is shifted to the pooled mean, each shifted
//! sample is resampled with replacement, and the absolute difference of the
//! resampled means builds the null distribution (Efron & Tibshirani's
//! equal-means test). The samples differ when the observed absolute
//! difference exceeds the `confidence` quantile of that distribution.

use rand::Rng as _;

use super::descriptive::mean;
use crate::error::{Error, Result};
use crate::rng::{rng, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct StatConfig {
    pub bootstrap_resamples: usize,
    pub confidence: f64,
    pub a12_threshold: f64,
    pub seed: u64,
}

impl Default for StatConfig {
    fn default() -> Self {
        StatConfig { bootstrap_resamples: 1000, confidence: 0.99, a12_threshold: 0.6, seed: 1 }
    }
}

impl StatConfig {
    pub fn with_seed(seed: u64) -> Self {
        StatConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidConfig(format!("confidence must lie in (0,1), got {}", self.confidence)));
        }
        if !(0.5..=1.0).contains(&self.a12_threshold) {
            return Err(Error::InvalidConfig(format!("a12 threshold must lie in [0.5,1], got {}", self.a12_threshold)));
        }
        if self.bootstrap_resamples == 0 {
            return Err(Error::InvalidConfig("bootstrap needs at least one resample".into()));
        }
        Ok(())
    }
}

fn resampled_mean(xs: &[f64], rng: &mut Rng) -> f64 {
    let n = xs.len();
    (0..n).map(|_| xs[rng.random_range(0..n)]).sum::<f64>() / n as f64
}

pub fn bootstrap_different(m: &[f64], n: &[f64], cfg: &StatConfig) -> bool {
    if m.is_empty() || n.is_empty() {
        return false;
    }
    let (mu_m, mu_n) = (mean(m), mean(n));
    let observed = (mu_m - mu_n).abs();
    if observed == 0.0 {
        return false;
    }
    let pooled = (mu_m * m.len() as f64 + mu_n * n.len() as f64) / (m.len() + n.len()) as f64;
    let m_hat: Vec<f64> = m.iter().map(|x| x - mu_m + pooled).collect();
    let n_hat: Vec<f64> = n.iter().map(|x| x - mu_n + pooled).collect();

    let mut rng = rng(cfg.seed);
    let mut null: Vec<f64> = (0..cfg.bootstrap_resamples)
        .map(|_| (resampled_mean(&m_hat, &mut rng) - resampled_mean(&n_hat, &mut rng)).abs())
        .collect();
    null.sort_by(f64::total_cmp);
    let k = ((cfg.confidence * null.len() as f64).ceil() as usize).clamp(1, null.len());
    observed > null[k - 1]
}
