//! Simplifications of the model inputs: fewer rating levels (ranges), fewer
//! training projects (rows) and fewer attributes (columns).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::model::{Attribute, Dataset, Project, TuningTable, ATTRIBUTE_COUNT};
use crate::rng::rng;
use crate::stats::variance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeMode {
    #[default]
    SixPoint,
    /// below / nominal / above
    ThreePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowLimit {
    #[default]
    All,
    First(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnFraction {
    Quarter,
    Half,
    #[default]
    All,
}

impl ColumnFraction {
    pub fn value(self) -> f64 {
        match self {
            ColumnFraction::Quarter => 0.25,
            ColumnFraction::Half => 0.5,
            ColumnFraction::All => 1.0,
        }
    }
}

/// Which reductions to apply for one learner in the rig.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReductionSpec {
    pub range_mode: RangeMode,
    pub row_limit: RowLimit,
    pub column_fraction: ColumnFraction,
}

impl ReductionSpec {
    pub fn is_identity(&self) -> bool {
        *self == ReductionSpec::default()
    }
}

impl fmt::Display for ReductionSpec {
    /// `c0.5,r8,3pt` style; empty for the identity reduction.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.column_fraction != ColumnFraction::All {
            parts.push(format!("c{}", self.column_fraction.value()));
        }
        if let RowLimit::First(n) = self.row_limit {
            parts.push(format!("r{n}"));
        }
        if self.range_mode == RangeMode::ThreePoint {
            parts.push("3pt".to_string());
        }
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ReductionSpec {
    type Err = Error;

    /// Tokens separated by `+` or `,`: `c0.25|c0.5|c1`, `r4|r8|rall`, `3pt|6pt`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidConfig(format!("reduction `{s}`: {reason}"));
        let mut spec = ReductionSpec::default();
        for token in s.split(['+', ',']).map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "3pt" | "three" => spec.range_mode = RangeMode::ThreePoint,
                "6pt" | "six" => spec.range_mode = RangeMode::SixPoint,
                "c0.25" => spec.column_fraction = ColumnFraction::Quarter,
                "c0.5" => spec.column_fraction = ColumnFraction::Half,
                "c1" | "c1.0" => spec.column_fraction = ColumnFraction::All,
                "rall" => spec.row_limit = RowLimit::All,
                t if t.starts_with('r') => {
                    let n: usize = t[1..].parse().map_err(|_| bad(format!("bad row limit `{t}`")))?;
                    if n == 0 {
                        return Err(bad("row limit must be >= 1".into()));
                    }
                    spec.row_limit = RowLimit::First(n);
                }
                t => return Err(bad(format!("unknown token `{t}`"))),
            }
        }
        Ok(spec)
    }
}

/// Collapses each row to below / nominal / above: every defined slot below
/// nominal becomes the mean of the defined below-nominal slots, likewise
/// above. Nominal and undefined slots are left alone.
pub fn reduce_ranges(table: &TuningTable) -> TuningTable {
    let mut out = table.clone();
    for attr in Attribute::ALL {
        let row = out.row_mut(attr);
        for side in [0..2usize, 3..6usize] {
            let defined: Vec<f64> = row[side.clone()].iter().flatten().copied().collect();
            if defined.is_empty() {
                continue;
            }
            let mean = defined.iter().sum::<f64>() / defined.len() as f64;
            for slot in &mut row[side] {
                if slot.is_some() {
                    *slot = Some(mean);
                }
            }
        }
    }
    out
}

/// Seeded shuffle, then the first `min(limit, len)` projects.
pub fn reduce_rows(training: &Dataset, limit: usize, seed: u64) -> Result<Dataset> {
    if limit < 1 {
        return Err(Error::InvalidConfig("row limit must be >= 1".into()));
    }
    let mut projects = training.projects().to_vec();
    projects.shuffle(&mut rng(seed));
    projects.truncate(limit);
    Ok(Dataset::from_parts(training.name().to_string(), projects))
}

/// Expected within-group effort variance for every attribute:
/// `E(a) = sum over distinct levels x of (n_x / N) * var(efforts with level x)`,
/// population variance. Unrated entries count as nominal.
pub fn column_scores(training: &Dataset) -> Vec<(Attribute, f64)> {
    let efforts = training.efforts();
    let total = efforts.len() as f64;
    Attribute::ALL
        .into_iter()
        .map(|attr| {
            let mut groups: [Vec<f64>; 6] = Default::default();
            for (p, e) in training.projects().iter().zip(&efforts) {
                groups[p.level(attr).slot()].push(*e);
            }
            let score = groups.iter().filter(|g| !g.is_empty()).map(|g| g.len() as f64 / total * variance(g)).sum();
            (attr, score)
        })
        .collect()
}

/// All 22 attributes, best (lowest `E`) first; ties in mnemonic order.
/// KLOC is never ranked.
pub fn rank_columns(training: &Dataset) -> Vec<Attribute> {
    let mut scored = column_scores(training);
    scored.sort_by(|(a, ea), (b, eb)| ea.total_cmp(eb).then_with(|| a.mnemonic().cmp(b.mnemonic())));
    scored.into_iter().map(|(a, _)| a).collect()
}

/// The `ceil(fraction * 22)` best attributes for this training data.
pub fn select_columns(training: &Dataset, fraction: f64) -> Result<Vec<Attribute>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!("column fraction must lie in (0,1], got {fraction}")));
    }
    let keep = (fraction * ATTRIBUTE_COUNT as f64).ceil() as usize;
    let mut ranked = rank_columns(training);
    ranked.truncate(keep);
    Ok(ranked)
}

/// Copy of `project` with every attribute outside `keep` unrated.
pub fn restrict_project(project: &Project, keep: &[Attribute]) -> Project {
    let mut out = project.clone();
    for attr in Attribute::ALL {
        if !keep.contains(&attr) {
            out.ratings.clear(attr);
        }
    }
    out
}

pub fn restrict_dataset(data: &Dataset, keep: &[Attribute]) -> Dataset {
    let projects = data.projects().iter().map(|p| restrict_project(p, keep)).collect();
    Dataset::from_parts(data.name().to_string(), projects)
}

/// Keeps the lowest-`E` attributes (plus KLOC, which is never removed).
/// Removed attributes become unrated and so behave as nominal downstream.
pub fn reduce_columns(training: &Dataset, fraction: f64) -> Result<Dataset> {
    if fraction == 1.0 {
        return Ok(training.clone());
    }
    let keep = select_columns(training, fraction)?;
    Ok(restrict_dataset(training, &keep))
}
