//! Effort estimators behind one fit/estimate contract.
//!
//! An [`Estimator`] is configured from an [`EstimatorSpec`] and turns a
//! training set into a [`FittedModel`]. Fitted models are immutable, so one
//! model may serve any number of concurrent estimates. Estimators are looked
//! up by kind name in a [`Registry`].

pub mod analogy;
pub mod atlm;
pub mod cart;
pub mod distance;
pub mod parametric;
pub mod peeking;
pub mod registry;
pub mod teak;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use analogy::{knear_estimate, loc_estimate, triangle_combine};
pub use distance::{distance, DistanceWeights, Normalizer};
pub use registry::Registry;

use crate::cocomo::ReductionSpec;
use crate::error::{Error, Result};
use crate::model::{Attribute, Dataset, Project, TuningTable, ATTRIBUTE_COUNT};

/// 22 attribute levels followed by kloc.
pub const FEATURE_COUNT: usize = ATTRIBUTE_COUNT + 1;
pub const KLOC_FEATURE: usize = ATTRIBUTE_COUNT;

pub fn features(p: &Project) -> [f64; FEATURE_COUNT] {
    let mut out = [0.0; FEATURE_COUNT];
    for attr in Attribute::ALL {
        out[attr.index()] = p.level(attr).value() as f64;
    }
    out[KLOC_FEATURE] = p.kloc;
    out
}

pub fn feature_name(i: usize) -> &'static str {
    if i == KLOC_FEATURE {
        "kloc"
    } else {
        Attribute::ALL[i].mnemonic()
    }
}

/// Everything a fit may depend on besides the training data.
#[derive(Debug, Clone, PartialEq)]
pub struct FitContext {
    pub seed: u64,
    /// Tuning table for the parametric learners, already range-reduced when
    /// the learner asks for it.
    pub table: TuningTable,
}

impl FitContext {
    pub fn new(seed: u64) -> Self {
        FitContext { seed, table: TuningTable::coc2000() }
    }
}

impl Default for FitContext {
    fn default() -> Self {
        FitContext::new(0)
    }
}

pub trait FittedModel: Send + Sync {
    fn estimate(&self, project: &Project) -> Result<f64>;

    /// Set when the fit had to fall back (rank-deficient regression, fully
    /// pruned cluster tree).
    fn degenerate(&self) -> bool {
        false
    }
}

pub trait Estimator: Send + Sync {
    fn fit(&self, training: &Dataset, ctx: &FitContext) -> Result<Box<dyn FittedModel>>;
}

/// A learner as named on the command line: `kind[n][:key=value...][@reduction]`.
///
/// `knear3`, `loc1`, `cart:min_leaf=2`, `cocomo2@3pt`, `coconut@c0.5+r8`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSpec {
    pub kind: String,
    pub neighbors: Option<usize>,
    pub hyper: BTreeMap<String, f64>,
    pub reduction: ReductionSpec,
}

impl EstimatorSpec {
    pub fn new(kind: impl Into<String>) -> Self {
        EstimatorSpec {
            kind: kind.into(),
            neighbors: None,
            hyper: BTreeMap::new(),
            reduction: ReductionSpec::default(),
        }
    }

    pub fn with_neighbors(mut self, n: usize) -> Self {
        self.neighbors = Some(n);
        self
    }

    pub fn with_hyper(mut self, key: &str, value: f64) -> Self {
        self.hyper.insert(key.to_string(), value);
        self
    }

    pub fn with_reduction(mut self, reduction: ReductionSpec) -> Self {
        self.reduction = reduction;
        self
    }

    pub fn hyper_or(&self, key: &str, default: f64) -> f64 {
        self.hyper.get(key).copied().unwrap_or(default)
    }

    /// Rejects hyperparameters outside `allowed`.
    pub fn check_hyper(&self, allowed: &[&str]) -> Result<()> {
        match self.hyper.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::BadLearnerSpec {
                spec: self.to_string(),
                reason: format!("unknown hyperparameter `{k}` for {}", self.kind),
            }),
            None => Ok(()),
        }
    }

    /// Name used in reports: `COCOMO-II`, `loc(3)`, `CART:c0.5,r8`.
    pub fn display_name(&self) -> String {
        let mut name = match self.kind.as_str() {
            "cocomo2" => "COCOMO-II".to_string(),
            "coconut" => "COCONUT".to_string(),
            "loc" => format!("loc({})", self.neighbors.unwrap_or(1)),
            "knear" => format!("Knear({})", self.neighbors.unwrap_or(1)),
            "cart" => "CART".to_string(),
            "atlm" => "ATLM".to_string(),
            "teak" => "TEAK".to_string(),
            "peeking2" => "PEEKING2".to_string(),
            other => other.to_string(),
        };
        for (k, v) in &self.hyper {
            name.push_str(&format!(" {k}={v}"));
        }
        if !self.reduction.is_identity() {
            name.push(':');
            name.push_str(&self.reduction.to_string());
        }
        name
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        if let Some(n) = self.neighbors {
            write!(f, "{n}")?;
        }
        for (k, v) in &self.hyper {
            write!(f, ":{k}={v}")?;
        }
        if !self.reduction.is_identity() {
            let reduction = self.reduction.to_string().replace(',', "+");
            write!(f, "@{reduction}")?;
        }
        Ok(())
    }
}

impl FromStr for EstimatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadLearnerSpec { spec: s.to_string(), reason: reason.to_string() };
        let s_trim = s.trim();
        let (head, reduction) = match s_trim.split_once('@') {
            Some((h, r)) => (h, Some(r)),
            None => (s_trim, None),
        };
        let mut parts = head.split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        // "cocomo2" keeps its digit; other kinds take a trailing neighbor count
        let (kind, neighbors) = if name == "cocomo2" || name == "peeking2" {
            (name, None)
        } else {
            let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
            let (k, n) = name.split_at(split);
            let neighbors =
                if n.is_empty() { None } else { Some(n.parse::<usize>().map_err(|_| bad("bad neighbor count"))?) };
            (k.to_string(), neighbors)
        };
        if kind.is_empty() {
            return Err(bad("missing learner kind"));
        }
        if neighbors == Some(0) {
            return Err(bad("neighbor count must be >= 1"));
        }
        let mut spec = EstimatorSpec { kind, neighbors, hyper: BTreeMap::new(), reduction: ReductionSpec::default() };
        for kv in parts {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("hyperparameters are written key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("hyperparameter value is not a number"))?;
            spec.hyper.insert(k.trim().to_string(), v);
        }
        if let Some(r) = reduction {
            spec.reduction = r.parse()?;
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocomo::{ColumnFraction, RangeMode, RowLimit};

    #[test]
    fn parses_learner_tokens() {
        let s: EstimatorSpec = "knear3".parse().unwrap();
        assert_eq!((s.kind.as_str(), s.neighbors), ("knear", Some(3)));
        let s: EstimatorSpec = "cocomo2".parse().unwrap();
        assert_eq!((s.kind.as_str(), s.neighbors), ("cocomo2", None));
        let s: EstimatorSpec = "cart:min_leaf=2@c0.5+r8".parse().unwrap();
        assert_eq!(s.hyper["min_leaf"], 2.0);
        assert_eq!(s.reduction.column_fraction, ColumnFraction::Half);
        assert_eq!(s.reduction.row_limit, RowLimit::First(8));
        let s: EstimatorSpec = "COCONUT@3pt".parse().unwrap();
        assert_eq!(s.reduction.range_mode, RangeMode::ThreePoint);
        assert_eq!(s.display_name(), "COCONUT:3pt");
    }

    #[test]
    fn display_round_trips() {
        for token in ["loc1", "knear3", "cart:min_leaf=2", "coconut@c0.25+r4+3pt", "peeking2", "teak:alpha=1.5"] {
            let s: EstimatorSpec = token.parse().unwrap();
            assert_eq!(s.to_string().parse::<EstimatorSpec>().unwrap(), s, "{token}");
        }
    }

    #[test]
    fn rejects_bad_tokens() {
        for token in ["", "knear0", "cart:min_leaf", "cart:min_leaf=x", "loc1@c0.3"] {
            assert!(token.parse::<EstimatorSpec>().is_err(), "{token}");
        }
    }

    #[test]
    fn display_names() {
        let names: Vec<String> = ["cocomo2", "loc3", "knear1", "atlm"]
            .iter()
            .map(|t| t.parse::<EstimatorSpec>().unwrap().display_name())
            .collect();
        assert_eq!(names, ["COCOMO-II", "loc(3)", "Knear(1)", "ATLM"]);
    }
}
