//! Name-to-constructor lookup for estimators.

use std::collections::BTreeMap;

use super::analogy::NearestNeighbors;
use super::atlm::Atlm;
use super::cart::Cart;
use super::parametric::{Cocomo2, Coconut};
use super::peeking::Peeking2;
use super::teak::Teak;
use super::{Estimator, EstimatorSpec};
use crate::error::{Error, Result};

pub type Factory = Box<dyn Fn(&EstimatorSpec) -> Result<Box<dyn Estimator>> + Send + Sync>;

pub struct Registry {
    factories: BTreeMap<String, Factory>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { factories: BTreeMap::new() }
    }

    pub fn register<F>(&mut self, kind: &str, factory: F)
    where
        F: Fn(&EstimatorSpec) -> Result<Box<dyn Estimator>> + Send + Sync + 'static,
    {
        self.factories.insert(kind.to_string(), Box::new(factory));
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn build(&self, spec: &EstimatorSpec) -> Result<Box<dyn Estimator>> {
        let factory = self.factories.get(&spec.kind).ok_or_else(|| Error::UnknownLearner(spec.kind.clone()))?;
        factory(spec)
    }
}

fn neighbors_only(spec: &EstimatorSpec) -> Result<()> {
    match spec.neighbors {
        Some(_) if !matches!(spec.kind.as_str(), "loc" | "knear") => Err(Error::BadLearnerSpec {
            spec: spec.to_string(),
            reason: format!("{} takes no neighbor count", spec.kind),
        }),
        _ => Ok(()),
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register("loc", |s| Ok(Box::new(NearestNeighbors::from_spec(s)?)));
        r.register("knear", |s| Ok(Box::new(NearestNeighbors::from_spec(s)?)));
        r.register("cart", |s| {
            neighbors_only(s)?;
            Ok(Box::new(Cart::from_spec(s)?))
        });
        r.register("atlm", |s| {
            neighbors_only(s)?;
            Ok(Box::new(Atlm::from_spec(s)?))
        });
        r.register("teak", |s| {
            neighbors_only(s)?;
            Ok(Box::new(Teak::from_spec(s)?))
        });
        r.register("peeking2", |s| {
            neighbors_only(s)?;
            Ok(Box::new(Peeking2::from_spec(s)?))
        });
        r.register("cocomo2", |s| {
            neighbors_only(s)?;
            Ok(Box::new(Cocomo2::from_spec(s)?))
        });
        r.register("coconut", |s| {
            neighbors_only(s)?;
            Ok(Box::new(Coconut::from_spec(s)?))
        });
        r
    }
}
