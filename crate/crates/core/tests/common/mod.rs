#![allow(dead_code)]

use std::sync::{Arc, Mutex};

use estbench::estimators::{Estimator, FitContext, FittedModel, Registry};
use estbench::model::{Attribute, Dataset, Project, RatingLevel, Ratings};
use estbench::Result;

pub fn project(id: &str, ratings: &[(Attribute, i64)], kloc: f64, effort: f64) -> Project {
    let mut r = Ratings::nominal();
    for (a, l) in ratings {
        r.set(*a, RatingLevel::new(*l).unwrap());
    }
    Project::new(id, r, kloc, Some(effort))
}

/// Six rows varying in cplx, rely, pcap and kloc.
pub fn knear_fixture() -> Dataset {
    use Attribute::*;
    Dataset::new(
        "knear-fixture",
        vec![
            project("a", &[(Cplx, 2), (Rely, 3), (Pcap, 4)], 10.0, 40.0),
            project("b", &[(Cplx, 5), (Rely, 4), (Pcap, 2)], 55.0, 400.0),
            project("c", &[(Cplx, 3), (Rely, 3), (Pcap, 3)], 20.0, 90.0),
            project("d", &[(Cplx, 4), (Rely, 5), (Pcap, 3)], 80.0, 700.0),
            project("e", &[(Cplx, 6), (Rely, 2), (Pcap, 5)], 30.0, 260.0),
            project("f", &[(Cplx, 1), (Rely, 1), (Pcap, 1)], 5.0, 12.0),
        ],
    )
    .unwrap()
}

pub fn knear_queries() -> Vec<Project> {
    use Attribute::*;
    vec![
        project("q1", &[(Cplx, 3), (Rely, 4), (Pcap, 3)], 25.0, 1.0),
        project("q2", &[(Cplx, 6), (Rely, 6), (Pcap, 1)], 100.0, 1.0),
        project("q3", &[(Cplx, 2), (Rely, 2), (Pcap, 2)], 8.0, 1.0),
        project("q4", &[(Cplx, 5), (Rely, 4), (Pcap, 2)], 55.0, 1.0),
    ]
}

/// Eight rows for tree growth; effort mostly follows cplx and kloc.
pub fn cart_fixture() -> Dataset {
    use Attribute::*;
    Dataset::new(
        "cart-fixture",
        vec![
            project("a", &[(Cplx, 2), (Time, 3)], 10.0, 20.0),
            project("b", &[(Cplx, 2), (Time, 4)], 12.0, 26.0),
            project("c", &[(Cplx, 3), (Time, 3)], 40.0, 80.0),
            project("d", &[(Cplx, 3), (Time, 5)], 45.0, 95.0),
            project("e", &[(Cplx, 5), (Time, 4)], 50.0, 300.0),
            project("f", &[(Cplx, 5), (Time, 6)], 90.0, 420.0),
            project("g", &[(Cplx, 6), (Time, 6)], 120.0, 610.0),
            project("h", &[(Cplx, 4), (Time, 3)], 30.0, 150.0),
        ],
    )
    .unwrap()
}

/// The 23 raw features, computed here rather than through the library.
pub fn raw_features(p: &Project) -> Vec<f64> {
    let mut v: Vec<f64> = Attribute::ALL.iter().map(|a| p.ratings.get(*a).map_or(3.0, |l| l.value() as f64)).collect();
    v.push(p.kloc);
    v
}

/// Brute-force k nearest neighbors: every training distance computed,
/// sorted stably, the first `k` combined with rank weights k, k-1, .., 1.
pub fn knear_oracle(training: &Dataset, query: &Project, k: usize, kloc_only: bool) -> f64 {
    let rows: Vec<Vec<f64>> = training.projects().iter().map(raw_features).collect();
    let d = rows[0].len();
    let lo: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let norm = |x: &[f64]| -> Vec<f64> {
        (0..d).map(|j| if hi[j] > lo[j] { (x[j] - lo[j]) / (hi[j] - lo[j]) } else { 0.0 }).collect()
    };
    let q = norm(&raw_features(query));
    let mut scored: Vec<(f64, f64)> = rows
        .iter()
        .zip(training.projects())
        .map(|(r, p)| {
            let x = norm(r);
            let mut s = 0.0;
            for j in 0..d {
                let w = if kloc_only && j != d - 1 { 0.0 } else { 1.0 };
                s += w * (q[j] - x[j]) * (q[j] - x[j]);
            }
            (s.sqrt(), p.effort.unwrap())
        })
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, (_, e)) in scored.iter().take(k).enumerate() {
        let w = (k - i) as f64;
        num += w * e;
        den += w;
    }
    num / den
}

fn pop_var(ys: &[f64]) -> f64 {
    let m = ys.iter().sum::<f64>() / ys.len() as f64;
    ys.iter().map(|y| (y - m) * (y - m)).sum::<f64>() / ys.len() as f64
}

pub enum OracleTree {
    Leaf(f64),
    Split(usize, f64, Box<OracleTree>, Box<OracleTree>),
}

/// Exhaustive split search: every feature, every midpoint between two
/// distinct observed values, both sides at least `min_leaf`.
pub fn cart_oracle(rows: &[(Vec<f64>, f64)], min_leaf: usize) -> OracleTree {
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let parent = pop_var(&ys);
    if parent == 0.0 {
        return OracleTree::Leaf(mean);
    }
    let mut best: Option<(f64, usize, f64)> = None;
    for j in 0..rows[0].0.len() {
        let mut vals: Vec<f64> = rows.iter().map(|r| r.0[j]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.dedup();
        for t in vals.windows(2).map(|w| (w[0] + w[1]) / 2.0) {
            let l: Vec<f64> = rows.iter().filter(|r| r.0[j] <= t).map(|r| r.1).collect();
            let r: Vec<f64> = rows.iter().filter(|r| r.0[j] > t).map(|r| r.1).collect();
            if l.len() < min_leaf || r.len() < min_leaf {
                continue;
            }
            let score = (l.len() as f64 * pop_var(&l) + r.len() as f64 * pop_var(&r)) / rows.len() as f64;
            if score < parent && best.is_none_or(|b| score < b.0) {
                best = Some((score, j, t));
            }
        }
    }
    match best {
        None => OracleTree::Leaf(mean),
        Some((_, j, t)) => {
            let l: Vec<_> = rows.iter().filter(|r| r.0[j] <= t).cloned().collect();
            let r: Vec<_> = rows.iter().filter(|r| r.0[j] > t).cloned().collect();
            OracleTree::Split(j, t, Box::new(cart_oracle(&l, min_leaf)), Box::new(cart_oracle(&r, min_leaf)))
        }
    }
}

pub fn oracle_predict(tree: &OracleTree, x: &[f64]) -> f64 {
    match tree {
        OracleTree::Leaf(v) => *v,
        OracleTree::Split(j, t, l, r) => {
            if x[*j] <= *t {
                oracle_predict(l, x)
            } else {
                oracle_predict(r, x)
            }
        }
    }
}

pub fn cart_rows(d: &Dataset) -> Vec<(Vec<f64>, f64)> {
    d.projects().iter().map(|p| (raw_features(p), p.effort.unwrap())).collect()
}

/// The five treatments of the Scott-Knott worked example.
pub fn rx_lists() -> Vec<(&'static str, Vec<f64>)> {
    vec![
        ("rx1", vec![0.34, 0.49, 0.51, 0.6]),
        ("rx2", vec![0.6, 0.7, 0.8, 0.9]),
        ("rx3", vec![0.15, 0.25, 0.4, 0.35]),
        ("rx4", vec![0.6, 0.7, 0.8, 0.9]),
        ("rx5", vec![0.1, 0.2, 0.3, 0.4]),
    ]
}

/// Training ids, training efforts and query effort, one entry per estimate.
pub type Seen = Arc<Mutex<Vec<(Vec<String>, Vec<f64>, Option<f64>)>>>;

pub struct Spy(Seen);
pub struct SpyModel {
    seen: Seen,
    ids: Vec<String>,
    efforts: Vec<f64>,
}

impl Estimator for Spy {
    fn fit(&self, training: &Dataset, _: &FitContext) -> Result<Box<dyn FittedModel>> {
        Ok(Box::new(SpyModel {
            seen: self.0.clone(),
            ids: training.projects().iter().map(|p| p.id.clone()).collect(),
            efforts: training.efforts(),
        }))
    }
}

impl FittedModel for SpyModel {
    fn estimate(&self, query: &Project) -> Result<f64> {
        self.seen.lock().unwrap().push((self.ids.clone(), self.efforts.clone(), query.effort));
        Ok(self.efforts.iter().sum::<f64>() / self.efforts.len() as f64)
    }
}

/// The default registry plus a `spy` kind that records what each fit saw.
pub fn spy_registry() -> (Registry, Seen) {
    let seen: Seen = Arc::default();
    let mut registry = Registry::default();
    let handle = seen.clone();
    registry.register("spy", move |_| Ok(Box::new(Spy(handle.clone())) as Box<dyn Estimator>));
    (registry, seen)
}
