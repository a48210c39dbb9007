use proptest::prelude::*;

use estbench::cocomo::{
    assess, cocomo2_estimate, coconut_calibrate_traced, effort_bounds, effort_bounds_through, rank_columns,
    reduce_ranges, CoconutConfig,
};
use estbench::estimators::cart::Cart;
use estbench::estimators::{distance, features, triangle_combine, DistanceWeights, Estimator, FitContext, Registry};
use estbench::io::{parse_dataset, write_dataset};
use estbench::model::{Attribute, CalibrationParams, Dataset, Project, RatingLevel, Ratings, TuningTable};
use estbench::stats::{a12, a12_magnitude, scott_knott, standardized_error, StatConfig, TreatmentResult};

fn ratings(max_level: i64) -> impl Strategy<Value = Ratings> {
    prop::collection::vec(prop::option::weighted(0.9, 1..=max_level), 22).prop_map(|levels| {
        let mut r = Ratings::default();
        for (a, l) in Attribute::ALL.iter().zip(levels) {
            if let Some(l) = l {
                r.set(*a, RatingLevel::new(l).unwrap());
            }
        }
        r
    })
}

fn project(max_level: i64) -> impl Strategy<Value = Project> {
    (ratings(max_level), 0.05f64..2000.0, prop::option::of(1.0f64..5000.0))
        .prop_map(|(r, kloc, effort)| Project::new("p", r, kloc, effort))
}

fn dataset(min: usize, max: usize) -> impl Strategy<Value = Dataset> {
    prop::collection::vec((ratings(6), 1.0f64..500.0, 1.0f64..5000.0), min..=max).prop_map(|rows| {
        let projects = rows
            .into_iter()
            .enumerate()
            .map(|(i, (r, kloc, effort))| Project::new(format!("p{i}"), r, kloc, Some(effort)))
            .collect();
        Dataset::new("prop", projects).unwrap()
    })
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..100.0, 1..12)
}

fn treatments() -> impl Strategy<Value = Vec<TreatmentResult>> {
    prop::collection::vec(prop::collection::vec(0.0f64..100.0, 3..8), 1..6).prop_map(|lists| {
        lists.into_iter().enumerate().map(|(i, e)| TreatmentResult::new(format!("t{i}"), e).unwrap()).collect()
    })
}

fn quick_stats(seed: u64) -> StatConfig {
    StatConfig { bootstrap_resamples: 200, ..StatConfig::with_seed(seed) }
}

proptest! {
    #[test]
    fn a12_is_symmetric(m in sample(), n in sample()) {
        prop_assert!((a12(&m, &n) + a12(&n, &m) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn a12_ignores_monotone_transforms(m in sample(), n in sample()) {
        let f = |xs: &[f64]| xs.iter().map(|x| (x + 1.0).ln() * 3.0 + x.powi(3)).collect::<Vec<_>>();
        prop_assert_eq!(a12(&m, &n), a12(&f(&m), &f(&n)));
    }

    #[test]
    fn scott_knott_ranks_are_contiguous(ts in treatments(), seed in any::<u64>()) {
        let groups = scott_knott(&ts, &quick_stats(seed)).unwrap();
        for (i, g) in groups.iter().enumerate() {
            prop_assert_eq!(g.rank, i + 1);
        }
        let got: Vec<String> = groups.iter().flat_map(|g| g.members.iter().map(|m| m.name.clone())).collect();
        let mut sorted = ts.clone();
        sorted.sort_by(|a, b| a.median().total_cmp(&b.median()));
        let want: Vec<String> = sorted.iter().map(|t| t.name.clone()).collect();
        let mut a = got.clone();
        let mut b = want.clone();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        let medians: Vec<f64> = groups.iter().flat_map(|g| g.members.iter().map(|m| m.median)).collect();
        prop_assert!(medians.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn splits_need_a_large_effect(ts in treatments(), threshold in 0.5f64..=1.0, seed in any::<u64>()) {
        let cfg = StatConfig { a12_threshold: threshold, ..quick_stats(seed) };
        let groups = scott_knott(&ts, &cfg).unwrap();
        if groups.len() > 1 {
            // the top-level cut sits at one of the group boundaries
            let pooled: Vec<Vec<f64>> = groups
                .iter()
                .map(|g| {
                    g.members
                        .iter()
                        .flat_map(|m| ts.iter().find(|t| t.name == m.name).unwrap().errors.clone())
                        .collect()
                })
                .collect();
            let gated = (1..pooled.len()).any(|k| {
                let left: Vec<f64> = pooled[..k].concat();
                let right: Vec<f64> = pooled[k..].concat();
                a12_magnitude(&left, &right) >= threshold
            });
            prop_assert!(gated);
        }
    }

    #[test]
    fn se_is_scale_invariant(
        pairs in prop::collection::vec((1.0f64..1000.0, 1.0f64..1000.0), 1..10),
        baseline in prop::collection::vec(1.0f64..1000.0, 2..10),
        c in 0.01f64..100.0,
        seed in any::<u64>(),
    ) {
        let scaled: Vec<(f64, f64)> = pairs.iter().map(|(a, p)| (a * c, p * c)).collect();
        let base2: Vec<f64> = baseline.iter().map(|b| b * c).collect();
        match (standardized_error(&pairs, &baseline, seed), standardized_error(&scaled, &base2, seed)) {
            (Ok(x), Ok(y)) => prop_assert!((x - y).abs() <= 1e-6 * x.max(1.0), "{} {}", x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "{:?} {:?}", x, y),
        }
    }

    #[test]
    fn triangle_is_scale_equivariant(xs in prop::collection::vec(0.1f64..1e4, 1..6), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = xs.iter().map(|x| x * c).collect();
        let a = triangle_combine(&scaled).unwrap();
        let b = c * triangle_combine(&xs).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b.abs());
    }

    #[test]
    fn distance_is_symmetric(d in dataset(2, 6), i in 0usize..6, j in 0usize..6) {
        let (x, y) = (&d.projects()[i % d.len()], &d.projects()[j % d.len()]);
        let w = DistanceWeights::uniform();
        prop_assert_eq!(distance(x, y, &d, &w), distance(y, x, &d, &w));
        prop_assert_eq!(distance(x, x, &d, &w), 0.0);
    }

    #[test]
    fn dataset_csv_round_trip(d in dataset(1, 8)) {
        let text = write_dataset(&d).unwrap();
        prop_assert_eq!(parse_dataset(&text, "prop").unwrap(), d);
    }

    #[test]
    fn rank_columns_is_a_permutation(d in dataset(1, 10)) {
        let mut ranked = rank_columns(&d);
        prop_assert_eq!(ranked.len(), 22);
        ranked.sort_by_key(|a| a.index());
        prop_assert_eq!(ranked, Attribute::ALL.to_vec());
    }

    #[test]
    fn reduce_ranges_is_idempotent(rows in prop::collection::vec(prop::collection::vec(prop::option::of(0.5f64..8.0), 6), 22)) {
        let mut table = [[None; 6]; 22];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                table[i][j] = *v;
            }
            table[i][2] = Some(if Attribute::ALL[i].index() < 5 { 3.0 } else { 1.0 });
        }
        let Ok(t) = TuningTable::new(table) else { return Ok(()) };
        let once = reduce_ranges(&t);
        prop_assert_eq!(reduce_ranges(&once), once);
    }

    #[test]
    fn estimators_stay_in_range(d in dataset(3, 9), q in project(6), seed in any::<u64>()) {
        let efforts = d.efforts();
        let lo = efforts.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = efforts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let registry = Registry::default();
        let ctx = FitContext::new(seed);
        for token in ["loc1", "loc3", "knear1", "knear3", "teak", "peeking2"] {
            let model = registry.build(&token.parse().unwrap()).unwrap().fit(&d, &ctx).unwrap();
            let e = model.estimate(&q).unwrap();
            prop_assert!(e > 0.0 && e >= lo * (1.0 - 1e-12) && e <= hi * (1.0 + 1e-12), "{} {}", token, e);
            prop_assert_eq!(e.to_bits(), model.estimate(&q).unwrap().to_bits());
        }
        let cart = Cart { min_leaf: 1 };
        let tree = cart.grow(&d).unwrap();
        let leaves = tree.leaves();
        let e = cart.fit(&d, &ctx).unwrap().estimate(&q).unwrap();
        prop_assert!(leaves.contains(&e));
        for token in ["atlm", "cocomo2", "coconut:repeats=5:depth=3"] {
            let model = registry.build(&token.parse().unwrap()).unwrap().fit(&d, &ctx).unwrap();
            let e = model.estimate(&q).unwrap();
            prop_assert_eq!(e.to_bits(), model.estimate(&q).unwrap().to_bits());
        }
    }

    #[test]
    fn knear1_finds_itself(d in dataset(1, 8), i in 0usize..8) {
        let p = &d.projects()[i % d.len()];
        let model = Registry::default().build(&"knear1".parse().unwrap()).unwrap().fit(&d, &FitContext::default()).unwrap();
        // an earlier exact duplicate wins the tie with the same features
        let first = d.projects().iter().find(|o| features(o) == features(p)).unwrap();
        prop_assert_eq!(model.estimate(p).unwrap(), first.effort.unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coconut_never_degrades(d in dataset(1, 8), seed in any::<u64>(), depth in 0usize..12) {
        let t = TuningTable::coc2000();
        let cfg = CoconutConfig { depth, ..CoconutConfig::with_seed(seed) };
        let trace = coconut_calibrate_traced(&d, &cfg, &t).unwrap();
        let start = assess(&d, CalibrationParams::new(cfg.initial_a, cfg.initial_b).unwrap(), &t).unwrap();
        prop_assert!(assess(&d, trace.result, &t).unwrap() <= start);
        prop_assert!(trace.levels.len() <= depth);
        for (k, level) in trace.levels.iter().enumerate() {
            prop_assert_eq!(level.delta_a, cfg.delta_a * cfg.constricting.powi(k as i32));
            prop_assert_eq!(level.delta_b, cfg.delta_b * cfg.constricting.powi(k as i32));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn estimates_lie_inside_bounds(p in project(6), a in 0.5f64..20.0, b in 0.3f64..1.5) {
        let t = TuningTable::coc2000();
        let params = CalibrationParams::new(a, b).unwrap();
        let e = cocomo2_estimate(&p, params, &t).unwrap();
        let slack = 1e-9;
        let (lo, hi) = effort_bounds_through(&t, params, RatingLevel::EXTRA_HIGH).range(p.kloc);
        prop_assert!(e >= lo * (1.0 - slack) && e <= hi * (1.0 + slack), "{} not in [{}, {}]", e, lo, hi);
        if p.ratings.rated().all(|(_, l)| l != RatingLevel::EXTRA_HIGH) {
            let (lo, hi) = effort_bounds(&t, params).range(p.kloc);
            prop_assert!(e >= lo * (1.0 - slack) && e <= hi * (1.0 + slack), "{} not in [{}, {}]", e, lo, hi);
        }
    }
}
