mod common;

use estbench::io::{parse_report_csv, render_groups, ReportFormat};
use estbench::stats::{
    a12, bootstrap_different, scott_knott, standardized_error, standardized_error_against, RankedGroup, StatConfig,
    TreatmentResult,
};

fn rx_groups() -> Vec<RankedGroup> {
    let treatments: Vec<TreatmentResult> =
        common::rx_lists().into_iter().map(|(n, e)| TreatmentResult::new(n, e).unwrap()).collect();
    scott_knott(&treatments, &StatConfig::default()).unwrap()
}

fn names(g: &RankedGroup) -> Vec<&str> {
    g.members.iter().map(|m| m.name.as_str()).collect()
}

#[test]
fn rx_example_grouping() {
    let groups = rx_groups();
    assert_eq!(groups.len(), 3);
    assert_eq!((groups[0].rank, names(&groups[0])), (1, vec!["rx5", "rx3"]));
    assert_eq!((groups[1].rank, names(&groups[1])), (2, vec!["rx1"]));
    assert_eq!((groups[2].rank, names(&groups[2])), (3, vec!["rx2", "rx4"]));
}

#[test]
fn rx_example_rendered() {
    let groups = rx_groups();
    let text = render_groups(&groups, &[], ReportFormat::Plain).unwrap();
    let medians: Vec<&str> =
        text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split_whitespace().nth(2).unwrap()).collect();
    assert_eq!(medians, ["0.25", "0.3", "0.5", "0.75", "0.75"]);

    let csv = render_groups(&groups, &[], ReportFormat::Csv).unwrap();
    assert_eq!(parse_report_csv(&csv).unwrap(), groups);
}

#[test]
fn a12_examples() {
    assert_eq!(a12(&[3.0, 1.0, 2.0], &[3.0, 1.0, 2.0]), 0.5);
    assert_eq!(a12(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]), 1.0);
    assert_eq!(a12(&[1.0, 2.0], &[1.0, 3.0]), 0.375);
}

#[test]
fn bootstrap_examples() {
    let cfg = StatConfig::with_seed(3);
    let m = [1.0, 5.0, 2.0, 8.0];
    assert!(!bootstrap_different(&m, &m, &cfg));
    assert!(bootstrap_different(&[1.0; 4], &[100.0; 4], &cfg));
}

#[test]
fn se_examples() {
    let baseline = [80.0, 120.0, 100.0, 60.0, 140.0];
    let pairs: Vec<(f64, f64)> = baseline.iter().map(|a| (*a, *a)).collect();
    assert_eq!(standardized_error(&pairs, &baseline, 1).unwrap(), 0.0);

    // guessing the baseline mean scores close to 100
    let guess: Vec<(f64, f64)> = baseline.iter().map(|a| (*a, 100.0)).collect();
    let se = standardized_error(&guess, &baseline, 1).unwrap();
    assert!((se - 100.0).abs() < 10.0, "{se}");
    assert_eq!(standardized_error_against(&guess, 100.0).unwrap(), 100.0);

    assert!(standardized_error_against(&[(100.0, 90.0)], 100.0).is_err());
}

#[test]
fn scott_knott_trivial_cases() {
    let one = TreatmentResult::new("a", vec![1.0, 2.0]).unwrap();
    let groups = scott_knott(std::slice::from_ref(&one), &StatConfig::default()).unwrap();
    assert_eq!(groups.len(), 1);
    let twin = TreatmentResult::new("b", vec![1.0, 2.0]).unwrap();
    let groups = scott_knott(&[one, twin], &StatConfig::default()).unwrap();
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].rank, 1);
}
