//! Rank tables: plain text, CSV and markdown.
//!
//! Every rendering starts with `#` lines giving the configuration. Plain
//! tables round medians and IQRs half-up to integers (two decimals below
//! one); CSV and markdown carry full precision.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rig::ExperimentReport;
use crate::stats::{RankedGroup, RankedMember, TreatmentResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Plain,
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "table" | "plain-table" => Ok(ReportFormat::Plain),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidConfig(format!("unknown report format `{other}`"))),
        }
    }
}

/// Half-up integer at one and above, otherwise up to two decimals.
pub fn format_cell(x: f64) -> String {
    if x.abs() >= 1.0 {
        format!("{}", (x + 0.5).floor())
    } else {
        let s = format!("{:.2}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s.is_empty() || s == "-" {
            "0".to_string()
        } else {
            s.to_string()
        }
    }
}

/// Groups in rank order, members by ascending median.
fn ordered(groups: &[RankedGroup]) -> Vec<(usize, RankedMember)> {
    let mut sorted = groups.to_vec();
    sorted.sort_by_key(|g| g.rank);
    sorted
        .into_iter()
        .flat_map(|g| {
            let mut members = g.members;
            members.sort_by(|a, b| a.median.total_cmp(&b.median));
            members.into_iter().map(move |m| (g.rank, m))
        })
        .collect()
}

pub fn render_groups(groups: &[RankedGroup], header: &[(String, String)], fmt: ReportFormat) -> Result<String> {
    let mut out = String::new();
    for (k, v) in header {
        writeln!(out, "# {k}: {v}").ok();
    }
    let rows = ordered(groups);
    match fmt {
        ReportFormat::Plain => {
            let width = rows.iter().map(|(_, m)| m.name.len()).max().unwrap_or(0).max("treatment".len());
            writeln!(out, "{:>4}  {:<width$}  {:>8}  {:>8}", "rank", "treatment", "median", "IQR").ok();
            for (rank, m) in &rows {
                writeln!(
                    out,
                    "{:>4}  {:<width$}  {:>8}  {:>8}",
                    rank,
                    m.name,
                    format_cell(m.median),
                    format_cell(m.iqr)
                )
                .ok();
            }
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["rank", "treatment", "median", "iqr"])?;
            for (rank, m) in &rows {
                w.write_record([rank.to_string(), m.name.clone(), m.median.to_string(), m.iqr.to_string()])?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?);
        }
        ReportFormat::Markdown => {
            out.push_str("| rank | treatment | median | IQR |\n|---:|:---|---:|---:|\n");
            for (rank, m) in &rows {
                writeln!(out, "| {} | {} | {} | {} |", rank, m.name.replace('|', "\\|"), m.median, m.iqr).ok();
            }
        }
    }
    Ok(out)
}

pub fn render_report(report: &ExperimentReport, fmt: ReportFormat) -> Result<String> {
    let mut header = report.describe();
    for name in &report.unranked {
        header.push(("unranked".into(), format!("{name} (no defined SE)")));
    }
    for run in &report.learners {
        let failed = run.failed_folds();
        if failed > 0 {
            header.push(("failed folds".into(), format!("{} {failed}", run.name)));
        }
    }
    render_groups(&report.groups, &header, fmt)
}

/// Reads back the CSV rendering.
pub fn parse_report_csv(text: &str) -> Result<Vec<RankedGroup>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut groups: Vec<RankedGroup> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        let field = |j: usize, col: &str| -> Result<&str> {
            rec.get(j).ok_or_else(|| Error::Parse { line, column: col.into(), reason: "missing cell".into() })
        };
        let num = |j: usize, col: &str| -> Result<f64> {
            field(j, col)?.parse().map_err(|_| Error::Parse { line, column: col.into(), reason: "not a number".into() })
        };
        let rank: usize = field(0, "rank")?.parse().map_err(|_| Error::Parse {
            line,
            column: "rank".into(),
            reason: "not a rank".into(),
        })?;
        let member =
            RankedMember { name: field(1, "treatment")?.to_string(), median: num(2, "median")?, iqr: num(3, "iqr")? };
        match groups.last_mut() {
            Some(g) if g.rank == rank => g.members.push(member),
            _ => groups.push(RankedGroup { rank, members: vec![member] }),
        }
    }
    Ok(groups)
}

/// Long-format error list, one `treatment,error` pair per row, as consumed
/// by the `rank` command.
pub fn parse_error_csv(text: &str) -> Result<Vec<TreatmentResult>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut order: Vec<String> = Vec::new();
    let mut values: std::collections::HashMap<String, Vec<f64>> = Default::default();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        let name = rec.get(0).unwrap_or_default().to_string();
        let v: f64 = rec.get(1).and_then(|c| c.parse().ok()).ok_or_else(|| Error::Parse {
            line,
            column: "error".into(),
            reason: "not a number".into(),
        })?;
        if !values.contains_key(&name) {
            order.push(name.clone());
        }
        values.entry(name).or_default().push(v);
    }
    if order.is_empty() {
        return Err(Error::EmptyInput);
    }
    order
        .into_iter()
        .map(|n| {
            let v = values.remove(&n).unwrap_or_default();
            TreatmentResult::new(n, v)
        })
        .collect()
}

pub fn write_error_csv(report: &ExperimentReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["treatment", "error"])?;
    for run in &report.learners {
        for e in run.all_errors() {
            w.write_record([run.name.clone(), e.to_string()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn member(name: &str, median: f64, iqr: f64) -> RankedMember {
        RankedMember { name: name.into(), median, iqr }
    }

    #[test]
    fn cells() {
        assert_eq!(format_cell(36.5), "37");
        assert_eq!(format_cell(36.49), "36");
        assert_eq!(format_cell(1.0), "1");
        assert_eq!(format_cell(0.25), "0.25");
        assert_eq!(format_cell(0.3), "0.3");
        assert_eq!(format_cell(0.5), "0.5");
        assert_eq!(format_cell(0.0), "0");
    }

    #[test]
    fn single_row() {
        let g = vec![RankedGroup { rank: 1, members: vec![member("COCOMO-II", 37.2, 10.0)] }];
        let text = render_groups(&g, &[("seed".into(), "1".into())], ReportFormat::Plain).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# seed: 1");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].trim_start().starts_with("1  COCOMO-II"));
        assert!(lines[2].ends_with("37        10"));
    }

    #[test]
    fn csv_round_trip() {
        let g = vec![
            RankedGroup { rank: 1, members: vec![member("a", 0.1 + 0.2, 1.0 / 3.0), member("b", 0.5, 0.0)] },
            RankedGroup { rank: 2, members: vec![member("c, with comma", 12.345678901234567, 7.0)] },
        ];
        let text = render_groups(&g, &[("seed".into(), "4".into())], ReportFormat::Csv).unwrap();
        assert_eq!(parse_report_csv(&text).unwrap(), g);
    }

    #[test]
    fn error_csv() {
        let t = parse_error_csv("treatment,error\nx,1\ny,2\nx,3\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].errors, vec![1.0, 3.0]);
        assert!(parse_error_csv("treatment,error\nx,abc\n").is_err());
        assert!(parse_error_csv("treatment,error\n").is_err());
    }
}
