//! Project tables as CSV.
//!
//! The header names a subset of the 22 attribute mnemonics plus `kloc` and
//! `effort`, and optionally `id`. Lines starting with `#` are comments.
//! Attribute columns that are missing, or cells left empty, leave the
//! attribute unrated (it then counts as nominal).

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{Attribute, Dataset, Project, RatingLevel, Ratings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Column {
    Id,
    Kloc,
    Effort,
    Rating(Attribute),
}

fn column(name: &str) -> Result<Column> {
    match name.to_ascii_lowercase().as_str() {
        "id" => Ok(Column::Id),
        "kloc" => Ok(Column::Kloc),
        "effort" => Ok(Column::Effort),
        other => other.parse().map(Column::Rating),
    }
}

/// A parsed table plus non-fatal notes (missing attribute columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDataset {
    pub dataset: Dataset,
    pub warnings: Vec<String>,
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes())
}

pub fn parse_dataset_with_warnings(text: &str, name: &str) -> Result<ParsedDataset> {
    let mut rdr = reader(text);
    let header = rdr.headers()?.clone();
    if header.iter().all(str::is_empty) {
        return Err(Error::NoProjects);
    }
    let mut columns = Vec::new();
    let mut seen = HashSet::new();
    for h in &header {
        let c = column(h)?;
        if !seen.insert(c) {
            return Err(Error::Parse { line: 1, column: h.to_string(), reason: "duplicate column".into() });
        }
        columns.push(c);
    }
    for required in [Column::Kloc, Column::Effort] {
        if !seen.contains(&required) {
            let col = if required == Column::Kloc { "kloc" } else { "effort" };
            return Err(Error::Parse { line: 1, column: col.into(), reason: "required column missing".into() });
        }
    }
    let missing: Vec<&str> =
        Attribute::ALL.iter().filter(|a| !seen.contains(&Column::Rating(**a))).map(|a| a.mnemonic()).collect();
    let mut warnings = Vec::new();
    if !missing.is_empty() {
        warnings.push(format!("columns absent, treated as nominal: {}", missing.join(",")));
    }

    let mut projects = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(row + 2);
        let mut ratings = Ratings::default();
        let (mut id, mut kloc, mut effort) = (format!("{name}-{}", row + 1), f64::NAN, f64::NAN);
        for (cell, (col, head)) in record.iter().zip(columns.iter().zip(header.iter())) {
            let fail = |reason: String| Error::Parse { line, column: head.to_string(), reason };
            let number = |cell: &str| -> Result<f64> {
                let v: f64 = cell.parse().map_err(|_| fail(format!("`{cell}` is not a number")))?;
                if v > 0.0 && v.is_finite() {
                    Ok(v)
                } else {
                    Err(fail(format!("`{cell}` must be positive")))
                }
            };
            match col {
                Column::Id => id = cell.to_string(),
                Column::Kloc => kloc = number(cell)?,
                Column::Effort => effort = number(cell)?,
                Column::Rating(attr) => {
                    if cell.is_empty() {
                        continue;
                    }
                    let v: i64 = cell.parse().map_err(|_| fail(format!("`{cell}` is not an integer rating")))?;
                    let level = RatingLevel::new(v).map_err(|e| fail(e.to_string()))?;
                    ratings.set(*attr, level);
                }
            }
        }
        projects.push(Project::new(id, ratings, kloc, Some(effort)));
    }
    if projects.is_empty() {
        return Err(Error::NoProjects);
    }
    Ok(ParsedDataset { dataset: Dataset::new(name, projects)?, warnings })
}

pub fn parse_dataset(text: &str, name: &str) -> Result<Dataset> {
    parse_dataset_with_warnings(text, name).map(|p| p.dataset)
}

/// Writes `id`, every attribute, `kloc`, `effort`. Unrated cells are empty.
pub fn write_dataset(data: &Dataset) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend(Attribute::ALL.iter().map(|a| a.mnemonic().to_string()));
    header.extend(["kloc".to_string(), "effort".to_string()]);
    w.write_record(&header)?;
    for p in data.projects() {
        let mut rec = vec![p.id.clone()];
        rec.extend(Attribute::ALL.iter().map(|a| p.ratings.get(*a).map(|l| l.to_string()).unwrap_or_default()));
        rec.push(p.kloc.to_string());
        rec.push(p.effort.map(|e| e.to_string()).unwrap_or_default());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub const NASA10_CSV: &str = include_str!("../../data/nasa10.csv");

pub fn embedded_nasa10() -> Dataset {
    parse_dataset(NASA10_CSV, "nasa10").expect("embedded NASA10 table is valid")
}

/// Names of the datasets shipped inside the library.
pub fn embedded_names() -> &'static [&'static str] {
    &["nasa10"]
}

pub fn embedded(name: &str) -> Option<Dataset> {
    match name.to_ascii_lowercase().as_str() {
        "nasa10" => Some(embedded_nasa10()),
        _ => None,
    }
}
