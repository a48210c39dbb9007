//! PROMISE-style tables (ARFF or CSV) read through a column mapping.
//!
//! A [`ColumnMapping`] renames source columns to attribute mnemonics,
//! `kloc` and `effort`, drops ignored columns, and optionally turns stored
//! multiplier values back into ratings. Missing cells (`?` or empty) leave
//! the attribute unrated.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{Attribute, Dataset, Project, RatingLevel, Ratings};

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ColumnMapping {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub ignore: Vec<String>,
    pub columns: BTreeMap<String, String>,
    #[serde(default)]
    pub levels: BTreeMap<String, BTreeMap<String, i64>>,
}

fn default_tolerance() -> f64 {
    1e-9
}

pub const COC81_MAPPING: &str = include_str!("../../data/coc81_mapping.toml");

impl ColumnMapping {
    pub fn from_toml(text: &str) -> Result<Self> {
        let m: ColumnMapping =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("column mapping: {e}")))?;
        for target in m.columns.values() {
            if target != "kloc" && target != "effort" {
                target.parse::<Attribute>()?;
            }
        }
        for (col, table) in &m.levels {
            for (key, level) in table {
                key.parse::<f64>().map_err(|_| {
                    Error::InvalidConfig(format!("column mapping: level key `{key}` of `{col}` is not a number"))
                })?;
                RatingLevel::new(*level)?;
            }
        }
        Ok(m)
    }

    pub fn coc81() -> Self {
        ColumnMapping::from_toml(COC81_MAPPING).expect("bundled COC81 mapping is valid")
    }

    /// Identity mapping over the standard column names.
    pub fn identity() -> Self {
        let mut columns: BTreeMap<String, String> =
            Attribute::ALL.iter().map(|a| (a.mnemonic().to_string(), a.mnemonic().to_string())).collect();
        columns.insert("kloc".into(), "kloc".into());
        columns.insert("effort".into(), "effort".into());
        ColumnMapping { tolerance: default_tolerance(), ignore: Vec::new(), columns, levels: BTreeMap::new() }
    }

    fn level(&self, column: &str, raw: &str) -> std::result::Result<RatingLevel, String> {
        let v: f64 = raw.parse().map_err(|_| format!("`{raw}` is not a number"))?;
        match self.levels.get(column) {
            None => {
                if v.fract() != 0.0 {
                    return Err(format!("`{raw}` is not an integer rating"));
                }
                RatingLevel::new(v as i64).map_err(|e| e.to_string())
            }
            Some(table) => {
                let best = table
                    .iter()
                    .map(|(k, l)| ((k.parse::<f64>().unwrap_or(f64::NAN) - v).abs(), *l))
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                match best {
                    Some((d, l)) if d <= self.tolerance => RatingLevel::new(l).map_err(|e| e.to_string()),
                    _ => Err(format!("`{raw}` matches no known value of `{column}`")),
                }
            }
        }
    }
}

/// Header names and data rows, comments removed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTable {
    pub header: Vec<String>,
    /// `(line number, cells)`
    pub rows: Vec<(usize, Vec<String>)>,
}

/// Reads the `@attribute` names and `@data` rows of an ARFF file.
pub fn read_arff(text: &str) -> Result<RawTable> {
    let mut table = RawTable::default();
    let mut in_data = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if !in_data {
            if lower.starts_with("@attribute") {
                let name = line["@attribute".len()..].split_whitespace().next().ok_or_else(|| Error::Parse {
                    line: i + 1,
                    column: String::new(),
                    reason: "unnamed attribute".into(),
                })?;
                table.header.push(name.trim_matches(|c| c == '\'' || c == '"').to_string());
            } else if lower.starts_with("@data") {
                in_data = true;
            }
            continue;
        }
        table.rows.push((i + 1, line.split(',').map(|c| c.trim().to_string()).collect()));
    }
    if table.header.is_empty() {
        return Err(Error::Parse { line: 0, column: String::new(), reason: "no @attribute lines".into() });
    }
    Ok(table)
}

pub fn read_csv_table(text: &str) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(RawTable { header, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Skip,
    Kloc,
    Effort,
    Rating(Attribute),
}

pub fn apply_mapping(table: &RawTable, mapping: &ColumnMapping, name: &str) -> Result<Dataset> {
    let mut targets = Vec::new();
    for h in &table.header {
        let key = h.to_ascii_lowercase();
        let target = if mapping.ignore.iter().any(|i| i.eq_ignore_ascii_case(&key)) {
            Target::Skip
        } else {
            match mapping.columns.get(&key).map(String::as_str) {
                Some("kloc") => Target::Kloc,
                Some("effort") => Target::Effort,
                Some(attr) => Target::Rating(attr.parse()?),
                None => return Err(Error::UnknownAttribute(h.clone())),
            }
        };
        targets.push(target);
    }
    if !targets.contains(&Target::Kloc) || !targets.contains(&Target::Effort) {
        return Err(Error::InvalidConfig("mapping must provide both kloc and effort columns".into()));
    }
    let mut projects = Vec::new();
    for (n, (line, cells)) in table.rows.iter().enumerate() {
        if cells.len() != targets.len() {
            return Err(Error::Parse {
                line: *line,
                column: String::new(),
                reason: format!("expected {} cells, found {}", targets.len(), cells.len()),
            });
        }
        let mut ratings = Ratings::default();
        let (mut kloc, mut effort) = (f64::NAN, f64::NAN);
        for ((cell, target), head) in cells.iter().zip(&targets).zip(&table.header) {
            let fail = |reason: String| Error::Parse { line: *line, column: head.clone(), reason };
            let missing = cell.is_empty() || cell == "?";
            match target {
                Target::Skip => {}
                Target::Kloc | Target::Effort => {
                    let v: f64 = cell.parse().map_err(|_| fail(format!("`{cell}` is not a number")))?;
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(fail(format!("`{cell}` must be positive")));
                    }
                    if *target == Target::Kloc {
                        kloc = v;
                    } else {
                        effort = v;
                    }
                }
                Target::Rating(_) if missing => {}
                Target::Rating(attr) => {
                    ratings.set(*attr, mapping.level(&head.to_ascii_lowercase(), cell).map_err(fail)?);
                }
            }
        }
        projects.push(Project::new(format!("{name}-{}", n + 1), ratings, kloc, Some(effort)));
    }
    if projects.is_empty() {
        return Err(Error::NoProjects);
    }
    Dataset::new(name, projects)
}

/// ARFF when the text has an `@data` section, CSV otherwise.
pub fn parse_promise(text: &str, mapping: &ColumnMapping, name: &str) -> Result<Dataset> {
    let table = if text.to_ascii_lowercase().contains("@data") { read_arff(text)? } else { read_csv_table(text)? };
    apply_mapping(&table, mapping, name)
}
