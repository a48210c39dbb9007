//! Project, dataset and tuning-table data model shared by every other module.
//!
//! Ratings are stored as integer levels 1..=6; symbolic names (`vlow`, `nom`,
//! ...) only exist in the io layer. A project may leave any attribute unrated,
//! in which case it behaves as nominal (level 3) everywhere downstream.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Ordinal rating, 1 = very low .. 6 = extremely high.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatingLevel(u8);

impl RatingLevel {
    pub const VERY_LOW: RatingLevel = RatingLevel(1);
    pub const LOW: RatingLevel = RatingLevel(2);
    pub const NOMINAL: RatingLevel = RatingLevel(3);
    pub const HIGH: RatingLevel = RatingLevel(4);
    pub const VERY_HIGH: RatingLevel = RatingLevel(5);
    pub const EXTRA_HIGH: RatingLevel = RatingLevel(6);

    pub fn new(value: i64) -> Result<Self> {
        if (1..=6).contains(&value) {
            Ok(RatingLevel(value as u8))
        } else {
            Err(Error::RatingOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based slot into a tuning-table row.
    pub fn slot(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn is_nominal(self) -> bool {
        self.0 == 3
    }

    pub fn all() -> impl Iterator<Item = RatingLevel> {
        (1..=6).map(RatingLevel)
    }
}

impl fmt::Display for RatingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttributeKind {
    /// Contributes to the exponent of the effort equation.
    ScaleFactor,
    /// Multiplies effort linearly; nominal is 1.0.
    EffortMultiplier,
}

/// The 22 COCOMO-II attributes, in the column order of the NASA10 table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attribute {
    Prec,
    Flex,
    Resl,
    Team,
    Pmat,
    Rely,
    Cplx,
    Data,
    Ruse,
    Time,
    Stor,
    Pvol,
    Acap,
    Pcap,
    Pcon,
    Aexp,
    Plex,
    Ltex,
    Tool,
    Sced,
    Site,
    Docu,
}

pub const ATTRIBUTE_COUNT: usize = 22;

impl Attribute {
    pub const ALL: [Attribute; ATTRIBUTE_COUNT] = [
        Attribute::Prec,
        Attribute::Flex,
        Attribute::Resl,
        Attribute::Team,
        Attribute::Pmat,
        Attribute::Rely,
        Attribute::Cplx,
        Attribute::Data,
        Attribute::Ruse,
        Attribute::Time,
        Attribute::Stor,
        Attribute::Pvol,
        Attribute::Acap,
        Attribute::Pcap,
        Attribute::Pcon,
        Attribute::Aexp,
        Attribute::Plex,
        Attribute::Ltex,
        Attribute::Tool,
        Attribute::Sced,
        Attribute::Site,
        Attribute::Docu,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Attribute::Prec => "prec",
            Attribute::Flex => "flex",
            Attribute::Resl => "resl",
            Attribute::Team => "team",
            Attribute::Pmat => "pmat",
            Attribute::Rely => "rely",
            Attribute::Cplx => "cplx",
            Attribute::Data => "data",
            Attribute::Ruse => "ruse",
            Attribute::Time => "time",
            Attribute::Stor => "stor",
            Attribute::Pvol => "pvol",
            Attribute::Acap => "acap",
            Attribute::Pcap => "pcap",
            Attribute::Pcon => "pcon",
            Attribute::Aexp => "aexp",
            Attribute::Plex => "plex",
            Attribute::Ltex => "ltex",
            Attribute::Tool => "tool",
            Attribute::Sced => "sced",
            Attribute::Site => "site",
            Attribute::Docu => "docu",
        }
    }

    pub fn kind(self) -> AttributeKind {
        match self {
            Attribute::Prec | Attribute::Flex | Attribute::Resl | Attribute::Team | Attribute::Pmat => {
                AttributeKind::ScaleFactor
            }
            _ => AttributeKind::EffortMultiplier,
        }
    }

    pub fn scale_factors() -> impl Iterator<Item = Attribute> {
        Self::ALL.into_iter().filter(|a| a.kind() == AttributeKind::ScaleFactor)
    }

    pub fn effort_multipliers() -> impl Iterator<Item = Attribute> {
        Self::ALL.into_iter().filter(|a| a.kind() == AttributeKind::EffortMultiplier)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    /// Case-insensitive, so the `Pmat`/`Flex` spelling of the tuning listing parses too.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Attribute::ALL.into_iter().find(|a| a.mnemonic() == lower).ok_or_else(|| Error::UnknownAttribute(s.to_string()))
    }
}

/// Per-attribute ratings of one project. Unset entries are treated as nominal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Ratings([Option<RatingLevel>; ATTRIBUTE_COUNT]);

impl Ratings {
    pub fn nominal() -> Self {
        Ratings([Some(RatingLevel::NOMINAL); ATTRIBUTE_COUNT])
    }

    pub fn get(&self, attr: Attribute) -> Option<RatingLevel> {
        self.0[attr.index()]
    }

    pub fn level_or_nominal(&self, attr: Attribute) -> RatingLevel {
        self.get(attr).unwrap_or(RatingLevel::NOMINAL)
    }

    pub fn set(&mut self, attr: Attribute, level: RatingLevel) {
        self.0[attr.index()] = Some(level);
    }

    pub fn clear(&mut self, attr: Attribute) {
        self.0[attr.index()] = None;
    }

    pub fn with(mut self, attr: Attribute, level: RatingLevel) -> Self {
        self.set(attr, level);
        self
    }

    /// Attributes that carry an explicit rating.
    pub fn rated(&self) -> impl Iterator<Item = (Attribute, RatingLevel)> + '_ {
        Attribute::ALL.into_iter().filter_map(|a| self.get(a).map(|l| (a, l)))
    }
}

/// One historical or hypothetical software project.
#[derive(Debug, Clone, PartialEq)]
pub struct Project {
    pub id: String,
    pub ratings: Ratings,
    /// Thousands of delivered source lines.
    pub kloc: f64,
    /// Actual effort in person-months (152 hours each); absent for pure queries.
    pub effort: Option<f64>,
}

impl Project {
    pub fn new(id: impl Into<String>, ratings: Ratings, kloc: f64, effort: Option<f64>) -> Self {
        Project { id: id.into(), ratings, kloc, effort }
    }

    pub fn level(&self, attr: Attribute) -> RatingLevel {
        self.ratings.level_or_nominal(attr)
    }

    pub fn actual_effort(&self) -> Result<f64> {
        match self.effort {
            Some(e) if e > 0.0 && e.is_finite() => Ok(e),
            _ => Err(Error::MissingEffort { id: self.id.clone() }),
        }
    }
}

/// A project with every attribute nominal and no recorded effort.
pub fn nominal_project(kloc: f64) -> Result<Project> {
    if !(kloc > 0.0 && kloc.is_finite()) {
        return Err(Error::NonPositiveKloc(kloc));
    }
    Ok(Project::new(format!("nominal-{kloc}"), Ratings::nominal(), kloc, None))
}

/// An ordered collection of projects that all carry actual effort.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    projects: Vec<Project>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, projects: Vec<Project>) -> Result<Self> {
        for p in &projects {
            p.actual_effort()?;
            if !(p.kloc > 0.0 && p.kloc.is_finite()) {
                return Err(Error::NonPositiveKloc(p.kloc));
            }
        }
        Ok(Dataset { name: name.into(), projects })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn projects(&self) -> &[Project] {
        &self.projects
    }

    pub fn len(&self) -> usize {
        self.projects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projects.is_empty()
    }

    pub fn efforts(&self) -> Vec<f64> {
        // Invariant from `new`: every effort is present.
        self.projects.iter().map(|p| p.effort.unwrap_or(f64::NAN)).collect()
    }

    /// Copy of the dataset with the project at `index` removed.
    pub fn without(&self, index: usize) -> Dataset {
        let projects = self.projects.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, p)| p.clone()).collect();
        Dataset { name: self.name.clone(), projects }
    }

    pub(crate) fn from_parts(name: String, projects: Vec<Project>) -> Dataset {
        Dataset { name, projects }
    }
}

/// Per-attribute multiplier rows over the six rating levels.
///
/// Effort-multiplier rows hold 1.00 at nominal; scale-factor rows hold the
/// additive exponent contributions. Undefined cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningTable {
    rows: [[Option<f64>; 6]; ATTRIBUTE_COUNT],
}

const U: Option<f64> = None;

const fn s(v: f64) -> Option<f64> {
    Some(v)
}

impl TuningTable {
    pub fn new(rows: [[Option<f64>; 6]; ATTRIBUTE_COUNT]) -> Result<Self> {
        for attr in Attribute::ALL {
            let row = &rows[attr.index()];
            if row.iter().all(Option::is_none) {
                return Err(Error::InvalidTable(format!("{attr}: no defined slots")));
            }
            if let Some(v) = row.iter().flatten().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidTable(format!("{attr}: non-positive value {v}")));
            }
            if attr.kind() == AttributeKind::EffortMultiplier && row[2] != Some(1.0) {
                return Err(Error::InvalidTable(format!("{attr}: nominal slot must be 1.00")));
            }
        }
        Ok(TuningTable { rows })
    }

    /// The COCOMO-II 2000 tunings.
    pub fn coc2000() -> Self {
        let mut rows = [[U; 6]; ATTRIBUTE_COUNT];
        let mut put = |a: Attribute, r: [Option<f64>; 6]| rows[a.index()] = r;
        //                    vlow       low        nom        high       vhigh      xhigh
        put(Attribute::Flex, [s(5.07), s(4.05), s(3.04), s(2.03), s(1.01), U]);
        put(Attribute::Pmat, [s(7.80), s(6.24), s(4.68), s(3.12), s(1.56), U]);
        put(Attribute::Prec, [s(6.20), s(4.96), s(3.72), s(2.48), s(1.24), U]);
        put(Attribute::Resl, [s(7.07), s(5.65), s(4.24), s(2.83), s(1.41), U]);
        put(Attribute::Team, [s(5.48), s(4.38), s(3.29), s(2.19), s(1.01), U]);
        put(Attribute::Acap, [s(1.42), s(1.19), s(1.00), s(0.85), s(0.71), U]);
        put(Attribute::Aexp, [s(1.22), s(1.10), s(1.00), s(0.88), s(0.81), U]);
        put(Attribute::Cplx, [s(0.73), s(0.87), s(1.00), s(1.17), s(1.34), s(1.74)]);
        put(Attribute::Data, [U, s(0.90), s(1.00), s(1.14), s(1.28), U]);
        put(Attribute::Docu, [s(0.81), s(0.91), s(1.00), s(1.11), s(1.23), U]);
        put(Attribute::Ltex, [s(1.20), s(1.09), s(1.00), s(0.91), s(0.84), U]);
        put(Attribute::Pcap, [s(1.34), s(1.15), s(1.00), s(0.88), s(0.76), U]);
        put(Attribute::Pcon, [s(1.29), s(1.12), s(1.00), s(0.90), s(0.81), U]);
        put(Attribute::Plex, [s(1.19), s(1.09), s(1.00), s(0.91), s(0.85), U]);
        put(Attribute::Pvol, [U, s(0.87), s(1.00), s(1.15), s(1.30), U]);
        put(Attribute::Rely, [s(0.82), s(0.92), s(1.00), s(1.10), s(1.26), U]);
        put(Attribute::Ruse, [U, s(0.95), s(1.00), s(1.07), s(1.15), s(1.24)]);
        put(Attribute::Sced, [s(1.43), s(1.14), s(1.00), s(1.00), s(1.00), U]);
        put(Attribute::Site, [s(1.22), s(1.09), s(1.00), s(0.93), s(0.86), s(0.80)]);
        put(Attribute::Stor, [U, U, s(1.00), s(1.05), s(1.17), s(1.46)]);
        put(Attribute::Time, [U, U, s(1.00), s(1.11), s(1.29), s(1.63)]);
        put(Attribute::Tool, [s(1.17), s(1.09), s(1.00), s(0.90), s(0.78), U]);
        TuningTable { rows }
    }

    pub fn row(&self, attr: Attribute) -> &[Option<f64>; 6] {
        &self.rows[attr.index()]
    }

    pub(crate) fn row_mut(&mut self, attr: Attribute) -> &mut [Option<f64>; 6] {
        &mut self.rows[attr.index()]
    }

    pub fn slot(&self, attr: Attribute, level: RatingLevel) -> Option<f64> {
        self.rows[attr.index()][level.slot()]
    }

    /// The level actually used for `level`: itself if defined, else the
    /// nearest defined level in the row (lower one on a tie).
    pub fn clamp_level(&self, attr: Attribute, level: RatingLevel) -> RatingLevel {
        let row = self.row(attr);
        if row[level.slot()].is_some() {
            return level;
        }
        let want = level.slot() as i64;
        let best = (0..6usize)
            .filter(|&i| row[i].is_some())
            .min_by_key(|&i| ((i as i64 - want).abs(), i))
            .expect("tuning rows have at least one defined slot");
        RatingLevel(best as u8 + 1)
    }

    /// Multiplier (or scale-factor weight) for a rating, clamping undefined slots.
    pub fn value(&self, attr: Attribute, level: RatingLevel) -> f64 {
        let used = self.clamp_level(attr, level);
        self.rows[attr.index()][used.slot()].expect("clamped slot is defined")
    }

    pub fn defined_values(&self, attr: Attribute) -> impl Iterator<Item = f64> + '_ {
        self.rows[attr.index()].iter().flatten().copied()
    }
}

impl Default for TuningTable {
    fn default() -> Self {
        TuningTable::coc2000()
    }
}

/// The `(a, b)` pair of the effort equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationParams {
    a: f64,
    b: f64,
}

impl CalibrationParams {
    pub const DEFAULT: CalibrationParams = CalibrationParams { a: 2.94, b: 0.91 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(CalibrationParams { a, b })
        } else {
            Err(Error::InvalidParams { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl Default for CalibrationParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    NonPositiveKloc {
        kloc: f64,
    },
    UnknownAttribute {
        name: String,
    },
    /// The rating lands on an undefined tuning cell and will be clamped.
    UndefinedSlot {
        attribute: Attribute,
        level: RatingLevel,
        clamped_to: RatingLevel,
    },
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        match self {
            Diagnostic::NonPositiveKloc { .. } | Diagnostic::UnknownAttribute { .. } => Severity::Error,
            Diagnostic::UndefinedSlot { .. } => Severity::Warning,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NonPositiveKloc { kloc } => write!(f, "error: non-positive kloc ({kloc})"),
            Diagnostic::UnknownAttribute { name } => write!(f, "error: unknown attribute `{name}`"),
            Diagnostic::UndefinedSlot { attribute, level, clamped_to } => {
                write!(f, "warning: {attribute}={level} is an undefined tuning slot, will clamp to {clamped_to}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity() == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity() == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity() == Severity::Warning)
    }
}

/// Checks a project against a tuning table.
///
/// Unknown mnemonics cannot occur in a typed [`Project`]; the parser reports
/// them with [`Diagnostic::UnknownAttribute`] when reading raw input.
pub fn validate_project(project: &Project, table: &TuningTable) -> ValidationReport {
    let mut diagnostics = Vec::new();
    if !(project.kloc > 0.0 && project.kloc.is_finite()) {
        diagnostics.push(Diagnostic::NonPositiveKloc { kloc: project.kloc });
    }
    for (attribute, level) in project.ratings.rated() {
        if table.slot(attribute, level).is_none() {
            diagnostics.push(Diagnostic::UndefinedSlot {
                attribute,
                level,
                clamped_to: table.clamp_level(attribute, level),
            });
        }
    }
    ValidationReport { diagnostics }
}
