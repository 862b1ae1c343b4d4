//! Dataset-level harmonization: per-column concept binding,
//! canonicalization with provenance and lossiness, and merging of multiple
//! heterogeneous datasets into one unified record stream.
//!
//! Errors are contained at cell level. A cell that fails to parse becomes
//! an unmapped cell plus an issue-report entry; the run never aborts on
//! dirty data. Only configuration mistakes (missing sections, references to
//! columns that do not exist) abort, because they mean the run itself is
//! set up wrong.

mod align;
mod config;
mod io;

pub use align::{
    align, collect_cells, AlignError, AlignOptions, AlignPair, AlignTable, CellRef, Verdict,
};
pub use config::{ColumnBinding, Concept, ConfigError, MappingConfig, SourceConfig};
pub use io::{Dataset, IngestError};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::canon::CanonicalValue;
use crate::colors::{parse_color, ColorLexicon, ColorValue, ParsedColor};
use crate::compass::{
    parse_direction, relative_to_cardinal, BearingEstimate, CompassRose, Direction, Facing,
    Sector, SectorSpan, Wind,
};
use crate::geoloc::{parse_location, resolve_location, Gazetteer, LocationValue};
use crate::outcome::{Lossiness, MappingOutcome};
use crate::scales::Scale;
use crate::timespan::{parse_duration, DurationValue};

/// One harmonized cell: the raw text, its canonical form (absent only when
/// the value is unmapped), and the lossiness of the conversion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonizedCell {
    /// Concept the column is bound to; `None` for pass-through columns.
    pub concept: Option<Concept>,
    pub source: String,
    pub column: String,
    /// Preserved byte-exact from the input.
    pub raw: String,
    pub canonical: Option<CanonicalValue>,
    pub lossiness: Lossiness,
}

/// One input row, harmonized: cells grouped by concept, plus pass-through
/// cells for columns the config does not cover.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnifiedRecord {
    pub record_id: String,
    pub cells: BTreeMap<Concept, Vec<HarmonizedCell>>,
    pub passthrough: Vec<HarmonizedCell>,
}

impl UnifiedRecord {
    /// The raw text of the named column, wherever the cell ended up.
    pub fn raw_of_column(&self, column: &str) -> Option<&str> {
        self.cells
            .values()
            .flatten()
            .chain(self.passthrough.iter())
            .find(|cell| cell.column == column)
            .map(|cell| cell.raw.as_str())
    }
}

/// What went wrong (or was worth flagging) while harmonizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    /// The cell text did not parse under its concept.
    ParseFailure,
    /// A color name outside the lexicon.
    UnresolvedName,
    /// A place or postal code the gazetteer does not know.
    GazetteerMiss,
    /// A column present in the data but absent from the config.
    UncoveredColumn,
    /// A relative direction whose facing cell is missing or unusable.
    MissingFacing,
}

/// One issue-report entry. Cell-level entries carry the row index;
/// column-level flags do not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub source: String,
    pub row: Option<usize>,
    pub column: String,
    pub kind: IssueKind,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(row) => write!(f, "{}[{}].{}: {}", self.source, row, self.column, self.message),
            None => write!(f, "{}.{}: {}", self.source, self.column, self.message),
        }
    }
}

/// Harmonized records plus the issue report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HarmonizeOutput {
    pub records: Vec<UnifiedRecord>,
    pub issues: Vec<Issue>,
}

impl HarmonizeOutput {
    fn extend(&mut self, other: HarmonizeOutput) {
        self.records.extend(other.records);
        self.issues.extend(other.issues);
    }
}

/// Shared resources for a harmonization run.
pub struct HarmonizeContext<'a> {
    pub lexicon: &'a ColorLexicon,
    pub gazetteer: Option<&'a dyn Gazetteer>,
}

/// Harmonizes one dataset under its config section. Output records keep the
/// input row order; the issue report is ordered by column flags first, then
/// row-major cell issues.
pub fn harmonize_dataset(
    dataset: &Dataset,
    config: &MappingConfig,
    ctx: &HarmonizeContext,
) -> Result<HarmonizeOutput, ConfigError> {
    let source = &dataset.source_id;
    let section = config
        .section(source)
        .ok_or_else(|| ConfigError::MissingSection { dataset: source.clone() })?;

    // Config references must exist before any row is touched.
    for (column, binding) in section.columns() {
        if dataset.column_index(column).is_none() {
            return Err(ConfigError::MissingColumn {
                dataset: source.clone(),
                column: column.to_string(),
                via: String::new(),
            });
        }
        if let Some(facing) = &binding.facing {
            if dataset.column_index(facing).is_none() {
                return Err(ConfigError::MissingColumn {
                    dataset: source.clone(),
                    column: facing.clone(),
                    via: format!(" (facing hint of column {column:?})"),
                });
            }
        }
    }

    // Per-column lexicon overrides load once per run.
    let mut lexicons: BTreeMap<String, ColorLexicon> = BTreeMap::new();
    for (column, binding) in section.columns() {
        if let Some(path) = &binding.lexicon {
            let lexicon = ColorLexicon::from_path(path).map_err(|e| ConfigError::Lexicon {
                dataset: source.clone(),
                column: column.to_string(),
                reason: e.to_string(),
            })?;
            lexicons.insert(column.to_string(), lexicon);
        }
    }

    let mut issues = Vec::new();
    if !dataset.rows.is_empty() {
        for column in &dataset.columns {
            if section.binding(column).is_none() {
                issues.push(Issue {
                    source: source.clone(),
                    row: None,
                    column: column.clone(),
                    kind: IssueKind::UncoveredColumn,
                    message: format!(
                        "column {column:?} is not covered by the config and passes through untouched"
                    ),
                });
            }
        }
    }

    let mut records = Vec::with_capacity(dataset.rows.len());
    for (row_index, row) in dataset.rows.iter().enumerate() {
        let mut cells: BTreeMap<Concept, Vec<HarmonizedCell>> = BTreeMap::new();
        let mut passthrough = Vec::new();
        for (column, raw) in dataset.columns.iter().zip(row.iter()) {
            match section.binding(column) {
                None => passthrough.push(HarmonizedCell {
                    concept: None,
                    source: source.clone(),
                    column: column.clone(),
                    raw: raw.clone(),
                    canonical: None,
                    lossiness: Lossiness::Unmapped,
                }),
                Some(binding) => {
                    let lexicon = lexicons.get(column).unwrap_or(ctx.lexicon);
                    let site = CellSite { dataset, section, row, row_index, column };
                    let (canonical, lossiness) =
                        canonicalize_cell(binding, raw, site, ctx, lexicon, &mut issues);
                    cells.entry(binding.concept).or_default().push(HarmonizedCell {
                        concept: Some(binding.concept),
                        source: source.clone(),
                        column: column.clone(),
                        raw: raw.clone(),
                        canonical,
                        lossiness,
                    });
                }
            }
        }
        records.push(UnifiedRecord {
            record_id: format!("{source}:{row_index}"),
            cells,
            passthrough,
        });
    }

    Ok(HarmonizeOutput { records, issues })
}

/// Harmonizes several datasets into one record stream; records appear in
/// dataset order, then row order.
pub fn harmonize_all(
    datasets: &[Dataset],
    config: &MappingConfig,
    ctx: &HarmonizeContext,
) -> Result<HarmonizeOutput, ConfigError> {
    let mut output = HarmonizeOutput::default();
    for dataset in datasets {
        output.extend(harmonize_dataset(dataset, config, ctx)?);
    }
    Ok(output)
}

/// Everything a cell conversion may need to look at.
struct CellSite<'a> {
    dataset: &'a Dataset,
    section: &'a SourceConfig,
    row: &'a [String],
    row_index: usize,
    column: &'a str,
}

impl CellSite<'_> {
    fn issue(&self, kind: IssueKind, message: String) -> Issue {
        Issue {
            source: self.dataset.source_id.clone(),
            row: Some(self.row_index),
            column: self.column.to_string(),
            kind,
            message,
        }
    }
}

fn canonicalize_cell(
    binding: &ColumnBinding,
    raw: &str,
    site: CellSite,
    ctx: &HarmonizeContext,
    lexicon: &ColorLexicon,
    issues: &mut Vec<Issue>,
) -> (Option<CanonicalValue>, Lossiness) {
    match binding.concept {
        Concept::MovingDirection | Concept::ViewingDirection => {
            canonicalize_direction(binding, raw, site, issues)
        }
        Concept::Expertise => canonicalize_expertise(binding, raw, site, issues),
        Concept::Visual => canonicalize_color(raw, site, lexicon, issues),
        Concept::Location => canonicalize_location(raw, site, ctx, issues),
        Concept::Duration => canonicalize_duration(raw, site, issues),
    }
}

fn canonicalize_direction(
    binding: &ColumnBinding,
    raw: &str,
    site: CellSite,
    issues: &mut Vec<Issue>,
) -> (Option<CanonicalValue>, Lossiness) {
    let direction = match parse_direction(raw) {
        Ok(d) => apply_rose_hint(d, binding.rose),
        Err(e) => {
            issues.push(site.issue(IssueKind::ParseFailure, e.to_string()));
            return (None, Lossiness::Unmapped);
        }
    };
    match direction {
        Direction::Angle { degrees } => (Some(CanonicalValue::Angle { degrees }), Lossiness::Exact),
        Direction::Sector { sector } => {
            (Some(CanonicalValue::Sector { sector }), Lossiness::Exact)
        }
        Direction::SectorSpan { span } => {
            (Some(CanonicalValue::SectorSpan { span }), Lossiness::Exact)
        }
        Direction::RelativeSpan { span } => {
            // Only single horizontal terms are grounded through the facing
            // hint; anything vertical has image-plane semantics and stays
            // unmapped, as does a true span (no canonical kind holds an
            // angle pair).
            if span.has_vertical() || !span.is_single() {
                return (Some(CanonicalValue::RelativeSpan { span }), Lossiness::Unmapped);
            }
            let Some(facing_column) = &binding.facing else {
                return (Some(CanonicalValue::RelativeSpan { span }), Lossiness::Unmapped);
            };
            let facing = match facing_value(facing_column, &site) {
                Ok(f) => f,
                Err(message) => {
                    issues.push(site.issue(IssueKind::MissingFacing, message));
                    return (Some(CanonicalValue::RelativeSpan { span }), Lossiness::Unmapped);
                }
            };
            match relative_to_cardinal(span.from, facing) {
                Err(e) => {
                    issues.push(site.issue(IssueKind::ParseFailure, e.to_string()));
                    (Some(CanonicalValue::RelativeSpan { span }), Lossiness::Unmapped)
                }
                Ok(outcome) => {
                    let lossiness = outcome.lossiness();
                    match outcome.into_value().expect("grounded bearing carries a value") {
                        BearingEstimate::Angle { degrees } => {
                            (Some(CanonicalValue::Angle { degrees }), lossiness)
                        }
                        BearingEstimate::Sectors { sectors } => {
                            (Some(sectors_to_canonical(&sectors)), lossiness)
                        }
                    }
                }
            }
        }
    }
}

/// A rose hint declares the granularity the source column uses, so bare
/// names are re-read at that rose when the wind exists there.
fn apply_rose_hint(direction: Direction, hint: Option<CompassRose>) -> Direction {
    let Some(rose) = hint else { return direction };
    match direction {
        Direction::Sector { sector } if sector.wind().valid_for(rose) => {
            Direction::Sector { sector: Sector::new(rose, sector.wind()).unwrap() }
        }
        Direction::SectorSpan { span }
            if span.from.wind().valid_for(rose) && span.to.wind().valid_for(rose) =>
        {
            Direction::SectorSpan {
                span: SectorSpan::new(
                    Sector::new(rose, span.from.wind()).unwrap(),
                    Sector::new(rose, span.to.wind()).unwrap(),
                )
                .unwrap(),
            }
        }
        other => other,
    }
}

/// A covered sector set is always a contiguous arc; render one sector as a
/// sector and several as the clockwise span across them.
fn sectors_to_canonical(sectors: &[Sector]) -> CanonicalValue {
    if sectors.len() == 1 {
        return CanonicalValue::Sector { sector: sectors[0] };
    }
    let rose = sectors[0].rose();
    let step = 16 / rose.sectors() as usize;
    let mut indices: Vec<usize> = sectors.iter().map(|s| s.wind().index() / step).collect();
    indices.sort_unstable();
    let count = rose.sectors() as usize;
    // Find the wrap gap, if any, to pick the clockwise start.
    let mut start = indices[0];
    let mut end = *indices.last().unwrap();
    if end - start + 1 != indices.len() {
        for window in indices.windows(2) {
            if window[1] - window[0] > 1 {
                start = window[1];
                end = window[0];
                break;
            }
        }
    }
    let wind_at = |i: usize| Wind::ALL[(i % count) * step];
    let span = SectorSpan::new(
        Sector::new(rose, wind_at(start)).unwrap(),
        Sector::new(rose, wind_at(end)).unwrap(),
    )
    .unwrap();
    CanonicalValue::SectorSpan { span }
}

fn facing_value(facing_column: &str, site: &CellSite) -> Result<Facing, String> {
    let index = site
        .dataset
        .column_index(facing_column)
        .expect("facing column checked during config validation");
    let raw = &site.row[index];
    if raw.trim().is_empty() {
        return Err(format!("facing column {facing_column:?} is empty in this row"));
    }
    let binding = site.section.binding(facing_column);
    let parsed = parse_direction(raw)
        .map(|d| apply_rose_hint(d, binding.and_then(|b| b.rose)))
        .map_err(|e| format!("facing column {facing_column:?}: {e}"))?;
    match parsed {
        Direction::Angle { degrees } => Ok(Facing::Angle(degrees)),
        Direction::Sector { sector } => Ok(Facing::Sector(sector)),
        other => Err(format!(
            "facing column {facing_column:?} holds {other}, which is not a single bearing"
        )),
    }
}

fn canonicalize_expertise(
    binding: &ColumnBinding,
    raw: &str,
    site: CellSite,
    issues: &mut Vec<Issue>,
) -> (Option<CanonicalValue>, Lossiness) {
    let scale = binding.scale.as_ref().expect("expertise bindings carry a scale");
    let value = match scale {
        Scale::Interval(s) => raw
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("{raw:?} is not a number on {s}"))
            .and_then(|x| s.value(x).map_err(|e| e.to_string())),
        Scale::Ordinal(s) => s.value(raw.trim()).map_err(|e| e.to_string()),
    };
    match value {
        Ok(value) => (Some(CanonicalValue::ScaleLevel { value }), Lossiness::Exact),
        Err(message) => {
            issues.push(site.issue(IssueKind::ParseFailure, message));
            (None, Lossiness::Unmapped)
        }
    }
}

fn canonicalize_color(
    raw: &str,
    site: CellSite,
    lexicon: &ColorLexicon,
    issues: &mut Vec<Issue>,
) -> (Option<CanonicalValue>, Lossiness) {
    match parse_color(raw, lexicon) {
        Err(e) => {
            issues.push(site.issue(IssueKind::ParseFailure, e.to_string()));
            (None, Lossiness::Unmapped)
        }
        Ok(ParsedColor::Single(color)) => {
            let lossiness = match &color {
                ColorValue::UnresolvedName { name } => {
                    issues.push(site.issue(
                        IssueKind::UnresolvedName,
                        format!("color name {name:?} is not in the lexicon"),
                    ));
                    Lossiness::Unmapped
                }
                _ => Lossiness::Exact,
            };
            (Some(CanonicalValue::Color { color }), lossiness)
        }
        Ok(ParsedColor::Sequence(colors)) => {
            let mut lossiness = Lossiness::Exact;
            for color in colors.colors() {
                if let ColorValue::UnresolvedName { name } = color {
                    issues.push(site.issue(
                        IssueKind::UnresolvedName,
                        format!("color name {name:?} is not in the lexicon"),
                    ));
                    lossiness = Lossiness::Unmapped;
                }
            }
            (Some(CanonicalValue::ColorSequence { colors }), lossiness)
        }
    }
}

fn canonicalize_location(
    raw: &str,
    site: CellSite,
    ctx: &HarmonizeContext,
    issues: &mut Vec<Issue>,
) -> (Option<CanonicalValue>, Lossiness) {
    let location = match parse_location(raw) {
        Ok(l) => l,
        Err(e) => {
            issues.push(site.issue(IssueKind::ParseFailure, e.to_string()));
            return (None, Lossiness::Unmapped);
        }
    };
    match &location {
        LocationValue::Point { .. } => {
            (Some(CanonicalValue::Location { location }), Lossiness::Exact)
        }
        LocationValue::RaDec { .. } => {
            // Tagged but not convertible: frame conversion is out of scope.
            (Some(CanonicalValue::Location { location }), Lossiness::Unmapped)
        }
        LocationValue::Place { .. } | LocationValue::Postal { .. } => match ctx.gazetteer {
            None => (Some(CanonicalValue::Location { location }), Lossiness::Exact),
            Some(gazetteer) => match resolve_location(&location, gazetteer) {
                Ok(MappingOutcome::Unmapped) => {
                    (Some(CanonicalValue::Location { location }), Lossiness::Unmapped)
                }
                Ok(outcome) => {
                    let lossiness = outcome.lossiness();
                    let point = outcome.into_value().unwrap();
                    (
                        Some(CanonicalValue::Location {
                            location: LocationValue::Point { point },
                        }),
                        lossiness,
                    )
                }
                Err(e) => {
                    issues.push(site.issue(IssueKind::GazetteerMiss, e.to_string()));
                    (Some(CanonicalValue::Location { location }), Lossiness::Exact)
                }
            },
        },
    }
}

fn canonicalize_duration(
    raw: &str,
    site: CellSite,
    issues: &mut Vec<Issue>,
) -> (Option<CanonicalValue>, Lossiness) {
    match parse_duration(raw) {
        Ok(DurationValue::Seconds { seconds }) => {
            (Some(CanonicalValue::Duration { seconds }), Lossiness::Exact)
        }
        // The literal unknown is data; carried, but nothing to compare.
        Ok(DurationValue::Unknown) => (Some(CanonicalValue::Unknown), Lossiness::Unmapped),
        Err(e) => {
            issues.push(site.issue(IssueKind::ParseFailure, e.to_string()));
            (None, Lossiness::Unmapped)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compass::AngleDeg;

    fn ctx<'a>(lexicon: &'a ColorLexicon, gazetteer: &'a dyn Gazetteer) -> HarmonizeContext<'a> {
        HarmonizeContext { lexicon, gazetteer: Some(gazetteer) }
    }

    fn simple_config() -> MappingConfig {
        MappingConfig::from_toml_str(
            r#"
[d]
direction = "viewing_direction"
color = "visual"
duration = "duration"
"#,
        )
        .unwrap()
    }

    fn dataset(columns: &[&str], rows: &[&[&str]]) -> Dataset {
        Dataset {
            source_id: "d".to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect(),
        }
    }

    #[test]
    fn empty_dataset_gives_empty_output_and_report() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let ds = dataset(&["direction", "color", "duration"], &[]);
        let out = harmonize_dataset(&ds, &simple_config(), &ctx(&lexicon, &gazetteer)).unwrap();
        assert!(out.records.is_empty());
        assert!(out.issues.is_empty());
    }

    #[test]
    fn dirty_cell_becomes_unmapped_with_issue_entry() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let ds =
            dataset(&["direction", "color", "duration"], &[&["57°", "blleu", "1 second"]]);
        let out = harmonize_dataset(&ds, &simple_config(), &ctx(&lexicon, &gazetteer)).unwrap();
        assert_eq!(out.records.len(), 1);
        let color_cell = &out.records[0].cells[&Concept::Visual][0];
        assert_eq!(color_cell.lossiness, Lossiness::Unmapped);
        assert_eq!(color_cell.raw, "blleu");
        assert!(color_cell.canonical.is_some(), "unresolved names keep their text");
        assert_eq!(out.issues.len(), 1);
        assert_eq!(out.issues[0].row, Some(0));
        assert_eq!(out.issues[0].column, "color");
        assert_eq!(out.issues[0].kind, IssueKind::UnresolvedName);
    }

    #[test]
    fn uncovered_columns_pass_through_and_are_flagged() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let ds = dataset(
            &["direction", "color", "duration", "notes"],
            &[&["north", "red", "unknown", "saw it twice"]],
        );
        let out = harmonize_dataset(&ds, &simple_config(), &ctx(&lexicon, &gazetteer)).unwrap();
        let record = &out.records[0];
        assert_eq!(record.passthrough.len(), 1);
        assert_eq!(record.passthrough[0].raw, "saw it twice");
        assert_eq!(record.passthrough[0].concept, None);
        assert!(out
            .issues
            .iter()
            .any(|i| i.kind == IssueKind::UncoveredColumn && i.column == "notes"));
        // The literal unknown is carried as data, not an issue.
        let duration_cell = &record.cells[&Concept::Duration][0];
        assert_eq!(duration_cell.canonical, Some(CanonicalValue::Unknown));
        assert_eq!(duration_cell.lossiness, Lossiness::Unmapped);
        assert_eq!(out.issues.len(), 1);
    }

    #[test]
    fn missing_config_references_abort() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let context = ctx(&lexicon, &gazetteer);

        let ds = dataset(&["color"], &[&["red"]]);
        let err = harmonize_dataset(&ds, &simple_config(), &context).unwrap_err();
        assert!(matches!(err, ConfigError::MissingColumn { .. }), "{err}");

        let other = MappingConfig::from_toml_str("[other]\ncolor = \"visual\"\n").unwrap();
        let err = harmonize_dataset(&ds, &other, &context).unwrap_err();
        assert!(matches!(err, ConfigError::MissingSection { .. }), "{err}");

        let facing = MappingConfig::from_toml_str(
            "[d]\ncolor = \"visual\"\nx = \"moving_direction; facing = gone\"\n",
        )
        .unwrap();
        let ds = dataset(&["color", "x"], &[&["red", "left"]]);
        let err = harmonize_dataset(&ds, &facing, &context).unwrap_err();
        assert!(matches!(err, ConfigError::MissingColumn { .. }), "{err}");
    }

    #[test]
    fn rose_hint_promotes_bare_names() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let config =
            MappingConfig::from_toml_str("[d]\ndirection = \"viewing_direction; rose = 16\"\n")
                .unwrap();
        let ds = dataset(&["direction"], &[&["north"], &["north-northeast"]]);
        let out = harmonize_dataset(&ds, &config, &ctx(&lexicon, &gazetteer)).unwrap();
        let first = &out.records[0].cells[&Concept::ViewingDirection][0];
        match first.canonical.as_ref().unwrap() {
            CanonicalValue::Sector { sector } => assert_eq!(sector.rose().sectors(), 16),
            other => panic!("expected sector, got {other:?}"),
        }
    }

    #[test]
    fn relative_directions_ground_through_facing_column() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let config = MappingConfig::from_toml_str(
            "[d]\nviewing = \"viewing_direction\"\nmoving = \"moving_direction; facing = viewing\"\n",
        )
        .unwrap();
        let ds = dataset(
            &["viewing", "moving"],
            &[
                &["90°", "left"],
                &["northeast", "forward"],
                &["90°", "top-left to bottom-right"],
                &["", "left"],
            ],
        );
        let out = harmonize_dataset(&ds, &config, &ctx(&lexicon, &gazetteer)).unwrap();

        let grounded = &out.records[0].cells[&Concept::MovingDirection][0];
        assert_eq!(
            grounded.canonical,
            Some(CanonicalValue::Angle { degrees: AngleDeg::new(0.0) })
        );
        assert_eq!(grounded.lossiness, Lossiness::Exact);

        let widened = &out.records[1].cells[&Concept::MovingDirection][0];
        assert_eq!(widened.lossiness, Lossiness::Widened);
        match widened.canonical.as_ref().unwrap() {
            CanonicalValue::Sector { sector } => assert_eq!(sector.wind(), Wind::Ne),
            other => panic!("expected sector, got {other:?}"),
        }

        let vertical = &out.records[2].cells[&Concept::MovingDirection][0];
        assert_eq!(vertical.lossiness, Lossiness::Unmapped);
        assert!(matches!(vertical.canonical, Some(CanonicalValue::RelativeSpan { .. })));

        let no_facing = &out.records[3].cells[&Concept::MovingDirection][0];
        assert_eq!(no_facing.lossiness, Lossiness::Unmapped);
        assert!(out.issues.iter().any(|i| i.kind == IssueKind::MissingFacing));
    }

    #[test]
    fn location_resolution_through_gazetteer_is_lossy() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let config = MappingConfig::from_toml_str("[d]\nwhere = \"location\"\n").unwrap();
        let ds = dataset(&["where"], &[&["Jena, Germany"], &["Atlantis"], &["50.9, 11.5"]]);
        let out = harmonize_dataset(&ds, &config, &ctx(&lexicon, &gazetteer)).unwrap();

        let resolved = &out.records[0].cells[&Concept::Location][0];
        assert_eq!(resolved.lossiness, Lossiness::Lossy);
        match resolved.canonical.as_ref().unwrap() {
            CanonicalValue::Location { location: LocationValue::Point { point } } => {
                assert!((point.lat() - 50.9271).abs() < 1e-9);
            }
            other => panic!("expected resolved point, got {other:?}"),
        }

        let missing = &out.records[1].cells[&Concept::Location][0];
        assert_eq!(missing.lossiness, Lossiness::Exact);
        assert!(matches!(
            missing.canonical,
            Some(CanonicalValue::Location { location: LocationValue::Place { .. } })
        ));
        assert!(out.issues.iter().any(|i| i.kind == IssueKind::GazetteerMiss));

        let point = &out.records[2].cells[&Concept::Location][0];
        assert_eq!(point.lossiness, Lossiness::Exact);
    }

    #[test]
    fn raw_data_is_preserved_byte_exact() {
        let lexicon = ColorLexicon::builtin();
        let gazetteer = crate::geoloc::FlatFileGazetteer::builtin();
        let ds = dataset(
            &["direction", "color", "duration", "junk"],
            &[
                &["east to southeast", "yellow, blue, white", "0.033 minute", "  padded  "],
                &["???", "#GG0000", "1 parsec", ""],
            ],
        );
        let out = harmonize_dataset(&ds, &simple_config(), &ctx(&lexicon, &gazetteer)).unwrap();
        for (record, row) in out.records.iter().zip(ds.rows.iter()) {
            for (column, cell) in ds.columns.iter().zip(row.iter()) {
                assert_eq!(record.raw_of_column(column), Some(cell.as_str()));
            }
        }
        // Bad cells were contained, not fatal.
        assert_eq!(out.records.len(), 2);
        let bad_direction = &out.records[1].cells[&Concept::ViewingDirection][0];
        assert_eq!(bad_direction.canonical, None);
        assert_eq!(bad_direction.lossiness, Lossiness::Unmapped);
    }
}
