//! Cross-source comparison of harmonized cells.
//!
//! Alignment reports representational compatibility, never event identity:
//! whether two values *could* describe the same observation, under the
//! weakest sound criterion per concept. Directions are compatible when
//! their angle intervals intersect; scale values when they fall into each
//! other's bins; colors when they share a nearest name or sit within a
//! distance threshold.

use serde::Serialize;
use thiserror::Error;

use super::config::Concept;
use super::{HarmonizedCell, UnifiedRecord};
use crate::canon::CanonicalValue;
use crate::colors::{nearest_name, ColorLexicon, Rgb};
use crate::compass::interval_of_sector;
use crate::geoloc::{normalize_key, LocationValue};
use crate::interval::Interval;
use crate::outcome::Lossiness;
use crate::scales::ScaleValue;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("cell from {dataset:?} column {column:?} is harmonized under {found}, not {expected}")]
    ConceptMismatch { dataset: String, column: String, expected: Concept, found: String },
}

/// Pairwise comparison outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Compatible,
    Incompatible,
    /// At least one side has no sound canonical form to compare.
    Unmapped,
}

/// Identifies one compared cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRef {
    pub source: String,
    pub column: String,
    pub raw: String,
}

impl CellRef {
    fn of(cell: &HarmonizedCell) -> Self {
        CellRef {
            source: cell.source.clone(),
            column: cell.column.clone(),
            raw: cell.raw.clone(),
        }
    }
}

/// One pairwise verdict; `common` renders the widest representation both
/// sides agree on, when they are compatible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignPair {
    pub left: CellRef,
    pub right: CellRef,
    pub verdict: Verdict,
    pub common: Option<String>,
}

/// All pairwise verdicts for one concept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignTable {
    pub concept: Concept,
    pub pairs: Vec<AlignPair>,
}

/// Alignment thresholds and resources.
pub struct AlignOptions<'a> {
    pub lexicon: &'a ColorLexicon,
    /// Colors are compatible when nearest names match or RGB distance is at
    /// most this (default 0: exact nearest-name match only).
    pub color_distance_threshold: f64,
    /// Resolved points are compatible within this many degrees per axis.
    pub location_epsilon_degrees: f64,
}

impl<'a> AlignOptions<'a> {
    pub fn new(lexicon: &'a ColorLexicon) -> Self {
        AlignOptions { lexicon, color_distance_threshold: 0.0, location_epsilon_degrees: 0.01 }
    }
}

/// Pulls every cell of one concept out of a record stream.
pub fn collect_cells(records: &[UnifiedRecord], concept: Concept) -> Vec<&HarmonizedCell> {
    records
        .iter()
        .flat_map(|r| r.cells.get(&concept).into_iter().flatten())
        .collect()
}

/// Compares every pair of cells harmonized under `concept`.
pub fn align(
    cells: &[&HarmonizedCell],
    concept: Concept,
    opts: &AlignOptions,
) -> Result<AlignTable, AlignError> {
    for cell in cells {
        if cell.concept != Some(concept) {
            return Err(AlignError::ConceptMismatch {
                dataset: cell.source.clone(),
                column: cell.column.clone(),
                expected: concept,
                found: cell
                    .concept
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "no concept".to_string()),
            });
        }
    }
    let mut pairs = Vec::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let (verdict, common) = pair_verdict(cells[i], cells[j], concept, opts);
            pairs.push(AlignPair {
                left: CellRef::of(cells[i]),
                right: CellRef::of(cells[j]),
                verdict,
                common,
            });
        }
    }
    Ok(AlignTable { concept, pairs })
}

/// The verdict for one pair; symmetric in its arguments.
pub fn pair_verdict(
    a: &HarmonizedCell,
    b: &HarmonizedCell,
    concept: Concept,
    opts: &AlignOptions,
) -> (Verdict, Option<String>) {
    if a.lossiness == Lossiness::Unmapped || b.lossiness == Lossiness::Unmapped {
        return (Verdict::Unmapped, None);
    }
    let (Some(ca), Some(cb)) = (&a.canonical, &b.canonical) else {
        return (Verdict::Unmapped, None);
    };
    match concept {
        Concept::MovingDirection | Concept::ViewingDirection => direction_verdict(ca, cb),
        Concept::Expertise => scale_verdict(ca, cb),
        Concept::Visual => color_verdict(ca, cb, opts),
        Concept::Location => location_verdict(ca, cb, opts),
        Concept::Duration => duration_verdict(ca, cb),
    }
}

/// The angular extent of a canonical direction value, as linear intervals.
fn direction_pieces(value: &CanonicalValue) -> Option<Vec<Interval>> {
    match value {
        CanonicalValue::Angle { degrees } => Some(vec![Interval::point(degrees.value())]),
        CanonicalValue::Sector { sector } => Some(interval_of_sector(*sector).pieces()),
        CanonicalValue::SectorSpan { span } => Some(span.hull()),
        _ => None,
    }
}

fn direction_verdict(a: &CanonicalValue, b: &CanonicalValue) -> (Verdict, Option<String>) {
    let (Some(pa), Some(pb)) = (direction_pieces(a), direction_pieces(b)) else {
        return (Verdict::Unmapped, None);
    };
    let mut overlaps = Vec::new();
    for x in &pa {
        for y in &pb {
            if let Some(region) = x.intersect(y) {
                overlaps.push(region);
            }
        }
    }
    if overlaps.is_empty() {
        (Verdict::Incompatible, None)
    } else {
        let rendered: Vec<String> = overlaps.iter().map(render_degrees).collect();
        (Verdict::Compatible, Some(rendered.join(" ∪ ")))
    }
}

fn render_degrees(i: &Interval) -> String {
    if i.lower == i.upper {
        format!("{}°", i.lower)
    } else {
        format!(
            "{}{}°, {}°{}",
            if i.lower_open { '(' } else { '[' },
            i.lower,
            i.upper,
            if i.upper_open { ')' } else { ']' },
        )
    }
}

/// Closed bin of an ordinal label on the unit position axis, used against
/// interval-scale points: a value sitting exactly on a bin edge converts
/// into either neighbor, so edges count.
fn closed_bin(index: usize, len: usize) -> Interval {
    Interval::closed(index as f64 / len as f64, (index + 1) as f64 / len as f64)
}

/// Half-open bin (top bin closed), used between two ordinal values so that
/// adjacent labels of the same scale stay incompatible.
fn half_open_bin(index: usize, len: usize) -> Interval {
    Interval {
        lower: index as f64 / len as f64,
        upper: (index + 1) as f64 / len as f64,
        lower_open: false,
        upper_open: index + 1 != len,
    }
}

fn scale_verdict(a: &CanonicalValue, b: &CanonicalValue) -> (Verdict, Option<String>) {
    let (CanonicalValue::ScaleLevel { value: va }, CanonicalValue::ScaleLevel { value: vb }) =
        (a, b)
    else {
        return (Verdict::Unmapped, None);
    };
    match (va, vb) {
        (ScaleValue::Interval { .. }, ScaleValue::Interval { .. }) => {
            let (pa, pb) = (va.position(), vb.position());
            if (pa - pb).abs() <= 1e-9 {
                (Verdict::Compatible, Some(format!("position {pa:.3}")))
            } else {
                (Verdict::Incompatible, None)
            }
        }
        (ScaleValue::Interval { .. }, ScaleValue::Ordinal { scale, index }) => {
            if closed_bin(*index, scale.len()).contains(va.position()) {
                (Verdict::Compatible, Some(scale.labels()[*index].clone()))
            } else {
                (Verdict::Incompatible, None)
            }
        }
        (ScaleValue::Ordinal { scale, index }, ScaleValue::Interval { .. }) => {
            if closed_bin(*index, scale.len()).contains(vb.position()) {
                (Verdict::Compatible, Some(scale.labels()[*index].clone()))
            } else {
                (Verdict::Incompatible, None)
            }
        }
        (
            ScaleValue::Ordinal { scale: sa, index: ia },
            ScaleValue::Ordinal { scale: sb, index: ib },
        ) => {
            let bin_a = half_open_bin(*ia, sa.len());
            let bin_b = half_open_bin(*ib, sb.len());
            match bin_a.intersect(&bin_b) {
                Some(region) => (
                    Verdict::Compatible,
                    Some(format!("positions [{:.3}, {:.3}]", region.lower, region.upper)),
                ),
                None => (Verdict::Incompatible, None),
            }
        }
    }
}

fn color_rgbs(value: &CanonicalValue) -> Vec<Rgb> {
    match value {
        CanonicalValue::Color { color } => color.rgb().into_iter().collect(),
        CanonicalValue::ColorSequence { colors } => {
            colors.colors().iter().filter_map(|c| c.rgb()).collect()
        }
        _ => Vec::new(),
    }
}

/// Two color cells are compatible when any member pair shares a nearest
/// lexicon name or lies within the distance threshold.
fn color_verdict(
    a: &CanonicalValue,
    b: &CanonicalValue,
    opts: &AlignOptions,
) -> (Verdict, Option<String>) {
    let (ra, rb) = (color_rgbs(a), color_rgbs(b));
    if ra.is_empty() || rb.is_empty() {
        return (Verdict::Unmapped, None);
    }
    for x in &ra {
        for y in &rb {
            let (name_x, _) = nearest_name(*x, opts.lexicon);
            let (name_y, _) = nearest_name(*y, opts.lexicon);
            if name_x == name_y || x.distance(y) <= opts.color_distance_threshold {
                return (Verdict::Compatible, Some(name_x.to_string()));
            }
        }
    }
    (Verdict::Incompatible, None)
}

fn location_verdict(
    a: &CanonicalValue,
    b: &CanonicalValue,
    opts: &AlignOptions,
) -> (Verdict, Option<String>) {
    let (CanonicalValue::Location { location: la }, CanonicalValue::Location { location: lb }) =
        (a, b)
    else {
        return (Verdict::Unmapped, None);
    };
    match (la, lb) {
        (LocationValue::Point { point: pa }, LocationValue::Point { point: pb }) => {
            if pa.frame() == pb.frame()
                && (pa.lat() - pb.lat()).abs() <= opts.location_epsilon_degrees
                && (pa.lon() - pb.lon()).abs() <= opts.location_epsilon_degrees
            {
                (Verdict::Compatible, Some(pa.to_string()))
            } else {
                (Verdict::Incompatible, None)
            }
        }
        (LocationValue::Place { name: na }, LocationValue::Place { name: nb }) => {
            if normalize_key(na) == normalize_key(nb) {
                (Verdict::Compatible, Some(na.clone()))
            } else {
                (Verdict::Incompatible, None)
            }
        }
        (LocationValue::Postal { code: ca, .. }, LocationValue::Postal { code: cb, .. }) => {
            if ca == cb {
                (Verdict::Compatible, Some(ca.clone()))
            } else {
                (Verdict::Incompatible, None)
            }
        }
        // A symbolic location against a point cannot be compared without
        // resolution; harmonize with a gazetteer first.
        _ => (Verdict::Unmapped, None),
    }
}

fn duration_verdict(a: &CanonicalValue, b: &CanonicalValue) -> (Verdict, Option<String>) {
    let (CanonicalValue::Duration { seconds: sa }, CanonicalValue::Duration { seconds: sb }) =
        (a, b)
    else {
        return (Verdict::Unmapped, None);
    };
    if (sa - sb).abs() <= 1e-9 {
        (Verdict::Compatible, Some(a.to_string()))
    } else {
        (Verdict::Incompatible, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compass::AngleDeg;
    use crate::scales::{IntervalScale, OrdinalScale};

    fn cell(concept: Concept, raw: &str, canonical: CanonicalValue, lossiness: Lossiness) -> HarmonizedCell {
        HarmonizedCell {
            concept: Some(concept),
            source: "t".to_string(),
            column: "c".to_string(),
            raw: raw.to_string(),
            canonical: Some(canonical),
            lossiness,
        }
    }

    fn angle(deg: f64) -> CanonicalValue {
        CanonicalValue::Angle { degrees: AngleDeg::new(deg) }
    }

    fn sector(text: &str) -> CanonicalValue {
        match crate::compass::parse_direction(text).unwrap() {
            crate::compass::Direction::Sector { sector } => CanonicalValue::Sector { sector },
            crate::compass::Direction::SectorSpan { span } => {
                CanonicalValue::SectorSpan { span }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn direction_angle_vs_sector() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let a = cell(Concept::ViewingDirection, "57°", angle(57.0), Lossiness::Exact);
        let b = cell(
            Concept::ViewingDirection,
            "east-northeast",
            sector("east-northeast"),
            Lossiness::Exact,
        );
        let (verdict, common) = pair_verdict(&a, &b, Concept::ViewingDirection, &opts);
        assert_eq!(verdict, Verdict::Compatible);
        assert_eq!(common.as_deref(), Some("57°"));

        let north4 = cell(Concept::ViewingDirection, "north", sector("north"), Lossiness::Exact);
        let (verdict, _) = pair_verdict(&a, &north4, Concept::ViewingDirection, &opts);
        assert_eq!(verdict, Verdict::Incompatible);
    }

    #[test]
    fn direction_span_hull_contains_midpoint() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let a = cell(Concept::MovingDirection, "112.5°", angle(112.5), Lossiness::Exact);
        let b = cell(
            Concept::MovingDirection,
            "east to southeast",
            sector("east to southeast"),
            Lossiness::Exact,
        );
        let (verdict, common) = pair_verdict(&a, &b, Concept::MovingDirection, &opts);
        assert_eq!(verdict, Verdict::Compatible);
        assert_eq!(common.as_deref(), Some("112.5°"));
    }

    #[test]
    fn unmapped_cells_give_unmapped_verdicts() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let a = cell(Concept::MovingDirection, "112.5°", angle(112.5), Lossiness::Exact);
        let relative = HarmonizedCell {
            concept: Some(Concept::MovingDirection),
            source: "t".into(),
            column: "c".into(),
            raw: "top-left to bottom-right".into(),
            canonical: Some(CanonicalValue::RelativeSpan {
                span: match crate::compass::parse_direction("top-left to bottom-right").unwrap() {
                    crate::compass::Direction::RelativeSpan { span } => span,
                    other => panic!("unexpected {other:?}"),
                },
            }),
            lossiness: Lossiness::Unmapped,
        };
        let (verdict, _) = pair_verdict(&a, &relative, Concept::MovingDirection, &opts);
        assert_eq!(verdict, Verdict::Unmapped);
    }

    #[test]
    fn expertise_triples_are_pairwise_compatible() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let ten = IntervalScale::new(1.0, 10.0, false).unwrap();
        let five = OrdinalScale::new(
            vec!["poor".into(), "fair".into(), "average".into(), "good".into(), "excellent".into()],
        )
        .unwrap();
        let three = OrdinalScale::new(
            vec!["beginner".into(), "intermediate".into(), "expert".into()],
        )
        .unwrap();

        let seven = cell(
            Concept::Expertise,
            "7",
            CanonicalValue::ScaleLevel { value: ten.value(7.0).unwrap() },
            Lossiness::Exact,
        );
        let good = cell(
            Concept::Expertise,
            "good",
            CanonicalValue::ScaleLevel { value: five.value("good").unwrap() },
            Lossiness::Exact,
        );
        let intermediate = cell(
            Concept::Expertise,
            "intermediate",
            CanonicalValue::ScaleLevel { value: three.value("intermediate").unwrap() },
            Lossiness::Exact,
        );

        for (a, b) in [(&seven, &good), (&seven, &intermediate), (&good, &intermediate)] {
            let (verdict, _) = pair_verdict(a, b, Concept::Expertise, &opts);
            assert_eq!(verdict, Verdict::Compatible, "{} vs {}", a.raw, b.raw);
        }

        // Adjacent labels of one scale stay incompatible.
        let beginner = cell(
            Concept::Expertise,
            "beginner",
            CanonicalValue::ScaleLevel { value: three.value("beginner").unwrap() },
            Lossiness::Exact,
        );
        let (verdict, _) = pair_verdict(&beginner, &intermediate, Concept::Expertise, &opts);
        assert_eq!(verdict, Verdict::Incompatible);
    }

    #[test]
    fn color_nearest_name_match() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let coded = cell(
            Concept::Visual,
            "#FF0000",
            CanonicalValue::Color {
                color: crate::colors::ColorValue::Coded { rgb: Rgb::new(255, 0, 0) },
            },
            Lossiness::Exact,
        );
        let named = cell(
            Concept::Visual,
            "red",
            CanonicalValue::Color {
                color: crate::colors::ColorValue::Named {
                    name: "red".into(),
                    rgb: Rgb::new(255, 0, 0),
                },
            },
            Lossiness::Exact,
        );
        let (verdict, common) = pair_verdict(&coded, &named, Concept::Visual, &opts);
        assert_eq!(verdict, Verdict::Compatible);
        assert_eq!(common.as_deref(), Some("red"));

        let blue = cell(
            Concept::Visual,
            "blue",
            CanonicalValue::Color {
                color: crate::colors::ColorValue::Named {
                    name: "blue".into(),
                    rgb: Rgb::new(0, 0, 255),
                },
            },
            Lossiness::Exact,
        );
        let (verdict, _) = pair_verdict(&named, &blue, Concept::Visual, &opts);
        assert_eq!(verdict, Verdict::Incompatible);
    }

    #[test]
    fn verdicts_are_symmetric() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let cells = [
            cell(Concept::ViewingDirection, "57°", angle(57.0), Lossiness::Exact),
            cell(Concept::ViewingDirection, "ene", sector("east-northeast"), Lossiness::Exact),
            cell(Concept::ViewingDirection, "north", sector("north"), Lossiness::Exact),
        ];
        for a in &cells {
            for b in &cells {
                let (ab, _) = pair_verdict(a, b, Concept::ViewingDirection, &opts);
                let (ba, _) = pair_verdict(b, a, Concept::ViewingDirection, &opts);
                assert_eq!(ab, ba, "{} vs {}", a.raw, b.raw);
            }
        }
    }

    #[test]
    fn concept_mismatch_is_an_error() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let a = cell(Concept::ViewingDirection, "57°", angle(57.0), Lossiness::Exact);
        let err = align(&[&a], Concept::Duration, &opts).unwrap_err();
        assert!(matches!(err, AlignError::ConceptMismatch { .. }));
    }

    #[test]
    fn durations_compare_by_seconds() {
        let lex = ColorLexicon::builtin();
        let opts = AlignOptions::new(&lex);
        let a = cell(
            Concept::Duration,
            "1.98 s",
            CanonicalValue::Duration { seconds: 1.98 },
            Lossiness::Exact,
        );
        let b = cell(
            Concept::Duration,
            "0.033 minute",
            CanonicalValue::Duration { seconds: 1.98 },
            Lossiness::Exact,
        );
        let (verdict, _) = pair_verdict(&a, &b, Concept::Duration, &opts);
        assert_eq!(verdict, Verdict::Compatible);

        let unknown = HarmonizedCell {
            concept: Some(Concept::Duration),
            source: "t".into(),
            column: "c".into(),
            raw: "unknown".into(),
            canonical: Some(CanonicalValue::Unknown),
            lossiness: Lossiness::Unmapped,
        };
        let (verdict, _) = pair_verdict(&a, &unknown, Concept::Duration, &opts);
        assert_eq!(verdict, Verdict::Unmapped);
    }
}
