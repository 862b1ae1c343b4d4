//! Angles, compass roses, wind sectors, direction spans, and body-relative
//! directions, with parsers and granularity-aware mappings between them.
//!
//! A compass rose divides the circle into 4, 8, or 16 named sectors. Every
//! sector owns a half-open arc `[center - w/2, center + w/2)` where `w` is
//! the sector width, so each angle belongs to exactly one sector per rose.
//! Bare names parse at the coarsest rose that knows them ("north" is a
//! 4-rose sector, "north-northeast" a 16-rose one): granularity is data and
//! must not be fabricated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::Interval;
use crate::outcome::MappingOutcome;

/// Parse failure with the byte position where recognition gave up.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse direction {input:?} at byte {position}: {reason}")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub reason: String,
}

impl ParseError {
    fn new(input: &str, position: usize, reason: impl Into<String>) -> Self {
        ParseError { input: input.to_string(), position, reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GranularityError {
    #[error("unsupported sector count {0}: a compass rose has 4, 8, or 16 sectors")]
    UnsupportedCount(u32),
    #[error("target rose ({target} sectors) is not coarser than the current rose ({current} sectors)")]
    NotCoarser { target: u32, current: u32 },
}

/// A relative direction with a vertical component has image-plane semantics
/// and no compass bearing without camera orientation data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no compass bearing for {direction:?}: vertical component")]
pub struct UnmappableError {
    pub direction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("span {from} to {to} has antipodal endpoints; midpoint is ambiguous")]
pub struct AmbiguousSpanError {
    pub from: String,
    pub to: String,
}

/// An angle in degrees, normalized to `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AngleDeg(f64);

impl AngleDeg {
    /// Normalizes any finite degree value into `[0, 360)`.
    pub fn new(degrees: f64) -> Self {
        assert!(degrees.is_finite(), "angle must be finite");
        let mut v = degrees % 360.0;
        if v < 0.0 {
            v += 360.0;
        }
        // `-1e-30 % 360 + 360` rounds to 360.0 itself; fold it back.
        if v >= 360.0 {
            v = 0.0;
        }
        AngleDeg(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rotates clockwise by `degrees` (negative rotates counter-clockwise).
    pub fn offset(self, degrees: f64) -> AngleDeg {
        AngleDeg::new(self.0 + degrees)
    }

    /// Clockwise angular distance from `self` to `other`, in `[0, 360)`.
    pub fn clockwise_to(self, other: AngleDeg) -> f64 {
        let d = other.0 - self.0;
        if d < 0.0 {
            d + 360.0
        } else {
            d
        }
    }
}

impl TryFrom<f64> for AngleDeg {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        if v.is_finite() {
            Ok(AngleDeg::new(v))
        } else {
            Err(format!("angle must be finite, got {v}"))
        }
    }
}

impl From<AngleDeg> for f64 {
    fn from(a: AngleDeg) -> f64 {
        a.0
    }
}

impl fmt::Display for AngleDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.0)
    }
}

/// Granularity of the rose: how many sectors divide the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum CompassRose {
    Four,
    Eight,
    Sixteen,
}

impl CompassRose {
    pub fn new(sectors: u32) -> Result<Self, GranularityError> {
        match sectors {
            4 => Ok(CompassRose::Four),
            8 => Ok(CompassRose::Eight),
            16 => Ok(CompassRose::Sixteen),
            other => Err(GranularityError::UnsupportedCount(other)),
        }
    }

    pub fn sectors(self) -> u32 {
        match self {
            CompassRose::Four => 4,
            CompassRose::Eight => 8,
            CompassRose::Sixteen => 16,
        }
    }

    /// Sector width in degrees.
    pub fn width(self) -> f64 {
        360.0 / self.sectors() as f64
    }

    /// All sectors of this rose in clockwise order starting at north.
    pub fn all_sectors(self) -> Vec<Sector> {
        let step = (16 / self.sectors()) as usize;
        (0..16)
            .step_by(step)
            .map(|i| Sector { rose: self, wind: Wind::ALL[i] })
            .collect()
    }
}

impl TryFrom<u32> for CompassRose {
    type Error = GranularityError;
    fn try_from(v: u32) -> Result<Self, Self::Error> {
        CompassRose::new(v)
    }
}

impl From<CompassRose> for u32 {
    fn from(r: CompassRose) -> u32 {
        r.sectors()
    }
}

/// One of the sixteen standard wind names, indexed clockwise from north.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wind {
    N,
    Nne,
    Ne,
    Ene,
    E,
    Ese,
    Se,
    Sse,
    S,
    Ssw,
    Sw,
    Wsw,
    W,
    Wnw,
    Nw,
    Nnw,
}

impl Wind {
    pub const ALL: [Wind; 16] = [
        Wind::N,
        Wind::Nne,
        Wind::Ne,
        Wind::Ene,
        Wind::E,
        Wind::Ese,
        Wind::Se,
        Wind::Sse,
        Wind::S,
        Wind::Ssw,
        Wind::Sw,
        Wind::Wsw,
        Wind::W,
        Wind::Wnw,
        Wind::Nw,
        Wind::Nnw,
    ];

    /// Position on the 16-point rose, clockwise from north.
    pub fn index(self) -> usize {
        Wind::ALL.iter().position(|w| *w == self).unwrap()
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            Wind::N => "N",
            Wind::Nne => "NNE",
            Wind::Ne => "NE",
            Wind::Ene => "ENE",
            Wind::E => "E",
            Wind::Ese => "ESE",
            Wind::Se => "SE",
            Wind::Sse => "SSE",
            Wind::S => "S",
            Wind::Ssw => "SSW",
            Wind::Sw => "SW",
            Wind::Wsw => "WSW",
            Wind::W => "W",
            Wind::Wnw => "WNW",
            Wind::Nw => "NW",
            Wind::Nnw => "NNW",
        }
    }

    /// Full hyphenated lowercase name, e.g. `east-northeast`.
    pub fn name(self) -> &'static str {
        match self {
            Wind::N => "north",
            Wind::Nne => "north-northeast",
            Wind::Ne => "northeast",
            Wind::Ene => "east-northeast",
            Wind::E => "east",
            Wind::Ese => "east-southeast",
            Wind::Se => "southeast",
            Wind::Sse => "south-southeast",
            Wind::S => "south",
            Wind::Ssw => "south-southwest",
            Wind::Sw => "southwest",
            Wind::Wsw => "west-southwest",
            Wind::W => "west",
            Wind::Wnw => "west-northwest",
            Wind::Nw => "northwest",
            Wind::Nnw => "north-northwest",
        }
    }

    /// Bearing of the sector center: index × 22.5°, the same at every
    /// granularity that knows this wind.
    pub fn center(self) -> AngleDeg {
        AngleDeg::new(self.index() as f64 * 22.5)
    }

    /// The coarsest rose whose sector list contains this wind.
    pub fn coarsest_rose(self) -> CompassRose {
        let i = self.index();
        if i % 4 == 0 {
            CompassRose::Four
        } else if i % 2 == 0 {
            CompassRose::Eight
        } else {
            CompassRose::Sixteen
        }
    }

    pub fn valid_for(self, rose: CompassRose) -> bool {
        self.index() % (16 / rose.sectors() as usize) == 0
    }

    /// Matches abbreviations and full names, ignoring case, hyphens, and
    /// spaces ("NNE", "north-northeast", "north northeast").
    pub fn parse(token: &str) -> Option<Wind> {
        let folded: String = token
            .chars()
            .filter(|c| !matches!(c, '-' | ' ' | '_'))
            .flat_map(|c| c.to_lowercase())
            .collect();
        Wind::ALL.iter().copied().find(|w| {
            folded == w.abbreviation().to_lowercase() || folded == w.name().replace('-', "")
        })
    }
}

/// A named sector of one rose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SectorRepr", into = "SectorRepr")]
pub struct Sector {
    rose: CompassRose,
    wind: Wind,
}

#[derive(Serialize, Deserialize)]
struct SectorRepr {
    rose: u32,
    name: String,
}

impl TryFrom<SectorRepr> for Sector {
    type Error = String;
    fn try_from(r: SectorRepr) -> Result<Self, Self::Error> {
        let rose = CompassRose::new(r.rose).map_err(|e| e.to_string())?;
        let wind =
            Wind::parse(&r.name).ok_or_else(|| format!("unknown sector name {:?}", r.name))?;
        Sector::new(rose, wind).map_err(|e| e.to_string())
    }
}

impl From<Sector> for SectorRepr {
    fn from(s: Sector) -> SectorRepr {
        SectorRepr { rose: s.rose.sectors(), name: s.wind.name().to_string() }
    }
}

impl Sector {
    pub fn new(rose: CompassRose, wind: Wind) -> Result<Self, ParseError> {
        if wind.valid_for(rose) {
            Ok(Sector { rose, wind })
        } else {
            Err(ParseError::new(
                wind.name(),
                0,
                format!("{} is not a sector of the {}-point rose", wind.name(), rose.sectors()),
            ))
        }
    }

    pub fn rose(self) -> CompassRose {
        self.rose
    }

    pub fn wind(self) -> Wind {
        self.wind
    }

    pub fn center(self) -> AngleDeg {
        self.wind.center()
    }

    /// The same wind viewed on a finer rose.
    pub fn promote(self, finer: CompassRose) -> Sector {
        debug_assert!(finer.sectors() >= self.rose.sectors());
        Sector { rose: finer, wind: self.wind }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.wind.name(), self.rose.sectors())
    }
}

/// A clockwise arc `[start, end)`, wrapping through north when `start > end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleArc {
    pub start: AngleDeg,
    pub end: AngleDeg,
}

impl AngleArc {
    pub fn new(start: AngleDeg, end: AngleDeg) -> Self {
        AngleArc { start, end }
    }

    pub fn contains(&self, a: AngleDeg) -> bool {
        let (s, e, v) = (self.start.value(), self.end.value(), a.value());
        if s <= e {
            s <= v && v < e
        } else {
            v >= s || v < e
        }
    }

    /// The arc as one or two half-open linear intervals inside `[0, 360)`.
    pub fn pieces(&self) -> Vec<Interval> {
        let (s, e) = (self.start.value(), self.end.value());
        if s <= e {
            vec![Interval::half_open(s, e)]
        } else {
            vec![Interval::half_open(s, 360.0), Interval::half_open(0.0, e)]
        }
    }

    pub fn intersects(&self, other: &AngleArc) -> bool {
        self.pieces()
            .iter()
            .any(|a| other.pieces().iter().any(|b| a.intersect(b).is_some()))
    }

    /// Rotates the whole arc clockwise.
    pub fn offset(&self, degrees: f64) -> AngleArc {
        AngleArc::new(self.start.offset(degrees), self.end.offset(degrees))
    }
}

impl fmt::Display for AngleArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces()
            .iter()
            .map(|i| format!("[{}°, {}°)", i.lower, i.upper))
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// A directed range between two sectors of the same rose, e.g. "east to
/// southeast".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorSpan {
    pub from: Sector,
    pub to: Sector,
}

impl SectorSpan {
    pub fn new(from: Sector, to: Sector) -> Result<Self, ParseError> {
        if from.rose() != to.rose() {
            return Err(ParseError::new(
                "",
                0,
                format!("span endpoints use different roses ({} vs {})", from, to),
            ));
        }
        Ok(SectorSpan { from, to })
    }

    /// Builds a span from sectors of possibly different granularity by
    /// promoting both endpoints to the finer rose.
    pub fn promoting(a: Sector, b: Sector) -> SectorSpan {
        let finer = a.rose().max(b.rose());
        SectorSpan { from: a.promote(finer), to: b.promote(finer) }
    }

    /// Closed arc between the endpoint centers, traversed clockwise from
    /// `from` to `to`. Degenerate spans hull to a single bearing.
    pub fn hull(&self) -> Vec<Interval> {
        let s = self.from.center().value();
        let e = self.to.center().value();
        if s == e {
            vec![Interval::point(s)]
        } else if s < e {
            vec![Interval::closed(s, e)]
        } else {
            vec![Interval::closed(s, 360.0), Interval::closed(0.0, e)]
        }
    }
}

impl fmt::Display for SectorSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} to {}", self.from, self.to)
    }
}

/// Sideways component of a body-relative direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lateral {
    Left,
    Right,
}

/// Along-track component of a body-relative direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Longitudinal {
    Forward,
    Backward,
}

/// Vertical component; "top" and "bottom" are aliases of up and down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertical {
    Up,
    Down,
}

/// A body-relative direction: at least one axis term, at most one per axis.
/// Composites pair terms of different axes, e.g. "top-left" or
/// "forward-right".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RelativeDirection {
    pub vertical: Option<Vertical>,
    pub longitudinal: Option<Longitudinal>,
    pub lateral: Option<Lateral>,
}

impl RelativeDirection {
    pub fn has_vertical(&self) -> bool {
        self.vertical.is_some()
    }

    /// Clockwise offset from the facing bearing, when this direction lies in
    /// the horizontal plane: forward 0°, right 90°, backward 180°, left 270°,
    /// diagonals halfway between.
    pub fn horizontal_offset(&self) -> Result<f64, UnmappableError> {
        if self.has_vertical() {
            return Err(UnmappableError { direction: self.to_string() });
        }
        let offset = match (self.longitudinal, self.lateral) {
            (Some(Longitudinal::Forward), None) => 0.0,
            (Some(Longitudinal::Backward), None) => 180.0,
            (None, Some(Lateral::Right)) => 90.0,
            (None, Some(Lateral::Left)) => 270.0,
            (Some(Longitudinal::Forward), Some(Lateral::Right)) => 45.0,
            (Some(Longitudinal::Backward), Some(Lateral::Right)) => 135.0,
            (Some(Longitudinal::Backward), Some(Lateral::Left)) => 225.0,
            (Some(Longitudinal::Forward), Some(Lateral::Left)) => 315.0,
            (None, None) => unreachable!("relative direction with no axis term"),
        };
        Ok(offset)
    }
}

impl FromStr for RelativeDirection {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut dir =
            RelativeDirection { vertical: None, longitudinal: None, lateral: None };
        let tokens: Vec<&str> = text
            .split(|c: char| c == '-' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            return Err(ParseError::new(text, 0, "empty relative direction"));
        }
        for token in &tokens {
            let lower = token.to_lowercase();
            match lower.as_str() {
                "up" | "top" => set_once(&mut dir.vertical, Vertical::Up, text)?,
                "down" | "bottom" => set_once(&mut dir.vertical, Vertical::Down, text)?,
                "forward" => set_once(&mut dir.longitudinal, Longitudinal::Forward, text)?,
                "backward" => set_once(&mut dir.longitudinal, Longitudinal::Backward, text)?,
                "left" => set_once(&mut dir.lateral, Lateral::Left, text)?,
                "right" => set_once(&mut dir.lateral, Lateral::Right, text)?,
                _ => {
                    return Err(ParseError::new(
                        text,
                        0,
                        format!("unknown relative direction term {token:?}"),
                    ))
                }
            }
        }
        Ok(dir)
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, input: &str) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError::new(input, 0, "repeated axis in relative direction"));
    }
    *slot = Some(value);
    Ok(())
}

impl TryFrom<String> for RelativeDirection {
    type Error = ParseError;
    fn try_from(s: String) -> Result<Self, ParseError> {
        s.parse()
    }
}

impl From<RelativeDirection> for String {
    fn from(d: RelativeDirection) -> String {
        d.to_string()
    }
}

impl fmt::Display for RelativeDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let composite = [
            self.vertical.is_some(),
            self.longitudinal.is_some(),
            self.lateral.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count()
            > 1;
        let mut parts = Vec::new();
        if let Some(v) = self.vertical {
            parts.push(match (v, composite) {
                (Vertical::Up, true) => "top",
                (Vertical::Up, false) => "up",
                (Vertical::Down, true) => "bottom",
                (Vertical::Down, false) => "down",
            });
        }
        if let Some(l) = self.longitudinal {
            parts.push(match l {
                Longitudinal::Forward => "forward",
                Longitudinal::Backward => "backward",
            });
        }
        if let Some(l) = self.lateral {
            parts.push(match l {
                Lateral::Left => "left",
                Lateral::Right => "right",
            });
        }
        f.write_str(&parts.join("-"))
    }
}

/// A relative-direction range; a single term is the degenerate span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeSpan {
    pub from: RelativeDirection,
    pub to: RelativeDirection,
}

impl RelativeSpan {
    pub fn single(d: RelativeDirection) -> Self {
        RelativeSpan { from: d, to: d }
    }

    pub fn is_single(&self) -> bool {
        self.from == self.to
    }

    pub fn has_vertical(&self) -> bool {
        self.from.has_vertical() || self.to.has_vertical()
    }
}

impl fmt::Display for RelativeSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.from)
        } else {
            write!(f, "{} to {}", self.from, self.to)
        }
    }
}

/// Any direction value a source dataset can express.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Direction {
    Angle { degrees: AngleDeg },
    Sector { sector: Sector },
    SectorSpan { span: SectorSpan },
    RelativeSpan { span: RelativeSpan },
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Angle { degrees } => write!(f, "{degrees}"),
            Direction::Sector { sector } => write!(f, "{sector}"),
            Direction::SectorSpan { span } => write!(f, "{span}"),
            Direction::RelativeSpan { span } => write!(f, "{span}"),
        }
    }
}

/// Parses a direction expression: decimal degrees with an optional `°`
/// suffix, wind names at any granularity (optionally annotated with a rose,
/// `north[16]`), relative terms, and `A to B` spans of either kind.
pub fn parse_direction(text: &str) -> Result<Direction, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseError::new(text, 0, "empty input"));
    }

    if let Some((left, right, right_at)) = split_span(trimmed) {
        let a = parse_side(trimmed, left, 0)?;
        let b = parse_side(trimmed, right, right_at)?;
        return match (a, b) {
            (Side::Sector(x), Side::Sector(y)) => {
                Ok(Direction::SectorSpan { span: SectorSpan::promoting(x, y) })
            }
            (Side::Relative(x), Side::Relative(y)) => {
                Ok(Direction::RelativeSpan { span: RelativeSpan { from: x, to: y } })
            }
            _ => Err(ParseError::new(
                text,
                right_at,
                "span mixes cardinal and relative endpoints",
            )),
        };
    }

    if let Some(angle) = parse_angle(trimmed) {
        return Ok(Direction::Angle { degrees: angle });
    }
    match parse_side(trimmed, trimmed, 0)? {
        Side::Sector(s) => Ok(Direction::Sector { sector: s }),
        Side::Relative(r) => Ok(Direction::RelativeSpan { span: RelativeSpan::single(r) }),
    }
}

enum Side {
    Sector(Sector),
    Relative(RelativeDirection),
}

fn parse_side(input: &str, side: &str, at: usize) -> Result<Side, ParseError> {
    let side = side.trim();
    if side.is_empty() {
        return Err(ParseError::new(input, at, "empty span endpoint"));
    }
    if parse_angle(side).is_some() {
        return Err(ParseError::new(input, at, "angles cannot form spans; use sector names"));
    }
    if let Some(sector) = parse_sector_name(side) {
        return Ok(Side::Sector(sector?));
    }
    match side.parse::<RelativeDirection>() {
        Ok(r) => Ok(Side::Relative(r)),
        Err(e) => Err(ParseError::new(
            input,
            at,
            format!("not an angle, sector name, or relative direction: {}", e.reason),
        )),
    }
}

/// Finds a standalone "to" separator; returns (left, right, right offset).
fn split_span(text: &str) -> Option<(&str, &str, usize)> {
    let lower = text.to_lowercase();
    let bytes = lower.as_bytes();
    let mut search = 0;
    while let Some(pos) = lower[search..].find("to") {
        let start = search + pos;
        let end = start + 2;
        let before_ok = start > 0 && bytes[start - 1].is_ascii_whitespace();
        let after_ok = end < bytes.len() && bytes[end].is_ascii_whitespace();
        if before_ok && after_ok {
            return Some((&text[..start], &text[end..], end + 1));
        }
        search = end;
    }
    None
}

fn parse_angle(text: &str) -> Option<AngleDeg> {
    let body = text.strip_suffix('°').unwrap_or(text).trim();
    let v: f64 = body.parse().ok()?;
    if v.is_finite() {
        Some(AngleDeg::new(v))
    } else {
        None
    }
}

/// Recognizes a wind name with an optional `[rose]` annotation. Returns
/// `None` when the text is not a wind name at all; returns an error when the
/// name is real but invalid for the annotated rose.
fn parse_sector_name(text: &str) -> Option<Result<Sector, ParseError>> {
    let (name_part, rose) = match text.rfind('[') {
        Some(open) if text.ends_with(']') => {
            let digits = &text[open + 1..text.len() - 1];
            let count: u32 = match digits.trim().parse() {
                Ok(c) => c,
                Err(_) => return None,
            };
            match CompassRose::new(count) {
                Ok(r) => (&text[..open], Some(r)),
                Err(e) => {
                    return Some(Err(ParseError::new(text, open, e.to_string())));
                }
            }
        }
        _ => (text, None),
    };
    let wind = Wind::parse(name_part.trim())?;
    let rose = rose.unwrap_or_else(|| wind.coarsest_rose());
    Some(Sector::new(rose, wind).map_err(|e| ParseError::new(text, 0, e.reason)))
}

/// The unique sector of `rose` whose arc contains `a`.
pub fn sector_of_angle(a: AngleDeg, rose: CompassRose) -> Sector {
    let w = rose.width();
    let shifted = a.offset(w / 2.0);
    let mut index = (shifted.value() / w) as usize;
    if index >= rose.sectors() as usize {
        index = 0;
    }
    let wind = Wind::ALL[index * (16 / rose.sectors() as usize)];
    Sector { rose, wind }
}

/// Half-open arc of width `360 / rose.sectors()` centered on the sector.
pub fn interval_of_sector(s: Sector) -> AngleArc {
    let half = s.rose().width() / 2.0;
    AngleArc::new(s.center().offset(-half), s.center().offset(half))
}

/// Every sector of the coarser `target` rose whose arc meets the arc of `s`.
pub fn coarsen(s: Sector, target: CompassRose) -> Result<Vec<Sector>, GranularityError> {
    if target.sectors() >= s.rose().sectors() {
        return Err(GranularityError::NotCoarser {
            target: target.sectors(),
            current: s.rose().sectors(),
        });
    }
    let fine = interval_of_sector(s);
    Ok(target
        .all_sectors()
        .into_iter()
        .filter(|t| interval_of_sector(*t).intersects(&fine))
        .collect())
}

/// What the observer was oriented toward when reporting a relative direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Facing {
    Angle(AngleDeg),
    Sector(Sector),
}

/// A grounded bearing: a single angle, or the sectors covered by rotating a
/// whole facing sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BearingEstimate {
    Angle { degrees: AngleDeg },
    Sectors { sectors: Vec<Sector> },
}

/// Grounds a horizontal relative direction against the facing direction.
///
/// An angle facing yields an exact bearing. A sector facing yields the
/// sector set covered by rotating its whole arc, graded `Widened` because
/// the answer inherits the facing sector's width.
pub fn relative_to_cardinal(
    r: RelativeDirection,
    facing: Facing,
) -> Result<MappingOutcome<BearingEstimate>, UnmappableError> {
    let offset = r.horizontal_offset()?;
    match facing {
        Facing::Angle(a) => Ok(MappingOutcome::Exact(BearingEstimate::Angle {
            degrees: a.offset(offset),
        })),
        Facing::Sector(s) => {
            let rotated = interval_of_sector(s).offset(offset);
            let covered: Vec<Sector> = s
                .rose()
                .all_sectors()
                .into_iter()
                .filter(|t| interval_of_sector(*t).intersects(&rotated))
                .collect();
            Ok(MappingOutcome::Widened(BearingEstimate::Sectors { sectors: covered }))
        }
    }
}

/// Circular midpoint of the two sector centers along the shorter arc.
pub fn span_midpoint(span: &SectorSpan) -> Result<AngleDeg, AmbiguousSpanError> {
    let from = span.from.center();
    let to = span.to.center();
    let d = from.clockwise_to(to);
    if d == 180.0 {
        return Err(AmbiguousSpanError {
            from: span.from.to_string(),
            to: span.to.to_string(),
        });
    }
    if d < 180.0 {
        Ok(from.offset(d / 2.0))
    } else {
        Ok(to.offset((360.0 - d) / 2.0))
    }
}
