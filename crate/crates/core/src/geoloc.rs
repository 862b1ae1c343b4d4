//! Observer-location parsing and offline gazetteer resolution.
//!
//! Locations arrive as place names, postal codes, or coordinates in decimal
//! or DMS notation. Coordinates parse to points; names and codes stay
//! symbolic until a gazetteer resolves them, and that resolution is always
//! graded lossy — a name denotes an area, not a point. Celestial frames
//! (ecliptic, galactic, supergalactic, equatorial) and RA/Dec pairs are
//! tagged but never converted.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::outcome::MappingOutcome;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("cannot parse location {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("{what} {value} is out of range")]
    OutOfRange { what: String, value: f64 },
    #[error("no gazetteer entry for {key:?}")]
    NotFound { key: String },
    #[error("gazetteer line {line}: {reason}")]
    GazetteerFormat { line: usize, reason: String },
    #[error("cannot read gazetteer: {0}")]
    GazetteerIo(String),
}

/// Reference frame of a latitude/longitude pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    #[default]
    Geographic,
    Ecliptic,
    Galactic,
    Supergalactic,
    Equatorial,
}

impl Frame {
    fn from_word(word: &str) -> Option<Frame> {
        match word.to_lowercase().as_str() {
            "geographic" => Some(Frame::Geographic),
            "ecliptic" => Some(Frame::Ecliptic),
            "galactic" => Some(Frame::Galactic),
            "supergalactic" => Some(Frame::Supergalactic),
            "equatorial" => Some(Frame::Equatorial),
            _ => None,
        }
    }

    fn word(self) -> &'static str {
        match self {
            Frame::Geographic => "geographic",
            Frame::Ecliptic => "ecliptic",
            Frame::Galactic => "galactic",
            Frame::Supergalactic => "supergalactic",
            Frame::Equatorial => "equatorial",
        }
    }
}

/// A coordinate pair: latitude in `[-90, 90]`, longitude normalized to
/// `(-180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeoPointRepr", into = "GeoPointRepr")]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
    frame: Frame,
}

#[derive(Serialize, Deserialize)]
struct GeoPointRepr {
    lat: f64,
    lon: f64,
    #[serde(default)]
    frame: Frame,
}

impl TryFrom<GeoPointRepr> for GeoPoint {
    type Error = GeoError;
    fn try_from(r: GeoPointRepr) -> Result<Self, GeoError> {
        GeoPoint::new(r.lat, r.lon, r.frame)
    }
}

impl From<GeoPoint> for GeoPointRepr {
    fn from(p: GeoPoint) -> GeoPointRepr {
        GeoPointRepr { lat: p.lat, lon: p.lon, frame: p.frame }
    }
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64, frame: Frame) -> Result<Self, GeoError> {
        if !lat.is_finite() || !(-90.0..=90.0).contains(&lat) {
            return Err(GeoError::OutOfRange { what: "latitude".to_string(), value: lat });
        }
        if !lon.is_finite() {
            return Err(GeoError::OutOfRange { what: "longitude".to_string(), value: lon });
        }
        let mut lon = lon % 360.0;
        if lon > 180.0 {
            lon -= 360.0;
        } else if lon <= -180.0 {
            lon += 360.0;
        }
        Ok(GeoPoint { lat, lon, frame })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.frame != Frame::Geographic {
            write!(f, "{} ", self.frame.word())?;
        }
        write!(
            f,
            "{}° {}, {}° {}",
            self.lat.abs(),
            if self.lat < 0.0 { 'S' } else { 'N' },
            self.lon.abs(),
            if self.lon < 0.0 { 'W' } else { 'E' },
        )
    }
}

/// A location as a source dataset expressed it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocationValue {
    Point { point: GeoPoint },
    Place { name: String },
    Postal { code: String, place: Option<String> },
    RaDec { ra: f64, dec: f64 },
}

impl fmt::Display for LocationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocationValue::Point { point } => write!(f, "{point}"),
            LocationValue::Place { name } => f.write_str(name),
            LocationValue::Postal { code, place: Some(place) } => write!(f, "{code}, {place}"),
            LocationValue::Postal { code, place: None } => f.write_str(code),
            LocationValue::RaDec { ra, dec } => write!(f, "ra {ra}, dec {dec}"),
        }
    }
}

/// Place or postal lookup. Implementations must be deterministic for fixed
/// data and safe for concurrent reads.
pub trait Gazetteer {
    fn resolve(&self, key: &str) -> Option<GeoPoint>;
}

/// Lowercases, collapses whitespace, and normalizes comma spacing so that
/// "Jena,  Germany" and "jena, germany" share a key.
pub fn normalize_key(key: &str) -> String {
    key.split(',')
        .map(|part| part.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|part| !part.is_empty())
        .collect::<Vec<_>>()
        .join(", ")
        .to_lowercase()
}

/// Gazetteer backed by a flat file of `key<TAB>lat<TAB>lon` lines.
#[derive(Debug, Clone)]
pub struct FlatFileGazetteer {
    entries: BTreeMap<String, GeoPoint>,
}

impl FlatFileGazetteer {
    /// The bundled test dataset (Thuringian places, Jena included).
    pub fn builtin() -> Self {
        FlatFileGazetteer::from_tsv(include_str!("../data/gazetteer.tsv"))
            .expect("bundled gazetteer is well-formed")
    }

    pub fn from_tsv(text: &str) -> Result<Self, GeoError> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(GeoError::GazetteerFormat {
                    line: idx + 1,
                    reason: format!("expected `key<TAB>lat<TAB>lon`, found {} fields", fields.len()),
                });
            }
            let lat: f64 = fields[1].trim().parse().map_err(|_| GeoError::GazetteerFormat {
                line: idx + 1,
                reason: format!("latitude is not a number: {:?}", fields[1]),
            })?;
            let lon: f64 = fields[2].trim().parse().map_err(|_| GeoError::GazetteerFormat {
                line: idx + 1,
                reason: format!("longitude is not a number: {:?}", fields[2]),
            })?;
            let point = GeoPoint::new(lat, lon, Frame::Geographic).map_err(|e| {
                GeoError::GazetteerFormat { line: idx + 1, reason: e.to_string() }
            })?;
            entries.insert(normalize_key(fields[0]), point);
        }
        Ok(FlatFileGazetteer { entries })
    }

    pub fn from_path(path: &Path) -> Result<Self, GeoError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeoError::GazetteerIo(format!("{}: {e}", path.display())))?;
        FlatFileGazetteer::from_tsv(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Gazetteer for FlatFileGazetteer {
    fn resolve(&self, key: &str) -> Option<GeoPoint> {
        self.entries.get(&normalize_key(key)).copied()
    }
}

fn coord_token_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r#"(?x)^\s*
            ([+-])?\s*
            (\d+(?:\.\d+)?)\s*[°º]?\s*
            (?:
                (\d+(?:\.\d+)?)\s*[′'’]\s*
                (?:(\d+(?:\.\d+)?)\s*[″"”]?\s*)?
            )?
            ([NSEWnsew])?\s*$"#,
        )
        .unwrap()
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Axis {
    Lat,
    Lon,
}

/// One parsed coordinate: signed decimal degrees plus the axis its
/// hemisphere letter implies, if any.
struct CoordToken {
    degrees: f64,
    axis: Option<Axis>,
}

fn parse_coord_token(text: &str) -> Option<Result<CoordToken, GeoError>> {
    let caps = coord_token_regex().captures(text)?;
    let deg: f64 = caps.get(2)?.as_str().parse().ok()?;
    let minutes: f64 = match caps.get(3) {
        Some(m) => m.as_str().parse().ok()?,
        None => 0.0,
    };
    let seconds: f64 = match caps.get(4) {
        Some(s) => s.as_str().parse().ok()?,
        None => 0.0,
    };
    if minutes >= 60.0 {
        return Some(Err(GeoError::OutOfRange { what: "minutes".to_string(), value: minutes }));
    }
    if seconds >= 60.0 {
        return Some(Err(GeoError::OutOfRange { what: "seconds".to_string(), value: seconds }));
    }
    let mut value = deg + minutes / 60.0 + seconds / 3600.0;
    if caps.get(1).map(|s| s.as_str()) == Some("-") {
        value = -value;
    }
    let axis = match caps.get(5).map(|h| h.as_str().to_ascii_uppercase()) {
        Some(h) => {
            if matches!(h.as_str(), "S" | "W") {
                value = -value;
            }
            Some(if matches!(h.as_str(), "N" | "S") { Axis::Lat } else { Axis::Lon })
        }
        None => None,
    };
    Some(Ok(CoordToken { degrees: value, axis }))
}

fn ra_dec_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?ix)^\s*ra\s*[:=]?\s*([+-]?\d+(?:\.\d+)?)\s*[,;]\s*dec\s*[:=]?\s*([+-]?\d+(?:\.\d+)?)\s*$",
        )
        .unwrap()
    })
}

/// Parses a location: coordinates with hemisphere letters, signed decimals,
/// DMS notation, `RA …, Dec …` pairs, leading-postal-code forms, or — when
/// nothing else matches — a place name. Frames other than geographic are
/// given as a leading word, e.g. `galactic 96.3° N, 60.2° W`.
pub fn parse_location(text: &str) -> Result<LocationValue, GeoError> {
    let err = |reason: &str| GeoError::Parse { text: text.to_string(), reason: reason.to_string() };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty input"));
    }

    if let Some(caps) = ra_dec_regex().captures(trimmed) {
        let ra: f64 = caps[1].parse().unwrap();
        let dec: f64 = caps[2].parse().unwrap();
        if !(0.0..360.0).contains(&ra) {
            return Err(GeoError::OutOfRange { what: "right ascension".to_string(), value: ra });
        }
        if !(-90.0..=90.0).contains(&dec) {
            return Err(GeoError::OutOfRange { what: "declination".to_string(), value: dec });
        }
        return Ok(LocationValue::RaDec { ra, dec });
    }

    // Optional leading frame word.
    let (frame, rest) = match trimmed.split_once(|c: char| c.is_whitespace() || c == ':') {
        Some((head, rest)) => match Frame::from_word(head.trim_end_matches(':')) {
            Some(frame) => (Some(frame), rest.trim_start_matches(':').trim()),
            None => (None, trimmed),
        },
        None => (None, trimmed),
    };

    let parts: Vec<&str> = rest.split(',').collect();
    if parts.len() == 2 {
        let tokens = (parse_coord_token(parts[0]), parse_coord_token(parts[1]));
        if let (Some(a), Some(b)) = tokens {
            let (a, b) = (a?, b?);
            let (lat, lon) = match (a.axis, b.axis) {
                (Some(Axis::Lat), Some(Axis::Lon)) | (None, None) | (Some(Axis::Lat), None) | (None, Some(Axis::Lon)) => {
                    (a.degrees, b.degrees)
                }
                (Some(Axis::Lon), Some(Axis::Lat)) | (Some(Axis::Lon), None) | (None, Some(Axis::Lat)) => {
                    (b.degrees, a.degrees)
                }
                (Some(Axis::Lat), Some(Axis::Lat)) | (Some(Axis::Lon), Some(Axis::Lon)) => {
                    return Err(err("both coordinates name the same hemisphere axis"))
                }
            };
            if !(-90.0..=90.0).contains(&lat) {
                return Err(GeoError::OutOfRange { what: "latitude".to_string(), value: lat });
            }
            if !(-180.0..360.0).contains(&lon) {
                return Err(GeoError::OutOfRange { what: "longitude".to_string(), value: lon });
            }
            let point = GeoPoint::new(lat, lon, frame.unwrap_or_default())?;
            return Ok(LocationValue::Point { point });
        }
    }

    if frame.is_some() {
        return Err(err("frame tag must be followed by a coordinate pair"));
    }

    // Leading postal code: digits, then an optional place name.
    if let Some((first, remainder)) = split_first_comma(trimmed) {
        if looks_like_postal_code(first) && !remainder.is_empty() {
            return Ok(LocationValue::Postal {
                code: first.to_string(),
                place: Some(remainder.to_string()),
            });
        }
    } else if looks_like_postal_code(trimmed) {
        return Ok(LocationValue::Postal { code: trimmed.to_string(), place: None });
    }

    Ok(LocationValue::Place { name: trimmed.to_string() })
}

fn split_first_comma(text: &str) -> Option<(&str, &str)> {
    text.split_once(',').map(|(a, b)| (a.trim(), b.trim()))
}

fn looks_like_postal_code(text: &str) -> bool {
    (3..=10).contains(&text.len()) && text.chars().all(|c| c.is_ascii_digit())
}

/// Resolves a location to a point. Points pass through exact; places and
/// postal codes go through the gazetteer and come back lossy; RA/Dec pairs
/// are unmapped because frame conversion is out of scope.
pub fn resolve_location(
    value: &LocationValue,
    gazetteer: &dyn Gazetteer,
) -> Result<MappingOutcome<GeoPoint>, GeoError> {
    match value {
        LocationValue::Point { point } => Ok(MappingOutcome::Exact(*point)),
        LocationValue::Place { name } => match gazetteer.resolve(name) {
            Some(point) => Ok(MappingOutcome::Lossy(point)),
            None => Err(GeoError::NotFound { key: name.clone() }),
        },
        LocationValue::Postal { code, place } => {
            if let Some(point) = gazetteer.resolve(code) {
                return Ok(MappingOutcome::Lossy(point));
            }
            if let Some(place) = place {
                if let Some(point) = gazetteer.resolve(place) {
                    return Ok(MappingOutcome::Lossy(point));
                }
            }
            Err(GeoError::NotFound { key: code.clone() })
        }
        LocationValue::RaDec { .. } => Ok(MappingOutcome::Unmapped),
    }
}
