//! Color representations: dictionary names, hex codes, and ordered color
//! sequences.
//!
//! The bundled lexicon is the 148-entry standard web color-keyword table.
//! Names outside the lexicon do not fail parsing — they degrade to
//! `unresolved_name`, because sources routinely contain colors like
//! "light blue-green" that no code table covers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const BUILTIN_LEXICON: &str = include_str!("../data/web_colors.tsv");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColorError {
    #[error("malformed hex color {text:?}: {reason}")]
    MalformedHex { text: String, reason: String },
    #[error("color name {name:?} is not in the lexicon")]
    UnknownName { name: String },
    #[error("empty color entry in {text:?}")]
    EmptyEntry { text: String },
    #[error("lexicon line {line}: {reason}")]
    LexiconFormat { line: usize, reason: String },
    #[error("cannot read lexicon: {0}")]
    LexiconIo(String),
}

/// An sRGB triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb { r, g, b }
    }

    /// Parses `#RRGGBB` or `#RGB` (three-digit form expands each digit).
    pub fn from_hex(text: &str) -> Result<Self, ColorError> {
        let bad = |reason: &str| ColorError::MalformedHex {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let digits = text.strip_prefix('#').ok_or_else(|| bad("missing leading '#'"))?;
        let nibble = |c: char| c.to_digit(16).map(|d| d as u8);
        let values: Option<Vec<u8>> = digits.chars().map(nibble).collect();
        let values = values.ok_or_else(|| bad("non-hexadecimal digit"))?;
        match values.as_slice() {
            [r, g, b] => Ok(Rgb::new(r * 17, g * 17, b * 17)),
            [r1, r2, g1, g2, b1, b2] => Ok(Rgb::new(r1 * 16 + r2, g1 * 16 + g2, b1 * 16 + b2)),
            _ => Err(bad("expected 3 or 6 hex digits")),
        }
    }

    pub fn hex(&self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }

    /// Squared Euclidean distance in RGB space; exact in integers.
    pub fn distance_squared(&self, other: &Rgb) -> u32 {
        let d = |a: u8, b: u8| {
            let diff = a as i32 - b as i32;
            (diff * diff) as u32
        };
        d(self.r, other.r) + d(self.g, other.g) + d(self.b, other.b)
    }

    pub fn distance(&self, other: &Rgb) -> f64 {
        (self.distance_squared(other) as f64).sqrt()
    }
}

impl TryFrom<String> for Rgb {
    type Error = ColorError;
    fn try_from(s: String) -> Result<Self, ColorError> {
        Rgb::from_hex(&s)
    }
}

impl From<Rgb> for String {
    fn from(c: Rgb) -> String {
        c.hex()
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// A single color as it appeared in the source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColorValue {
    /// A lexicon name together with its resolved code.
    Named { name: String, rgb: Rgb },
    /// A bare color code.
    Coded { rgb: Rgb },
    /// A name the lexicon does not cover; kept as text.
    UnresolvedName { name: String },
}

impl ColorValue {
    pub fn rgb(&self) -> Option<Rgb> {
        match self {
            ColorValue::Named { rgb, .. } | ColorValue::Coded { rgb } => Some(*rgb),
            ColorValue::UnresolvedName { .. } => None,
        }
    }
}

impl fmt::Display for ColorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorValue::Named { name, .. } => f.write_str(name),
            ColorValue::Coded { rgb } => f.write_str(&rgb.hex()),
            ColorValue::UnresolvedName { name } => f.write_str(name),
        }
    }
}

/// An ordered, non-empty list of colors; order comes from the source text
/// and is semantically a timeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorSequence(Vec<ColorValue>);

impl ColorSequence {
    pub fn new(colors: Vec<ColorValue>) -> Option<Self> {
        if colors.is_empty() {
            None
        } else {
            Some(ColorSequence(colors))
        }
    }

    pub fn colors(&self) -> &[ColorValue] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }
}

impl fmt::Display for ColorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Result of parsing a color field: one color or an ordered sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedColor {
    Single(ColorValue),
    Sequence(ColorSequence),
}

/// Name → RGB lookup table. Keys are lowercase; aliases (distinct names,
/// same code) are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorLexicon {
    entries: BTreeMap<String, Rgb>,
}

impl ColorLexicon {
    /// The bundled standard web color-keyword table (148 entries).
    pub fn builtin() -> Self {
        ColorLexicon::from_tsv(BUILTIN_LEXICON).expect("bundled lexicon is well-formed")
    }

    /// Parses `name<TAB>RRGGBB` lines; blank lines are ignored.
    pub fn from_tsv(text: &str) -> Result<Self, ColorError> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (name, hex) = match (fields.next(), fields.next(), fields.next()) {
                (Some(name), Some(hex), None) => (name.trim(), hex.trim()),
                _ => {
                    return Err(ColorError::LexiconFormat {
                        line: idx + 1,
                        reason: "expected `name<TAB>RRGGBB`".to_string(),
                    })
                }
            };
            if name.is_empty() {
                return Err(ColorError::LexiconFormat {
                    line: idx + 1,
                    reason: "empty name".to_string(),
                });
            }
            let rgb = Rgb::from_hex(&format!("#{hex}")).map_err(|e| ColorError::LexiconFormat {
                line: idx + 1,
                reason: e.to_string(),
            })?;
            if entries.insert(name.to_lowercase(), rgb).is_some() {
                return Err(ColorError::LexiconFormat {
                    line: idx + 1,
                    reason: format!("duplicate name {name:?}"),
                });
            }
        }
        Ok(ColorLexicon { entries })
    }

    pub fn from_path(path: &Path) -> Result<Self, ColorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ColorError::LexiconIo(format!("{}: {e}", path.display())))?;
        ColorLexicon::from_tsv(&text)
    }

    pub fn get(&self, name: &str) -> Option<Rgb> {
        self.entries.get(&name.trim().to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in alphabetical name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Rgb)> {
        self.entries.iter().map(|(n, c)| (n.as_str(), *c))
    }
}

/// Parses a color expression: a hex code, a lexicon name, or a
/// comma-separated sequence of either. Unknown names become
/// [`ColorValue::UnresolvedName`]; malformed hex codes are errors.
pub fn parse_color(text: &str, lexicon: &ColorLexicon) -> Result<ParsedColor, ColorError> {
    let entries: Vec<&str> = text.split(',').collect();
    let mut colors = Vec::with_capacity(entries.len());
    for entry in &entries {
        let entry = entry.trim();
        if entry.is_empty() {
            return Err(ColorError::EmptyEntry { text: text.to_string() });
        }
        colors.push(parse_one(entry, lexicon)?);
    }
    if colors.len() == 1 {
        Ok(ParsedColor::Single(colors.pop().unwrap()))
    } else {
        Ok(ParsedColor::Sequence(ColorSequence::new(colors).unwrap()))
    }
}

fn parse_one(entry: &str, lexicon: &ColorLexicon) -> Result<ColorValue, ColorError> {
    if entry.starts_with('#') {
        return Ok(ColorValue::Coded { rgb: Rgb::from_hex(entry)? });
    }
    match lexicon.get(entry) {
        Some(rgb) => Ok(ColorValue::Named { name: entry.to_lowercase(), rgb }),
        None => Ok(ColorValue::UnresolvedName { name: entry.to_string() }),
    }
}

/// Exact lexicon lookup, case-insensitive.
pub fn name_to_rgb(name: &str, lexicon: &ColorLexicon) -> Result<Rgb, ColorError> {
    lexicon
        .get(name)
        .ok_or_else(|| ColorError::UnknownName { name: name.to_string() })
}

/// The lexicon entry closest to `color` in Euclidean RGB distance, with the
/// distance so callers can grade the match (0 is exact). Ties break
/// alphabetically.
pub fn nearest_name<'a>(color: Rgb, lexicon: &'a ColorLexicon) -> (&'a str, f64) {
    let mut best: Option<(&str, u32)> = None;
    for (name, rgb) in lexicon.iter() {
        let d = color.distance_squared(&rgb);
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((name, d)),
        }
    }
    let (name, d) = best.expect("lexicon is non-empty");
    (name, (d as f64).sqrt())
}

/// Hue in degrees `[0, 360)`, saturation and value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hsv {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

pub fn rgb_to_hsv(c: Rgb) -> Hsv {
    let r = c.r as f64 / 255.0;
    let g = c.g as f64 / 255.0;
    let b = c.b as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let s = if max == 0.0 { 0.0 } else { delta / max };
    Hsv { h: h.rem_euclid(360.0), s, v: max }
}

pub fn hsv_to_rgb(c: Hsv) -> Rgb {
    let chroma = c.v * c.s;
    let hp = c.h.rem_euclid(360.0) / 60.0;
    let x = chroma * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = c.v - chroma;
    let to_byte = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    Rgb::new(to_byte(r1), to_byte(g1), to_byte(b1))
}
