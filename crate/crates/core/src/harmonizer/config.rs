//! Mapping configuration: which column of which source dataset feeds which
//! key concept, plus per-column parser hints.
//!
//! The config file is TOML with one section per source dataset. Each key is
//! a column name and each value a binding descriptor:
//!
//! ```toml
//! [dataset2]
//! "level of experience" = "expertise; scale = interval(1, 10)"
//! "viewing-direction" = "viewing_direction"
//! "moving-direction" = "moving_direction; facing = viewing-direction"
//! color = "visual"
//! ```
//!
//! Descriptor grammar: `concept[; hint = value]*`. Hints: `scale` (required
//! for expertise), `rose` (4, 8, or 16; direction concepts), `facing`
//! (column reference; direction concepts), `lexicon` (path; visual).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compass::CompassRose;
use crate::scales::Scale;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(String),
    #[error("config is not valid TOML: {0}")]
    Toml(String),
    #[error("config section {dataset:?}, column {column:?}: {reason}")]
    BadBinding { dataset: String, column: String, reason: String },
    #[error("no config section for source {dataset:?}")]
    MissingSection { dataset: String },
    #[error("config for source {dataset:?} references column {column:?}, which the dataset does not have{via}")]
    MissingColumn { dataset: String, column: String, via: String },
    #[error("cannot load lexicon for source {dataset:?}, column {column:?}: {reason}")]
    Lexicon { dataset: String, column: String, reason: String },
}

/// The closed set of key concepts a column can feed.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Concept {
    Expertise,
    Location,
    Visual,
    MovingDirection,
    ViewingDirection,
    Duration,
}

impl Concept {
    pub const ALL: [Concept; 6] = [
        Concept::Expertise,
        Concept::Location,
        Concept::Visual,
        Concept::MovingDirection,
        Concept::ViewingDirection,
        Concept::Duration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Concept::Expertise => "expertise",
            Concept::Location => "location",
            Concept::Visual => "visual",
            Concept::MovingDirection => "moving_direction",
            Concept::ViewingDirection => "viewing_direction",
            Concept::Duration => "duration",
        }
    }

    pub fn is_direction(self) -> bool {
        matches!(self, Concept::MovingDirection | Concept::ViewingDirection)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let folded = s.trim().to_lowercase().replace('-', "_");
        Concept::ALL
            .into_iter()
            .find(|c| c.name() == folded)
            .ok_or_else(|| format!("unknown concept {s:?}; expected one of expertise, location, visual, moving_direction, viewing_direction, duration"))
    }
}

/// How one column maps onto a concept.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnBinding {
    pub concept: Concept,
    /// Scale of the source values; required for expertise columns.
    pub scale: Option<Scale>,
    /// Granularity to read bare sector names at, overriding the
    /// coarsest-rose default.
    pub rose: Option<CompassRose>,
    /// Column holding the observer's facing direction, for grounding
    /// relative directions.
    pub facing: Option<String>,
    /// Color lexicon file overriding the bundled table.
    pub lexicon: Option<PathBuf>,
}

impl ColumnBinding {
    fn parse(descriptor: &str) -> Result<Self, String> {
        let mut parts = descriptor.split(';');
        let concept: Concept = parts.next().unwrap_or("").parse()?;
        let mut binding =
            ColumnBinding { concept, scale: None, rose: None, facing: None, lexicon: None };
        for hint in parts {
            let (key, value) = hint
                .split_once('=')
                .ok_or_else(|| format!("hint {hint:?} is not `key = value`"))?;
            let value = value.trim();
            match key.trim().to_lowercase().as_str() {
                "scale" => {
                    require(concept == Concept::Expertise, "scale", concept)?;
                    binding.scale = Some(value.parse().map_err(|e| format!("{e}"))?);
                }
                "rose" => {
                    require(concept.is_direction(), "rose", concept)?;
                    let count: u32 =
                        value.parse().map_err(|_| format!("rose {value:?} is not a number"))?;
                    binding.rose =
                        Some(CompassRose::new(count).map_err(|e| format!("{e}"))?);
                }
                "facing" => {
                    require(concept.is_direction(), "facing", concept)?;
                    binding.facing = Some(value.to_string());
                }
                "lexicon" => {
                    require(concept == Concept::Visual, "lexicon", concept)?;
                    binding.lexicon = Some(PathBuf::from(value));
                }
                other => return Err(format!("unknown hint {other:?}")),
            }
        }
        if concept == Concept::Expertise && binding.scale.is_none() {
            return Err("expertise columns need a `scale = …` hint".to_string());
        }
        Ok(binding)
    }
}

fn require(ok: bool, hint: &str, concept: Concept) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(format!("hint {hint:?} does not apply to concept {concept}"))
    }
}

/// Per-source column bindings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceConfig {
    columns: BTreeMap<String, ColumnBinding>,
}

impl SourceConfig {
    pub fn binding(&self, column: &str) -> Option<&ColumnBinding> {
        self.columns.get(column)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &ColumnBinding)> {
        self.columns.iter().map(|(c, b)| (c.as_str(), b))
    }
}

/// The whole mapping configuration, one section per source dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MappingConfig {
    sources: BTreeMap<String, SourceConfig>,
}

impl MappingConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table =
            text.parse().map_err(|e| ConfigError::Toml(format!("{e}")))?;
        let mut sources = BTreeMap::new();
        for (source, value) in table {
            let section = value.as_table().ok_or_else(|| ConfigError::Toml(format!(
                "section {source:?} must be a table of `column = \"binding\"` entries"
            )))?;
            let mut columns = BTreeMap::new();
            for (column, descriptor) in section {
                let descriptor =
                    descriptor.as_str().ok_or_else(|| ConfigError::BadBinding {
                        dataset: source.clone(),
                        column: column.clone(),
                        reason: "binding must be a string".to_string(),
                    })?;
                let binding =
                    ColumnBinding::parse(descriptor).map_err(|reason| ConfigError::BadBinding {
                        dataset: source.clone(),
                        column: column.clone(),
                        reason,
                    })?;
                columns.insert(column.clone(), binding);
            }
            sources.insert(source, SourceConfig { columns });
        }
        Ok(MappingConfig { sources })
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        MappingConfig::from_toml_str(&text)
    }

    pub fn section(&self, source: &str) -> Option<&SourceConfig> {
        self.sources.get(source)
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.sources.keys().map(|s| s.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scales::IntervalScale;

    #[test]
    fn parses_sections_and_bindings() {
        let cfg = MappingConfig::from_toml_str(
            r#"
[dataset2]
"level of experience" = "expertise; scale = interval(1, 10)"
"viewing-direction" = "viewing_direction; rose = 4"
"moving-direction" = "moving_direction; facing = viewing-direction"
color = "visual"
location = "location"
"fireball-train-duration" = "duration"
"#,
        )
        .unwrap();

        let section = cfg.section("dataset2").unwrap();
        let exp = section.binding("level of experience").unwrap();
        assert_eq!(exp.concept, Concept::Expertise);
        assert_eq!(
            exp.scale,
            Some(Scale::Interval(IntervalScale::new(1.0, 10.0, false).unwrap()))
        );
        let view = section.binding("viewing-direction").unwrap();
        assert_eq!(view.rose, Some(CompassRose::Four));
        let moving = section.binding("moving-direction").unwrap();
        assert_eq!(moving.facing.as_deref(), Some("viewing-direction"));
        assert!(cfg.section("dataset9").is_none());
    }

    #[test]
    fn expertise_without_scale_is_rejected() {
        let err = MappingConfig::from_toml_str("[d]\nx = \"expertise\"\n").unwrap_err();
        assert!(matches!(err, ConfigError::BadBinding { .. }), "{err}");
    }

    #[test]
    fn hints_must_match_concept() {
        for bad in [
            "[d]\nx = \"duration; rose = 16\"\n",
            "[d]\nx = \"visual; scale = interval(1, 2)\"\n",
            "[d]\nx = \"location; facing = y\"\n",
            "[d]\nx = \"expertise; scale = interval(1, 2); lexicon = l.tsv\"\n",
        ] {
            assert!(MappingConfig::from_toml_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn unknown_concepts_and_hints_are_rejected() {
        assert!(MappingConfig::from_toml_str("[d]\nx = \"speed\"\n").is_err());
        assert!(MappingConfig::from_toml_str("[d]\nx = \"duration; zoom = 3\"\n").is_err());
        assert!(MappingConfig::from_toml_str("not toml [").is_err());
        assert!(MappingConfig::from_toml_str("[d]\nx = 3\n").is_err());
    }

    #[test]
    fn concept_names_round_trip() {
        for concept in Concept::ALL {
            assert_eq!(concept.name().parse::<Concept>().unwrap(), concept);
        }
        assert_eq!("viewing-direction".parse::<Concept>().unwrap(), Concept::ViewingDirection);
        assert!("warp".parse::<Concept>().is_err());
    }
}
