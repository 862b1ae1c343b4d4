//! The canonical value union: every harmonized cell carries one of these.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compass::{AngleDeg, RelativeSpan, Sector, SectorSpan};
use crate::colors::{ColorSequence, ColorValue};
use crate::geoloc::LocationValue;
use crate::scales::ScaleValue;

/// A harmonized value of any key concept. The `kind` tag keeps the JSON
/// stream self-describing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalValue {
    Angle { degrees: AngleDeg },
    Sector { sector: Sector },
    SectorSpan { span: SectorSpan },
    RelativeSpan { span: RelativeSpan },
    Color { color: ColorValue },
    ColorSequence { colors: ColorSequence },
    ScaleLevel { value: ScaleValue },
    Location { location: LocationValue },
    Duration { seconds: f64 },
    /// An explicitly unknown value, e.g. the literal "unknown" in a
    /// duration column.
    Unknown,
}

impl fmt::Display for CanonicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalValue::Angle { degrees } => write!(f, "{degrees}"),
            CanonicalValue::Sector { sector } => write!(f, "{sector}"),
            CanonicalValue::SectorSpan { span } => write!(f, "{span}"),
            CanonicalValue::RelativeSpan { span } => write!(f, "{span}"),
            CanonicalValue::Color { color } => write!(f, "{color}"),
            CanonicalValue::ColorSequence { colors } => write!(f, "{colors}"),
            CanonicalValue::ScaleLevel { value } => write!(f, "{value}"),
            CanonicalValue::Location { location } => write!(f, "{location}"),
            CanonicalValue::Duration { seconds } => {
                write!(f, "{}", crate::timespan::DurationValue::Seconds { seconds: *seconds })
            }
            CanonicalValue::Unknown => f.write_str("unknown"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compass::{parse_direction, Direction};

    #[test]
    fn json_kinds_are_snake_case() {
        let angle = CanonicalValue::Angle { degrees: AngleDeg::new(57.0) };
        assert_eq!(
            serde_json::to_string(&angle).unwrap(),
            r#"{"kind":"angle","degrees":57.0}"#
        );

        let unknown = CanonicalValue::Unknown;
        assert_eq!(serde_json::to_string(&unknown).unwrap(), r#"{"kind":"unknown"}"#);

        match parse_direction("east-northeast").unwrap() {
            Direction::Sector { sector } => {
                let v = CanonicalValue::Sector { sector };
                let json = serde_json::to_string(&v).unwrap();
                assert_eq!(
                    json,
                    r#"{"kind":"sector","sector":{"rose":16,"name":"east-northeast"}}"#
                );
                let back: CanonicalValue = serde_json::from_str(&json).unwrap();
                assert_eq!(back, v);
            }
            other => panic!("expected sector, got {other:?}"),
        }
    }
}
