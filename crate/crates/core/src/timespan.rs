//! Event and train duration parsing with unit normalization to seconds.
//!
//! The literal "unknown" is a first-class value, not an error: source
//! datasets contain it as data, and a harmonizer has to carry it through.
//!
//! Conversion is decimal-exact: the digits are read as an integer mantissa
//! and scaled by the unit ratio before the single rounding into `f64`, so
//! `0.033 minute` comes out as exactly the double `1.98`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse duration {text:?}: {reason}")]
pub struct DurationParseError {
    pub text: String,
    pub reason: String,
}

/// A duration normalized to seconds, or an explicit unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DurationValue {
    Seconds { seconds: f64 },
    Unknown,
}

impl DurationValue {
    pub fn seconds(&self) -> Option<f64> {
        match self {
            DurationValue::Seconds { seconds } => Some(*seconds),
            DurationValue::Unknown => None,
        }
    }
}

impl fmt::Display for DurationValue {
    /// Canonical rendering: seconds with up to 3 decimal places and the
    /// unit `s`, falling back to the full representation when 3 decimals
    /// would round the value off.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DurationValue::Unknown => f.write_str("unknown"),
            DurationValue::Seconds { seconds } => {
                for decimals in 0..=3 {
                    let text = format!("{seconds:.decimals$}");
                    let back: f64 = text.parse().unwrap();
                    if (back - seconds).abs() <= 1e-9 {
                        return write!(f, "{text} s");
                    }
                }
                write!(f, "{seconds} s")
            }
        }
    }
}

/// Seconds per unit as an exact ratio.
fn unit_ratio(unit: &str) -> Option<(u128, u128)> {
    match unit.to_lowercase().as_str() {
        "second" | "seconds" | "s" => Some((1, 1)),
        "minute" | "minutes" | "min" => Some((60, 1)),
        "millisecond" | "milliseconds" | "ms" => Some((1, 1000)),
        "hour" | "hours" | "h" => Some((3600, 1)),
        _ => None,
    }
}

/// Parses `<number> <unit>` (second(s)/s, minute(s)/min,
/// millisecond(s)/ms, hour(s)/h) or the literal "unknown",
/// case-insensitively. Values must be non-negative.
pub fn parse_duration(text: &str) -> Result<DurationValue, DurationParseError> {
    let err = |reason: &str| DurationParseError {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty input"));
    }
    if trimmed.eq_ignore_ascii_case("unknown") {
        return Ok(DurationValue::Unknown);
    }

    let number_end = trimmed
        .char_indices()
        .take_while(|(_, c)| c.is_ascii_digit() || *c == '.' || *c == '-' || *c == '+')
        .map(|(i, c)| i + c.len_utf8())
        .last()
        .unwrap_or(0);
    let (number, unit) = trimmed.split_at(number_end);
    let unit = unit.trim();
    if number.is_empty() {
        return Err(err("expected `<number> <unit>`"));
    }
    if number.starts_with('-') {
        return Err(err("durations cannot be negative"));
    }
    if unit.is_empty() {
        return Err(err("missing unit (second(s)/s, minute(s)/min, millisecond(s)/ms, hour(s)/h)"));
    }
    let (num, den) = unit_ratio(unit).ok_or_else(|| err(&format!("unrecognized unit {unit:?}")))?;

    let number = number.strip_prefix('+').unwrap_or(number);
    let seconds = match decimal_parts(number) {
        Some((mantissa, scale)) if scale <= 30 => {
            match (mantissa.checked_mul(num), 10u128.checked_pow(scale).and_then(|p| p.checked_mul(den))) {
                (Some(n), Some(d)) => n as f64 / d as f64,
                // Mantissa too large for the exact path; one extra rounding.
                _ => number.parse::<f64>().map_err(|_| err("invalid number"))? * num as f64
                    / den as f64,
            }
        }
        Some(_) => number.parse::<f64>().map_err(|_| err("invalid number"))? * num as f64
            / den as f64,
        None => return Err(err("invalid number")),
    };
    if !seconds.is_finite() {
        return Err(err("value overflows"));
    }
    Ok(DurationValue::Seconds { seconds })
}

/// Splits a plain decimal literal into mantissa digits and scale:
/// `"0.033"` → `(33, 3)`.
fn decimal_parts(number: &str) -> Option<(u128, u32)> {
    let (int_part, frac_part) = match number.split_once('.') {
        Some((i, f)) => (i, f),
        None => (number, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut mantissa: u128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        mantissa = mantissa.checked_mul(10)?.checked_add(c.to_digit(10)? as u128)?;
    }
    Some((mantissa, frac_part.len() as u32))
}
