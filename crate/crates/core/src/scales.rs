//! Expertise-level scales: numeric interval scales with varying ranges and
//! ordinal label scales, with order-preserving conversion between them.
//!
//! Interval values convert to ordinal labels by proportional equal-width
//! binning. The reverse direction is refused by default: an ordinal label
//! carries no metric position, so inventing one is only done on request
//! (midpoint mode), and always graded lossy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::outcome::MappingOutcome;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScaleError {
    #[error("ordinal-to-interval conversion is refused without midpoint mode: labels carry no metric position")]
    ReverseMapping,
    #[error("value {value} is outside the scale range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("label {label:?} is not on the scale {scale}")]
    UnknownLabel { label: String, scale: String },
    #[error("invalid scale: {0}")]
    Invalid(String),
    #[error("invalid scale descriptor {text:?}: {reason}")]
    Descriptor { text: String, reason: String },
}

/// A numeric scale with meaningful equal spacing, e.g. experience 1–10.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalScale {
    min: f64,
    max: f64,
    integer_only: bool,
}

impl IntervalScale {
    pub fn new(min: f64, max: f64, integer_only: bool) -> Result<Self, ScaleError> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(ScaleError::Invalid(format!(
                "interval scale needs min < max, got [{min}, {max}]"
            )));
        }
        Ok(IntervalScale { min, max, integer_only })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn integer_only(&self) -> bool {
        self.integer_only
    }

    pub fn value(&self, value: f64) -> Result<ScaleValue, ScaleError> {
        if !value.is_finite() || value < self.min || value > self.max {
            return Err(ScaleError::OutOfRange { value, min: self.min, max: self.max });
        }
        Ok(ScaleValue::Interval { scale: self.clone(), value })
    }
}

impl fmt::Display for IntervalScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.integer_only {
            write!(f, "interval({}, {}, integer)", self.min, self.max)
        } else {
            write!(f, "interval({}, {})", self.min, self.max)
        }
    }
}

/// An ordered label scale without metric spacing, e.g. beginner <
/// intermediate < expert.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinalScale {
    labels: Vec<String>,
}

impl OrdinalScale {
    pub fn new(labels: Vec<String>) -> Result<Self, ScaleError> {
        if labels.len() < 2 {
            return Err(ScaleError::Invalid(format!(
                "ordinal scale needs at least 2 labels, got {}",
                labels.len()
            )));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(ScaleError::Invalid(format!("label {i} is empty")));
            }
            if labels[..i].contains(label) {
                return Err(ScaleError::Invalid(format!("duplicate label {label:?}")));
            }
        }
        Ok(OrdinalScale { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction there are at least two labels
    }

    /// Case-insensitive label lookup.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.eq_ignore_ascii_case(label))
    }

    pub fn value(&self, label: &str) -> Result<ScaleValue, ScaleError> {
        match self.index_of(label) {
            Some(index) => Ok(ScaleValue::Ordinal { scale: self.clone(), index }),
            None => Err(ScaleError::UnknownLabel {
                label: label.to_string(),
                scale: self.to_string(),
            }),
        }
    }
}

impl fmt::Display for OrdinalScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ordinal({})", self.labels.join(" < "))
    }
}

/// Either kind of scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scale {
    Interval(IntervalScale),
    Ordinal(OrdinalScale),
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Interval(s) => write!(f, "{s}"),
            Scale::Ordinal(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Scale {
    type Err = ScaleError;

    /// Parses a scale descriptor: `interval(min, max)`,
    /// `interval(min, max, integer)`, or `ordinal(a < b < c)`.
    fn from_str(text: &str) -> Result<Self, ScaleError> {
        let bad = |reason: &str| ScaleError::Descriptor {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        let open = trimmed.find('(').ok_or_else(|| bad("missing '('"))?;
        if !trimmed.ends_with(')') {
            return Err(bad("missing closing ')'"));
        }
        let head = trimmed[..open].trim().to_lowercase();
        let body = &trimmed[open + 1..trimmed.len() - 1];
        match head.as_str() {
            "interval" => {
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                if parts.len() < 2 || parts.len() > 3 {
                    return Err(bad("expected interval(min, max) or interval(min, max, integer)"));
                }
                let min: f64 = parts[0].parse().map_err(|_| bad("min is not a number"))?;
                let max: f64 = parts[1].parse().map_err(|_| bad("max is not a number"))?;
                let integer_only = match parts.get(2) {
                    None => false,
                    Some(s) if s.eq_ignore_ascii_case("integer") => true,
                    Some(s) => return Err(bad(&format!("unknown modifier {s:?}"))),
                };
                Ok(Scale::Interval(IntervalScale::new(min, max, integer_only)?))
            }
            "ordinal" => {
                let labels: Vec<String> =
                    body.split('<').map(|s| s.trim().to_string()).collect();
                if labels.iter().any(|l| l.is_empty()) {
                    return Err(bad("empty label"));
                }
                Ok(Scale::Ordinal(OrdinalScale::new(labels)?))
            }
            other => Err(bad(&format!("unknown scale kind {other:?}"))),
        }
    }
}

/// A validated value on a specific scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScaleValue {
    Interval { scale: IntervalScale, value: f64 },
    Ordinal { scale: OrdinalScale, index: usize },
}

impl ScaleValue {
    pub fn scale(&self) -> Scale {
        match self {
            ScaleValue::Interval { scale, .. } => Scale::Interval(scale.clone()),
            ScaleValue::Ordinal { scale, .. } => Scale::Ordinal(scale.clone()),
        }
    }

    /// Normalized position in `[0, 1]`: the relative rank of the value on
    /// its own scale.
    pub fn position(&self) -> f64 {
        match self {
            ScaleValue::Interval { scale, value } => {
                (value - scale.min) / (scale.max - scale.min)
            }
            ScaleValue::Ordinal { scale, index } => {
                *index as f64 / (scale.len() - 1) as f64
            }
        }
    }

    /// The label text of an ordinal value.
    pub fn label(&self) -> Option<&str> {
        match self {
            ScaleValue::Ordinal { scale, index } => Some(&scale.labels[*index]),
            ScaleValue::Interval { .. } => None,
        }
    }
}

impl fmt::Display for ScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleValue::Interval { scale, value } => write!(f, "{value} on {scale}"),
            ScaleValue::Ordinal { scale, index } => {
                write!(f, "{} on {scale}", scale.labels[*index])
            }
        }
    }
}

/// Converts a scale value onto a target scale.
///
/// - interval → interval: affine map, exact (rounded and graded lossy when
///   the target is integer-only)
/// - interval → ordinal: proportional equal-width binning, lossy
/// - ordinal → ordinal: rank interpolation then binning, lossy
/// - ordinal → interval: refused; see [`convert_with_midpoint`]
pub fn convert(value: &ScaleValue, target: &Scale) -> Result<MappingOutcome<ScaleValue>, ScaleError> {
    convert_impl(value, target, false)
}

/// Like [`convert`], but maps ordinal values onto interval scales by taking
/// the midpoint of the label's bin. Always lossy: the metric position is
/// invented, not recovered.
pub fn convert_with_midpoint(
    value: &ScaleValue,
    target: &Scale,
) -> Result<MappingOutcome<ScaleValue>, ScaleError> {
    convert_impl(value, target, true)
}

fn convert_impl(
    value: &ScaleValue,
    target: &Scale,
    midpoint_mode: bool,
) -> Result<MappingOutcome<ScaleValue>, ScaleError> {
    match (value, target) {
        (ScaleValue::Interval { scale, value }, Scale::Interval(t)) => {
            let mapped = t.min + (value - scale.min) * (t.max - t.min) / (scale.max - scale.min);
            if t.integer_only {
                let rounded = mapped.round().clamp(t.min, t.max);
                Ok(MappingOutcome::Lossy(t.value(rounded)?))
            } else {
                Ok(MappingOutcome::Exact(t.value(mapped)?))
            }
        }
        (v @ ScaleValue::Interval { .. }, Scale::Ordinal(t)) => {
            let index = bin_index(v.position(), t.len());
            Ok(MappingOutcome::Lossy(ScaleValue::Ordinal { scale: t.clone(), index }))
        }
        (v @ ScaleValue::Ordinal { .. }, Scale::Ordinal(t)) => {
            let index = bin_index(v.position(), t.len());
            Ok(MappingOutcome::Lossy(ScaleValue::Ordinal { scale: t.clone(), index }))
        }
        (ScaleValue::Ordinal { scale, index }, Scale::Interval(t)) => {
            if !midpoint_mode {
                return Err(ScaleError::ReverseMapping);
            }
            let width = (t.max - t.min) / scale.len() as f64;
            let mut mapped = t.min + (*index as f64 + 0.5) * width;
            if t.integer_only {
                mapped = mapped.round().clamp(t.min, t.max);
            }
            Ok(MappingOutcome::Lossy(t.value(mapped)?))
        }
    }
}

/// Equal-width bin of a normalized position: `min(floor(p * k), k - 1)`.
/// The clamp closes the top bin so the maximum maps to the last label.
fn bin_index(position: f64, bins: usize) -> usize {
    let raw = (position * bins as f64).floor();
    (raw as usize).min(bins - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> OrdinalScale {
        OrdinalScale::new(
            vec!["beginner".into(), "intermediate".into(), "expert".into()],
        )
        .unwrap()
    }

    fn five() -> OrdinalScale {
        OrdinalScale::new(
            vec!["poor".into(), "fair".into(), "average".into(), "good".into(), "excellent".into()],
        )
        .unwrap()
    }

    #[test]
    fn seven_of_ten_bins_to_good() {
        // p = 6/9 = 0.667, floor(0.667 * 5) = 3 -> fourth label.
        let scale = IntervalScale::new(1.0, 10.0, false).unwrap();
        let got = convert(&scale.value(7.0).unwrap(), &Scale::Ordinal(five())).unwrap();
        assert_eq!(got.value().unwrap().label(), Some("good"));
        assert_eq!(got, MappingOutcome::Lossy(five().value("good").unwrap()));
    }

    #[test]
    fn three_of_five_bins_to_intermediate() {
        // p = 0.5, floor(0.5 * 3) = 1.
        let scale = IntervalScale::new(1.0, 5.0, false).unwrap();
        let got = convert(&scale.value(3.0).unwrap(), &Scale::Ordinal(three())).unwrap();
        assert_eq!(got.value().unwrap().label(), Some("intermediate"));
    }

    #[test]
    fn scale_min_maps_to_first_label_and_max_to_last() {
        for (lo, hi) in [(1.0, 5.0), (0.0, 100.0), (-3.0, 14.5)] {
            let scale = IntervalScale::new(lo, hi, false).unwrap();
            for ordinal in [three(), five()] {
                let first = convert(&scale.value(lo).unwrap(), &Scale::Ordinal(ordinal.clone()))
                    .unwrap();
                assert_eq!(first.value().unwrap().label().unwrap(), ordinal.labels()[0]);
                let last = convert(&scale.value(hi).unwrap(), &Scale::Ordinal(ordinal.clone()))
                    .unwrap();
                assert_eq!(
                    last.value().unwrap().label().unwrap(),
                    ordinal.labels()[ordinal.len() - 1]
                );
            }
        }
    }

    #[test]
    fn affine_interval_conversion() {
        // 1 + 2 * (2/4) = 2 on the integer target.
        let from = IntervalScale::new(1.0, 5.0, false).unwrap();
        let to = IntervalScale::new(1.0, 3.0, true).unwrap();
        let got = convert(&from.value(3.0).unwrap(), &Scale::Interval(to.clone())).unwrap();
        assert_eq!(got, MappingOutcome::Lossy(to.value(2.0).unwrap()));

        let to_float = IntervalScale::new(0.0, 1.0, false).unwrap();
        let got = convert(&from.value(3.0).unwrap(), &Scale::Interval(to_float.clone())).unwrap();
        assert_eq!(got, MappingOutcome::Exact(to_float.value(0.5).unwrap()));
    }

    #[test]
    fn ordinal_to_interval_is_refused_without_midpoint_mode() {
        let target = Scale::Interval(IntervalScale::new(1.0, 5.0, false).unwrap());
        let v = three().value("intermediate").unwrap();
        assert_eq!(convert(&v, &target), Err(ScaleError::ReverseMapping));

        let got = convert_with_midpoint(&v, &target).unwrap();
        // Bin 1 of 3 on [1, 5]: 1 + 1.5 * (4/3) = 3.
        assert_eq!(
            got.value().unwrap(),
            &IntervalScale::new(1.0, 5.0, false).unwrap().value(3.0).unwrap()
        );
        assert!(matches!(got, MappingOutcome::Lossy(_)));
    }

    #[test]
    fn ordinal_to_ordinal_preserves_identity_on_same_scale() {
        for scale in [three(), five()] {
            for label in scale.labels() {
                let v = scale.value(label).unwrap();
                let got = convert(&v, &Scale::Ordinal(scale.clone())).unwrap();
                assert_eq!(got.value().unwrap().label().unwrap(), label);
            }
        }
    }

    #[test]
    fn ordinal_to_ordinal_rank_interpolation() {
        // intermediate (1 of 3): p = 0.5, floor(0.5 * 5) = 2 -> average.
        let got = convert(&three().value("intermediate").unwrap(), &Scale::Ordinal(five()))
            .unwrap();
        assert_eq!(got.value().unwrap().label(), Some("average"));
    }

    #[test]
    fn conversion_is_monotone() {
        let from = IntervalScale::new(1.0, 10.0, false).unwrap();
        let to = Scale::Ordinal(five());
        let mut last = 0usize;
        for i in 0..=90 {
            let x = 1.0 + i as f64 * 0.1;
            let got = convert(&from.value(x).unwrap(), &to).unwrap();
            match got.value().unwrap() {
                ScaleValue::Ordinal { index, .. } => {
                    assert!(*index >= last, "index dropped at x = {x}");
                    last = *index;
                }
                other => panic!("expected ordinal, got {other:?}"),
            }
        }
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(
            "interval(1, 10)".parse::<Scale>().unwrap(),
            Scale::Interval(IntervalScale::new(1.0, 10.0, false).unwrap())
        );
        assert_eq!(
            "interval(1, 5, integer)".parse::<Scale>().unwrap(),
            Scale::Interval(IntervalScale::new(1.0, 5.0, true).unwrap())
        );
        assert_eq!(
            "ordinal(beginner < intermediate < expert)".parse::<Scale>().unwrap(),
            Scale::Ordinal(three())
        );
        assert!("interval(5, 1)".parse::<Scale>().is_err());
        assert!("ordinal(alone)".parse::<Scale>().is_err());
        assert!("ratio(1, 2)".parse::<Scale>().is_err());
        assert!("interval(1, 10".parse::<Scale>().is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        for text in [
            "interval(1, 10)",
            "interval(1, 5, integer)",
            "ordinal(poor < fair < average < good < excellent)",
        ] {
            let scale: Scale = text.parse().unwrap();
            assert_eq!(scale.to_string(), text);
        }
    }

    #[test]
    fn out_of_range_and_unknown_labels_are_rejected() {
        let scale = IntervalScale::new(1.0, 10.0, false).unwrap();
        assert!(matches!(scale.value(0.5), Err(ScaleError::OutOfRange { .. })));
        assert!(matches!(scale.value(f64::NAN), Err(ScaleError::OutOfRange { .. })));
        assert!(matches!(three().value("guru"), Err(ScaleError::UnknownLabel { .. })));
        assert!(three().value("EXPERT").is_ok());
    }
}
