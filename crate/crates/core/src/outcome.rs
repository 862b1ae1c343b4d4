//! Lossiness grading for value conversions.
//!
//! Every mapping from a source representation to a canonical one carries a
//! grade saying how much information survived. The grades are ordered from
//! best to worst; harmonized cells keep the grade next to the value so that
//! downstream consumers can tell an exact conversion from a coerced one.

use std::fmt;

use serde::{Deserialize, Serialize};

/// How much information a conversion preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lossiness {
    /// The conversion is invertible.
    Exact,
    /// Precision was reduced to an interval or sector set.
    Widened,
    /// Information was discarded.
    Lossy,
    /// No sound canonical form exists.
    Unmapped,
}

impl fmt::Display for Lossiness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Lossiness::Exact => "exact",
            Lossiness::Widened => "widened",
            Lossiness::Lossy => "lossy",
            Lossiness::Unmapped => "unmapped",
        };
        f.write_str(s)
    }
}

/// A converted value tagged with its lossiness grade.
///
/// `Unmapped` carries no value by construction: when no sound canonical form
/// exists there is nothing to return, only the grade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lossiness", content = "value", rename_all = "snake_case")]
pub enum MappingOutcome<T> {
    Exact(T),
    Widened(T),
    Lossy(T),
    Unmapped,
}

impl<T> MappingOutcome<T> {
    pub fn lossiness(&self) -> Lossiness {
        match self {
            MappingOutcome::Exact(_) => Lossiness::Exact,
            MappingOutcome::Widened(_) => Lossiness::Widened,
            MappingOutcome::Lossy(_) => Lossiness::Lossy,
            MappingOutcome::Unmapped => Lossiness::Unmapped,
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            MappingOutcome::Exact(v) | MappingOutcome::Widened(v) | MappingOutcome::Lossy(v) => {
                Some(v)
            }
            MappingOutcome::Unmapped => None,
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            MappingOutcome::Exact(v) | MappingOutcome::Widened(v) | MappingOutcome::Lossy(v) => {
                Some(v)
            }
            MappingOutcome::Unmapped => None,
        }
    }

    /// Re-wrap the payload, keeping the grade.
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> MappingOutcome<U> {
        match self {
            MappingOutcome::Exact(v) => MappingOutcome::Exact(f(v)),
            MappingOutcome::Widened(v) => MappingOutcome::Widened(f(v)),
            MappingOutcome::Lossy(v) => MappingOutcome::Lossy(f(v)),
            MappingOutcome::Unmapped => MappingOutcome::Unmapped,
        }
    }

    /// Attach a value to a bare grade. Panics if `grade` is `Unmapped` —
    /// an unmapped outcome cannot carry a value.
    pub fn graded(value: T, grade: Lossiness) -> Self {
        match grade {
            Lossiness::Exact => MappingOutcome::Exact(value),
            Lossiness::Widened => MappingOutcome::Widened(value),
            Lossiness::Lossy => MappingOutcome::Lossy(value),
            Lossiness::Unmapped => panic!("unmapped outcomes carry no value"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_order_from_best_to_worst() {
        assert!(Lossiness::Exact < Lossiness::Widened);
        assert!(Lossiness::Widened < Lossiness::Lossy);
        assert!(Lossiness::Lossy < Lossiness::Unmapped);
    }

    #[test]
    fn unmapped_has_no_value() {
        let o: MappingOutcome<u32> = MappingOutcome::Unmapped;
        assert_eq!(o.value(), None);
        assert_eq!(o.lossiness(), Lossiness::Unmapped);
    }

    #[test]
    fn map_keeps_grade() {
        let o = MappingOutcome::Widened(3u32).map(|v| v * 2);
        assert_eq!(o, MappingOutcome::Widened(6));
    }
}
