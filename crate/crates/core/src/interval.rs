//! Linear intervals with per-endpoint openness.
//!
//! Endpoint comparisons are exact: the callers feed bounds that are exactly
//! representable (sector bounds are multiples of 11.25), so no tolerance is
//! applied anywhere in this module.

use std::fmt;

use serde::{Deserialize, Serialize};

/// An interval on the real line with independently open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_open: bool,
    pub upper_open: bool,
}

impl Interval {
    /// `[lower, upper]`
    pub fn closed(lower: f64, upper: f64) -> Self {
        Interval { lower, upper, lower_open: false, upper_open: false }
    }

    /// `[lower, upper)`
    pub fn half_open(lower: f64, upper: f64) -> Self {
        Interval { lower, upper, lower_open: false, upper_open: true }
    }

    /// `(lower, upper)`
    pub fn open(lower: f64, upper: f64) -> Self {
        Interval { lower, upper, lower_open: true, upper_open: true }
    }

    /// The degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Self {
        Interval::closed(v, v)
    }

    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
            || (self.lower == self.upper && (self.lower_open || self.upper_open))
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lower_open { v > self.lower } else { v >= self.lower };
        let below = if self.upper_open { v < self.upper } else { v <= self.upper };
        above && below
    }

    /// Intersection, or `None` when the two intervals share no point.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lower, lower_open) = match self.lower.partial_cmp(&other.lower)? {
            std::cmp::Ordering::Greater => (self.lower, self.lower_open),
            std::cmp::Ordering::Less => (other.lower, other.lower_open),
            std::cmp::Ordering::Equal => (self.lower, self.lower_open || other.lower_open),
        };
        let (upper, upper_open) = match self.upper.partial_cmp(&other.upper)? {
            std::cmp::Ordering::Less => (self.upper, self.upper_open),
            std::cmp::Ordering::Greater => (other.upper, other.upper_open),
            std::cmp::Ordering::Equal => (self.upper, self.upper_open || other.upper_open),
        };
        let result = Interval { lower, upper, lower_open, upper_open };
        if result.is_empty() {
            None
        } else {
            Some(result)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lb = if self.lower_open { '(' } else { '[' };
        let ub = if self.upper_open { ')' } else { ']' };
        write!(f, "{}{}, {}{}", lb, self.lower, self.upper, ub)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_respects_openness() {
        let i = Interval::open(12.0, 33.0);
        assert!(!i.contains(12.0));
        assert!(i.contains(12.001));
        assert!(i.contains(20.0));
        assert!(!i.contains(33.0));

        let h = Interval::half_open(11.25, 33.75);
        assert!(h.contains(11.25));
        assert!(!h.contains(33.75));
    }

    #[test]
    fn intersection_of_overlapping_open_intervals() {
        let a = Interval::open(0.0, 10.0);
        let b = Interval::open(5.0, 15.0);
        let x = a.intersect(&b).unwrap();
        assert_eq!(x, Interval::open(5.0, 10.0));
    }

    #[test]
    fn touching_half_open_intervals_do_not_intersect() {
        let a = Interval::half_open(0.0, 10.0);
        let b = Interval::half_open(10.0, 20.0);
        assert!(a.intersect(&b).is_none());
    }

    #[test]
    fn touching_closed_intervals_intersect_in_a_point() {
        let a = Interval::closed(0.0, 10.0);
        let b = Interval::closed(10.0, 20.0);
        let x = a.intersect(&b).unwrap();
        assert_eq!(x, Interval::point(10.0));
        assert!(!x.is_empty());
    }

    #[test]
    fn display_shows_bracket_style() {
        assert_eq!(Interval::half_open(33.0, 360.0).to_string(), "[33, 360)");
        assert_eq!(Interval::closed(0.0, 12.0).to_string(), "[0, 12]");
    }
}
