//! Numeric range classification rules.
//!
//! A rule maps a numeric interval to a class label; a rule set collects
//! rules over a bounded domain and can be checked for exhaustiveness and
//! disjointness. The compass sector rules are generated here, with north
//! split into two wraparound pieces sharing one label so that every rule
//! stays a plain interval.
//!
//! Gap and overlap detection walks the exact rule endpoints instead of
//! sweeping with a tolerance: sector bounds are multiples of 11.25 and
//! compare exactly in binary floating point.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compass::CompassRose;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("rule label must be non-empty")]
    EmptyLabel,
    #[error("rule {label:?} has invalid bounds: lower {lower} must be less than upper {upper}")]
    InvalidBounds { label: String, lower: f64, upper: f64 },
    #[error("rule set must contain at least one rule")]
    EmptyRuleSet,
    #[error("rule {label:?} ({interval}) is not contained in the domain {domain}")]
    RuleOutsideDomain { label: String, interval: String, domain: String },
    #[error("rule table line {line}: {reason}")]
    Table { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("value {value} lies outside the rule domain {domain}")]
pub struct DomainError {
    pub value: f64,
    pub domain: String,
}

/// One classification rule: an interval of values mapped to a class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeRule {
    label: String,
    lower: f64,
    upper: f64,
    lower_open: bool,
    upper_open: bool,
}

impl RangeRule {
    pub fn new(
        label: impl Into<String>,
        lower: f64,
        upper: f64,
        lower_open: bool,
        upper_open: bool,
    ) -> Result<Self, RuleError> {
        let label = label.into();
        if label.is_empty() {
            return Err(RuleError::EmptyLabel);
        }
        if !(lower < upper) {
            return Err(RuleError::InvalidBounds { label, lower, upper });
        }
        Ok(RangeRule { label, lower, upper, lower_open, upper_open })
    }

    /// `[lower, upper)`, the canonical shape for generated rule sets.
    pub fn half_open(label: impl Into<String>, lower: f64, upper: f64) -> Result<Self, RuleError> {
        RangeRule::new(label, lower, upper, false, true)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lower: self.lower,
            upper: self.upper,
            lower_open: self.lower_open,
            upper_open: self.upper_open,
        }
    }

    pub fn matches(&self, value: f64) -> bool {
        self.interval().contains(value)
    }
}

/// An ordered collection of rules over a bounded domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    rules: Vec<RangeRule>,
    domain: Interval,
}

impl RuleSet {
    /// Builds a rule set, checking that it is non-empty and that every rule
    /// interval is contained in `domain`.
    pub fn new(rules: Vec<RangeRule>, domain: Interval) -> Result<Self, RuleError> {
        if rules.is_empty() {
            return Err(RuleError::EmptyRuleSet);
        }
        for rule in &rules {
            if !interval_subset(&rule.interval(), &domain) {
                return Err(RuleError::RuleOutsideDomain {
                    label: rule.label.clone(),
                    interval: rule.interval().to_string(),
                    domain: domain.to_string(),
                });
            }
        }
        Ok(RuleSet { rules, domain })
    }

    pub fn rules(&self) -> &[RangeRule] {
        &self.rules
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// One rule per line: `label<TAB>lower<TAB>upper<TAB>lower_open<TAB>upper_open`.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            writeln!(out, "{}\t{}\t{}\t{}\t{}", r.label, r.lower, r.upper, r.lower_open, r.upper_open)
                .unwrap();
        }
        out
    }

    /// Parses the plain text table format produced by [`RuleSet::to_table`].
    /// Blank lines are ignored; the domain is supplied by the caller because
    /// the table does not carry it.
    pub fn from_table(text: &str, domain: Interval) -> Result<Self, RuleError> {
        let mut rules = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(RuleError::Table {
                    line: idx + 1,
                    reason: format!("expected 5 tab-separated fields, found {}", fields.len()),
                });
            }
            let parse_f64 = |s: &str, what: &str| -> Result<f64, RuleError> {
                s.trim().parse().map_err(|_| RuleError::Table {
                    line: idx + 1,
                    reason: format!("{what} is not a number: {s:?}"),
                })
            };
            let parse_bool = |s: &str, what: &str| -> Result<bool, RuleError> {
                s.trim().parse().map_err(|_| RuleError::Table {
                    line: idx + 1,
                    reason: format!("{what} is not a boolean: {s:?}"),
                })
            };
            rules.push(RangeRule::new(
                fields[0].trim(),
                parse_f64(fields[1], "lower bound")?,
                parse_f64(fields[2], "upper bound")?,
                parse_bool(fields[3], "lower_open")?,
                parse_bool(fields[4], "upper_open")?,
            )?);
        }
        RuleSet::new(rules, domain)
    }
}

fn interval_subset(inner: &Interval, outer: &Interval) -> bool {
    let lower_ok = inner.lower > outer.lower
        || (inner.lower == outer.lower && (!outer.lower_open || inner.lower_open));
    let upper_ok = inner.upper < outer.upper
        || (inner.upper == outer.upper && (!outer.upper_open || inner.upper_open));
    lower_ok && upper_ok
}

/// Findings of a partition check: which parts of the domain are uncovered
/// and which rule pairs overlap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub exhaustive: bool,
    pub disjoint: bool,
    pub gaps: Vec<Interval>,
    pub overlaps: Vec<Overlap>,
}

/// A pair of rules whose intervals share at least one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overlap {
    pub first: String,
    pub second: String,
    pub region: Interval,
}

/// Every label whose interval contains `value`. The empty set is a valid
/// answer; a value outside the domain is an error.
pub fn classify<'a>(value: f64, rules: &'a RuleSet) -> Result<BTreeSet<&'a str>, DomainError> {
    if !rules.domain().contains(value) {
        return Err(DomainError { value, domain: rules.domain().to_string() });
    }
    Ok(rules
        .rules()
        .iter()
        .filter(|r| r.matches(value))
        .map(|r| r.label())
        .collect())
}

/// Reports whether the rule intervals exactly tile the domain.
///
/// Works on the exact endpoint lattice: between two consecutive endpoints
/// coverage is constant, so testing each endpoint and one interior value per
/// open segment decides the whole domain.
pub fn check_partition(rules: &RuleSet) -> PartitionReport {
    let domain = rules.domain();

    let mut cuts: Vec<f64> = vec![domain.lower, domain.upper];
    for r in rules.rules() {
        let i = r.interval();
        cuts.push(i.lower);
        cuts.push(i.upper);
    }
    cuts.retain(|c| *c >= domain.lower && *c <= domain.upper);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let covered = |v: f64| rules.rules().iter().any(|r| r.matches(v));

    // Alternating walk: endpoint, open segment, endpoint, ...
    // An item is (position-descriptor, covered).
    enum Item {
        Point(f64),
        Segment(f64, f64),
    }
    let mut items: Vec<(Item, bool)> = Vec::new();
    for (i, &cut) in cuts.iter().enumerate() {
        if domain.contains(cut) {
            items.push((Item::Point(cut), covered(cut)));
        }
        if let Some(&next) = cuts.get(i + 1) {
            let mid = cut + (next - cut) / 2.0;
            if mid > cut && mid < next {
                items.push((Item::Segment(cut, next), covered(mid)));
            }
        }
    }

    let mut gaps: Vec<Interval> = Vec::new();
    let mut run: Option<Interval> = None;
    for (item, is_covered) in &items {
        if *is_covered {
            if let Some(gap) = run.take() {
                gaps.push(gap);
            }
            continue;
        }
        let piece = match item {
            Item::Point(v) => Interval::point(*v),
            Item::Segment(a, b) => Interval::open(*a, *b),
        };
        run = Some(match run {
            None => piece,
            Some(prev) => Interval {
                lower: prev.lower,
                lower_open: prev.lower_open,
                upper: piece.upper,
                upper_open: piece.upper_open,
            },
        });
    }
    if let Some(gap) = run.take() {
        gaps.push(gap);
    }

    let mut overlaps: Vec<Overlap> = Vec::new();
    let all = rules.rules();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if let Some(region) = all[i].interval().intersect(&all[j].interval()) {
                overlaps.push(Overlap {
                    first: all[i].label().to_string(),
                    second: all[j].label().to_string(),
                    region,
                });
            }
        }
    }
    overlaps.sort_by(|a, b| {
        a.region
            .lower
            .partial_cmp(&b.region.lower)
            .unwrap()
            .then(a.region.upper.partial_cmp(&b.region.upper).unwrap())
            .then_with(|| a.first.cmp(&b.first))
            .then_with(|| a.second.cmp(&b.second))
    });

    PartitionReport {
        exhaustive: gaps.is_empty(),
        disjoint: overlaps.is_empty(),
        gaps,
        overlaps,
    }
}

/// Generates the sector rules for a rose over the domain `[0, 360)`: one
/// half-open interval `[center - w/2, center + w/2)` per sector, with the
/// north sector split into two wraparound pieces carrying the same label.
pub fn compass_rules(rose: CompassRose) -> RuleSet {
    let w = rose.width();
    let half = w / 2.0;
    let mut rules = Vec::with_capacity(rose.sectors() as usize + 1);

    let sectors = rose.all_sectors();
    rules.push(RangeRule::half_open(sectors[0].wind().abbreviation(), 0.0, half).unwrap());
    for s in &sectors[1..] {
        let center = s.center().value();
        rules.push(
            RangeRule::half_open(s.wind().abbreviation(), center - half, center + half).unwrap(),
        );
    }
    rules.push(
        RangeRule::half_open(sectors[0].wind().abbreviation(), 360.0 - half, 360.0).unwrap(),
    );

    RuleSet::new(rules, Interval::half_open(0.0, 360.0)).unwrap()
}

/// The strict open-interval NNE rule with integer bounds (12, 33), kept as a
/// compatibility fixture for rule sets written with open comparisons. The
/// generated rose rules use the geometric half-open bounds instead: the
/// integer form does not tile the circle when replicated.
pub fn nne_strict_fixture() -> RuleSet {
    RuleSet::new(
        vec![RangeRule::new("NNE", 12.0, 33.0, true, true).unwrap()],
        Interval::half_open(0.0, 360.0),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compass::{sector_of_angle, AngleDeg};

    #[test]
    fn strict_nne_fixture_classifies_open_interval() {
        let rules = nne_strict_fixture();
        assert_eq!(classify(20.0, &rules).unwrap(), BTreeSet::from(["NNE"]));
        assert!(classify(12.0, &rules).unwrap().is_empty());
        assert!(classify(33.0, &rules).unwrap().is_empty());
        assert_eq!(classify(12.001, &rules).unwrap(), BTreeSet::from(["NNE"]));
        assert_eq!(classify(32.999, &rules).unwrap(), BTreeSet::from(["NNE"]));
    }

    #[test]
    fn classify_rejects_values_outside_domain() {
        let rules = nne_strict_fixture();
        assert!(classify(360.0, &rules).is_err());
        assert!(classify(-0.5, &rules).is_err());
        assert!(classify(0.0, &rules).is_ok());
    }

    #[test]
    fn generated_sixteen_rose_contains_geometric_nne() {
        let rules = compass_rules(CompassRose::Sixteen);
        let nne: Vec<_> = rules.rules().iter().filter(|r| r.label() == "NNE").collect();
        assert_eq!(nne.len(), 1);
        assert_eq!(nne[0].interval(), Interval::half_open(11.25, 33.75));
    }

    #[test]
    fn generated_four_rose_splits_north() {
        let rules = compass_rules(CompassRose::Four);
        let north: Vec<Interval> = rules
            .rules()
            .iter()
            .filter(|r| r.label() == "N")
            .map(|r| r.interval())
            .collect();
        assert_eq!(
            north,
            vec![Interval::half_open(0.0, 45.0), Interval::half_open(315.0, 360.0)]
        );
    }

    #[test]
    fn generated_rose_rules_partition_the_circle() {
        for rose in [CompassRose::Four, CompassRose::Eight, CompassRose::Sixteen] {
            let rules = compass_rules(rose);
            let report = check_partition(&rules);
            assert!(report.exhaustive, "{}-rose gaps: {:?}", rose.sectors(), report.gaps);
            assert!(report.disjoint, "{}-rose overlaps: {:?}", rose.sectors(), report.overlaps);
        }
    }

    #[test]
    fn single_rule_gaps_cover_the_complement() {
        let report = check_partition(&nne_strict_fixture());
        assert!(!report.exhaustive);
        assert!(report.disjoint);
        assert_eq!(
            report.gaps,
            vec![Interval::closed(0.0, 12.0), Interval::half_open(33.0, 360.0)]
        );
    }

    #[test]
    fn overlapping_rules_are_reported_with_region() {
        let rules = RuleSet::new(
            vec![
                RangeRule::new("a", 0.0, 10.0, true, true).unwrap(),
                RangeRule::new("b", 5.0, 15.0, true, true).unwrap(),
            ],
            Interval::half_open(0.0, 360.0),
        )
        .unwrap();
        let report = check_partition(&rules);
        assert!(!report.disjoint);
        assert_eq!(report.overlaps.len(), 1);
        assert_eq!(report.overlaps[0].first, "a");
        assert_eq!(report.overlaps[0].second, "b");
        assert_eq!(report.overlaps[0].region, Interval::open(5.0, 10.0));
    }

    #[test]
    fn classify_agrees_with_naive_scan_on_random_values() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);

        for rose in [CompassRose::Four, CompassRose::Eight, CompassRose::Sixteen] {
            let rules = compass_rules(rose);
            for _ in 0..10_000 {
                let v: f64 = rng.random_range(0.0..360.0);
                let got = classify(v, &rules).unwrap();
                // Independent membership scan, written directly against the
                // openness flags.
                let mut expected = BTreeSet::new();
                for r in rules.rules() {
                    let i = r.interval();
                    let lo_ok = if i.lower_open { v > i.lower } else { v >= i.lower };
                    let hi_ok = if i.upper_open { v < i.upper } else { v <= i.upper };
                    if lo_ok && hi_ok {
                        expected.insert(r.label());
                    }
                }
                assert_eq!(got, expected, "value {v}");
            }
        }
    }

    #[test]
    fn classify_is_independent_of_rule_order() {
        let rules = compass_rules(CompassRose::Sixteen);
        let mut reversed: Vec<RangeRule> = rules.rules().to_vec();
        reversed.reverse();
        let reversed = RuleSet::new(reversed, rules.domain()).unwrap();
        for i in 0..3600 {
            let v = i as f64 * 0.1;
            assert_eq!(classify(v, &rules).unwrap(), classify(v, &reversed).unwrap());
        }
    }

    #[test]
    fn generated_rules_agree_with_sector_arithmetic() {
        for rose in [CompassRose::Four, CompassRose::Eight, CompassRose::Sixteen] {
            let rules = compass_rules(rose);
            for i in 0..36_000 {
                let v = i as f64 * 0.01;
                let labels = classify(v, &rules).unwrap();
                assert_eq!(labels.len(), 1, "angle {v} matched {labels:?}");
                let sector = sector_of_angle(AngleDeg::new(v), rose);
                assert_eq!(
                    labels.into_iter().next().unwrap(),
                    sector.wind().abbreviation(),
                    "angle {v}"
                );
            }
        }
    }

    #[test]
    fn rule_construction_rejects_bad_input() {
        assert!(matches!(RangeRule::new("", 0.0, 1.0, false, false), Err(RuleError::EmptyLabel)));
        assert!(matches!(
            RangeRule::new("x", 2.0, 1.0, false, false),
            Err(RuleError::InvalidBounds { .. })
        ));
        assert!(matches!(
            RuleSet::new(vec![], Interval::half_open(0.0, 1.0)),
            Err(RuleError::EmptyRuleSet)
        ));
        let outside = RangeRule::new("x", -5.0, 5.0, false, true).unwrap();
        assert!(matches!(
            RuleSet::new(vec![outside], Interval::half_open(0.0, 360.0)),
            Err(RuleError::RuleOutsideDomain { .. })
        ));
        // A closed upper bound touching the open domain edge leaks outside.
        let touches = RangeRule::new("x", 350.0, 360.0, false, false).unwrap();
        assert!(RuleSet::new(vec![touches], Interval::half_open(0.0, 360.0)).is_err());
    }

    #[test]
    fn table_round_trip() {
        let rules = compass_rules(CompassRose::Eight);
        let table = rules.to_table();
        let back = RuleSet::from_table(&table, rules.domain()).unwrap();
        assert_eq!(back, rules);

        let err = RuleSet::from_table("N\t0\t45", Interval::half_open(0.0, 360.0));
        assert!(matches!(err, Err(RuleError::Table { line: 1, .. })));
    }
}
