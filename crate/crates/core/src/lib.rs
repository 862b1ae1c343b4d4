//! Parsing and harmonization of heterogeneous observational data.
//!
//! Citizen-science datasets describe the same observation in wildly
//! different vocabularies: a viewing direction may arrive as `57°`,
//! `north`, or `east-northeast`; an observer's experience as `7`,
//! `good`, or `intermediate`; a location as a place name, a postal code,
//! or coordinates. This crate parses those representations into canonical
//! typed values and merges multi-source datasets into unified records with
//! explicit lossiness grades and provenance.
//!
//! Modules:
//! - [`rulekit`]: numeric range classification rules and partition checks
//! - [`compass`]: angles, wind sectors, direction spans, relative directions
//! - [`scales`]: interval and ordinal expertise scales and conversions
//! - [`colors`]: color names, hex codes, and ordered color sequences
//! - [`geoloc`]: location parsing and offline gazetteer resolution
//! - [`timespan`]: duration parsing with unit normalization
//! - [`harmonizer`]: dataset ingestion, canonicalization, and alignment

pub mod compass;
pub mod colors;
pub mod geoloc;
pub mod harmonizer;
pub mod interval;
pub mod outcome;
pub mod rulekit;
pub mod scales;
pub mod timespan;

mod canon;

pub use canon::CanonicalValue;
pub use interval::Interval;
pub use outcome::{Lossiness, MappingOutcome};
