//! Dataset ingestion: CSV (RFC 4180, header row required) and JSON (array
//! of flat objects).

use std::io::Read;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{path}: {0}", path = .1)]
    Csv(csv::Error, String),
    #[error("{path} is not a JSON array of flat objects: {reason}")]
    Json { path: String, reason: String },
    #[error("{path} has no usable extension (expected .csv or .json)")]
    UnknownFormat { path: String },
}

/// A raw tabular dataset: a header and uniform string rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub source_id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Dataset {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Reads a CSV or JSON dataset; the source id defaults to the file stem.
    pub fn from_path(path: &Path) -> Result<Self, IngestError> {
        let source_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let display = path.display().to_string();
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => {
                let file = std::fs::File::open(path)
                    .map_err(|e| IngestError::Io { path: display.clone(), reason: e.to_string() })?;
                Dataset::from_csv_reader(file, source_id, &display)
            }
            Some(ext) if ext.eq_ignore_ascii_case("json") => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| IngestError::Io { path: display.clone(), reason: e.to_string() })?;
                Dataset::from_json_str(&text, source_id, &display)
            }
            _ => Err(IngestError::UnknownFormat { path: display }),
        }
    }

    pub fn from_csv_reader(
        reader: impl Read,
        source_id: String,
        path: &str,
    ) -> Result<Self, IngestError> {
        let mut csv_reader = csv::ReaderBuilder::new().from_reader(reader);
        let columns: Vec<String> = csv_reader
            .headers()
            .map_err(|e| IngestError::Csv(e, path.to_string()))?
            .iter()
            .map(|h| h.to_string())
            .collect();
        let mut rows = Vec::new();
        for record in csv_reader.records() {
            let record = record.map_err(|e| IngestError::Csv(e, path.to_string()))?;
            rows.push(record.iter().map(|f| f.to_string()).collect());
        }
        Ok(Dataset { source_id, columns, rows })
    }

    /// Reads `[{"col": value, …}, …]`. Columns are the sorted union of all
    /// object keys; missing fields become empty strings and scalar values
    /// are stringified.
    pub fn from_json_str(
        text: &str,
        source_id: String,
        path: &str,
    ) -> Result<Self, IngestError> {
        let bad = |reason: String| IngestError::Json { path: path.to_string(), reason };
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let array = value.as_array().ok_or_else(|| bad("top level is not an array".into()))?;

        let mut columns: Vec<String> = Vec::new();
        for (i, item) in array.iter().enumerate() {
            let object = item
                .as_object()
                .ok_or_else(|| bad(format!("element {i} is not an object")))?;
            for key in object.keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
        columns.sort();

        let mut rows = Vec::with_capacity(array.len());
        for (i, item) in array.iter().enumerate() {
            let object = item.as_object().unwrap();
            let mut row = Vec::with_capacity(columns.len());
            for column in &columns {
                let cell = match object.get(column) {
                    None | Some(serde_json::Value::Null) => String::new(),
                    Some(serde_json::Value::String(s)) => s.clone(),
                    Some(serde_json::Value::Number(n)) => n.to_string(),
                    Some(serde_json::Value::Bool(b)) => b.to_string(),
                    Some(other) => {
                        return Err(bad(format!(
                            "element {i}, field {column:?} is nested ({other}); objects must be flat"
                        )))
                    }
                };
                row.push(cell);
            }
            rows.push(row);
        }
        Ok(Dataset { source_id, columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_quoted_commas() {
        let data = "location,color\n\"Jena, Germany\",red\n\"07745, Jena\",\"yellow, blue\"\n";
        let ds = Dataset::from_csv_reader(data.as_bytes(), "d1".into(), "test.csv").unwrap();
        assert_eq!(ds.columns, ["location", "color"]);
        assert_eq!(ds.rows.len(), 2);
        assert_eq!(ds.rows[0], ["Jena, Germany", "red"]);
        assert_eq!(ds.rows[1], ["07745, Jena", "yellow, blue"]);
    }

    #[test]
    fn ragged_csv_is_an_error() {
        let data = "a,b\n1,2\n3\n";
        assert!(Dataset::from_csv_reader(data.as_bytes(), "d".into(), "t.csv").is_err());
    }

    #[test]
    fn json_array_of_flat_objects() {
        let text = r#"[
            {"color": "red", "duration": "1 second"},
            {"duration": "unknown", "extra": 5}
        ]"#;
        let ds = Dataset::from_json_str(text, "d2".into(), "t.json").unwrap();
        assert_eq!(ds.columns, ["color", "duration", "extra"]);
        assert_eq!(ds.rows[0], ["red", "1 second", ""]);
        assert_eq!(ds.rows[1], ["", "unknown", "5"]);
    }

    #[test]
    fn nested_json_is_rejected() {
        assert!(Dataset::from_json_str(r#"[{"a": {"b": 1}}]"#, "d".into(), "t.json").is_err());
        assert!(Dataset::from_json_str(r#"{"a": 1}"#, "d".into(), "t.json").is_err());
        assert!(Dataset::from_json_str("[1, 2]", "d".into(), "t.json").is_err());
    }
}
