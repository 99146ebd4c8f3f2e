//! Column-oriented datasets with a provenance header, written as CSV or
//! JSON.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value as Json};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Missing,
    Int(u64),
    Flag(bool),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

/// Nine significant digits in scientific notation.
fn sci(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        "NaN".to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => sci(*v),
            Cell::Missing => "NaN".to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            // round through the CSV text so both formats carry the same digits
            Cell::Num(v) if v.is_finite() => {
                sci(*v).parse::<f64>().map(Json::from).unwrap_or(Json::Null)
            }
            Cell::Num(_) | Cell::Missing => Json::Null,
            Cell::Int(v) => Json::from(*v),
            Cell::Flag(b) => Json::Bool(*b),
            Cell::Text(s) => Json::from(*s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub provenance: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(provenance: Vec<(String, String)>, columns: Vec<&'static str>) -> Self {
        Self {
            provenance,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.provenance {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn to_json(&self) -> String {
        let provenance: Map<String, Json> = self
            .provenance
            .iter()
            .map(|(k, v)| (k.clone(), Json::from(v.as_str())))
            .collect();
        let mut data = Map::new();
        for (j, name) in self.columns.iter().enumerate() {
            let column: Vec<Json> = self.rows.iter().map(|r| r[j].json()).collect();
            data.insert(name.to_string(), Json::Array(column));
        }
        let mut root = Map::new();
        root.insert("provenance".into(), Json::Object(provenance));
        root.insert("columns".into(), Json::from(self.columns.clone()));
        root.insert("data".into(), Json::Object(data));
        let mut text = serde_json::to_string_pretty(&Json::Object(root)).unwrap_or_default();
        text.push('\n');
        text
    }

    pub fn write_to(&self, path: &Path, format: Format) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: PathBuf::from(path),
            source,
        };
        let mut file = fs::File::create(path).map_err(io)?;
        file.write_all(self.render(format).as_bytes()).map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let mut d = Dataset::new(vec![("seed".into(), "7".into())], vec!["x", "y", "ok"]);
        d.push(vec![
            Cell::Num(1234.5678912345),
            Cell::Missing,
            Cell::Flag(true),
        ]);
        d.push(vec![Cell::Num(-0.5), Cell::Num(0.0), Cell::Flag(false)]);
        d
    }

    #[test]
    fn csv_layout() {
        let text = sample().render(Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# seed: 7");
        assert_eq!(lines[1], "x,y,ok");
        assert_eq!(lines[2], "1.23456789e3,NaN,true");
        assert_eq!(lines[3], "-5.00000000e-1,0.00000000e0,false");
    }

    #[test]
    fn json_mirrors_columns() {
        let v: Json = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["provenance"]["seed"], "7");
        assert_eq!(v["data"]["x"][0], 1234.56789);
        assert!(v["data"]["y"][0].is_null());
        assert_eq!(v["data"]["ok"][1], false);
        assert_eq!(v["columns"].as_array().unwrap().len(), 3);
    }
}
