//! Run reports and their CSV / JSON serialization.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! value read back from either format is bit-for-bit the value written.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::{ConfigDocument, OutputFormat};
use crate::error::CliError;

/// Column-major header plus row-major values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|x| format_float(*x)))
                .map_err(csv_error)?;
        }
        out.flush().map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| CliError::Format(e.to_string()))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, CliError> {
        let mut input = csv::Reader::from_reader(r);
        let columns: Vec<String> = input
            .headers()
            .map_err(csv_error)?
            .iter()
            .map(String::from)
            .collect();
        let mut table = Table {
            columns,
            rows: Vec::new(),
        };
        for record in input.records() {
            let record = record.map_err(csv_error)?;
            let row = record
                .iter()
                .map(|field| {
                    field
                        .parse::<f64>()
                        .map_err(|_| CliError::Format(format!("not a number: `{field}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }

    fn rows_json(&self) -> Result<Value, CliError> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, x) in self.columns.iter().zip(row) {
                    let number = serde_json::Number::from_f64(*x).ok_or_else(|| {
                        CliError::Format(format!("column `{name}` holds non-finite value {x}"))
                    })?;
                    obj.insert(name.clone(), Value::Number(number));
                }
                Ok(Value::Object(obj))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Value::Array(rows))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Format(e.to_string())
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub scenario: String,
    /// Effective configuration, defaults included.
    pub config: ConfigDocument,
    pub version: String,
    pub core_version: String,
    pub seed: Option<u64>,
    pub threads: usize,
    pub rows: usize,
    pub summary: Option<String>,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub table: Table,
    pub meta: Meta,
}

impl RunReport {
    pub fn to_json(&self) -> Result<Value, CliError> {
        let mut obj = Map::new();
        obj.insert(
            "meta".into(),
            serde_json::to_value(&self.meta).map_err(json_error)?,
        );
        obj.insert(
            "columns".into(),
            serde_json::to_value(&self.table.columns).map_err(json_error)?,
        );
        obj.insert("rows".into(), self.table.rows_json()?);
        Ok(Value::Object(obj))
    }

    pub fn from_json(value: &Value) -> Result<Self, CliError> {
        let meta: Meta = serde_json::from_value(value["meta"].clone()).map_err(json_error)?;
        let columns: Vec<String> =
            serde_json::from_value(value["columns"].clone()).map_err(json_error)?;
        let rows = value["rows"]
            .as_array()
            .ok_or_else(|| CliError::Format("`rows` must be an array".into()))?
            .iter()
            .map(|row| {
                columns
                    .iter()
                    .map(|c| {
                        row[c]
                            .as_f64()
                            .ok_or_else(|| CliError::Format(format!("row lacks numeric `{c}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RunReport {
            table: Table { columns, rows },
            meta,
        })
    }

    /// Writes the table in `format`; CSV output gets a `<path>.meta.json` sidecar.
    pub fn emit(&self, path: &Path, format: OutputFormat) -> Result<(), CliError> {
        match format {
            OutputFormat::Csv => {
                let file = create(path)?;
                self.table.write_csv(BufWriter::new(file))?;
                let meta_path = sidecar_path(path);
                let mut meta = BufWriter::new(create(&meta_path)?);
                serde_json::to_writer_pretty(&mut meta, &self.meta).map_err(json_error)?;
                writeln!(meta)
                    .and_then(|_| meta.flush())
                    .map_err(|e| io_error(&meta_path, e))
            }
            OutputFormat::Json => {
                let json = self.to_json()?;
                let mut out = BufWriter::new(create(path)?);
                serde_json::to_writer_pretty(&mut out, &json).map_err(json_error)?;
                writeln!(out)
                    .and_then(|_| out.flush())
                    .map_err(|e| io_error(path, e))
            }
        }
    }

    /// Writes the table to stdout.
    pub fn emit_stdout(&self, format: OutputFormat) -> Result<(), CliError> {
        let stdout = io::stdout();
        let lock = stdout.lock();
        match format {
            OutputFormat::Csv => self.table.write_csv(lock),
            OutputFormat::Json => {
                let mut w = BufWriter::new(lock);
                serde_json::to_writer_pretty(&mut w, &self.to_json()?).map_err(json_error)?;
                writeln!(w)
                    .and_then(|_| w.flush())
                    .map_err(|e| io_error(Path::new("<stdout>"), e))
            }
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::Format(e.to_string())
}
