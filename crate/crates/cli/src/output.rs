//! Emitted file formats.
//!
//! Every file carries the schema version, the command name and the fully
//! resolved run configuration (including the master seed), followed by a
//! table. CSV files put the metadata in leading `#` comment lines; JSON files
//! are a single object with a `payload` array of row objects.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    schema_version: String,
    command: String,
    config: Value,
    payload: Vec<Map<String, Value>>,
}

impl OutputRecord {
    pub fn new(command: &str, config: Value, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# schema_version: {}\n", self.schema_version));
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# config: {}\n", self.config));
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(csv_cell))
                .expect("in-memory write");
        }
        let table = writer.into_inner().expect("in-memory write");
        out.push_str(std::str::from_utf8(&table).expect("cells are UTF-8"));
        out
    }

    pub fn to_json(&self) -> String {
        let payload = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .cloned()
                    .zip(row.iter().cloned())
                    .collect::<Map<String, Value>>()
            })
            .collect();
        let record = JsonRecord {
            schema_version: self.schema_version.clone(),
            command: self.command.clone(),
            config: self.config.clone(),
            payload,
        };
        let mut s = serde_json::to_string_pretty(&record).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_csv(text)
        }
    }

    pub fn parse_json(text: &str) -> Result<Self, CliError> {
        let record: JsonRecord =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let columns: Vec<String> = record
            .payload
            .first()
            .map(|row| row.keys().cloned().collect())
            .unwrap_or_default();
        let rows = record
            .payload
            .into_iter()
            .map(|row| row.into_iter().map(|(_, v)| v).collect())
            .collect();
        Ok(Self {
            schema_version: record.schema_version,
            command: record.command,
            config: record.config,
            columns,
            rows,
        })
    }

    pub fn parse_csv(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let mut meta = |key: &str| -> Result<String, CliError> {
            let line = lines
                .next()
                .ok_or_else(|| CliError::Parse(format!("missing {key} line")))?;
            line.strip_prefix(&format!("# {key}: "))
                .map(str::to_string)
                .ok_or_else(|| CliError::Parse(format!("expected `# {key}: ...`, got `{line}`")))
        };
        let schema_version = meta("schema_version")?;
        let command = meta("command")?;
        let config: Value =
            serde_json::from_str(&meta("config")?).map_err(|e| CliError::Parse(e.to_string()))?;
        let table: String = lines.map(|l| format!("{l}\n")).collect();
        let mut reader = csv::Reader::from_reader(table.as_bytes());
        let parse_err = |e: csv::Error| CliError::Parse(e.to_string());
        let columns: Vec<String> = reader
            .headers()
            .map_err(parse_err)?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(parse_cell).collect()))
            .collect::<Result<_, _>>()
            .map_err(parse_err)?;
        Ok(Self {
            schema_version,
            command,
            config,
            columns,
            rows,
        })
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn parse_cell(s: &str) -> Value {
    if s.is_empty() {
        return Value::Null;
    }
    serde_json::from_str::<Value>(s)
        .ok()
        .filter(|v| v.is_number() || v.is_boolean())
        .unwrap_or_else(|| Value::String(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> OutputRecord {
        let mut rec = OutputRecord::new(
            "transition",
            json!({"d": 2, "m": 2, "n_values": [3, 4], "master_seed": 18446744073709551615u64}),
            &["N", "p_ppt", "verdict"],
        );
        rec.push_row(vec![json!(3), json!(0.0), json!("NPT")]);
        rec.push_row(vec![json!(4), json!(0.2472), json!("{0,2}")]);
        rec
    }

    #[test]
    fn csv_round_trip() {
        let rec = sample();
        let text = rec.to_csv();
        assert!(text.starts_with("# schema_version: 1\n# command: transition\n"));
        let back = OutputRecord::parse(&text).unwrap();
        assert_eq!(back.config, rec.config);
        assert_eq!(back.columns, rec.columns);
        assert_eq!(back.rows[1][1], json!(0.2472));
        assert_eq!(back.rows[0][2], json!("NPT"));
        assert_eq!(back.rows[1][2], json!("{0,2}"));
    }

    #[test]
    fn json_round_trip() {
        let rec = sample();
        let back = OutputRecord::parse(&rec.to_json()).unwrap();
        assert_eq!(back, rec);
    }
}
