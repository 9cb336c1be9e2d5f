//! Report model and the three renderers. Every number is printed with 12
//! significant digits and every report starts with the resolved config.

use anyhow::Result;
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Plain notation for moderate exponents, scientific otherwise; trailing
/// zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..12).contains(&e) {
        let s = format!("{:.*}", (11 - e).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{exp}")
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

/// Rounds every number in a JSON tree.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match (n.is_f64(), n.as_f64()) {
            (true, Some(x)) => num(x),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub summary: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
    /// Structured result, emitted only in JSON.
    pub result: Option<Value>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.into(),
            config: config.clone(),
            summary: Vec::new(),
            tables: Vec::new(),
            result: None,
            exit_code: 0,
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table => Ok(self.table()),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn header(&self) -> String {
        let mut out = format!("# bmoa-lab {}\n", self.command);
        for line in self.config.to_toml().lines() {
            out.push_str(&format!("# {line}\n").replace("# \n", "#\n"));
        }
        out
    }

    fn table(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.summary {
            out.push_str(&format!("{k:<width$}  {}\n", v.text()));
        }
        for t in &self.tables {
            out.push_str(&format!("\n== {} ==\n", t.name));
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([t.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |fields: Vec<&str>| {
                let parts: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
                parts.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(t.columns.iter().map(String::as_str).collect()));
            for r in &cells {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
            }
        }
        out
    }

    /// The first table as RFC 4180 records, preceded by `#` comment lines
    /// holding the config and the summary.
    fn csv(&self) -> Result<String> {
        let mut out = self.header();
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k} = {}\n", v.text()));
        }
        if let Some(t) = self.tables.first() {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
            w.write_record(&t.columns)?;
            for r in &t.rows {
                w.write_record(r.iter().map(Cell::text))?;
            }
            out.push_str(&String::from_utf8(w.into_inner()?)?);
        }
        Ok(out)
    }

    fn json(&self) -> Result<String> {
        let mut root = Map::new();
        root.insert("command".into(), Value::from(self.command.as_str()));
        root.insert("config".into(), serde_json::to_value(&self.config)?);
        root.insert("summary".into(), Value::Object(self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect()));
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
                .collect();
            tables.insert(t.name.clone(), Value::Array(rows));
        }
        root.insert("tables".into(), Value::Object(tables));
        if let Some(r) = &self.result {
            root.insert("result".into(), round_json(r.clone()));
        }
        root.insert("exit_code".into(), Value::from(self.exit_code));
        Ok(serde_json::to_string_pretty(&Value::Object(root))? + "\n")
    }
}
