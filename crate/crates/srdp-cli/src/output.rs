//! Table assembly and rendering. Every output embeds the full parameter
//! set and the library version in its header so runs are auditable, and
//! all numeric formatting is fixed at 12 significant digits with a '.'
//! separator so identical configurations produce byte-identical files.

use std::collections::BTreeMap;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => fmt_sig(*v),
            Cell::Text(t) => t.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::UInt(v) => serde_json::json!(v),
            Cell::Float(v) => {
                if v.is_finite() {
                    serde_json::json!(v)
                } else {
                    serde_json::json!(fmt_sig(*v))
                }
            }
            Cell::Text(t) => serde_json::json!(t),
        }
    }
}

/// 12 significant digits, scientific, locale-independent.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    format!("{:.11e}", x)
}

#[derive(Debug, Default)]
pub struct Table {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        let mut meta = BTreeMap::new();
        meta.insert("command".into(), command.into());
        meta.insert(
            "library_version".into(),
            env!("CARGO_PKG_VERSION").to_string(),
        );
        Self {
            meta,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn set_meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.insert(key.into(), value.to_string());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::json).collect())
            .collect();
        let value = serde_json::json!({
            "meta": self.meta,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    }

    /// Writes to `path`, or stdout when no path is given.
    pub fn write(&self, format: Format, path: Option<&std::path::Path>) -> std::io::Result<()> {
        let rendered = self.render(format);
        match path {
            Some(p) => std::fs::write(p, rendered),
            None => std::io::stdout().write_all(rendered.as_bytes()),
        }
    }
}
