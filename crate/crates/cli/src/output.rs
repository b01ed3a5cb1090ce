//! JSON and CSV emission. Key order in JSON is sorted, so identical input
//! always produces identical bytes.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use densitylab::polya_range::DensityPoint;
use densitylab::{DensityEstimate, PolyaEstimate, SetExpr};
use serde::Serialize;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl Table {
    pub fn estimates(ests: &[DensityEstimate]) -> Self {
        Self {
            header: vec!["alpha", "liminf", "limsup", "exists", "value", "horizon"],
            rows: ests
                .iter()
                .map(|e| {
                    vec![
                        e.alpha.to_string(),
                        e.liminf_est.to_string(),
                        e.limsup_est.to_string(),
                        e.exists.to_string(),
                        opt(e.value),
                        e.horizon.to_string(),
                    ]
                })
                .collect(),
        }
    }

    pub fn theta_rows(p: &PolyaEstimate) -> Self {
        Self {
            header: vec!["theta", "liminf", "limsup"],
            rows: p
                .per_theta
                .iter()
                .map(|r| vec![r.theta.to_string(), r.liminf.to_string(), r.limsup.to_string()])
                .collect(),
        }
    }

    pub fn points(points: &[DensityPoint]) -> Self {
        Self {
            header: vec!["ld", "ud"],
            rows: points.iter().map(|p| vec![p.ld.to_string(), p.ud.to_string()]).collect(),
        }
    }

    fn to_csv(&self) -> io::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub struct Document {
    pub command: &'static str,
    body: Value,
    pub table: Option<Table>,
    pub preferred: Format,
}

impl Document {
    /// `{"command": .., "expr": .., ...fields of body}`.
    pub fn new<T: Serialize>(command: &'static str, expr: &SetExpr, body: &T) -> Self {
        let mut doc = Self::bare(command, body);
        if let Value::Object(map) = &mut doc.body {
            map.insert("expr".into(), Value::String(expr.to_string()));
        }
        doc
    }

    pub fn bare<T: Serialize>(command: &'static str, body: &T) -> Self {
        let mut body = serde_json::to_value(body).expect("documents serialize");
        if let Value::Object(map) = &mut body {
            map.insert("command".into(), Value::String(command.into()));
        }
        Self { command, body, table: None, preferred: Format::Json }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn prefer(mut self, format: Format) -> Self {
        self.preferred = format;
        self
    }
}

pub fn emit(doc: &Document, format: Format, out: Option<&Path>) -> io::Result<()> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc.body).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Csv => doc.table.as_ref().expect("checked by caller").to_csv()?,
    };
    write(&text, out)
}

pub fn write(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}
