//! JSON and CSV output.
//!
//! CSV files start with `#schema=1` and carry the fixed columns
//! `quantity,n,value,s_star,regime,certificate`.

use std::io::Write;

use serde::Serialize;

use crate::class::ExtremalReport;
use crate::error::{Error, Result};

pub const CSV_SCHEMA: &str = "#schema=1";
pub const CSV_COLUMNS: [&str; 6] = ["quantity", "n", "value", "s_star", "regime", "certificate"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format '{s}' (json | csv)"))),
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub n: Option<usize>,
    pub value: f64,
    pub s_star: Option<usize>,
    pub regime: Option<String>,
    pub certificate: String,
}

impl Row {
    pub fn new(quantity: impl Into<String>, n: Option<usize>, value: f64, certificate: impl Into<String>) -> Self {
        Row { quantity: quantity.into(), n, value, s_star: None, regime: None, certificate: certificate.into() }
    }
}

impl From<&ExtremalReport> for Row {
    fn from(r: &ExtremalReport) -> Self {
        Row {
            quantity: r.quantity.clone(),
            n: Some(r.n),
            value: r.value,
            s_star: r.s_star,
            regime: Some(r.regime.as_str().to_string()),
            certificate: r.certificate.clone(),
        }
    }
}

/// A report with its JSON body and its CSV rows.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: serde_json::Value,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(body: &impl Serialize, rows: Vec<Row>) -> Result<Self> {
        Ok(Report { json: serde_json::to_value(body)?, rows })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip form, as `serde_json` prints numbers.
fn num(v: f64) -> String {
    if v.is_finite() {
        serde_json::Number::from_f64(v).map_or_else(|| v.to_string(), |n| n.to_string())
    } else {
        v.to_string()
    }
}

pub fn write_csv(rows: &[Row], out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{CSV_SCHEMA}")?;
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for r in rows {
        let fields = [
            csv_field(&r.quantity),
            r.n.map_or(String::new(), |n| n.to_string()),
            num(r.value),
            r.s_star.map_or(String::new(), |s| s.to_string()),
            r.regime.as_deref().map_or(String::new(), csv_field),
            csv_field(&r.certificate),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_json(value: &serde_json::Value, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => write_json(&report.json, out),
        Format::Csv => write_csv(&report.rows, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Row::new("sigma", Some(1), 1.0 / 3.0, "tie at s = [3], ok");
        r.s_star = Some(2);
        r.regime = Some("q<=p".into());
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "#schema=1");
        assert_eq!(lines[1], "quantity,n,value,s_star,regime,certificate");
        assert_eq!(lines[2], "sigma,1,0.3333333333333333,2,q<=p,\"tie at s = [3], ok\"");
    }

    #[test]
    fn formats() {
        assert_eq!(Format::parse("csv").unwrap(), Format::Csv);
        assert!(Format::parse("xml").is_err());
    }
}
