//! Deterministic JSON and CSV output.
//!
//! Every float is written as `{:.16e}` (17 significant digits); non-finite
//! values become `null` in JSON and an empty field in CSV.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

struct FixedFloats(CompactFormatter);

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(CompactFormatter));
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// A named pass/fail comparison reported under `checks`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            value: if passed { 1.0 } else { 0.0 },
            threshold: 1.0,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn log(&self) {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match &self.detail {
            Some(d) => eprintln!("{status} {} ({d})", self.name),
            None => eprintln!(
                "{status} {} = {:e} (threshold {:e})",
                self.name, self.value, self.threshold
            ),
        }
    }
}

/// The data a command hands back for writing.
pub struct Document {
    pub inputs: Value,
    pub reduced_params: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Document {
    pub fn first_failed_check(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(&serde_json::json!({
                "inputs": self.inputs,
                "reduced_params": self.reduced_params,
                "results": self.results,
                "checks": self.checks,
                "version": VERSION,
            })),
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                w.write_record(&self.csv_header).expect("in-memory CSV");
                for row in &self.csv_rows {
                    w.write_record(row).expect("in-memory CSV");
                }
                String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV fields are UTF-8")
            }
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_fixed_width_and_nonfinite_is_null() {
        let s = to_json(&serde_json::json!({"a": 1.5, "b": f64::NAN, "c": [-2e-300, 3]}));
        assert_eq!(
            s,
            "{\"a\":1.5000000000000000e0,\"b\":null,\"c\":[-2.0000000000000001e-300,3]}\n"
        );
        let parsed: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["a"].as_f64(), Some(1.5));
        assert_eq!(float(f64::INFINITY), "");
        assert_eq!(float(3.0), "3.0000000000000000e0");
    }

    #[test]
    fn csv_quotes_commas() {
        let d = Document {
            inputs: Value::Null,
            reduced_params: Value::Null,
            results: Value::Null,
            checks: vec![],
            csv_header: vec!["case".into(), "value".into()],
            csv_rows: vec![vec!["Psi(1,2;3)".into(), float(0.5)]],
        };
        assert_eq!(
            d.render(Format::Csv),
            "case,value\n\"Psi(1,2;3)\",5.0000000000000000e-1\n"
        );
    }
}
