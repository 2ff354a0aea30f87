//! CSV and JSON emitters sharing one set of field names.
//!
//! CSV cells hold floats with 17 significant digits in `{:.16e}` form, which
//! round-trips every `f64` exactly and never depends on the locale.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// A row with a fixed CSV header.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

pub fn write_records<R: Record>(out: &mut dyn Write, format: Format, rows: &[R]) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::HEADER)?;
            for r in rows {
                w.write_record(r.cells())?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRecord {
    pub input: String,
    pub q: f64,
    pub value: f64,
    pub tail_bound: f64,
}

impl Record for NormRecord {
    const HEADER: &'static [&'static str] = &["input", "q", "value", "tail_bound"];
    fn cells(&self) -> Vec<String> {
        vec![self.input.clone(), fmt_f64(self.q), fmt_f64(self.value), fmt_f64(self.tail_bound)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub n: i64,
    pub norm: f64,
}

impl Record for NormRow {
    const HEADER: &'static [&'static str] = &["n", "norm"];
    fn cells(&self) -> Vec<String> {
        vec![self.n.to_string(), fmt_f64(self.norm)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub n: i64,
    pub norm: f64,
    pub mean_limit: f64,
}

impl Record for ScatterRow {
    const HEADER: &'static [&'static str] = &["n", "norm", "mean_limit"];
    fn cells(&self) -> Vec<String> {
        vec![self.n.to_string(), fmt_f64(self.norm), fmt_f64(self.mean_limit)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
}

impl Record for HistRow {
    const HEADER: &'static [&'static str] = &["bin_lo", "bin_hi", "count"];
    fn cells(&self) -> Vec<String> {
        vec![fmt_f64(self.bin_lo), fmt_f64(self.bin_hi), self.count.to_string()]
    }
}

/// Gap bounds are present only where the gap exists (`q > Φ`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub q: f64,
    pub odd_lower: Option<f64>,
    pub even_upper: Option<f64>,
    pub mean_limit: f64,
    pub mean_in_gap: bool,
}

impl Record for GapRow {
    const HEADER: &'static [&'static str] = &["q", "odd_lower", "even_upper", "mean_limit", "mean_in_gap"];
    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.q),
            fmt_opt(self.odd_lower),
            fmt_opt(self.even_upper),
            fmt_f64(self.mean_limit),
            self.mean_in_gap.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub kind: String,
    pub q: Option<f64>,
    pub s: f64,
    pub terms: u64,
    pub closed: f64,
    pub partial: f64,
    pub tail_bound: f64,
    pub abs_diff: f64,
    pub within_tail: bool,
}

impl Record for SeriesRow {
    const HEADER: &'static [&'static str] =
        &["kind", "q", "s", "terms", "closed", "partial", "tail_bound", "abs_diff", "within_tail"];
    fn cells(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            fmt_opt(self.q),
            fmt_f64(self.s),
            self.terms.to_string(),
            fmt_f64(self.closed),
            fmt_f64(self.partial),
            fmt_f64(self.tail_bound),
            fmt_f64(self.abs_diff),
            self.within_tail.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Record for CheckRow {
    const HEADER: &'static [&'static str] = &["suite", "check", "passed", "detail"];
    fn cells(&self) -> Vec<String> {
        vec![self.suite.clone(), self.check.clone(), self.passed.to_string(), self.detail.clone()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.5, 1.0 / 3.0, 7.0 / 64.0, 1e-300, 0.0, f64::MAX, 0.30685281944005469] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
            let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn empty_gap_cells() {
        let row = GapRow { q: 1.5, odd_lower: None, even_upper: None, mean_limit: 0.9, mean_in_gap: false };
        assert_eq!(row.cells()[1], "");
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Json, &[row]).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("\"odd_lower\": null"));
    }
}
