//! JSON-lines verification reports, one object per verify run.

use cyclotome_core::verify::VerificationReport;
use serde::Serialize;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct ReportLine {
    pub p: u64,
    pub m: u32,
    pub g: u64,
    pub precision_bits: u32,
    pub op_count: u64,
    pub bound: u64,
    pub bound_ok: bool,
    pub max_dev: f64,
    pub coverage_ok: bool,
    pub elapsed_ms: u64,
}

impl ReportLine {
    pub fn new(report: &VerificationReport, elapsed_ms: u64) -> Self {
        ReportLine {
            p: report.p,
            m: report.m,
            g: report.g,
            precision_bits: report.precision_bits,
            op_count: report.op_count,
            bound: report.bound,
            bound_ok: report.bound_ok,
            max_dev: report.max_dev,
            coverage_ok: report.coverage_ok,
            elapsed_ms,
        }
    }
}

/// Appends one line; the file accumulates a run history.
pub fn append_line(path: &Path, line: &ReportLine) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let json = serde_json::to_string(line).expect("report serialization cannot fail");
    writeln!(f, "{json}")
}
