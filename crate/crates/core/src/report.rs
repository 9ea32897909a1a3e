//! Serialization of verification reports.

use std::fmt::Write as _;

use serde::Serialize;

use crate::verify::{Status, Summary, VerificationReport, VerificationResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: u32,
    range: JsonRange,
    results: Vec<JsonRow<'a>>,
    summary: Summary,
}

#[derive(Serialize)]
struct JsonRange {
    lo: u64,
    hi: u64,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    id: &'a str,
    p: u64,
    status: Status,
    lhs: Option<String>,
    rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<&'a str>,
}

fn decimal(r: &VerificationResult) -> (Option<String>, Option<String>) {
    (
        r.lhs.map(|x| x.value().to_string()),
        r.rhs.map(|x| x.value().to_string()),
    )
}

/// Serializes `report`. Output depends only on the results, never on timing.
pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => emit_json(report),
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Text => emit_text(report),
    }
}

fn emit_json(report: &VerificationReport) -> Vec<u8> {
    let results = report
        .results
        .iter()
        .map(|r| {
            let (lhs, rhs) = decimal(r);
            JsonRow {
                id: &r.congruence_id,
                p: r.p,
                status: r.status,
                lhs,
                rhs,
                message: r.message.as_deref(),
            }
        })
        .collect();
    let doc = JsonReport {
        version: 1,
        range: JsonRange {
            lo: report.lo,
            hi: report.hi,
        },
        results,
        summary: report.summary(),
    };
    let mut out = serde_json::to_vec(&doc).expect("report serializes");
    out.push(b'\n');
    out
}

fn emit_csv(report: &VerificationReport) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "p", "status", "lhs", "rhs"]).unwrap();
    for r in &report.results {
        let (lhs, rhs) = decimal(r);
        w.write_record([
            r.congruence_id.as_str(),
            &r.p.to_string(),
            r.status.as_str(),
            lhs.as_deref().unwrap_or(""),
            rhs.as_deref().unwrap_or(""),
        ])
        .unwrap();
    }
    w.into_inner().expect("in-memory writer")
}

fn emit_text(report: &VerificationReport) -> Vec<u8> {
    let mut out = String::new();
    for r in &report.results {
        write!(out, "{:<8} p={:<7} {:<7}", r.congruence_id, r.p, r.status.as_str()).unwrap();
        if let (Some(l), Some(rr)) = (r.lhs, r.rhs) {
            write!(out, " lhs={} rhs={}", l.value(), rr.value()).unwrap();
        }
        if let Some(m) = &r.message {
            write!(out, " ({m})").unwrap();
        }
        out.push('\n');
    }
    let s = report.summary();
    writeln!(
        out,
        "primes {}..{}: {} pass, {} fail, {} skipped, {} error",
        report.lo, report.hi, s.pass, s.fail, s.skipped, s.error
    )
    .unwrap();
    out.into_bytes()
}
