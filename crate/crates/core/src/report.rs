//! Verification reports and their text, JSON and CSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Agree,
    Mismatch,
}

/// One swept sequence. Key order here is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub seq: Vec<u32>,
    pub k: u8,
    pub i: u32,
    pub predicted: bool,
    pub computed_nonzero: bool,
    pub status: Status,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    pub fn new(seq: Vec<u32>, k: u8, i: u32, degree: u32, predicted: bool, computed_nonzero: bool) -> Self {
        let status = if predicted == computed_nonzero { Status::Agree } else { Status::Mismatch };
        Record { seq, k, i, predicted, computed_nonzero, status, degree, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub agree: usize,
    pub mismatch: usize,
    pub violations: usize,
}

impl Summary {
    pub fn failures(&self) -> usize {
        self.mismatch + self.violations
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub records: Vec<Record>,
    /// Failed identity checks that are not per-sequence records.
    pub violations: Vec<String>,
    pub annotations: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport { name: name.into(), ..Default::default() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn summary(&self) -> Summary {
        let mismatch = self.records.iter().filter(|r| r.status == Status::Mismatch).count();
        Summary {
            total: self.records.len(),
            agree: self.records.len() - mismatch,
            mismatch,
            violations: self.violations.len(),
        }
    }

    pub fn passed(&self) -> bool {
        self.summary().failures() == 0
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Mismatch)
    }

    /// Orders records by degree, then sequence.
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| (a.degree, &a.seq, a.k, a.i).cmp(&(b.degree, &b.seq, b.k, b.i)));
    }

    /// Appends another report's records, violations and annotations.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
        self.violations.extend(other.violations);
        self.annotations.extend(other.annotations);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Usage(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    report: String,
    params: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Line {
    Header(Header),
    Annotation { annotation: String },
    Violation { violation: String },
    Summary { summary: Summary },
    Record(Record),
}

fn seq_text(seq: &[u32]) -> String {
    let parts: Vec<String> = seq.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Renders the report with records in canonical order.
pub fn emit_table(report: &VerificationReport, format: Format) -> String {
    let mut report = report.clone();
    report.sort();
    let summary = report.summary();
    let mut out = String::new();
    match format {
        Format::Json => {
            let header = Header { report: report.name.clone(), params: report.params.clone() };
            let mut push = |line: &Line| {
                out.push_str(&serde_json::to_string(line).expect("report serializes"));
                out.push('\n');
            };
            push(&Line::Header(header));
            for r in &report.records {
                push(&Line::Record(r.clone()));
            }
            for a in &report.annotations {
                push(&Line::Annotation { annotation: a.clone() });
            }
            for v in &report.violations {
                push(&Line::Violation { violation: v.clone() });
            }
            push(&Line::Summary { summary });
        }
        Format::Csv => {
            out.push_str("seq,k,i,degree,predicted,computed_nonzero,status\n");
            for r in &report.records {
                let seq: Vec<String> = r.seq.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    seq.join(" "),
                    r.k,
                    r.i,
                    r.degree,
                    r.predicted,
                    r.computed_nonzero,
                    status_word(r.status)
                );
            }
            for a in &report.annotations {
                let _ = writeln!(out, "# note: {a}");
            }
            for v in &report.violations {
                let _ = writeln!(out, "# violation: {v}");
            }
            let _ = writeln!(out, "# {}", summary_text(&summary));
        }
        Format::Text => {
            let params: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "# {} {}", report.name, params.join(" "));
            let rows: Vec<[String; 7]> = report
                .records
                .iter()
                .map(|r| {
                    [
                        seq_text(&r.seq),
                        r.k.to_string(),
                        r.i.to_string(),
                        r.degree.to_string(),
                        r.predicted.to_string(),
                        r.computed_nonzero.to_string(),
                        status_word(r.status).to_string(),
                    ]
                })
                .collect();
            let head = ["seq", "k", "i", "degree", "predicted", "computed_nonzero", "status"];
            let mut widths = head.map(str::len);
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &[&str]| {
                let padded: Vec<String> =
                    cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&head));
            for row in &rows {
                let cells: Vec<&str> = row.iter().map(String::as_str).collect();
                let _ = writeln!(out, "{}", line(&cells));
            }
            for a in &report.annotations {
                let _ = writeln!(out, "note: {a}");
            }
            for v in &report.violations {
                let _ = writeln!(out, "violation: {v}");
            }
            let _ = writeln!(out, "{}", summary_text(&summary));
        }
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Agree => "agree",
        Status::Mismatch => "mismatch",
    }
}

fn summary_text(s: &Summary) -> String {
    format!(
        "summary: total={} agree={} mismatch={} violations={}",
        s.total, s.agree, s.mismatch, s.violations
    )
}

/// Reads back the newline-delimited JSON produced by [`emit_table`].
pub fn parse_json(text: &str) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let mut seen_header = false;
    for (n, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let line: Line = serde_json::from_str(raw)
            .map_err(|e| Error::Parse(format!("report line {}: {e}", n + 1)))?;
        match line {
            Line::Header(h) => {
                report.name = h.report;
                report.params = h.params;
                seen_header = true;
            }
            Line::Record(r) => report.records.push(r),
            Line::Annotation { annotation } => report.annotations.push(annotation),
            Line::Violation { violation } => report.violations.push(violation),
            Line::Summary { summary } => {
                if summary != report.summary() {
                    return Err(Error::Parse("summary does not match records".into()));
                }
            }
        }
    }
    if !seen_header {
        return Err(Error::Parse("missing report header".into()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("generators").param("k", 0).param("i", 4);
        r.records.push(Record::new(vec![16, 8], 0, 4, 30, true, true));
        r.records.push(Record::new(vec![8], 0, 4, 14, true, true));
        r.records.push(Record::new(vec![14, 7], 0, 4, 27, false, true).with_detail("x"));
        r.annotations.push("a note".into());
        r
    }

    #[test]
    fn empty_report() {
        let r = VerificationReport::new("empty");
        for f in [Format::Text, Format::Csv, Format::Json] {
            let s = emit_table(&r, f);
            assert!(s.contains("total") || s.contains("\"total\":0"), "{s}");
        }
        assert_eq!(emit_table(&r, Format::Csv).lines().count(), 2);
    }

    #[test]
    fn one_record_csv() {
        let mut r = VerificationReport::new("one");
        r.records.push(Record::new(vec![8], 0, 4, 14, true, true));
        let s = emit_table(&r, Format::Csv);
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "8,0,4,14,true,true,agree");
        assert!(lines[2].starts_with("# summary"));
    }

    #[test]
    fn json_roundtrip_and_key_order() {
        let r = sample();
        let text = emit_table(&r, Format::Json);
        let mut sorted = r.clone();
        sorted.sort();
        assert_eq!(parse_json(&text).unwrap(), sorted);
        assert!(text.contains(
            r#"{"seq":[16,8],"k":0,"i":4,"predicted":true,"computed_nonzero":true,"status":"agree","degree":30}"#
        ));
    }

    #[test]
    fn canonical_order_and_summary() {
        let r = sample();
        assert_eq!(r.summary(), Summary { total: 3, agree: 2, mismatch: 1, violations: 0 });
        let text = emit_table(&r, Format::Text);
        let pos = |needle: &str| text.find(needle).unwrap();
        assert!(pos("(8) ") < pos("(14,7)"));
        assert!(pos("(14,7)") < pos("(16,8)"));
        assert!(text.trim_end().ends_with("violations=0"));
    }
}
