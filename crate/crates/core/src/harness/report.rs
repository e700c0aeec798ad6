use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::objectivity::{CheckId, CheckResult, Verdict};

use super::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// Outcome of one (frame, field, check) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleResult {
    pub frame_index: usize,
    pub frame: String,
    pub field_index: usize,
    pub field: String,
    pub check: CheckId,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// The scenario as resolved, defaults included.
    pub scenario: Scenario,
    pub results: Vec<TripleResult>,
    pub suite_verdict: Verdict,
    /// Not part of the reproducible content.
    pub wall_time_s: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suite_verdict == Verdict::Pass
    }

    /// The report with its wall time zeroed, for reproducibility comparisons.
    pub fn canonical(&self) -> Report {
        Report { wall_time_s: 0.0, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Table,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "table" => Ok(ReportFormat::Table),
            other => Err(format!("unknown report format `{other}`; expected json or table")),
        }
    }
}

/// Pretty JSON with every float printed to 17 significant digits.
struct PreciseFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for PreciseFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn to_json(report: &Report) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter(PrettyFormatter::new()));
    report.serialize(&mut ser).expect("report serialisation cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn to_table(report: &Report) -> String {
    let sci = |x: f64| format!("{x:.3e}");
    let mut rows = vec![[
        "frame".to_string(),
        "field".to_string(),
        "check".to_string(),
        "status".to_string(),
        "samples".to_string(),
        "max_abs_err".to_string(),
        "mean_abs_err".to_string(),
        "tol".to_string(),
        "witness".to_string(),
    ]];
    for r in &report.results {
        let (n, max, mean, tol, wit) = match &r.result {
            Some(c) => (
                c.samples.to_string(),
                sci(c.max_abs_err),
                sci(c.mean_abs_err),
                sci(c.tol),
                c.witness.map(sci).unwrap_or_else(|| "-".into()),
            ),
            None => ("-".into(), "-".into(), "-".into(), "-".into(), "-".into()),
        };
        rows.push([
            r.frame.clone(),
            r.field.clone(),
            r.check.to_string(),
            r.status.as_str().to_string(),
            n,
            max,
            mean,
            tol,
            wit,
        ]);
    }
    let mut widths = [0usize; 9];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    for r in report.results.iter().filter(|r| r.error.is_some()) {
        let _ = writeln!(out, "error in {} × {} × {}: {}", r.frame, r.field, r.check, r.error.as_deref().unwrap_or(""));
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "suite: {verdict} ({} triples, {:.3} s)", report.results.len(), report.wall_time_s);
    out
}

/// Renders `report` as JSON or as a text table.
pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(report),
        ReportFormat::Table => to_table(report),
    }
}
