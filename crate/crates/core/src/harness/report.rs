use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Engine version stamped into every report.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Record-only row, nothing unusual.
    Recorded,
    /// Record-only row that deviates from the conjectured value or structure.
    Attention,
    Skipped,
    /// The row could not be computed (cap or budget).
    Error,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Recorded => "recorded",
            Outcome::Attention => "attention",
            Outcome::Skipped => "skipped",
            Outcome::Error => "error",
        })
    }
}

/// One flat report row. `detail` carries nested data (witnesses, counts)
/// for the JSON document and is left out of the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub case: String,
    pub parts: String,
    pub sizes: String,
    pub predicate: String,
    pub mode: String,
    pub expected: String,
    pub observed: String,
    pub status: String,
    pub maxima: String,
    pub classes: String,
    pub outcome: Outcome,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
    /// Set when a node budget stopped the computation.
    #[serde(skip)]
    pub budget_abort: bool,
}

impl Row {
    pub fn new(case: impl Into<String>) -> Self {
        Row {
            case: case.into(),
            parts: String::new(),
            sizes: String::new(),
            predicate: String::new(),
            mode: String::new(),
            expected: String::new(),
            observed: String::new(),
            status: String::new(),
            maxima: String::new(),
            classes: String::new(),
            outcome: Outcome::Recorded,
            note: String::new(),
            runtime_ms: None,
            detail: serde_json::Value::Null,
            budget_abort: false,
        }
    }

    /// Pass or fail on `ok`.
    pub fn check(mut self, ok: bool) -> Self {
        self.outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if self.note.is_empty() {
            self.note = note;
        } else if !note.is_empty() {
            self.note = format!("{}; {note}", self.note);
        }
        self
    }

    /// A row for a cell that could not be computed.
    pub fn failed(mut self, err: &Error, asserting: bool) -> Self {
        self.budget_abort = matches!(err, Error::BudgetExceeded { .. });
        self.observed = "error".into();
        // a clique maximum below a feasible star is always a failure
        self.outcome = if asserting || matches!(err, Error::Internal(_)) {
            Outcome::Fail
        } else {
            Outcome::Error
        };
        self.with_note(err.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub recorded: usize,
    pub attention: usize,
    pub skipped: usize,
    pub errors: usize,
}

impl Verdict {
    pub fn tally(rows: &[Row]) -> Self {
        let mut v = Verdict {
            rows: rows.len(),
            ..Verdict::default()
        };
        for r in rows {
            match r.outcome {
                Outcome::Pass => v.passed += 1,
                Outcome::Fail => v.failed += 1,
                Outcome::Recorded => v.recorded += 1,
                Outcome::Attention => v.attention += 1,
                Outcome::Skipped => v.skipped += 1,
                Outcome::Error => v.errors += 1,
            }
        }
        v
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows={} pass={} fail={} recorded={} attention={} skipped={} errors={}",
            self.rows, self.passed, self.failed, self.recorded, self.attention, self.skipped, self.errors
        )
    }
}

/// Result of one campaign: flat rows plus the aggregate verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub name: String,
    pub engine_version: String,
    pub mode: String,
    /// The campaign definition that produced the rows.
    pub campaign: serde_json::Value,
    /// The invoking run configuration, when run from the command line.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub run_config: serde_json::Value,
    pub rows: Vec<Row>,
    pub verdict: Verdict,
}

const CSV_COLUMNS: [&str; 12] = [
    "case", "parts", "sizes", "predicate", "mode", "expected", "observed", "status", "maxima", "classes",
    "outcome", "note",
];

impl CampaignReport {
    pub fn new(name: &str, mode: &str, campaign: serde_json::Value, rows: Vec<Row>) -> Self {
        let verdict = Verdict::tally(&rows);
        CampaignReport {
            name: name.to_string(),
            engine_version: ENGINE_VERSION.to_string(),
            mode: mode.to_string(),
            campaign,
            run_config: serde_json::Value::Null,
            rows,
            verdict,
        }
    }

    pub fn budget_aborted(&self) -> bool {
        self.rows.iter().any(|r| r.budget_abort)
    }

    /// 0 when every asserted row passed, 1 on a failed assertion, 3 when a
    /// node budget stopped a row and nothing failed outright.
    pub fn exit_code(&self) -> i32 {
        if self.rows.iter().any(|r| r.outcome == Outcome::Fail && !r.budget_abort) {
            1
        } else if self.budget_aborted() {
            3
        } else {
            0
        }
    }

    pub fn summary_line(&self) -> String {
        format!("{}: {}", self.name, self.verdict)
    }

    /// Plain-text table for terminals.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let mut line = format!("[{}] {}", r.outcome, r.case);
            for (label, v) in [
                ("expected", &r.expected),
                ("observed", &r.observed),
                ("status", &r.status),
                ("maxima", &r.maxima),
                ("classes", &r.classes),
            ] {
                if !v.is_empty() {
                    line.push_str(&format!("  {label}={v}"));
                }
            }
            if !r.note.is_empty() {
                line.push_str(&format!("  ({})", r.note));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Flat CSV preceded by `#` lines with the engine version and
    /// configuration. The runtime column appears only when some row has one.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# engine={}", self.engine_version)?;
        writeln!(w, "# campaign={}", serde_json::to_string(&self.campaign)?)?;
        if !self.run_config.is_null() {
            writeln!(w, "# run_config={}", serde_json::to_string(&self.run_config)?)?;
        }
        let timed = self.rows.iter().any(|r| r.runtime_ms.is_some());
        let mut csv = csv::Writer::from_writer(w);
        let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
        if timed {
            header.push("runtime_ms");
        }
        csv.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let outcome = r.outcome.to_string();
            let mut rec = vec![
                r.case.as_str(),
                &r.parts,
                &r.sizes,
                &r.predicate,
                &r.mode,
                &r.expected,
                &r.observed,
                &r.status,
                &r.maxima,
                &r.classes,
                &outcome,
                &r.note,
            ];
            let ms = r.runtime_ms.map(|m| m.to_string()).unwrap_or_default();
            if timed {
                rec.push(&ms);
            }
            csv.write_record(&rec).map_err(csv_err)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_preamble_and_quotes() {
        let mut row = Row::new("a, b").check(true);
        row.note = "said \"x\"".into();
        let rep = CampaignReport::new("demo", "assert-equality", serde_json::json!({"name": "demo"}), vec![row]);
        let csv = rep.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# engine="));
        assert_eq!(lines[1], "# campaign={\"name\":\"demo\"}");
        assert!(lines[2].starts_with("case,parts"));
        assert!(!lines[2].contains("runtime_ms"));
        assert!(lines[3].starts_with("\"a, b\""));
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn exit_codes() {
        let fail = Row::new("x").check(false);
        let abort = Row::new("y").failed(&Error::BudgetExceeded { budget: 5 }, false);
        let rep = CampaignReport::new("c", "m", serde_json::Value::Null, vec![abort.clone()]);
        assert_eq!(rep.exit_code(), 3);
        let rep = CampaignReport::new("c", "m", serde_json::Value::Null, vec![abort, fail]);
        assert_eq!(rep.exit_code(), 1);
        assert_eq!(rep.verdict.failed, 1);
        assert_eq!(rep.verdict.errors, 1);
    }
}
