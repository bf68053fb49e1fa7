use std::fmt::Write as _;

use serde::Serialize;

use crate::ReportFormat;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// Sub-check label, when one identity bundles several comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Order, n-range or sample description.
    pub scope: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Battery points rejected by the pole guard.
    #[serde(skip_serializing_if = "is_zero")]
    pub skipped: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

/// Output of one `verify` invocation. Wall-clock time goes to stderr so
/// that stdout is identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub engine: &'static str,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: String, checks: Vec<CheckRecord>) -> Self {
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
        RunReport { command, engine: threesq::ENGINE_VERSION, checks, passed }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            ReportFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "engine: {}", self.engine).unwrap();
        for c in &self.checks {
            let label = c.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
            write!(out, "{} {}{label}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.scope).unwrap();
            if c.skipped > 0 {
                write!(out, ", {} skipped near poles", c.skipped).unwrap();
            }
            if let Some(d) = &c.detail {
                write!(out, "; {d}").unwrap();
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "result: {}", if self.passed { "pass".to_string() } else { format!("{failed} failed") }).unwrap();
        out
    }
}

/// The invocation as typed, minus the program name.
pub fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}
