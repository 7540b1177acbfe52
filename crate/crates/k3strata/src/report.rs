//! Report types shared by the verifier and the command line: named checks
//! with pass/fail status, grouped per catalog row, with deterministic JSON
//! and markdown renderings (timing is kept out of the serialized forms so
//! identical invocations emit identical bytes).

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub details: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub id: usize,
    pub label: String,
    pub checks: Vec<CheckResult>,
}

impl RowReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// A whole command invocation's outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub catalog_sha256: String,
    pub rows: Vec<RowReport>,
    #[serde(skip)]
    pub elapsed: Option<std::time::Duration>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            catalog_sha256: crate::catalog::Catalog::digest(),
            rows: Vec::new(),
            elapsed: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(RowReport::all_pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n\n", self.command));
        for row in &self.rows {
            let mark = if row.all_pass() { "ok" } else { "FAIL" };
            out.push_str(&format!("## [{mark}] {} - {}\n", row.id, row.label));
            for c in &row.checks {
                let mark = if c.pass { "ok " } else { "FAIL" };
                if c.details.is_empty() {
                    out.push_str(&format!("- [{mark}] {}\n", c.name));
                } else {
                    out.push_str(&format!("- [{mark}] {}: {}\n", c.name, c.details));
                }
            }
            out.push('\n');
        }
        let (pass, total) = self.tally();
        out.push_str(&format!("{pass}/{total} checks passed\n"));
        out
    }

    pub fn tally(&self) -> (usize, usize) {
        let total: usize = self.rows.iter().map(|r| r.checks.len()).sum();
        let pass: usize = self
            .rows
            .iter()
            .map(|r| r.checks.iter().filter(|c| c.pass).count())
            .sum();
        (pass, total)
    }
}
