use std::fmt::Write as _;

use serde::Serialize;

use sectional_core::theorems::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
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

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub file: String,
    /// Absent for file-level failures such as parse errors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub id: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    pub targets: Vec<String>,
    pub status: Status,
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring_override: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub inputs: Vec<String>,
    pub tasks: Vec<TaskReport>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl Report {
    pub fn new(
        command: String,
        seed: u64,
        ring_override: Option<String>,
        timestamp: Option<String>,
        inputs: Vec<String>,
    ) -> Report {
        Report {
            tool: "sectional",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            ring_override,
            timestamp,
            inputs,
            tasks: Vec::new(),
            summary: Summary::default(),
            exit_code: 0,
        }
    }

    /// Fills in the summary and exit code: 2 on invalid input, else 1 on any failure.
    pub fn finish(mut self) -> Report {
        let count = |s| self.tasks.iter().filter(|t| t.status == s).count();
        self.summary = Summary {
            total: self.tasks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
        };
        self.exit_code = if self.summary.errors > 0 {
            2
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        };
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} {} | {} | seed {}", self.tool, self.version, self.command, self.seed);
        if let Some(r) = &self.ring_override {
            let _ = write!(out, " | ring {r}");
        }
        if let Some(t) = &self.timestamp {
            let _ = write!(out, " | {t}");
        }
        out.push('\n');
        let _ = writeln!(out, "inputs: {}", self.inputs.join(", "));
        for t in &self.tasks {
            let at = t.index.map_or(String::new(), |i| format!("#{i}"));
            let _ = write!(out, "[{}] {}{} {} {}", t.status.as_str(), t.file, at, t.id, t.kind);
            if let Some(th) = &t.theorem {
                let _ = write!(out, " {th}");
            }
            if !t.targets.is_empty() {
                let _ = write!(out, " ({})", t.targets.join(", "));
            }
            let _ = write!(out, " code={}", t.code);
            if let Some(seed) = t.seed {
                let _ = write!(out, " seed={seed}");
            }
            if let Some(ms) = t.wall_ms {
                let _ = write!(out, " {ms}ms");
            }
            out.push('\n');
            if let Some(v) = &t.verdict {
                let ranks: Vec<String> = v.ranks.iter().map(|(k, n)| format!("{k}={n}")).collect();
                let _ = writeln!(
                    out,
                    "    {} on {}: {}",
                    v.theorem,
                    v.instance,
                    if v.passed { "passed" } else { "FAILED" }
                );
                if !ranks.is_empty() {
                    let _ = writeln!(out, "    ranks {}", ranks.join(" "));
                }
                for c in &v.certificates {
                    let checks: Vec<String> =
                        c.checks.iter().map(|k| format!("{}{}", k.name, if k.passed { "" } else { "!" })).collect();
                    let _ = writeln!(
                        out,
                        "    certificate {} {}->{} [{}]",
                        c.map,
                        c.source_rank,
                        c.target_rank,
                        checks.join(" ")
                    );
                }
                for k in &v.checks {
                    let _ = writeln!(out, "    check {} {}", k.name, if k.passed { "ok" } else { "FAILED" });
                }
            }
            if let Some(m) = &t.message {
                let _ = writeln!(out, "    message: {m}");
            }
            if let Some(r) = &t.rule {
                let _ = writeln!(out, "    rule: {r}");
            }
            if let Some(w) = &t.witness {
                let _ = writeln!(out, "    witness: ({})", w.join(", "));
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} tasks, {} passed, {} failed, {} errors; exit {}",
            s.total, s.passed, s.failed, s.errors, self.exit_code
        );
        out
    }
}
