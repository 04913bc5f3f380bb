//! Versioned verification reports and their JSON, CSV and Markdown views.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "fsiegel-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedResource,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedResource => "skipped-resource",
        }
    }
}

/// One check on one `(q, n)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub q: u32,
    pub n: usize,
    pub status: Status,
    /// Field parameters (`eps` and `i`, or `eps`, `v` and `b`).
    pub params: Value,
    pub data: Value,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub config: Value,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value, records: Vec<CheckRecord>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            config,
            records,
        }
    }

    /// `0` all pass, `1` any failure, `3` every record skipped for resources.
    pub fn exit_code(&self) -> i32 {
        if self.records.iter().any(|r| r.status == Status::Fail) {
            1
        } else if !self.records.is_empty()
            && self
                .records
                .iter()
                .all(|r| r.status == Status::SkippedResource)
        {
            3
        } else {
            0
        }
    }

    /// The report with every `wall_ms` zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.wall_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,q,n,status,wall_ms,data\n");
        for r in &self.records {
            let data = serde_json::to_string(&r.data).expect("values serialize");
            out.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                r.check,
                r.q,
                r.n,
                r.status.as_str(),
                r.wall_ms,
                data.replace('"', "\"\"")
            ));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {} ({})\n\n", self.command, self.schema_version);
        out.push_str("| check | q | n | status | wall ms |\n|---|---|---|---|---|\n");
        for r in &self.records {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                r.check,
                r.q,
                r.n,
                r.status.as_str(),
                r.wall_ms
            ));
        }
        for r in &self.records {
            if let Some(strata) = r.data.get("strata").and_then(Value::as_array) {
                out.push_str(&format!(
                    "\n## census q = {}, n = {} (total {})\n\n",
                    r.q,
                    r.n,
                    r.data.get("total").unwrap_or(&Value::Null)
                ));
                out.push_str("| r | H_r | O_r | H_r in image | O_r in image |\n|---|---|---|---|---|\n");
                for s in strata {
                    let g = |k: &str| s.get(k).cloned().unwrap_or(Value::Null);
                    out.push_str(&format!(
                        "| {} | {} | {} | {} | {} |\n",
                        g("r"),
                        g("h_count"),
                        g("o_count"),
                        g("h_in_image"),
                        g("o_in_image")
                    ));
                }
            }
            if r.status != Status::Pass {
                if let Some(reason) = r.data.get("reason").or_else(|| r.data.get("error")) {
                    out.push_str(&format!("\n{} q = {}, n = {}: {}\n", r.check, r.q, r.n, reason));
                }
            }
        }
        out
    }
}
