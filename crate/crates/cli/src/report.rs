//! Machine-readable run reports.
//!
//! Every command emits one [`Report`]: a config echo that fully determines
//! the run, scalar result rows with optional standard errors and verdicts,
//! and (unless suppressed) timing fields.  JSON serialization is the
//! lossless format; CSV projects the result rows only.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Bumped whenever the JSON layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

/// Three-valued outcome of a statistical or exact check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl Verdict {
    /// Verdict for `value >= bound` measured with standard error `sigma`.
    /// Pass and fail both require a three-sigma separation; anything closer
    /// is inconclusive.  With `sigma == 0` the comparison is exact, so a
    /// degenerate equality passes.
    pub fn lower_bound(value: f64, bound: f64, sigma: f64) -> Verdict {
        let margin = value - bound;
        if margin >= 3.0 * sigma {
            Verdict::Pass
        } else if margin <= -3.0 * sigma && margin < 0.0 {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    /// Verdict for `a == b` measured with standard error `sigma`.  Within
    /// three sigma passes, beyond six sigma fails, the band between is
    /// inconclusive.  A machine-precision allowance keeps zero-variance
    /// comparisons meaningful.
    pub fn agreement(a: f64, b: f64, sigma: f64) -> Verdict {
        let gap = (a - b).abs();
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        if gap <= 3.0 * sigma + slack {
            Verdict::Pass
        } else if gap > 6.0 * sigma + slack {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    /// Verdict for a check with no sampling noise.
    pub fn exact(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One scalar result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<Verdict>,
}

impl ResultRow {
    pub fn plain(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, stderr: None, verdict: None }
    }

    pub fn with_stderr(name: impl Into<String>, value: f64, stderr: f64) -> Self {
        Self { name: name.into(), value, stderr: Some(stderr), verdict: None }
    }

    pub fn judged(name: impl Into<String>, value: f64, verdict: Verdict) -> Self {
        Self { name: name.into(), value, stderr: None, verdict: Some(verdict) }
    }

    pub fn judged_with_stderr(
        name: impl Into<String>,
        value: f64,
        stderr: f64,
        verdict: Verdict,
    ) -> Self {
        Self { name: name.into(), value, stderr: Some(stderr), verdict: Some(verdict) }
    }
}

/// Full run report.  With the timing fields suppressed, identical
/// configurations serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub library_version: String,
    pub command: String,
    /// Resolved configuration: every parameter that influenced the run.
    pub config: BTreeMap<String, String>,
    pub results: Vec<ResultRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rejections: Option<u64>,
    /// Seconds since the Unix epoch; omitted under `--no-timestamp`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_seconds: Option<f64>,
    /// Non-scalar payloads (exact rational strings, expansions).
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub extra: BTreeMap<String, String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: BTreeMap::new(),
            results: Vec::new(),
            rejections: None,
            timestamp: None,
            wall_seconds: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: ResultRow) {
        self.results.push(row);
    }

    pub fn any_failure(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Some(Verdict::Fail))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per scalar result; the header names the four columns.  Float
    /// formatting is the shortest round-trip representation, so the CSV is
    /// as lossless as text gets.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,value,stderr,verdict\n");
        for row in &self.results {
            s.push_str(&row.name);
            s.push(',');
            s.push_str(&format!("{}", row.value));
            s.push(',');
            if let Some(e) = row.stderr {
                s.push_str(&format!("{e}"));
            }
            s.push(',');
            if let Some(v) = row.verdict {
                s.push_str(&v.to_string());
            }
            s.push('\n');
        }
        s
    }
}
