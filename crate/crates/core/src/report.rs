//! Structured verdicts with witnesses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Passed on the truncation at the given depth.
    PassAtDepth(usize),
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        !matches!(self, Verdict::Fail)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::PassAtDepth(d) => write!(f, "PASS-AT-DEPTH({d})"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "PASS" => Ok(Verdict::Pass),
            "FAIL" => Ok(Verdict::Fail),
            _ => s
                .strip_prefix("PASS-AT-DEPTH(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.parse().ok())
                .map(Verdict::PassAtDepth)
                .ok_or_else(|| format!("unknown verdict {s:?}")),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A concrete piece of evidence: which object, cover, level or point a
/// property failed (or was certified) at, with structured details.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Witness {
    pub fn new(kind: impl Into<String>) -> Self {
        Witness {
            kind: kind.into(),
            object: None,
            cover: None,
            level: None,
            point: None,
            detail: Value::Null,
        }
    }

    pub fn object(mut self, o: impl Into<String>) -> Self {
        self.object = Some(o.into());
        self
    }

    pub fn cover(mut self, c: usize) -> Self {
        self.cover = Some(c);
        self
    }

    pub fn level(mut self, l: usize) -> Self {
        self.level = Some(l);
        self
    }

    pub fn point(mut self, p: impl Into<String>) -> Self {
        self.point = Some(p.into());
        self
    }

    pub fn detail(mut self, d: Value) -> Self {
        self.detail = d;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    /// Domain-level outcome such as `COSHEAF` or `NOT-SMOOTH`.
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub trace: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, verdict: Verdict, label: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            verdict,
            label: label.into(),
            depth: None,
            witnesses: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn pass(check: impl Into<String>, label: impl Into<String>) -> Self {
        Self::new(check, Verdict::Pass, label)
    }

    pub fn fail(check: impl Into<String>, label: impl Into<String>, witness: Witness) -> Self {
        let mut r = Self::new(check, Verdict::Fail, label);
        r.witnesses.push(witness);
        r
    }

    /// Marks the verdict as depth-qualified.
    pub fn at_depth(mut self, depth: usize) -> Self {
        self.depth = Some(depth);
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::PassAtDepth(depth);
        }
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn with_trace(mut self, line: impl Into<String>) -> Self {
        self.trace.push(line.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Process exit code: 0 for a pass, 1 for a failure.
    pub fn exit_code(&self) -> i32 {
        if self.is_pass() {
            0
        } else {
            1
        }
    }
}
