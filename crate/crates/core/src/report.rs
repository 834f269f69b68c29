//! Verification reports shared by every suite and the CLI.

use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = concat!("quasint ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Rank or kernel facts certified only at the sampled points.
    GenericPointCertificate,
}

impl Status {
    pub fn ok(self) -> bool {
        self != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Short description of the identity or count being certified.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// How the verdict was produced, e.g. "symbolic" or "sampled λ=(…)".
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        Check { id: id.into(), anchor: anchor.into(), status, witness: None, mode: None, elapsed_ms: None }
    }

    /// Pass when `ok`, otherwise fail with the given witness.
    pub fn from_bool(id: impl Into<String>, anchor: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        let mut c = Check::new(id, anchor, if ok { Status::Pass } else { Status::Fail });
        if !ok {
            c.witness = Some(witness());
        }
        c
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_mode(mut self, m: impl Into<String>) -> Self {
        self.mode = Some(m.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub config: serde_json::Value,
    #[serde(default)]
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new(serde_json::Value::Null)
    }
}

impl VerificationReport {
    pub fn new(config: serde_json::Value) -> Self {
        VerificationReport { tool_version: TOOL_VERSION.into(), config, notes: Vec::new(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        let s = s.into();
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status.ok())
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.status.ok()).collect()
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Prefix every check id, for aggregated reports.
    pub fn prefixed(mut self, p: &str) -> Self {
        for c in &mut self.checks {
            c.id = format!("{p}{}", c.id);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# Verification report ({})\n\n", self.tool_version));
        if !self.config.is_null() {
            s.push_str(&format!("- config: `{}`\n", self.config));
        }
        for n in &self.notes {
            s.push_str(&format!("- note: {n}\n"));
        }
        if !self.notes.is_empty() || !self.config.is_null() {
            s.push('\n');
        }
        s.push_str("| id | status | anchor | mode | witness |\n|---|---|---|---|---|\n");
        for c in &self.checks {
            let st = serde_json::to_value(c.status).unwrap();
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                escape_md(&c.id),
                st.as_str().unwrap(),
                escape_md(&c.anchor),
                escape_md(c.mode.as_deref().unwrap_or("")),
                escape_md(&truncate(c.witness.as_deref().unwrap_or(""), 200)),
            ));
        }
        s
    }
}

impl VerificationReport {
    /// Inverse of `to_markdown`, up to witness truncation and newlines.
    pub fn from_markdown(md: &str) -> Result<Self, String> {
        let mut lines = md.lines();
        let head = lines.next().ok_or("empty document")?;
        let tool_version = head
            .strip_prefix("# Verification report (")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| format!("bad heading: {head}"))?;
        let mut rep = VerificationReport::new(serde_json::Value::Null);
        rep.tool_version = tool_version.into();
        let mut in_table = false;
        for line in lines {
            if let Some(c) = line.strip_prefix("- config: `").and_then(|s| s.strip_suffix('`')) {
                rep.config = serde_json::from_str(c).map_err(|e| e.to_string())?;
            } else if let Some(n) = line.strip_prefix("- note: ") {
                rep.notes.push(n.into());
            } else if line.starts_with("|---") {
                in_table = true;
            } else if in_table && line.starts_with('|') {
                let cells = split_row(line);
                if cells.len() != 5 {
                    return Err(format!("expected 5 cells: {line}"));
                }
                let status: Status = serde_json::from_value(serde_json::Value::String(cells[1].clone()))
                    .map_err(|e| e.to_string())?;
                let opt = |s: &String| (!s.is_empty()).then(|| s.clone());
                rep.checks.push(Check {
                    id: cells[0].clone(),
                    anchor: cells[2].clone(),
                    status,
                    witness: opt(&cells[4]),
                    mode: opt(&cells[3]),
                    elapsed_ms: None,
                });
            }
        }
        Ok(rep)
    }
}

fn split_row(line: &str) -> Vec<String> {
    let inner = line.trim().trim_start_matches('|');
    let inner = inner.strip_suffix('|').unwrap_or(inner);
    let mut cells = vec![String::new()];
    let mut chars = inner.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '\\' if chars.peek() == Some(&'|') => {
                cells.last_mut().unwrap().push('|');
                chars.next();
            }
            '|' => cells.push(String::new()),
            _ => cells.last_mut().unwrap().push(ch),
        }
    }
    cells.into_iter().map(|c| c.trim().to_string()).collect()
}

pub fn escape_md(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn truncate(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let t: String = s.chars().take(max).collect();
        format!("{t}…")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_serializes_kebab() {
        let v = serde_json::to_value(Status::GenericPointCertificate).unwrap();
        assert_eq!(v, "generic-point-certificate");
    }

    #[test]
    fn failure_marks_report() {
        let mut r = VerificationReport::default();
        r.push(Check::new("a", "x", Status::Pass));
        assert!(r.all_pass());
        r.push(Check::from_bool("b", "y", false, || "P_12".into()));
        assert!(!r.all_pass());
        assert_eq!(r.failures()[0].witness.as_deref(), Some("P_12"));
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn markdown_roundtrip() {
        let mut r = VerificationReport::new(serde_json::json!({"n": 4, "lambda": ["1", "2/3"]}));
        r.note("a note");
        r.push(Check::new("x|y", "a | b", Status::GenericPointCertificate).with_mode("sampled"));
        r.push(Check::from_bool("z", "c", false, || "P_12 - 1".into()));
        let md = r.to_markdown();
        let back = VerificationReport::from_markdown(&md).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_markdown(), md);
    }
}
