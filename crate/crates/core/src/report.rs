//! Verification reports: one entry per checked instance, serialized as JSON.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Informational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub suite: String,
    pub relation_id: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub residual: Option<String>,
    pub micros: Option<u64>,
}

impl Entry {
    pub fn new(suite: &str, relation_id: &str, status: Status) -> Self {
        Entry {
            suite: suite.to_string(),
            relation_id: relation_id.to_string(),
            params: Map::new(),
            status,
            residual: None,
            micros: None,
        }
    }

    pub fn with_param(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    pub fn with_residual(mut self, residual: impl Into<String>) -> Self {
        self.residual = Some(residual.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub informational: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: Value,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: Value, entries: Vec<Entry>) -> Self {
        let summary = summarize(&entries);
        Report { config, entries, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Failing entries, for quick inspection.
    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }
}

pub fn summarize(entries: &[Entry]) -> Summary {
    let mut s = Summary { total: entries.len(), ..Summary::default() };
    for e in entries {
        match e.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skipped => s.skipped += 1,
            Status::Informational => s.informational += 1,
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_statuses() {
        let entries = vec![
            Entry::new("s", "a", Status::Pass),
            Entry::new("s", "b", Status::Fail).with_residual("E(1,2)"),
            Entry::new("s", "c", Status::Skipped),
            Entry::new("s", "d", Status::Pass).with_param("i", 1),
        ];
        let r = Report::new(Value::Null, entries);
        assert_eq!(r.summary, Summary { total: 4, pass: 2, fail: 1, skipped: 1, informational: 0 });
        assert!(!r.passed());
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["entries"][1]["status"], "fail");
        assert_eq!(json["entries"][3]["params"]["i"], 1);
        assert!(json["entries"][0]["micros"].is_null());
    }
}
