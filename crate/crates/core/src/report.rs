//! Estimate reports and the frozen-constants table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{DunklError, Result};
use crate::specfn::MultiplicityVector;

/// A constant may grow by this factor before a report fails.
pub const REGRESSION_SLACK: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Pinning,
}

/// Outcome of one grid scan.
///
/// `empirical_constant` is always oriented so that larger is worse: two-sided
/// comparisons `q ∈ [1/C, C]` report `C = max(sup q, sup 1/q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimate_id: String,
    pub k_config: MultiplicityVector,
    pub grid_id: String,
    pub empirical_constant: f64,
    pub worst_case: BTreeMap<String, f64>,
    pub frozen_constant: Option<f64>,
    /// Hard upper bound for tolerance-type checks.
    pub threshold: Option<f64>,
    pub status: Status,
}

impl EstimateReport {
    pub fn new(
        estimate_id: impl Into<String>,
        k_config: &MultiplicityVector,
        grid_id: impl Into<String>,
        empirical_constant: f64,
    ) -> Self {
        let mut r = Self {
            estimate_id: estimate_id.into(),
            k_config: k_config.clone(),
            grid_id: grid_id.into(),
            empirical_constant,
            worst_case: BTreeMap::new(),
            frozen_constant: None,
            threshold: None,
            status: Status::Pass,
        };
        r.refresh_status();
        r
    }

    pub fn with_witness(mut self, names: &[&str], values: &[f64]) -> Self {
        for (n, v) in names.iter().zip(values) {
            self.worst_case.insert((*n).to_string(), *v);
        }
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self.refresh_status();
        self
    }

    /// Attaches the frozen value (if any) and recomputes the status.
    pub fn judge(&mut self, frozen: Option<f64>) {
        self.frozen_constant = frozen;
        self.refresh_status();
    }

    pub fn mark_pinning(&mut self) {
        self.status = Status::Pinning;
    }

    pub fn key(&self) -> (String, String, String) {
        (
            self.estimate_id.clone(),
            self.k_config.to_string(),
            self.grid_id.clone(),
        )
    }

    fn refresh_status(&mut self) {
        let v = self.empirical_constant;
        let over_frozen = self
            .frozen_constant
            .is_some_and(|f| v > REGRESSION_SLACK * f);
        let over_threshold = self.threshold.is_some_and(|t| v > t);
        self.status = if !v.is_finite() || over_frozen || over_threshold {
            Status::Fail
        } else {
            Status::Pass
        };
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// One pinned constant.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenRecord {
    pub estimate_id: String,
    pub k_config: String,
    pub grid_id: String,
    pub constant: f64,
    pub timestamp: u64,
}

/// The checked-in table of pinned constants.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrozenTable {
    records: BTreeMap<(String, String, String), FrozenRecord>,
    history: Vec<String>,
}

impl FrozenTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                table.history.push(trimmed.to_string());
                continue;
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 5 {
                return Err(DunklError::Config(format!(
                    "frozen table line {}: expected 5 fields",
                    lineno + 1
                )));
            }
            let constant = parts[3].parse::<f64>().map_err(|_| {
                DunklError::Config(format!("frozen table line {}: bad constant", lineno + 1))
            })?;
            let timestamp = parts[4].parse::<u64>().map_err(|_| {
                DunklError::Config(format!("frozen table line {}: bad timestamp", lineno + 1))
            })?;
            let rec = FrozenRecord {
                estimate_id: parts[0].to_string(),
                k_config: parts[1].to_string(),
                grid_id: parts[2].to_string(),
                constant,
                timestamp,
            };
            table.records.insert(
                (
                    rec.estimate_id.clone(),
                    rec.k_config.clone(),
                    rec.grid_id.clone(),
                ),
                rec,
            );
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn lookup(&self, report: &EstimateReport) -> Option<f64> {
        self.records.get(&report.key()).map(|r| r.constant)
    }

    pub fn contains(&self, report: &EstimateReport) -> bool {
        self.records.contains_key(&report.key())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &FrozenRecord> {
        self.records.values()
    }

    /// Inserts or replaces a record; replacements leave a history comment.
    pub fn pin(&mut self, report: &EstimateReport, timestamp: u64) {
        let key = report.key();
        if let Some(old) = self.records.get(&key) {
            self.history.push(format!(
                "# replaced {} {} {} {:.17e} {}",
                old.estimate_id, old.k_config, old.grid_id, old.constant, old.timestamp
            ));
        }
        self.records.insert(
            key,
            FrozenRecord {
                estimate_id: report.estimate_id.clone(),
                k_config: report.k_config.to_string(),
                grid_id: report.grid_id.clone(),
                constant: report.empirical_constant,
                timestamp,
            },
        );
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# estimate_id k_config grid_id constant timestamp\n");
        for h in &self.history {
            if h.starts_with("# estimate_id") {
                continue;
            }
            out.push_str(h);
            out.push('\n');
        }
        for r in self.records.values() {
            let _ = writeln!(
                out,
                "{} {} {} {:.17e} {}",
                r.estimate_id, r.k_config, r.grid_id, r.constant, r.timestamp
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k07() -> MultiplicityVector {
        MultiplicityVector::scalar(0.7).unwrap()
    }

    #[test]
    fn status_rule() {
        let mut r = EstimateReport::new("x", &k07(), "g", 1.0);
        assert_eq!(r.status, Status::Pass);
        r.judge(Some(0.96));
        assert_eq!(r.status, Status::Pass);
        r.judge(Some(0.95));
        assert_eq!(r.status, Status::Fail);
        r.judge(None);
        assert_eq!(r.status, Status::Pass);
        let r = EstimateReport::new("x", &k07(), "g", f64::NAN);
        assert_eq!(r.status, Status::Fail);
        let r = EstimateReport::new("x", &k07(), "g", 2e-6).with_threshold(1e-6);
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn table_round_trip() {
        let mut t = FrozenTable::default();
        let r = EstimateReport::new(
            "heat.mass",
            &MultiplicityVector::new(vec![0.7, 1.2]).unwrap(),
            "default",
            1.2345,
        );
        t.pin(&r, 7);
        let text = t.render();
        let back = FrozenTable::parse(&text).unwrap();
        assert_eq!(back.lookup(&r), Some(1.2345));
        let mut again = back.clone();
        again.pin(&r, 8);
        assert!(again
            .render()
            .contains("# replaced heat.mass 0.7,1.2 default"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(FrozenTable::parse("a b c\n").is_err());
        assert!(FrozenTable::parse("a b c notanumber 1\n").is_err());
    }
}
