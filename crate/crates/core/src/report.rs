//! Verdicts of exact and statistical checks.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Outcome of one check. `pass` always equals `statistic <= threshold`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerdictReport {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub metadata: Vec<(String, String)>,
    pub sub_reports: Vec<VerdictReport>,
}

impl VerdictReport {
    pub fn new(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            metadata: Vec::new(),
            sub_reports: Vec::new(),
        }
    }

    /// Conjunction of sub-verdicts: the statistic counts failed sub-reports, threshold 0.
    pub fn all_of(name: impl Into<String>, subs: Vec<VerdictReport>) -> Self {
        let failed = subs.iter().filter(|r| !r.pass).count();
        let mut r = Self::new(name, failed as f64, 0.0);
        r.sub_reports = subs;
        r
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_statistic_within_threshold() {
        assert!(VerdictReport::new("a", 1.0, 1.0).pass);
        assert!(!VerdictReport::new("a", 1.5, 1.0).pass);
        assert!(!VerdictReport::new("a", f64::NAN, 1.0).pass);
        let c = VerdictReport::all_of(
            "c",
            alloc::vec![
                VerdictReport::new("x", 0.0, 1.0),
                VerdictReport::new("y", 2.0, 1.0)
            ],
        );
        assert_eq!(c.statistic, 1.0);
        assert!(!c.pass);
        assert_eq!(c.with_meta("seed", 3).meta("seed"), Some("3"));
    }
}
