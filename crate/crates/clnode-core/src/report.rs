//! Structured verification reports.
//!
//! Every identity check produces a [`CheckRecord`] with per-coefficient
//! detail rather than a bare boolean, so a regression localizes to the
//! exact coefficient that broke. Checks of conjectural statements are
//! flagged and excluded from pass/fail gating unless explicitly opted in.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One compared coefficient (or sample), with both sides rendered
/// exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// One verification check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Stable machine-readable identifier, e.g. `thmb.symbolic`.
    pub id: String,
    /// Human-readable statement of what was compared.
    pub statement: String,
    pub status: CheckStatus,
    /// Conjectural checks never gate exit status by default.
    pub conjectural: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub coefficients: Vec<CoefficientRow>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// A full verification certificate for one suite run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub suite: String,
    pub config: RunSummary,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u8>,
    pub symbolic: bool,
    pub x_order: usize,
    pub t_order: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub conjectural_failed: usize,
}

impl Certificate {
    pub fn new(suite: &str, config: RunSummary, checks: Vec<CheckRecord>) -> Certificate {
        let passed = checks.iter().filter(|c| c.status == CheckStatus::Pass).count();
        let skipped = checks.iter().filter(|c| c.status == CheckStatus::Skipped).count();
        let failed = checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail && !c.conjectural)
            .count();
        let conjectural_failed = checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail && c.conjectural)
            .count();
        Certificate {
            suite: suite.to_string(),
            config,
            checks,
            summary: Summary {
                passed,
                failed,
                skipped,
                conjectural_failed,
            },
        }
    }

    /// True when every non-conjectural check passed (conjectural failures
    /// gate only under `strict_conjectures`).
    pub fn all_passed(&self, strict_conjectures: bool) -> bool {
        self.summary.failed == 0 && (!strict_conjectures || self.summary.conjectural_failed == 0)
    }
}

/// Builds a check record from labelled (lhs, rhs) pairs, recording every
/// comparison.
pub fn compare_all<T: PartialEq + std::fmt::Display>(
    id: &str,
    statement: &str,
    pairs: impl IntoIterator<Item = (String, T, T)>,
) -> CheckRecord {
    let mut rows = Vec::new();
    let mut all_equal = true;
    for (label, lhs, rhs) in pairs {
        let equal = lhs == rhs;
        all_equal &= equal;
        rows.push(CoefficientRow {
            label,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal,
        });
    }
    CheckRecord {
        id: id.to_string(),
        statement: statement.to_string(),
        status: if all_equal {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        conjectural: false,
        detail: None,
        coefficients: rows,
    }
}

/// A check that is just a named boolean with optional detail.
pub fn simple_check(id: &str, statement: &str, ok: bool, detail: Option<String>) -> CheckRecord {
    CheckRecord {
        id: id.to_string(),
        statement: statement.to_string(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        conjectural: false,
        detail,
        coefficients: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_summary_counts() {
        let checks = vec![
            simple_check("a", "a", true, None),
            simple_check("b", "b", false, None),
            CheckRecord {
                conjectural: true,
                ..simple_check("c", "c", false, None)
            },
        ];
        let cert = Certificate::new(
            "demo",
            RunSummary {
                q: Some(2),
                symbolic: false,
                x_order: 4,
                t_order: 0,
            },
            checks,
        );
        assert_eq!(cert.summary.passed, 1);
        assert_eq!(cert.summary.failed, 1);
        assert_eq!(cert.summary.conjectural_failed, 1);
        assert!(!cert.all_passed(false));
    }

    #[test]
    fn compare_all_localizes_mismatch() {
        let rec = compare_all(
            "x",
            "x",
            vec![
                ("x^0".to_string(), 1, 1),
                ("x^1".to_string(), 2, 3),
            ],
        );
        assert_eq!(rec.status, CheckStatus::Fail);
        assert!(rec.coefficients[0].equal);
        assert!(!rec.coefficients[1].equal);
    }

    #[test]
    fn conjectural_failures_gate_only_in_strict_mode() {
        let checks = vec![CheckRecord {
            conjectural: true,
            ..simple_check("c", "c", false, None)
        }];
        let cert = Certificate::new(
            "demo",
            RunSummary {
                q: None,
                symbolic: true,
                x_order: 1,
                t_order: 1,
            },
            checks,
        );
        assert!(cert.all_passed(false));
        assert!(!cert.all_passed(true));
    }
}
