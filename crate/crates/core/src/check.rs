//! Pass/fail records for inequality and identity checks.

use serde::{Deserialize, Serialize};

/// One verified relation: `lhs <= rhs` or `lhs ~ rhs`, at a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `lhs <= rhs` up to a relative tolerance on `rhs`.
    pub fn leq(id: impl Into<String>, lhs: f64, rhs: f64, rtol: f64) -> Self {
        let slack = rtol * rhs.abs().max(f64::MIN_POSITIVE);
        let pass = lhs.is_finite() && rhs.is_finite() && lhs <= rhs + slack || lhs.is_finite() && rhs == f64::INFINITY;
        Self {
            id: id.into(),
            lhs,
            rhs,
            tolerance: rtol,
            pass,
        }
    }

    /// `|lhs - rhs| <= atol`.
    pub fn close_abs(id: impl Into<String>, lhs: f64, rhs: f64, atol: f64) -> Self {
        Self {
            id: id.into(),
            lhs,
            rhs,
            tolerance: atol,
            pass: (lhs - rhs).abs() <= atol,
        }
    }

    /// `|lhs - rhs| <= rtol * |rhs|`.
    pub fn close_rel(id: impl Into<String>, lhs: f64, rhs: f64, rtol: f64) -> Self {
        Self {
            id: id.into(),
            lhs,
            rhs,
            tolerance: rtol,
            pass: (lhs - rhs).abs() <= rtol * rhs.abs(),
        }
    }

    /// A boolean property, recorded with `lhs = rhs = 1` on success.
    pub fn holds(id: impl Into<String>, ok: bool) -> Self {
        Self {
            id: id.into(),
            lhs: if ok { 1.0 } else { 0.0 },
            rhs: 1.0,
            tolerance: 0.0,
            pass: ok,
        }
    }
}

/// True when every check passed.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leq_with_tolerance() {
        assert!(Check::leq("a", 1.0, 1.0, 0.0).pass);
        assert!(Check::leq("a", 1.0 + 1e-12, 1.0, 1e-10).pass);
        assert!(!Check::leq("a", 1.1, 1.0, 1e-3).pass);
        assert!(!Check::leq("a", f64::NAN, 1.0, 1e-3).pass);
        assert!(Check::leq("a", 3.0, f64::INFINITY, 0.0).pass);
    }

    #[test]
    fn closeness() {
        assert!(Check::close_abs("c", 1.0005, 1.0, 1e-3).pass);
        assert!(!Check::close_rel("c", 1.02, 1.0, 1e-2).pass);
        assert!(all_pass(&[Check::holds("h", true)]));
        assert!(!all_pass(&[Check::holds("h", false)]));
    }
}
