use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of comparing two independently computed sides of an identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `N` for Mellin/Hurwitz checks, `k` for residue checks.
    pub order: u32,
    /// Evaluation point.
    pub s: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    /// `abs_err / |rhs|`; equals `abs_err` when `rhs == 0`.
    pub rel_err: f64,
    pub tol: f64,
    /// `abs_err <= tol || rel_err <= tol`.
    pub pass: bool,
    pub metadata: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(order: u32, s: Complex64, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = rhs.norm();
        let rel_err = if scale > 0.0 { abs_err / scale } else { abs_err };
        Self {
            order,
            s,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            pass: abs_err <= tol || rel_err <= tol,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    /// Forces a failure while keeping the measured errors (e.g. a side condition failed).
    pub(crate) fn fail_because(mut self, reason: &str) -> Self {
        self.pass = false;
        self.metadata.insert("failure".into(), reason.to_string());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_either_error_under_tol() {
        let r = VerificationReport::new(1, Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-9, 0.0), 1e-8);
        assert!(r.pass);
        let big = VerificationReport::new(1, Complex64::new(0.5, 0.0), Complex64::new(1e6, 0.0), Complex64::new(1e6 + 1.0, 0.0), 1e-5);
        assert!(big.abs_err > 1e-5 && big.rel_err < 1e-5 && big.pass);
        let zero = VerificationReport::new(0, Complex64::new(0.0, 0.0), Complex64::new(1e-3, 0.0), Complex64::new(0.0, 0.0), 1e-6);
        assert_eq!(zero.rel_err, zero.abs_err);
        assert!(!zero.pass);
    }
}
