use serde::{Deserialize, Serialize};

use super::constant::FormulaMode;
use super::expansion::{EvalMode, ExpansionJob};
use crate::arith::ArithmeticCoefficients;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub x: f64,
    /// Left side with the centering constant `-1/(N+1)`.
    pub lhs: f64,
    pub rhs_paper_literal: f64,
    pub rhs_corrected: f64,
    pub err_paper_literal: f64,
    pub err_corrected: f64,
}

/// Pointwise comparison of both right-side formulas against the left side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub order: u32,
    pub coefficients: String,
    pub tol: f64,
    pub rows: Vec<AuditRow>,
    pub max_err_paper_literal: f64,
    pub max_err_corrected: f64,
    pub paper_literal_pass: bool,
    pub corrected_pass: bool,
}

impl AuditReport {
    pub fn passes(&self, mode: FormulaMode) -> bool {
        match mode {
            FormulaMode::Literal => self.paper_literal_pass,
            FormulaMode::Corrected => self.corrected_pass,
        }
    }

    pub fn max_err(&self, mode: FormulaMode) -> f64 {
        match mode {
            FormulaMode::Literal => self.max_err_paper_literal,
            FormulaMode::Corrected => self.max_err_corrected,
        }
    }
}

/// Evaluates the left side (corrected constant) and both right sides in
/// closed form at every `x`. Requires finitely supported coefficients.
pub fn audit(order: u32, coefficients: &ArithmeticCoefficients, xs: &[f64], tol: f64) -> Result<AuditReport> {
    if !coefficients.is_finitely_supported() {
        return Err(Error::Precondition(format!(
            "the audit runs in exact mode and needs finitely supported coefficients, {} is not",
            coefficients.name()
        )));
    }
    let corrected = ExpansionJob::new(order, coefficients.clone(), FormulaMode::Corrected, EvalMode::ClosedForm)?.prepare()?;
    let literal = ExpansionJob::new(order, coefficients.clone(), FormulaMode::Literal, EvalMode::ClosedForm)?.prepare()?;
    let rows = xs
        .iter()
        .map(|&x| {
            let lhs = corrected.lhs(x)?.value;
            let rhs_corrected = corrected.rhs(x)?.value;
            let rhs_paper_literal = literal.rhs(x)?.value;
            Ok(AuditRow {
                x,
                lhs,
                rhs_paper_literal,
                rhs_corrected,
                err_paper_literal: (lhs - rhs_paper_literal).abs(),
                err_corrected: (lhs - rhs_corrected).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_err_paper_literal = rows.iter().map(|r| r.err_paper_literal).fold(0.0, f64::max);
    let max_err_corrected = rows.iter().map(|r| r.err_corrected).fold(0.0, f64::max);
    Ok(AuditReport {
        order,
        coefficients: coefficients.name().to_string(),
        tol,
        paper_literal_pass: max_err_paper_literal <= tol,
        corrected_pass: max_err_corrected <= tol,
        rows,
        max_err_paper_literal,
        max_err_corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_coincide_at_first_order() {
        let xs: Vec<f64> = (1..50).map(|i| i as f64 / 50.0 + 0.003).collect();
        let r = audit(1, &ArithmeticCoefficients::Delta, &xs, 1e-12).unwrap();
        assert!(r.corrected_pass && r.paper_literal_pass);
    }

    #[test]
    fn second_order_discrepancy() {
        let r = audit(2, &ArithmeticCoefficients::Delta, &[0.25], 1e-12).unwrap();
        assert!(r.corrected_pass);
        assert!(!r.paper_literal_pass);
        assert!((r.max_err_paper_literal - 0.1517).abs() < 1e-3);
        assert!(audit(2, &ArithmeticCoefficients::Mobius, &[0.25], 1e-12).is_err());
    }
}
