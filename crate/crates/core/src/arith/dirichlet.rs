use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coefficients::ArithmeticCoefficients;
use crate::error::{Error, Result};
use crate::special::real_pow_neg;
use crate::summation::CompensatedComplex;

/// The Dirichlet series `L(s) = sum a(n) n^{-s}` of a coefficient sequence.
#[derive(Debug, Clone, Copy)]
pub struct DirichletSeriesView<'a> {
    pub coefficients: &'a ArithmeticCoefficients,
    /// Absolute convergence for `Re(s)` above this; `None` when finitely supported.
    pub abscissa_hint: Option<f64>,
}

impl<'a> DirichletSeriesView<'a> {
    pub fn new(coefficients: &'a ArithmeticCoefficients) -> Self {
        Self {
            coefficients,
            abscissa_hint: coefficients.abscissa_hint(),
        }
    }
}

/// A (possibly truncated) Dirichlet series value with a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletValue {
    pub value: Complex64,
    /// Bound on `|sum_{n > terms} a(n) n^{-s}|`; zero when the sum is exact.
    pub tail_bound: f64,
    pub terms: u64,
    pub exact: bool,
}

/// Partial sum `sum_{n <= m} a(n) n^{-s}`, exact when `a` is finitely supported.
pub fn dirichlet_value(view: &DirichletSeriesView<'_>, s: Complex64, m: u64) -> Result<DirichletValue> {
    let a = view.coefficients;
    if let Some(support) = a.finite_support() {
        let value: CompensatedComplex = support
            .iter()
            .map(|(n, v)| real_pow_neg(*n as f64, s) * v.to_f64())
            .collect();
        return Ok(DirichletValue {
            value: value.value(),
            tail_bound: 0.0,
            terms: a.support_bound().unwrap_or(0),
            exact: true,
        });
    }
    let abscissa = view
        .abscissa_hint
        .ok_or_else(|| Error::Divergent("no convergence abscissa declared".into()))?;
    if s.re <= abscissa {
        return Err(Error::Divergent(format!(
            "Re(s) = {} does not exceed the absolute-convergence abscissa {abscissa}",
            s.re
        )));
    }
    let values = a.values_f64(m)?;
    let value: CompensatedComplex = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, &v)| real_pow_neg(i as f64 + 1.0, s) * v)
        .collect();
    Ok(DirichletValue {
        value: value.value(),
        tail_bound: tail_bound(a, s.re, m),
        terms: m,
        exact: false,
    })
}

/// Integral-comparison bound on the dropped tail for `|a(n)| <= 1` or `<= ln n`.
fn tail_bound(a: &ArithmeticCoefficients, sigma: f64, m: u64) -> f64 {
    let mf = m as f64;
    let e = sigma - 1.0;
    let base = mf.powf(-e);
    match a {
        ArithmeticCoefficients::VonMangoldt => base * (mf.ln() / e + 1.0 / (e * e)),
        _ => base / e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn delta_is_one() {
        let a = ArithmeticCoefficients::Delta;
        let v = dirichlet_value(&DirichletSeriesView::new(&a), Complex64::new(-3.0, 2.0), 10).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        assert!(v.exact);
    }

    #[test]
    fn unit_is_zeta_two() {
        let a = ArithmeticCoefficients::Unit;
        let v = dirichlet_value(&DirichletSeriesView::new(&a), Complex64::new(2.0, 0.0), 1_000_000).unwrap();
        let err = (v.value.re - PI * PI / 6.0).abs();
        assert!(err <= v.tail_bound && v.tail_bound < 1.1e-6);
    }

    #[test]
    fn mobius_is_inverse_zeta_two() {
        // Euler product oracle: prod_p (1 - p^{-2}) over p <= 10^6
        let m = 1_000_000usize;
        let mut composite = vec![false; m + 1];
        let mut product = 1.0f64;
        for p in 2..=m {
            if !composite[p] {
                product *= 1.0 - 1.0 / (p as f64 * p as f64);
                for q in (p * p..=m).step_by(p) {
                    composite[q] = true;
                }
            }
        }
        let a = ArithmeticCoefficients::Mobius;
        let v = dirichlet_value(&DirichletSeriesView::new(&a), Complex64::new(2.0, 0.0), m as u64).unwrap();
        assert!((v.value.re - product).abs() < 1e-5);
        assert!((v.value.re - 6.0 / (PI * PI)).abs() < 1e-5);
    }

    #[test]
    fn refuses_divergent_region() {
        let a = ArithmeticCoefficients::Mobius;
        let r = dirichlet_value(&DirichletSeriesView::new(&a), Complex64::new(1.0, 3.0), 100);
        assert!(matches!(r, Err(Error::Divergent(_))));
        let r = dirichlet_value(&DirichletSeriesView::new(&a), Complex64::new(0.5, 0.0), 100);
        assert!(r.is_err());
    }
}
