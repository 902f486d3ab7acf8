use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::special::{pochhammer, riemann_zeta, zeta_neg_int};

/// `s zeta(s-k) / (-s)_{k+1}`, whose limit at `s -> 0` is `-zeta(-k)/k!`.
pub fn residue_function(k: u32, s: f64) -> Result<f64> {
    let z = Complex64::new(s, 0.0);
    Ok((z * riemann_zeta(z - f64::from(k))? / pochhammer(-z, k + 1)).re)
}

/// `-zeta(-k) / k!`.
pub fn residue_limit(k: u32) -> f64 {
    let factorial: f64 = (1..=k).map(f64::from).product();
    -zeta_neg_int(k).to_f64().unwrap_or(f64::NAN) / factorial
}

/// Polynomial extrapolation of `(s_i, g_i)` to `s = 0` (Neville's scheme).
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let mut p: Vec<f64> = points.iter().map(|&(_, g)| g).collect();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (si, sj) = (points[i].0, points[i + level].0);
            p[i] = (sj * p[i] - si * p[i + 1]) / (sj - si);
        }
    }
    p[0]
}

/// Evaluates the residue function along `s_seq` and compares its
/// Richardson-extrapolated limit with `-zeta(-k)/k!`.
pub fn residue_limit_check(k: u32, s_seq: &[f64], tol: f64) -> Result<VerificationReport> {
    if s_seq.is_empty() {
        return Err(Error::Precondition("the s sequence is empty".into()));
    }
    if s_seq.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::Precondition("s values must be positive and finite".into()));
    }
    if s_seq.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("s values must be strictly decreasing".into()));
    }
    let points = s_seq
        .iter()
        .map(|&s| Ok((s, residue_function(k, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let limit = extrapolate_to_zero(&points);
    let target = residue_limit(k);
    let last = points[points.len() - 1];
    let raw = points
        .iter()
        .map(|(s, g)| format!("{s:e}:{g:.17e}"))
        .collect::<Vec<_>>()
        .join(";");
    Ok(VerificationReport::new(k, Complex64::new(last.0, 0.0), Complex64::new(limit, 0.0), Complex64::new(target, 0.0), tol)
        .with_meta("method", "neville_extrapolation")
        .with_meta("raw_values", raw)
        .with_meta("last_raw_error", format!("{:.3e}", (last.1 - target).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_limits() {
        assert_eq!(residue_limit(0), 0.5);
        assert!((residue_limit(1) - 1.0 / 12.0).abs() < 1e-17);
        assert_eq!(residue_limit(2), 0.0);
        assert!((residue_function(0, 1e-5).unwrap() - 0.5).abs() < 1e-4);
        assert!((residue_function(1, 1e-5).unwrap() - 1.0 / 12.0).abs() < 1e-5);
    }

    #[test]
    fn linear_convergence() {
        for k in 0..=5u32 {
            let target = residue_limit(k);
            let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
                .iter()
                .map(|&s| (residue_function(k, s).unwrap() - target).abs())
                .collect();
            if errs[0] > 1e-12 {
                for w in errs.windows(2) {
                    let ratio = w[0] / w[1];
                    assert!((8.0..12.5).contains(&ratio), "k={k} ratio {ratio}");
                }
            }
        }
    }

    #[test]
    fn extrapolation_is_exact_for_polynomials() {
        let pts: Vec<(f64, f64)> = [0.3, 0.2, 0.1].iter().map(|&s| (s, 2.0 - 3.0 * s + s * s)).collect();
        assert!((extrapolate_to_zero(&pts) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn checks_and_errors() {
        let r = residue_limit_check(3, &[1e-3, 1e-4, 1e-5], 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(residue_limit_check(0, &[], 1e-6).is_err());
        assert!(residue_limit_check(0, &[1e-4, 1e-3], 1e-6).is_err());
        assert!(residue_limit_check(0, &[-1e-4], 1e-6).is_err());
    }
}
