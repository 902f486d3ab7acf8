use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{bernoulli_poly, frac, frac_mul, Trig};
use crate::summation::Compensated;

/// `sum_{d >= 1} trig(2 pi d y) / d^{k+1}` in closed form via periodic
/// Bernoulli polynomials. Only the parity-matching member has a polynomial
/// closed form: sine for even `k`, cosine for odd `k`.
///
/// At integer `y` the `k = 0` sawtooth takes the series value `0`.
pub fn trig_sum_closed(k: u32, kind: Trig, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {y}")));
    }
    let r = frac(y);
    match (k % 2, kind) {
        (0, Trig::Sin) if k == 0 => Ok(if r == 0.0 { 0.0 } else { PI * (0.5 - r) }),
        (0, Trig::Sin) => {
            let m = k / 2;
            let degree = 2 * m + 1;
            Ok(bernoulli_sum(m, degree, r)?)
        }
        (1, Trig::Cos) => {
            let m = k.div_ceil(2);
            Ok(bernoulli_sum(m, 2 * m, r)?)
        }
        _ => Err(Error::Domain(format!(
            "no Bernoulli closed form for k = {k} with {kind:?}; only the parity-matching sum is supported"
        ))),
    }
}

/// `(-1)^{m+1} (2 pi)^p B_p(r) / (2 p!)`.
fn bernoulli_sum(m: u32, p: u32, r: f64) -> Result<f64> {
    let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 };
    let factorial: f64 = (1..=p).map(f64::from).product();
    Ok(sign * (2.0 * PI).powi(p as i32) * bernoulli_poly(p as usize, r)? / (2.0 * factorial))
}

/// Partial sum `sum_{d <= terms} trig(2 pi d y) / d^{k+1}`, ascending and compensated.
pub fn trig_sum_partial(k: u32, kind: Trig, y: f64, terms: u64) -> f64 {
    let y = frac(y);
    let mut acc = Compensated::default();
    for d in 1..=terms {
        let phase = 2.0 * PI * frac_mul(d, y);
        let t = match kind {
            Trig::Sin => phase.sin(),
            Trig::Cos => phase.cos(),
        };
        acc.add(t / (d as f64).powi(k as i32 + 1));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert!((trig_sum_closed(0, Trig::Sin, 0.25).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((trig_sum_closed(1, Trig::Cos, 0.25).unwrap() + PI * PI / 48.0).abs() < 1e-15);
        assert!(trig_sum_closed(2, Trig::Sin, 0.5).unwrap().abs() < 1e-15);
        assert_eq!(trig_sum_closed(0, Trig::Sin, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn partial_sum_oracle() {
        let partial = trig_sum_partial(0, Trig::Sin, 0.25, 1_000_000);
        assert!((partial - PI / 4.0).abs() < 1e-5);
        let partial = trig_sum_partial(1, Trig::Cos, 0.25, 10_000);
        assert!((partial + PI * PI / 48.0).abs() < 1e-7);
    }

    #[test]
    fn unsupported_pairings() {
        assert!(trig_sum_closed(0, Trig::Cos, 0.3).is_err());
        assert!(trig_sum_closed(1, Trig::Sin, 0.3).is_err());
        assert!(trig_sum_closed(2, Trig::Cos, 0.3).is_err());
    }

    #[test]
    fn periodic_in_y() {
        for k in 0..6u32 {
            let kind = if k % 2 == 0 { Trig::Sin } else { Trig::Cos };
            let a = trig_sum_closed(k, kind, 0.3).unwrap();
            let b = trig_sum_closed(k, kind, 5.3).unwrap();
            let c = trig_sum_closed(k, kind, -0.7).unwrap();
            assert!((a - b).abs() < 1e-13 && (a - c).abs() < 1e-13);
        }
    }
}
