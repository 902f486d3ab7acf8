use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// B_{2j} / (2j (2j - 1)) for j = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const STIRLING_MIN_ABS: f64 = 15.0;

/// Returns the integer `n <= 0` if `s` sits exactly on a pole of Gamma.
fn gamma_pole(s: Complex64) -> Option<i64> {
    (s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()).then_some(s.re as i64)
}

/// `sin(pi s)` with the argument reduced by the nearest integer first.
pub(crate) fn sin_pi(s: Complex64) -> Complex64 {
    let n = s.re.round();
    let r = Complex64::new(s.re - n, s.im) * PI;
    if (n as i64) % 2 == 0 {
        r.sin()
    } else {
        -r.sin()
    }
}

fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// The Gamma function on the complex plane.
///
/// Uses the Stirling series after shifting the argument to `|z| >= 15`, and the
/// reflection formula for `Re(s) < 1/2`.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if let Some(n) = gamma_pole(s) {
        return Err(Error::Pole {
            location: n.to_string(),
        });
    }
    if s.re < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        return Ok(Complex64::new(PI, 0.0) / (sin_pi(s) * gamma(one_minus)?));
    }
    let mut z = s;
    let mut denom = Complex64::new(1.0, 0.0);
    while z.norm() < STIRLING_MIN_ABS {
        denom *= z;
        z += 1.0;
    }
    Ok(ln_gamma_stirling(z).exp() / denom)
}

/// Rising factorial `(s)_k = s (s+1) ... (s+k-1)`, computed as a finite product.
pub fn pochhammer(s: Complex64, k: u32) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s + i as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn documented_values() {
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(20.0, 0.0)).unwrap(), c(121_645_100_408_832_000.0, 0.0)) < 1e-13);
        // Gamma(1 + i)
        let expected = c(0.498_015_668_118_356, -0.154_949_828_301_810_7);
        assert!(rel(gamma(c(1.0, 1.0)).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn poles_are_reported() {
        for n in 0..5 {
            let err = gamma(c(-(n as f64), 0.0)).unwrap_err();
            assert_eq!(
                err,
                Error::Pole {
                    location: (-(n as i64)).to_string()
                }
            );
        }
        assert!(gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn pochhammer_values() {
        assert!((pochhammer(c(-0.5, 0.0), 2) - c(-0.25, 0.0)).norm() < 1e-16);
        assert_eq!(pochhammer(c(3.7, -2.0), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(1.0, 0.0), 5), c(120.0, 0.0));
    }

    proptest! {
        #[test]
        fn recurrence(re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let s = c(re, im);
            prop_assume!(s.norm() > 1e-3 && (re - re.round()).abs() + im.abs() > 1e-3);
            let lhs = gamma(s + 1.0).unwrap();
            let rhs = s * gamma(s).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-12, "s = {s}");
        }

        #[test]
        fn reflection(re in -10.0f64..10.0, im in -5.0f64..5.0) {
            let s = c(re, im);
            prop_assume!((re - re.round()).abs() + im.abs() > 1e-3);
            let lhs = gamma(s).unwrap() * gamma(c(1.0, 0.0) - s).unwrap();
            let rhs = c(PI, 0.0) / (s * PI).sin();
            prop_assert!(rel(lhs, rhs) < 1e-12, "s = {s}");
        }

        #[test]
        fn pochhammer_recurrence(re in -10.0f64..10.0, im in -10.0f64..10.0, k in 0u32..20) {
            let s = c(re, im);
            let lhs = pochhammer(s, k + 1);
            let rhs = pochhammer(s, k) * (s + k as f64);
            prop_assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn pochhammer_matches_gamma_ratio(re in 0.5f64..5.0, im in -3.0f64..3.0, k in 0u32..8) {
            let s = c(re, im);
            let ratio = gamma(s + k as f64).unwrap() / gamma(s).unwrap();
            prop_assert!(rel(pochhammer(s, k), ratio) < 1e-12);
        }
    }
}
