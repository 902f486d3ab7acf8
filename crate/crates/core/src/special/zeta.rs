use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::bernoulli::{bernoulli_number, BernoulliTable, DEFAULT_BERNOULLI_BOUND};
use super::gamma::{gamma, sin_pi};
use crate::error::{Error, Result};

/// `x^{-s}` for real `x > 0`.
#[inline]
pub(crate) fn real_pow_neg(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}

/// Exact `zeta(-k)` for `k >= 0`: `-1/2` at zero, `-B_{k+1}/(k+1)` otherwise.
pub fn zeta_neg_int(k: u32) -> BigRational {
    if k == 0 {
        return BigRational::new((-1).into(), 2.into());
    }
    let idx = k as usize + 1;
    let b = if idx <= DEFAULT_BERNOULLI_BOUND {
        bernoulli_number(idx).expect("index within default bound")
    } else {
        BernoulliTable::new(idx).get(idx).cloned().expect("index within table")
    };
    -b / BigRational::from_integer(BigInt::from(idx))
}

/// Tuning knobs for the Euler-Maclaurin Hurwitz evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzConfig {
    /// Requested accuracy relative to the running value.
    pub tol: f64,
    /// Smallest number of terms summed directly.
    pub min_cutoff: u32,
    /// Largest Bernoulli correction order `J` (terms `B_2 .. B_{2J}`).
    pub max_order: usize,
}

impl Default for HurwitzConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            min_cutoff: 10,
            max_order: 30,
        }
    }
}

/// `B_{2j} / (2j)!` for `j = 1..=30`.
pub(crate) fn em_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut fact = BigInt::from(1);
        let mut out = Vec::with_capacity(30);
        for m in 1..=60usize {
            fact *= m;
            if m % 2 == 0 {
                let b = bernoulli_number(m).expect("within bound");
                out.push((b / BigRational::from_integer(fact.clone())).to_f64().unwrap());
            }
        }
        out
    })
}

pub const HURWITZ_RE_MIN: f64 = -5.0;
pub const HURWITZ_RE_MAX: f64 = 40.0;

/// Hurwitz zeta `zeta(s, y) = sum_{n >= 0} (n + y)^{-s}` with the default configuration.
pub fn hurwitz_zeta(s: Complex64, y: f64) -> Result<Complex64> {
    hurwitz_zeta_with(s, y, &HurwitzConfig::default())
}

/// Hurwitz zeta by Euler-Maclaurin summation: a direct head `sum_{n<Q}`, the
/// tail integral, the half term, and Bernoulli corrections until the
/// next correction drops below `cfg.tol` relative to the value.
pub fn hurwitz_zeta_with(s: Complex64, y: f64, cfg: &HurwitzConfig) -> Result<Complex64> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::Domain(format!("hurwitz zeta needs y > 0, got {y}")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            location: "s = 1".into(),
        });
    }
    if !(HURWITZ_RE_MIN..=HURWITZ_RE_MAX).contains(&s.re) || !s.im.is_finite() {
        return Err(Error::Domain(format!(
            "hurwitz zeta supports Re(s) in [{HURWITZ_RE_MIN}, {HURWITZ_RE_MAX}], got {s}"
        )));
    }
    let coeffs = em_coefficients();
    let max_order = cfg.max_order.min(coeffs.len());
    let mut cutoff = cfg.min_cutoff.max(s.norm().ceil() as u32 + 10);
    loop {
        if let Some(v) = euler_maclaurin(s, y, cutoff, max_order, cfg.tol, coeffs) {
            return Ok(v);
        }
        if cutoff > 1 << 20 {
            return Err(Error::Domain(format!("hurwitz zeta failed to converge at s = {s}, y = {y}")));
        }
        cutoff *= 2;
    }
}

fn euler_maclaurin(
    s: Complex64,
    y: f64,
    cutoff: u32,
    max_order: usize,
    tol: f64,
    coeffs: &[f64],
) -> Option<Complex64> {
    let mut head = crate::summation::CompensatedComplex::default();
    for n in 0..cutoff {
        head.add(real_pow_neg(n as f64 + y, s));
    }
    let base = cutoff as f64 + y;
    let base_pow = real_pow_neg(base, s);
    let mut value = head.value() + base_pow * base / (s - 1.0) + base_pow * 0.5;
    // (s)_{2j-1} base^{-s-2j+1}, advanced by (s+2j-1)(s+2j) / base^2 per step
    let mut factor = s * base_pow / base;
    let inv_base2 = 1.0 / (base * base);
    let mut previous = f64::INFINITY;
    for (j, c) in coeffs.iter().take(max_order).enumerate() {
        let term = factor * *c;
        let size = term.norm();
        value += term;
        if size <= tol * value.norm().max(f64::MIN_POSITIVE) {
            return Some(value);
        }
        if size > previous {
            // asymptotic series started diverging: need a larger cutoff
            return None;
        }
        previous = size;
        let m = 2.0 * (j as f64 + 1.0);
        factor *= (s + (m - 1.0)) * (s + m) * inv_base2;
    }
    None
}

/// Riemann zeta on the complex plane.
///
/// Exact rational values at non-positive integers, the functional equation for
/// `Re(s) < 0`, and an accelerated alternating (eta) series otherwise. Close to
/// the zeros of `1 - 2^{1-s}` the eta route is replaced with Euler-Maclaurin.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            location: "s = 1".into(),
        });
    }
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() && s.re > -1e6 {
        let k = (-s.re) as u32;
        return Ok(Complex64::new(zeta_neg_int(k).to_f64().unwrap_or(f64::NAN), 0.0));
    }
    if s.re < 0.0 {
        return reflect(s);
    }
    let denom = Complex64::new(1.0, 0.0) - real_pow_neg(2.0, s - 1.0);
    if denom.norm() < 0.1 {
        return hurwitz_zeta(s, 1.0);
    }
    if s.re > 60.0 {
        // 2^{-60} is below double precision relative to 1
        return Ok(Complex64::new(1.0, 0.0) + real_pow_neg(2.0, s));
    }
    Ok(eta_borwein(s) / denom)
}

/// `zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)`.
fn reflect(s: Complex64) -> Result<Complex64> {
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let prefactor = (s * 2f64.ln() + (s - 1.0) * PI.ln()).exp();
    Ok(prefactor * sin_pi(s * 0.5) * gamma(one_minus)? * riemann_zeta(one_minus)?)
}

/// Number of terms for the Chebyshev-accelerated eta series at height `t`.
fn borwein_terms(t: f64) -> usize {
    let t = t.abs();
    let log_need = (3.0 * (1.0 + 2.0 * t)).ln() + PI * t / 2.0 + 1e-17f64.ln().abs();
    let n = (log_need / (3.0 + 8f64.sqrt()).ln()).ceil() as usize;
    n.max(20)
}

/// Borwein's algorithm 2 for the alternating zeta (eta) function.
fn eta_borwein(s: Complex64) -> Complex64 {
    let n = borwein_terms(s.im);
    let nf = n as f64;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = 0.0;
    for i in 0..=n {
        acc += term;
        d.push(nf * acc);
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    let dn = d[n];
    let mut sum = crate::summation::CompensatedComplex::default();
    for k in 0..n {
        let weight = (d[k] - dn) / dn;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(real_pow_neg(k as f64 + 1.0, s) * (sign * weight));
    }
    -sum.value()
}

/// `zeta(s)` via Euler-Maclaurin at `y = 1` (independent of the eta route).
pub fn riemann_zeta_euler_maclaurin(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

/// True when `zeta(-k)` vanishes (`k` even and positive).
pub fn is_trivial_zero(k: u32) -> bool {
    k > 0 && k.is_multiple_of(2) && zeta_neg_int(k).is_zero()
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

    const ZETA_HALF: f64 = -1.460_354_508_809_586_8;

    #[test]
    fn documented_values() {
        assert!(rel(riemann_zeta(c(2.0, 0.0)).unwrap(), c(PI * PI / 6.0, 0.0)) < 1e-14);
        assert!(rel(riemann_zeta(c(0.5, 0.0)).unwrap(), c(ZETA_HALF, 0.0)) < 1e-13);
        assert!(rel(riemann_zeta(c(-1.0, 0.0)).unwrap(), c(-1.0 / 12.0, 0.0)) < 1e-15);
        assert_eq!(riemann_zeta(c(0.0, 0.0)).unwrap(), c(-0.5, 0.0));
        assert_eq!(riemann_zeta(c(-4.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn eta_oracle_at_one_half() {
        // independent check: Euler-Maclaurin route
        let em = riemann_zeta_euler_maclaurin(c(0.5, 0.0)).unwrap();
        assert!(rel(em, c(ZETA_HALF, 0.0)) < 1e-12);
    }

    #[test]
    fn known_complex_values() {
        // zeta(1/2 + 14.134725141734693 i) is a nontrivial zero
        let z = riemann_zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12);
        // zeta(2 + i), reference value to 16 digits
        let v = riemann_zeta(c(2.0, 1.0)).unwrap();
        assert!(rel(v, c(1.150_355_703_254_902_7, -0.437_530_865_919_607_9)) < 1e-12);
    }

    #[test]
    fn pole_at_one() {
        assert!(matches!(riemann_zeta(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(hurwitz_zeta(c(1.0, 0.0), 2.0), Err(Error::Pole { .. })));
        // large but finite close to the pole
        let s = 1.0 + 1e-8;
        let eps = s - 1.0;
        let near = riemann_zeta(c(s, 0.0)).unwrap();
        assert!((near.re - (1.0 / eps + 0.577_215_664_901_532_9)).abs() < 1e-4);
    }

    #[test]
    fn near_zeros_of_eta_denominator() {
        // 1 - 2^{1-s} vanishes at s = 1 + 2 pi i / ln 2
        let s = c(1.0, 2.0 * PI / 2f64.ln());
        let z = riemann_zeta(s).unwrap();
        let em = riemann_zeta_euler_maclaurin(s).unwrap();
        assert!(rel(z, em) < 1e-12);
        let off = c(1.05, 2.0 * PI / 2f64.ln() + 0.1);
        assert!(rel(riemann_zeta(off).unwrap(), riemann_zeta_euler_maclaurin(off).unwrap()) < 1e-10);
    }

    #[test]
    fn neg_int_rationals() {
        assert_eq!(zeta_neg_int(0), BigRational::new((-1).into(), 2.into()));
        assert_eq!(zeta_neg_int(1), BigRational::new((-1).into(), 12.into()));
        assert!(zeta_neg_int(2).is_zero());
        assert_eq!(zeta_neg_int(3), BigRational::new(1.into(), 120.into()));
        for m in 1..=15 {
            assert!(zeta_neg_int(2 * m).is_zero());
            assert!(is_trivial_zero(2 * m));
        }
        assert!(zeta_neg_int(100).is_zero());
        assert!(!zeta_neg_int(99).is_zero());
    }

    #[test]
    fn continuation_agrees_with_exact_negative_integers() {
        for k in 1..=15u32 {
            let exact = zeta_neg_int(k).to_f64().unwrap();
            let near = riemann_zeta(c(-(k as f64) + 1e-9, 0.0)).unwrap();
            assert!((near.re - exact).abs() < 1e-7 * exact.abs().max(1.0), "k = {k}");
        }
    }

    #[test]
    fn hurwitz_documented_values() {
        assert!(rel(hurwitz_zeta(c(2.0, 0.0), 1.0).unwrap(), c(PI * PI / 6.0, 0.0)) < 1e-13);
        assert!(rel(hurwitz_zeta(c(2.0, 0.0), 0.5).unwrap(), c(PI * PI / 2.0, 0.0)) < 1e-13);
        let zeta3 = 1.202_056_903_159_594_3;
        assert!(rel(hurwitz_zeta(c(3.0, 0.0), 2.0).unwrap(), c(zeta3 - 1.0, 0.0)) < 1e-13);
    }

    #[test]
    fn hurwitz_direct_summation_oracle() {
        // sum (n + 1/2)^{-2} to 10^7 terms plus the integral tail 1/(M + 1/2)
        let m = 10_000_000u64;
        let mut acc = crate::summation::Compensated::default();
        for n in (0..m).rev() {
            acc.add(1.0 / ((n as f64 + 0.5) * (n as f64 + 0.5)));
        }
        let tail = 1.0 / (m as f64);
        let direct = acc.value() + tail;
        let v = hurwitz_zeta(c(2.0, 0.0), 0.5).unwrap().re;
        assert!((v - direct).abs() < 1e-13, "{v} vs {direct}");

        // complex s with Re(s) > 1, direct sum with 10^6 terms and EM-free tail bound
        let s = c(3.5, 2.0);
        let mut head = crate::summation::CompensatedComplex::default();
        for n in 0..1_000_000u64 {
            head.add(real_pow_neg(n as f64 + 0.3, s));
        }
        let v = hurwitz_zeta(s, 0.3).unwrap();
        // tail is about M^{-2.5}/2.5 = 4e-16
        assert!(rel(v, head.value()) < 1e-10);
    }

    #[test]
    fn hurwitz_domain_errors() {
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), -1.0), Err(Error::Domain(_))));
        assert!(matches!(hurwitz_zeta(c(45.0, 0.0), 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn hurwitz_negative_real_part_matches_bernoulli() {
        // zeta(-n, y) = -B_{n+1}(y) / (n+1)
        for n in 0..5u32 {
            for &y in &[0.2, 0.5, 1.7] {
                let b = crate::special::bernoulli_poly(n as usize + 1, y).unwrap();
                let expected = -b / (n as f64 + 1.0);
                let v = hurwitz_zeta(c(-(n as f64), 0.0), y).unwrap();
                // for Re(s) < 0 the head sum cancels against the tail integral,
                // so only absolute accuracy is meaningful here
                assert!((v.re - expected).abs() < 1e-9, "n={n} y={y}: {} vs {expected}", v.re);
            }
        }
    }

    #[test]
    fn strip_values_track_euler_maclaurin() {
        for &(re, im) in &[(0.0, 3.0), (0.3, 0.0), (0.5, 30.0), (0.5, 50.0), (5.0, -40.0), (19.5, 7.0)] {
            let s = c(re, im);
            let a = riemann_zeta(s).unwrap();
            let b = riemann_zeta_euler_maclaurin(s).unwrap();
            assert!(rel(a, b) < 1e-10, "s = {s}: {a} vs {b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn functional_equation(re in -3.0f64..0.9, im in -20.0f64..20.0) {
            let s = c(re, im);
            prop_assume!((s - 1.0).norm() > 1e-3 && (s.norm() > 1e-3));
            let one_minus = c(1.0, 0.0) - s;
            let rhs = (s * 2f64.ln() + (s - 1.0) * PI.ln()).exp()
                * (s * PI / 2.0).sin()
                * gamma(one_minus).unwrap()
                * riemann_zeta(one_minus).unwrap();
            let lhs = riemann_zeta(s).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-9, "s = {s}");
            // independent route through Euler-Maclaurin when it is in range
            if re >= HURWITZ_RE_MIN {
                let em = hurwitz_zeta(s, 1.0).unwrap();
                prop_assert!(rel(lhs, em) < 1e-9, "s = {s}");
            }
        }

        #[test]
        fn hurwitz_shift(re in 1.0f64..5.0, im in -10.0f64..10.0, y in 0.01f64..3.0) {
            let s = c(re, im);
            prop_assume!((s - 1.0).norm() > 1e-3);
            let lhs = hurwitz_zeta(s, y).unwrap();
            let rhs = hurwitz_zeta(s, y + 1.0).unwrap() + real_pow_neg(y, s);
            prop_assert!(rel(lhs, rhs) < 1e-10);
        }

        #[test]
        fn riemann_accuracy_box(re in -20.0f64..20.0, im in -50.0f64..50.0) {
            let s = c(re, im);
            prop_assume!((s - 1.0).norm() > 1e-2);
            let z = riemann_zeta(s).unwrap();
            // compare with the Euler-Maclaurin route where it is defined,
            // reflected otherwise
            let reference = if re >= 0.0 {
                hurwitz_zeta(s, 1.0).unwrap()
            } else {
                let one_minus = c(1.0, 0.0) - s;
                (s * 2f64.ln() + (s - 1.0) * PI.ln()).exp()
                    * sin_pi(s * 0.5)
                    * gamma(one_minus).unwrap()
                    * hurwitz_zeta(one_minus, 1.0).unwrap()
            };
            prop_assume!(reference.norm() > 1e-6);
            prop_assert!(rel(z, reference) < 1e-10, "s = {s}: {z} vs {reference}");
        }
    }
}
