/// Fractional part `{x} = x - floor(x)`, always in `[0, 1)`.
///
/// For tiny negative `x` the exact value `1 - |x|` rounds to `1.0`; the result
/// is then clamped to the largest double below one.
pub fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        1.0 - f64::EPSILON / 2.0
    } else {
        r
    }
}

/// Fractional part of the product `n * x`, using an error-free product so
/// that the rounding error of `n * x` does not leak into `{n x}`.
pub fn frac_mul(n: u64, x: f64) -> f64 {
    let nf = n as f64;
    let p = nf * x;
    let err = nf.mul_add(x, -p);
    frac(frac(p) + err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_values() {
        assert_eq!(frac(2.75), 0.75);
        assert_eq!(frac(3.0), 0.0);
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(-3.0), 0.0);
    }

    #[test]
    fn tiny_negative_stays_below_one() {
        let r = frac(-1e-20);
        assert!(r < 1.0 && r > 0.999);
    }

    #[test]
    fn product_form_matches_exact_rationals() {
        assert_eq!(frac_mul(3, 0.25), 0.75);
        assert_eq!(frac_mul(4, 0.25), 0.0);
        // 0.1 * 10 rounds to exactly 1.0 but the double 0.1 is slightly above 1/10
        assert!(frac_mul(10, 0.1) < 1e-15);
        assert!((frac_mul(1_000_003, 0.123) - frac(1_000_003.0 * 0.123)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn range_and_integrality(x in -1.0e6f64..1.0e6) {
            let r = frac(x);
            prop_assert!((0.0..1.0).contains(&r));
            let int_part = x - r;
            prop_assert_eq!(int_part, int_part.round());
        }
    }
}
