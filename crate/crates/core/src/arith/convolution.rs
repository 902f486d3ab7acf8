use std::ops::AddAssign;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::coefficients::{check_capacity, ArithmeticCoefficients, Value};
use crate::error::{Error, Result};

/// Number types the divisor sieves can accumulate in.
pub trait ConvolutionScalar: Clone + Zero + AddAssign + PartialEq + Send + Sync {
    /// `d^{-k}`.
    fn recip_pow(d: u64, k: u32) -> Self;
    fn from_value(v: &Value) -> Result<Self>;
    fn mul_ref(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
}

impl ConvolutionScalar for f64 {
    fn recip_pow(d: u64, k: u32) -> Self {
        (d as f64).powi(-(k as i32))
    }

    fn from_value(v: &Value) -> Result<Self> {
        Ok(v.to_f64())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl ConvolutionScalar for BigRational {
    fn recip_pow(d: u64, k: u32) -> Self {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(d), k as usize))
    }

    fn from_value(v: &Value) -> Result<Self> {
        v.as_exact()
            .cloned()
            .ok_or_else(|| Error::Domain("exact tables need rational-valued coefficients".into()))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn coefficient_column<T: ConvolutionScalar>(a: &ArithmeticCoefficients, m: u64) -> Result<Vec<T>> {
    if a.is_exact() {
        a.values(m)?.iter().map(T::from_value).collect()
    } else {
        let values = a.values_f64(m)?;
        values.iter().map(|&x| T::from_value(&Value::Real(x))).collect()
    }
}

/// Shared sieve: `out[n] = sum_{d | n} d^{-k} a(n / d)`, visiting every
/// `(d, multiple)` pair once.
fn weighted_sieve<T: ConvolutionScalar>(a_values: &[T], k: u32) -> Vec<T> {
    let m = a_values.len();
    let mut out = vec![T::zero(); m];
    for d in 1..=m {
        let w = T::recip_pow(d as u64, k);
        for q in 1..=m / d {
            let aq = &a_values[q - 1];
            if aq.is_zero() {
                continue;
            }
            if k == 0 {
                out[d * q - 1] += aq.clone();
            } else {
                out[d * q - 1] += w.mul_ref(aq);
            }
        }
    }
    out
}

/// `A(n) = sum_{d | n} a(d)` for `n = 1..=m`, index `n - 1`.
pub fn divisor_sum_table<T: ConvolutionScalar>(a: &ArithmeticCoefficients, m: u64) -> Result<Vec<T>> {
    check_capacity("divisor sum table", m, 1)?;
    let values = coefficient_column::<T>(a, m)?;
    Ok(weighted_sieve(&values, 0))
}

/// Precomputed `A(n)` and `F_k(n) = sum_{d | n} d^{-k} a(n/d)` for `n <= max_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionTable<T> {
    max_n: u64,
    k_list: Vec<u32>,
    divisor_sums: Vec<T>,
    columns: Vec<Vec<T>>,
}

impl<T: ConvolutionScalar> ConvolutionTable<T> {
    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    pub fn k_list(&self) -> &[u32] {
        &self.k_list
    }

    /// `A(n)` for `1 <= n <= max_n`.
    pub fn divisor_sum(&self, n: u64) -> &T {
        &self.divisor_sums[n as usize - 1]
    }

    pub fn divisor_sums(&self) -> &[T] {
        &self.divisor_sums
    }

    /// Column `F_k(1..=max_n)`, if `k` was requested.
    pub fn column(&self, k: u32) -> Option<&[T]> {
        self.k_list
            .iter()
            .position(|&kk| kk == k)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn get(&self, k: u32, n: u64) -> Option<&T> {
        if n == 0 || n > self.max_n {
            return None;
        }
        self.column(k).map(|c| &c[n as usize - 1])
    }
}

/// Builds the `F_k` columns for every `k` in `k_list` together with `A(n)`.
pub fn fk_table<T: ConvolutionScalar>(
    a: &ArithmeticCoefficients,
    m: u64,
    k_list: &[u32],
) -> Result<ConvolutionTable<T>> {
    check_capacity("convolution table", m, k_list.len() as u64 + 2)?;
    let values = coefficient_column::<T>(a, m)?;
    let divisor_sums = weighted_sieve(&values, 0);
    let columns = k_list
        .iter()
        .map(|&k| {
            if k == 0 {
                divisor_sums.clone()
            } else {
                weighted_sieve(&values, k)
            }
        })
        .collect();
    Ok(ConvolutionTable {
        max_n: m,
        k_list: k_list.to_vec(),
        divisor_sums,
        columns,
    })
}

/// `F_k(n)` by direct enumeration of the divisors of `n` (reference path).
pub fn fk_direct<T: ConvolutionScalar>(a: &ArithmeticCoefficients, n: u64, k: u32) -> Result<T> {
    let mut acc = T::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            for dd in [d, n / d] {
                let v = T::from_value(&a.coeff(n / dd)?)?;
                acc += T::recip_pow(dd, k).mul_ref(&v);
                if d * d == n {
                    break;
                }
            }
        }
        d += 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{CoefficientTable, Value};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn divisor_sums() {
        let mu: Vec<BigRational> = divisor_sum_table(&ArithmeticCoefficients::Mobius, 6).unwrap();
        assert_eq!(mu, [1, 0, 0, 0, 0, 0].map(|v| rat(v, 1)).to_vec());
        let unit: Vec<BigRational> = divisor_sum_table(&ArithmeticCoefficients::Unit, 6).unwrap();
        assert_eq!(unit, [1, 2, 2, 3, 2, 4].map(|v| rat(v, 1)).to_vec());
        let delta: Vec<f64> = divisor_sum_table(&ArithmeticCoefficients::Delta, 4).unwrap();
        assert_eq!(delta, vec![1.0; 4]);
        assert!(divisor_sum_table::<f64>(&ArithmeticCoefficients::Unit, 0).is_err());
    }

    #[test]
    fn fk_examples() {
        let t: ConvolutionTable<BigRational> =
            fk_table(&ArithmeticCoefficients::Delta, 10, &[0, 1, 3]).unwrap();
        for n in 1..=10u64 {
            assert_eq!(t.get(3, n).unwrap(), &BigRational::recip_pow(n, 3));
        }
        let t: ConvolutionTable<BigRational> =
            fk_table(&ArithmeticCoefficients::Unit, 6, &[1]).unwrap();
        assert_eq!(t.get(1, 6).unwrap(), &rat(2, 1));
        let t: ConvolutionTable<BigRational> =
            fk_table(&ArithmeticCoefficients::Mobius, 6, &[0]).unwrap();
        assert_eq!(t.get(0, 6).unwrap(), &rat(0, 1));
        assert!(t.get(2, 6).is_none());
        assert!(t.get(0, 7).is_none());
    }

    #[test]
    fn exact_mode_refuses_real_coefficients() {
        let r: Result<ConvolutionTable<BigRational>> =
            fk_table(&ArithmeticCoefficients::VonMangoldt, 10, &[1]);
        assert!(r.is_err());
        let f: ConvolutionTable<f64> = fk_table(&ArithmeticCoefficients::VonMangoldt, 12, &[0]).unwrap();
        // sum_{d | n} Lambda(d) = ln n
        for n in 1..=12u64 {
            assert!((f.divisor_sum(n) - (n as f64).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn tables_use_listed_support() {
        let table = CoefficientTable::new([(2, Value::Exact(rat(3, 2)))]).unwrap();
        let a = ArithmeticCoefficients::Table(table);
        let t: ConvolutionTable<BigRational> = fk_table(&a, 8, &[1]).unwrap();
        // F_1(n) = (2/n) * 3/2 for even n
        assert_eq!(t.get(1, 8).unwrap(), &rat(3, 8));
        assert_eq!(t.get(1, 7).unwrap(), &rat(0, 1));
        assert_eq!(t.divisor_sum(4), &rat(3, 2));
    }
}
