use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default largest index served by [`bernoulli_number`].
pub const DEFAULT_BERNOULLI_BOUND: usize = 64;

/// Exact Bernoulli numbers `B_0..=B_bound` with the convention `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    /// Builds the table from `sum_{j=0}^{n} C(n+1, j) B_j = 0`.
    pub fn new(bound: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(bound + 1);
        values.push(BigRational::one());
        for n in 1..=bound {
            // binomials C(n+1, j) for j = 0..n
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (j, b) in values.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            values.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
        }
        Self { values }
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&BigRational> {
        self.values.get(n).ok_or(Error::Capacity {
            what: "bernoulli index",
            requested: n as u64,
            bound: self.bound() as u64,
        })
    }

    /// Coefficients of `B_n(y) = sum_j C(n, j) B_j y^{n-j}`, indexed by power of `y`.
    pub fn poly_coefficients(&self, n: usize) -> Result<Vec<BigRational>> {
        self.get(n)?;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        let mut binom = BigInt::one();
        for j in 0..=n {
            coeffs[n - j] = &self.values[j] * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
        }
        Ok(coeffs)
    }

    /// `B_n(y)` in floating point (Horner over the exact coefficients).
    pub fn poly(&self, n: usize, y: f64) -> Result<f64> {
        let coeffs = self.poly_coefficients(n)?;
        Ok(coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * y + c.to_f64().unwrap_or(f64::NAN)))
    }
}

fn default_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(DEFAULT_BERNOULLI_BOUND))
}

/// Exact `B_n` (with `B_1 = -1/2`) for `n <= 64`.
pub fn bernoulli_number(n: usize) -> Result<BigRational> {
    default_table().get(n).cloned()
}

/// Bernoulli polynomial `B_n(y)` for `n <= 64`.
pub fn bernoulli_poly(n: usize, y: f64) -> Result<f64> {
    default_table().poly(n, y)
}

/// Exact coefficients of `B_n(y)`, lowest power first.
pub fn bernoulli_poly_coefficients(n: usize) -> Result<Vec<BigRational>> {
    default_table().poly_coefficients(n)
}
