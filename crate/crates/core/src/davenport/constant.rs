use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::zeta_neg_int;

/// Which coefficient set the right side (and the centering constant) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaMode {
    /// Coefficients taken literally: `1/pi` for every `k`, a minus sign on
    /// the cosine sums, and no `(-1)^k` inside the constant.
    #[serde(rename = "paper_literal")]
    Literal,
    /// Coefficients `1/((2 pi)^k pi)`, a plus sign on the cosine sums, and the
    /// constant `N! sum (-1)^k zeta(-k) / ((N-k)! k!)`.
    Corrected,
}

impl FormulaMode {
    pub fn name(self) -> &'static str {
        match self {
            FormulaMode::Literal => "paper_literal",
            FormulaMode::Corrected => "corrected",
        }
    }
}

/// The centering constant `C_N` added to `{nx}^N` on the left side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionConstant {
    pub order: u32,
    pub mode: FormulaMode,
    pub value: BigRational,
}

impl ExpansionConstant {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `N! sum_{k<N} [(-1)^k] zeta(-k) / ((N-k)! k!)` in exact rationals; the sign
/// factor is present only in [`FormulaMode::Corrected`].
pub fn expansion_constant(order: u32, mode: FormulaMode) -> Result<ExpansionConstant> {
    if order == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let mut value = BigRational::zero();
    for k in 0..order {
        let term = zeta_neg_int(k) * BigRational::from_integer(binomial(order, k));
        if mode == FormulaMode::Corrected && k % 2 == 1 {
            value -= term;
        } else {
            value += term;
        }
    }
    Ok(ExpansionConstant { order, mode, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn documented_values() {
        for mode in [FormulaMode::Literal, FormulaMode::Corrected] {
            assert_eq!(expansion_constant(1, mode).unwrap().value, rat(-1, 2));
        }
        assert_eq!(expansion_constant(2, FormulaMode::Corrected).unwrap().value, rat(-1, 3));
        assert_eq!(expansion_constant(2, FormulaMode::Literal).unwrap().value, rat(-2, 3));
        assert!(expansion_constant(0, FormulaMode::Corrected).is_err());
    }

    #[test]
    fn corrected_constant_centers_the_power() {
        // int_0^1 y^N dy = 1/(N+1)
        for n in 1..=40u32 {
            let c = expansion_constant(n, FormulaMode::Corrected).unwrap();
            assert_eq!(c.value, rat(-1, i64::from(n) + 1), "N = {n}");
        }
    }
}
