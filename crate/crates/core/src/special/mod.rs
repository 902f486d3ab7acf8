//! Scalar special-function kernels.
//!
//! Everything here is a pure function of its arguments; the only shared state
//! is the lazily built table of Bernoulli numbers.

mod bernoulli;
mod frac;
mod gamma;
mod zeta;

pub use bernoulli::{
    bernoulli_number, bernoulli_poly, bernoulli_poly_coefficients, BernoulliTable,
    DEFAULT_BERNOULLI_BOUND,
};
pub use frac::{frac, frac_mul};
pub use gamma::{gamma, pochhammer};
pub use zeta::{
    hurwitz_zeta, hurwitz_zeta_with, is_trivial_zero, riemann_zeta, riemann_zeta_euler_maclaurin,
    zeta_neg_int, HurwitzConfig, HURWITZ_RE_MAX, HURWITZ_RE_MIN,
};

pub(crate) use zeta::{em_coefficients, real_pow_neg};

/// Selects the sine or cosine member of a trigonometric pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Sin,
    Cos,
}
