//! Generalized Davenport expansions and the Mellin transform of `{y}^N`.
//!
//! * [`special`]: fractional part, Bernoulli numbers, Gamma, Riemann and Hurwitz zeta.
//! * [`arith`]: arithmetic coefficients `a(n)`, divisor sums, weighted convolutions.
//! * [`mellin`]: numerical Mellin transform of `{y}^N` against its closed form.
//! * [`davenport`]: both sides of the generalized expansion, constants and audits.
//! * [`cli`]: batch front-end producing CSV and JSON artifacts.

pub mod davenport;
pub mod error;
pub mod arith;
pub mod cli;
pub mod special;
pub mod summation;
pub mod mellin;
pub mod output;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};
