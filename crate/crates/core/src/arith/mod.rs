//! Arithmetic coefficients `a(n)`, the divisor sum `A(n)`, and the weighted
//! divisor convolution `F_k(n) = sum_{d | n} d^{-k} a(n/d)`.

mod coefficients;
mod convolution;
mod dirichlet;
mod sieve;

pub use coefficients::{
    factorize, format_table, parse_rational, parse_table, ArithmeticCoefficients, CoefficientTable,
    Value, MAX_TABLE_ENTRIES,
};
pub use convolution::{divisor_sum_table, fk_direct, fk_table, ConvolutionScalar, ConvolutionTable};
pub use dirichlet::{dirichlet_value, DirichletSeriesView, DirichletValue};
