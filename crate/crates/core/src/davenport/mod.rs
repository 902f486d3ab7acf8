//! Both sides of the generalized Davenport expansion
//!
//! `sum a(n)/n ({nx}^N + C_N) = -N! sum_{k<N} ... (S_k(x), C_k(x))`
//!
//! with `F_k(n) = sum_{d | n} d^{-k} a(n/d)`, in truncated, Abel-damped and
//! closed-form evaluation, under two coefficient conventions.

mod audit;
mod constant;
mod expansion;
mod residue;
mod trig;

pub use audit::{audit, AuditReport, AuditRow};
pub use constant::{expansion_constant, ExpansionConstant, FormulaMode};
pub use expansion::{
    fourier_coefficients, harmonic_weights, lhs_eval, rhs_eval, EvalMode, ExpansionJob, LhsValue, PreparedJob,
    RhsValue, SideValues, TrigSums, ABEL_DAMPING_FLOOR, DEFAULT_ABEL_R,
};
pub use residue::{extrapolate_to_zero, residue_function, residue_limit, residue_limit_check};
pub use trig::{trig_sum_closed, trig_sum_partial};
