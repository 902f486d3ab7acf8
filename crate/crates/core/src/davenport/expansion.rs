use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constant::{expansion_constant, FormulaMode};
use super::trig::trig_sum_closed;
use crate::arith::{fk_table, ArithmeticCoefficients, ConvolutionTable};
use crate::error::{Error, Result};
use crate::special::{frac, frac_mul, Trig};
use crate::summation::Compensated;

/// Default Abel damping factor.
pub const DEFAULT_ABEL_R: f64 = 0.999;
/// Abel truncation is chosen so that `r^M` falls below this.
pub const ABEL_DAMPING_FLOOR: f64 = 1e-8;

/// How the infinite series are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EvalMode {
    /// Partial sums over `n <= terms`.
    Truncated { terms: u64 },
    /// Partial sums with term `n` damped by `r^n`.
    Abel { terms: u64, r: f64 },
    /// Exact Bernoulli closed forms; finitely supported coefficients only.
    ClosedForm,
}

impl EvalMode {
    /// Abel mode with `terms` chosen so that `r^terms < 1e-8`.
    pub fn abel(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Precondition(format!("Abel factor must lie in (0, 1), got {r}")));
        }
        let terms = (ABEL_DAMPING_FLOOR.ln() / r.ln()).ceil() as u64 + 1;
        Ok(EvalMode::Abel { terms, r })
    }

    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::Truncated { .. } => "truncated",
            EvalMode::Abel { .. } => "abel",
            EvalMode::ClosedForm => "closed_form",
        }
    }
}

/// One evaluation of the generalized expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionJob {
    pub order: u32,
    pub coefficients: ArithmeticCoefficients,
    pub formula: FormulaMode,
    pub eval: EvalMode,
}

impl ExpansionJob {
    pub fn new(order: u32, coefficients: ArithmeticCoefficients, formula: FormulaMode, eval: EvalMode) -> Result<Self> {
        let job = Self {
            order,
            coefficients,
            formula,
            eval,
        };
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Precondition("N must be at least 1".into()));
        }
        if self.order > 30 {
            return Err(Error::Precondition(format!("N = {} exceeds the supported order 30", self.order)));
        }
        match self.eval {
            EvalMode::ClosedForm => {
                if !self.coefficients.is_finitely_supported() {
                    return Err(Error::Precondition(format!(
                        "closed-form evaluation needs finitely supported coefficients, {} is not",
                        self.coefficients.name()
                    )));
                }
            }
            EvalMode::Truncated { terms } | EvalMode::Abel { terms, .. } => {
                if terms == 0 {
                    return Err(Error::Precondition("truncation bound must be at least 1".into()));
                }
                if !self.coefficients.is_finitely_supported() && self.coefficients.abscissa_hint().is_none() {
                    return Err(Error::Divergent(format!(
                        "{} declares neither finite support nor a convergence abscissa",
                        self.coefficients.name()
                    )));
                }
                if let EvalMode::Abel { r, .. } = self.eval {
                    if !(r > 0.0 && r < 1.0) {
                        return Err(Error::Precondition(format!("Abel factor must lie in (0, 1), got {r}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the coefficient and convolution tables the evaluators need.
    pub fn prepare(&self) -> Result<PreparedJob> {
        self.validate()?;
        let constant = expansion_constant(self.order, self.formula)?.to_f64();
        let k_list: Vec<u32> = (0..self.order).collect();
        let data = match self.eval {
            EvalMode::ClosedForm => JobData::Finite(
                self.coefficients
                    .finite_support()
                    .expect("validated")
                    .into_iter()
                    .map(|(n, v)| (n, v.to_f64()))
                    .collect(),
            ),
            EvalMode::Truncated { terms } | EvalMode::Abel { terms, .. } => {
                let table: ConvolutionTable<f64> = fk_table(&self.coefficients, terms, &k_list)?;
                JobData::Tables {
                    coefficients: self.coefficients.values_f64(terms)?,
                    table,
                }
            }
        };
        Ok(PreparedJob {
            job: self.clone(),
            constant,
            data,
        })
    }
}

#[derive(Debug, Clone)]
enum JobData {
    Finite(Vec<(u64, f64)>),
    Tables {
        coefficients: Vec<f64>,
        table: ConvolutionTable<f64>,
    },
}

/// Left side value with the partial-sum oscillation over `n in [M/2, M]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhsValue {
    pub value: f64,
    pub tail_estimate: f64,
}

/// The sums `S_k = sum F_k(n) sin(2 pi n x)/n` and `C_k` (cosine) for one `k`.
/// In closed-form mode only the parity-matching sum is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigSums {
    pub k: u32,
    pub sin_sum: Option<f64>,
    pub cos_sum: Option<f64>,
}

/// Right side value with its per-`k` ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhsValue {
    pub value: f64,
    pub per_k: Vec<TrigSums>,
    /// One oscillation estimate per `k` (zero in closed-form mode).
    pub tail_estimates: Vec<f64>,
}

/// Both sides at one `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideValues {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub per_k: Vec<TrigSums>,
    pub lhs_tail_estimate: f64,
    pub tail_estimates: Vec<f64>,
}

impl SideValues {
    pub fn abs_err(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// `cos(pi k / 2)` and `sin(pi k / 2)` exactly.
fn quarter_turn(k: u32) -> (f64, f64) {
    match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// Coefficients multiplying `S_k` and `C_k` on the right side.
pub fn harmonic_weights(order: u32, k: u32, formula: FormulaMode) -> (f64, f64) {
    let falling: f64 = ((order - k + 1)..=order).map(f64::from).product();
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (cos_q, sin_q) = quarter_turn(k);
    match formula {
        FormulaMode::Literal => {
            let c = -falling * sign / PI;
            (c * cos_q, -c * sin_q)
        }
        FormulaMode::Corrected => {
            let c = -falling * sign / ((2.0 * PI).powi(k as i32) * PI);
            (c * cos_q, c * sin_q)
        }
    }
}

/// Coefficients of `sin(2 pi n x)` and `cos(2 pi n x)` in the truncated right side.
pub fn fourier_coefficients(table: &ConvolutionTable<f64>, order: u32, formula: FormulaMode, n: u64) -> Result<(f64, f64)> {
    let mut sin_c = 0.0;
    let mut cos_c = 0.0;
    for k in 0..order {
        let f = table
            .get(k, n)
            .ok_or_else(|| Error::Precondition(format!("table lacks F_{k}({n})")))?;
        let (ws, wc) = harmonic_weights(order, k, formula);
        sin_c += ws * f / n as f64;
        cos_c += wc * f / n as f64;
    }
    Ok((sin_c, cos_c))
}

/// Ascending compensated partial sums that also track the oscillation of the
/// partial sums over the second half of the range.
struct TrackedSum {
    acc: Compensated,
    watch_from: u64,
    lo: f64,
    hi: f64,
}

impl TrackedSum {
    fn new(terms: u64) -> Self {
        Self {
            acc: Compensated::default(),
            watch_from: terms / 2,
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    #[inline]
    fn add(&mut self, n: u64, x: f64) {
        self.acc.add(x);
        if n >= self.watch_from {
            let v = self.acc.value();
            self.lo = self.lo.min(v);
            self.hi = self.hi.max(v);
        }
    }

    fn finish(&self) -> (f64, f64) {
        let spread = if self.hi >= self.lo { self.hi - self.lo } else { 0.0 };
        (self.acc.value(), spread)
    }
}

/// A job with its tables built, ready to evaluate at many `x`.
#[derive(Debug, Clone)]
pub struct PreparedJob {
    job: ExpansionJob,
    constant: f64,
    data: JobData,
}

impl PreparedJob {
    pub fn job(&self) -> &ExpansionJob {
        &self.job
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// The convolution table behind truncated and Abel evaluation.
    pub fn table(&self) -> Option<&ConvolutionTable<f64>> {
        match &self.data {
            JobData::Tables { table, .. } => Some(table),
            JobData::Finite(_) => None,
        }
    }

    /// `sum a(n)/n ({nx}^N + C_N)`; `x` is reduced mod 1 first.
    pub fn lhs(&self, x: f64) -> Result<LhsValue> {
        check_x(x)?;
        let x = frac(x);
        let order = self.job.order as i32;
        match &self.data {
            JobData::Finite(support) => {
                let value = support
                    .iter()
                    .map(|&(m, a)| a / m as f64 * (frac_mul(m, x).powi(order) + self.constant))
                    .collect::<Compensated>()
                    .value();
                Ok(LhsValue {
                    value,
                    tail_estimate: 0.0,
                })
            }
            JobData::Tables { coefficients, .. } => {
                let terms = coefficients.len() as u64;
                let mut sum = TrackedSum::new(terms);
                for (i, &a) in coefficients.iter().enumerate() {
                    let n = i as u64 + 1;
                    let t = if a == 0.0 {
                        0.0
                    } else {
                        a / n as f64 * (frac_mul(n, x).powi(order) + self.constant)
                    };
                    sum.add(n, t);
                }
                let (value, tail_estimate) = sum.finish();
                Ok(LhsValue { value, tail_estimate })
            }
        }
    }

    /// The trigonometric right side in the job's formula and evaluation modes.
    pub fn rhs(&self, x: f64) -> Result<RhsValue> {
        check_x(x)?;
        let x = frac(x);
        let order = self.job.order;
        let mut per_k = Vec::with_capacity(order as usize);
        let mut tail_estimates = Vec::with_capacity(order as usize);
        let mut total = Compensated::default();
        for k in 0..order {
            let (ws, wc) = harmonic_weights(order, k, self.job.formula);
            let (sums, tail) = self.trig_sums(k, x)?;
            let mut part = 0.0;
            if ws != 0.0 {
                part += ws * sums.sin_sum.expect("parity-matching sine sum");
            }
            if wc != 0.0 {
                part += wc * sums.cos_sum.expect("parity-matching cosine sum");
            }
            total.add(part);
            per_k.push(sums);
            tail_estimates.push(tail);
        }
        Ok(RhsValue {
            value: total.value(),
            per_k,
            tail_estimates,
        })
    }

    fn trig_sums(&self, k: u32, x: f64) -> Result<(TrigSums, f64)> {
        match &self.data {
            JobData::Finite(support) => {
                let kind = if k.is_multiple_of(2) { Trig::Sin } else { Trig::Cos };
                let mut acc = Compensated::default();
                for &(m, a) in support {
                    acc.add(a / m as f64 * trig_sum_closed(k, kind, frac_mul(m, x))?);
                }
                let v = Some(acc.value());
                let sums = match kind {
                    Trig::Sin => TrigSums { k, sin_sum: v, cos_sum: None },
                    Trig::Cos => TrigSums { k, sin_sum: None, cos_sum: v },
                };
                Ok((sums, 0.0))
            }
            JobData::Tables { table, .. } => {
                let column = table.column(k).expect("all k < N are tabulated");
                let terms = column.len() as u64;
                let damping = match self.job.eval {
                    EvalMode::Abel { r, .. } => Some(r),
                    _ => None,
                };
                let mut sin_acc = TrackedSum::new(terms);
                let mut cos_acc = TrackedSum::new(terms);
                let mut weight = 1.0;
                for (i, &f) in column.iter().enumerate() {
                    let n = i as u64 + 1;
                    if let Some(r) = damping {
                        weight *= r;
                    }
                    if f == 0.0 {
                        sin_acc.add(n, 0.0);
                        cos_acc.add(n, 0.0);
                        continue;
                    }
                    let (s, c) = (2.0 * PI * frac_mul(n, x)).sin_cos();
                    let scale = weight * f / n as f64;
                    sin_acc.add(n, scale * s);
                    cos_acc.add(n, scale * c);
                }
                let (sin_sum, sin_tail) = sin_acc.finish();
                let (cos_sum, cos_tail) = cos_acc.finish();
                Ok((
                    TrigSums {
                        k,
                        sin_sum: Some(sin_sum),
                        cos_sum: Some(cos_sum),
                    },
                    sin_tail.max(cos_tail),
                ))
            }
        }
    }

    pub fn sides(&self, x: f64) -> Result<SideValues> {
        let lhs = self.lhs(x)?;
        let rhs = self.rhs(x)?;
        Ok(SideValues {
            x,
            lhs: lhs.value,
            rhs: rhs.value,
            per_k: rhs.per_k,
            lhs_tail_estimate: lhs.tail_estimate,
            tail_estimates: rhs.tail_estimates,
        })
    }

    /// [`Self::sides`] over a grid, evaluated in parallel, returned in grid order.
    pub fn sides_grid(&self, xs: &[f64]) -> Result<Vec<SideValues>> {
        xs.par_iter().map(|&x| self.sides(x)).collect()
    }
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    Ok(())
}

/// Left side of the expansion at `x`.
pub fn lhs_eval(job: &ExpansionJob, x: f64) -> Result<LhsValue> {
    job.prepare()?.lhs(x)
}

/// Right side of the expansion at `x`.
pub fn rhs_eval(job: &ExpansionJob, x: f64) -> Result<RhsValue> {
    job.prepare()?.rhs(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{CoefficientTable, Value};

    fn job(order: u32, a: ArithmeticCoefficients, formula: FormulaMode, eval: EvalMode) -> ExpansionJob {
        ExpansionJob::new(order, a, formula, eval).unwrap()
    }

    #[test]
    fn lhs_documented_values() {
        let j = job(1, ArithmeticCoefficients::Delta, FormulaMode::Corrected, EvalMode::ClosedForm);
        assert!((lhs_eval(&j, 0.25).unwrap().value + 0.25).abs() < 1e-15);
        let j = job(2, ArithmeticCoefficients::Delta, FormulaMode::Corrected, EvalMode::ClosedForm);
        assert!((lhs_eval(&j, 0.25).unwrap().value + 13.0 / 48.0).abs() < 1e-15);
        // periodic in x
        assert!((lhs_eval(&j, 7.25).unwrap().value + 13.0 / 48.0).abs() < 1e-14);
    }

    #[test]
    fn rhs_documented_values() {
        for formula in [FormulaMode::Literal, FormulaMode::Corrected] {
            let j = job(1, ArithmeticCoefficients::Delta, formula, EvalMode::ClosedForm);
            assert!((rhs_eval(&j, 0.25).unwrap().value + 0.25).abs() < 1e-15);
        }
        let j = job(2, ArithmeticCoefficients::Delta, FormulaMode::Corrected, EvalMode::ClosedForm);
        let r = rhs_eval(&j, 0.25).unwrap();
        assert!((r.value + 13.0 / 48.0).abs() < 1e-15);
        assert_eq!(r.per_k.len(), 2);
        assert!(r.per_k[1].sin_sum.is_none());
        assert!((r.per_k[1].cos_sum.unwrap() + PI * PI / 48.0).abs() < 1e-15);
        let j = job(2, ArithmeticCoefficients::Delta, FormulaMode::Literal, EvalMode::ClosedForm);
        assert!((rhs_eval(&j, 0.25).unwrap().value - (-0.25 + PI / 24.0)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_requires_finite_support() {
        let r = ExpansionJob::new(1, ArithmeticCoefficients::Mobius, FormulaMode::Corrected, EvalMode::ClosedForm);
        assert!(matches!(r, Err(Error::Precondition(_))));
        let r = ExpansionJob::new(1, ArithmeticCoefficients::Unit, FormulaMode::Corrected, EvalMode::Truncated { terms: 0 });
        assert!(r.is_err());
        let r = ExpansionJob::new(0, ArithmeticCoefficients::Delta, FormulaMode::Corrected, EvalMode::ClosedForm);
        assert!(r.is_err());
        assert!(EvalMode::abel(1.0).is_err());
    }

    #[test]
    fn abel_terms_follow_damping() {
        let EvalMode::Abel { terms, r } = EvalMode::abel(DEFAULT_ABEL_R).unwrap() else {
            panic!()
        };
        assert!(r.powf(terms as f64) < ABEL_DAMPING_FLOOR);
        assert!(r.powf(terms as f64 - 2.0) >= ABEL_DAMPING_FLOOR);
    }

    #[test]
    fn table_coefficients_two_point_support() {
        let t = CoefficientTable::new([(1, Value::from_int(1)), (2, Value::from_int(1))]).unwrap();
        let j = job(3, ArithmeticCoefficients::Table(t), FormulaMode::Corrected, EvalMode::ClosedForm);
        let p = j.prepare().unwrap();
        for x in [0.1234, 0.377, 0.81] {
            let s = p.sides(x).unwrap();
            assert!(s.abs_err() < 1e-12, "x = {x}: {s:?}");
        }
    }

    #[test]
    fn n1_fourier_coefficients_are_classical() {
        for a in [ArithmeticCoefficients::Mobius, ArithmeticCoefficients::Unit, ArithmeticCoefficients::VonMangoldt] {
            for formula in [FormulaMode::Literal, FormulaMode::Corrected] {
                let j = job(1, a.clone(), formula, EvalMode::Truncated { terms: 200 });
                let p = j.prepare().unwrap();
                let table = p.table().unwrap();
                for n in 1..=200u64 {
                    let (s, c) = fourier_coefficients(table, 1, formula, n).unwrap();
                    let expected = -table.divisor_sum(n) / (PI * n as f64);
                    assert!((s - expected).abs() <= 4.0 * f64::EPSILON * expected.abs());
                    assert_eq!(c, 0.0);
                }
            }
        }
    }

    #[test]
    fn truncated_approaches_closed_form() {
        let closed = job(2, ArithmeticCoefficients::Delta, FormulaMode::Corrected, EvalMode::ClosedForm)
            .prepare()
            .unwrap()
            .rhs(1.0 / 3.0)
            .unwrap()
            .value;
        let mut prev = f64::INFINITY;
        for terms in [1_000u64, 10_000, 100_000] {
            let p = job(2, ArithmeticCoefficients::Delta, FormulaMode::Corrected, EvalMode::Truncated { terms })
                .prepare()
                .unwrap();
            let r = p.rhs(1.0 / 3.0).unwrap();
            let err = (r.value - closed).abs();
            let envelope = r.tail_estimates[0].max(1.0 / terms as f64);
            assert!(err <= envelope, "M = {terms}: err {err} envelope {envelope}");
            assert!(envelope < prev);
            prev = envelope;
            if terms == 100_000 {
                let abel = job(
                    2,
                    ArithmeticCoefficients::Delta,
                    FormulaMode::Corrected,
                    EvalMode::Abel { terms, r: 1.0 - 1.0 / terms as f64 },
                )
                .prepare()
                .unwrap()
                .rhs(1.0 / 3.0)
                .unwrap();
                assert!((abel.value - closed).abs() <= 1e-3);
            }
        }
    }
}
