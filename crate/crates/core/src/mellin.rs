//! The Mellin transform `int_0^inf {y}^N y^{-s-1} dy` on `0 < Re(s) < N`:
//! periodwise quadrature against the closed zeta sum, plus the Hurwitz-zeta
//! moment integral behind it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{circle_average, circle_points, GaussLegendre};
use crate::report::VerificationReport;
use crate::special::{em_coefficients, gamma, hurwitz_zeta, pochhammer, real_pow_neg, riemann_zeta, Trig};
use crate::summation::{Compensated, CompensatedComplex};

/// Integer points closer than this are treated as singular by the direct closed form.
pub const SINGULAR_EXCLUSION: f64 = 1e-6;
/// Interior points closer than this to an integer are routed through the circle average.
pub const NEAR_POLE_ROUTE: f64 = 1e-3;
/// Circle radius used when routing automatically.
pub const DEFAULT_CIRCLE_RADIUS: f64 = 1e-2;
const CIRCLE_POINTS: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `N! / (N-k)!` as a float (exact for the orders used here).
fn falling_ratio(n: u32, k: u32) -> f64 {
    ((n - k + 1)..=n).map(f64::from).product()
}

fn nearest_integer(s: Complex64) -> (i64, f64) {
    let m = s.re.round();
    (m as i64, (s - m).norm())
}

/// A point of the strip `0 < Re(s) < N` with its distance to the integers `0..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripPoint {
    pub s: Complex64,
    pub order: u32,
    pub pole_distance: f64,
}

impl StripPoint {
    pub fn new(order: u32, s: Complex64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("N must be at least 1".into()));
        }
        if !(s.re > 0.0 && s.re < f64::from(order)) || !s.im.is_finite() {
            return Err(Error::Precondition(format!(
                "s = {s} lies outside the strip 0 < Re(s) < {order}"
            )));
        }
        let pole_distance = (0..=order)
            .map(|m| (s - f64::from(m)).norm())
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            s,
            order,
            pole_distance,
        })
    }
}

/// The closed sum `N! sum_{k<N} (-1)^k zeta(s-k) / ((N-k)! (-s)_{k+1})`
/// without any domain checks.
fn closed_form(order: u32, s: Complex64) -> Result<Complex64> {
    let mut acc = CompensatedComplex::default();
    for k in 0..order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = riemann_zeta(s - f64::from(k))? / pochhammer(-s, k + 1) * (sign * falling_ratio(order, k));
        acc.add(term);
    }
    Ok(acc.value())
}

/// Closed-form right side on the strip, away from integers.
pub fn mellin_rhs(order: u32, s: Complex64) -> Result<Complex64> {
    StripPoint::new(order, s)?;
    let (m, dist) = nearest_integer(s);
    if dist < SINGULAR_EXCLUSION && (0..=i64::from(order)).contains(&m) {
        if m == 0 || m == i64::from(order) {
            return Err(Error::Pole {
                location: format!("s = {m}"),
            });
        }
        return Err(Error::RemovableSingularity { nearest: m });
    }
    closed_form(order, s)
}

/// Closed form at a point near an interior integer `m`, as the mean over eight
/// points on a circle of `radius` around `s`. The poles of the individual
/// `zeta(s-k)` terms cancel against zeros of the Pochhammer factors, so the sum
/// is analytic there.
pub fn mellin_rhs_near_pole(order: u32, s: Complex64, radius: f64) -> Result<Complex64> {
    StripPoint::new(order, s)?;
    if !(radius > 0.0 && radius < 0.5) {
        return Err(Error::Precondition(format!(
            "circle radius {radius} must lie in (0, 0.5), half the spacing of the singular points"
        )));
    }
    let (m, dist) = nearest_integer(s);
    if !(1..i64::from(order)).contains(&m) || dist >= radius {
        return Err(Error::Precondition(format!(
            "s = {s} is not within radius {radius} of an interior integer of the strip"
        )));
    }
    circle_average_avoiding_integers(s, radius, |z| closed_form(order, z))
}

/// Circle average with the phase rotated if a sample point lands on an integer.
fn circle_average_avoiding_integers<F>(center: Complex64, radius: f64, f: F) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let step = 2.0 * PI / CIRCLE_POINTS as f64;
    let phase = [0.1 * step, 0.35 * step, 0.6 * step, 0.85 * step]
        .into_iter()
        .find(|&phase| {
            circle_points(center, radius, CIRCLE_POINTS, phase)
                .iter()
                .all(|&z| nearest_integer(z).1 > 10.0 * SINGULAR_EXCLUSION)
        })
        .ok_or_else(|| Error::Precondition("no admissible circle phase".into()))?;
    circle_average(center, radius, CIRCLE_POINTS, phase, f)
}

/// Periodwise quadrature settings for the Mellin integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Unit intervals `[k, k+1]`, `k = 1..=periods`, integrated explicitly.
    pub periods: u64,
    /// Gauss-Legendre nodes per unit interval.
    pub points_per_period: usize,
    /// Largest accepted error estimate for the remaining tail.
    pub tail_tol: f64,
    /// Bernoulli correction terms in the tail expansion.
    pub tail_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            periods: 10_000,
            points_per_period: 64,
            tail_tol: 1e-9,
            tail_order: 3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.periods < 1 {
            return Err(Error::Precondition("at least one period is required".into()));
        }
        if self.points_per_period < 2 {
            return Err(Error::Precondition("at least two nodes per period are required".into()));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::Precondition("tail tolerance must be positive".into()));
        }
        if self.tail_order > 20 {
            return Err(Error::Precondition("tail order above 20 is not supported".into()));
        }
        Ok(())
    }
}

/// Quadrature value of the Mellin integral with its tail diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinQuadrature {
    pub value: Complex64,
    /// `int_0^1 y^{N-s-1} dy = 1/(N-s)`.
    pub unit_interval: Complex64,
    /// Sum of the explicit periods `k = 1..=P`.
    pub periods_sum: Complex64,
    /// Euler-Maclaurin value of `sum_{k>P}` of the period integrals.
    pub tail: Complex64,
    /// Size of the last tail correction (error estimate of `tail`).
    pub tail_error_estimate: f64,
    /// Crude bound `P^{-Re s} / Re s` on the absolute tail.
    pub tail_bound: f64,
}

/// `int_0^1 t^N (t+u)^{-s-1-m} dt` for the period starting at `u`.
struct PeriodIntegrand<'a> {
    nodes: &'a [f64],
    weighted_powers: Vec<f64>,
}

impl<'a> PeriodIntegrand<'a> {
    fn new(rule: &'a GaussLegendre, order: u32) -> Self {
        let weighted_powers = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&t, &w)| w * t.powi(order as i32))
            .collect();
        Self {
            nodes: rule.nodes(),
            weighted_powers,
        }
    }

    /// `int_0^1 t^N (t + u)^{-p} dt`.
    fn eval(&self, u: f64, p: Complex64) -> Complex64 {
        let mut acc = CompensatedComplex::default();
        for (&t, &w) in self.nodes.iter().zip(&self.weighted_powers) {
            acc.add(real_pow_neg(t + u, p) * w);
        }
        acc.value()
    }
}

/// `int_0^inf {y}^N y^{-s-1} dy` as `1/(N-s)` plus unit-period Gauss-Legendre
/// panels `int_0^1 t^N (t+k)^{-s-1} dt` for `k = 1..=P`, plus an
/// Euler-Maclaurin evaluation of the remaining periods.
pub fn mellin_lhs_quadrature(order: u32, s: Complex64, cfg: &QuadratureConfig) -> Result<MellinQuadrature> {
    let point = StripPoint::new(order, s)?;
    cfg.validate()?;
    let rule = GaussLegendre::new(cfg.points_per_period);
    let integrand = PeriodIntegrand::new(&rule, order);
    let exponent = s + 1.0;

    let unit_interval = c(1.0, 0.0) / (f64::from(order) - s);
    let per_period: Vec<Complex64> = (1..=cfg.periods)
        .into_par_iter()
        .map(|k| integrand.eval(k as f64, exponent))
        .collect();
    let periods_sum = per_period.iter().copied().collect::<CompensatedComplex>().value();

    // sum_{k>P} f(k) = int_P^inf f - f(P)/2 - sum_j B_{2j}/(2j)! f^{(2j-1)}(P),
    // f^{(m)}(u) = (-1)^m (s+1)_m int t^N (t+u)^{-s-1-m} dt
    let p = cfg.periods as f64;
    let integral = integrand.eval(p, s) / s;
    let half = per_period[per_period.len() - 1] * 0.5;
    let coeffs = em_coefficients();
    let mut tail = integral - half;
    let mut last = f64::INFINITY;
    for (j, b) in coeffs.iter().take(cfg.tail_order).enumerate() {
        let m = 2 * j as u32 + 1;
        let derivative = -pochhammer(exponent, m) * integrand.eval(p, exponent + f64::from(m));
        let term = derivative * *b;
        tail -= term;
        last = term.norm();
    }
    if cfg.tail_order == 0 {
        last = half.norm();
    }
    point_check_tail(last, cfg.tail_tol)?;
    Ok(MellinQuadrature {
        value: unit_interval + periods_sum + tail,
        unit_interval,
        periods_sum,
        tail,
        tail_error_estimate: last,
        tail_bound: p.powf(-point.s.re) / point.s.re,
    })
}

fn point_check_tail(estimate: f64, tol: f64) -> Result<()> {
    if estimate > tol {
        return Err(Error::TailNotMet { estimate, tol });
    }
    Ok(())
}

/// Closed form, or its circle average when `s` is within [`NEAR_POLE_ROUTE`] of
/// an interior integer. Returns the value and the route taken.
pub fn mellin_rhs_routed(order: u32, s: Complex64) -> Result<(Complex64, &'static str)> {
    let (m, dist) = nearest_integer(s);
    if dist < NEAR_POLE_ROUTE && (1..i64::from(order)).contains(&m) {
        Ok((mellin_rhs_near_pole(order, s, DEFAULT_CIRCLE_RADIUS)?, "circle_average"))
    } else {
        Ok((mellin_rhs(order, s)?, "closed_form"))
    }
}

/// Reports for a grid of strip points, in grid order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinCheck {
    pub reports: Vec<VerificationReport>,
    pub all_pass: bool,
}

/// Compares [`mellin_lhs_quadrature`] with the closed form at every grid point.
pub fn verify_mellin_transform(
    order: u32,
    grid: &[Complex64],
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<MellinCheck> {
    for &s in grid {
        StripPoint::new(order, s)?;
    }
    let reports = grid
        .par_iter()
        .map(|&s| {
            let point = StripPoint::new(order, s)?;
            let lhs = mellin_lhs_quadrature(order, s, cfg)?;
            let (rhs, route) = mellin_rhs_routed(order, s)?;
            Ok(VerificationReport::new(order, s, lhs.value, rhs, tol)
                .with_meta("lhs_method", format!("gauss_legendre_{}x{}+euler_maclaurin_tail", cfg.points_per_period, cfg.periods))
                .with_meta("rhs_method", route)
                .with_meta("pole_distance", format!("{:.6e}", point.pole_distance))
                .with_meta("tail_error_estimate", format!("{:.3e}", lhs.tail_error_estimate)))
        })
        .collect::<Result<Vec<_>>>()?;
    let all_pass = reports.iter().all(|r| r.pass);
    Ok(MellinCheck { reports, all_pass })
}

/// Closed form of `int_0^1 y^N zeta(s, y) dy`:
/// `N! sum_{k<N} (-1)^k zeta(s-k-1) / ((N-k)! (1-s)_{k+1})`.
fn hurwitz_moment_closed(order: u32, s: Complex64) -> Result<Complex64> {
    let mut acc = CompensatedComplex::default();
    for k in 0..order {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = riemann_zeta(s - f64::from(k) - 1.0)? / pochhammer(c(1.0, 0.0) - s, k + 1)
            * (sign * falling_ratio(order, k));
        acc.add(term);
    }
    Ok(acc.value())
}

/// Gauss-Legendre value of `int_0^1 y^N zeta(s, y+1) dy`.
fn hurwitz_moment_quadrature(order: u32, s: Complex64) -> Result<Complex64> {
    let rule = GaussLegendre::new(64);
    let mut acc = CompensatedComplex::default();
    for (&y, &w) in rule.nodes().iter().zip(rule.weights()) {
        acc.add(hurwitz_zeta(s, y + 1.0)? * (w * y.powi(order as i32)));
    }
    Ok(acc.value())
}

/// Checks `int_0^1 y^N zeta(s,y) dy` against its closed form for `Re(s) > 1`.
///
/// The left side is evaluated as `int_0^1 y^N zeta(s,y+1) dy + 1/(N-s+1)`,
/// which continues the integral past `Re(s) = N+1`. At `s = N+1` both sides
/// have a simple pole with residue `-1`; there the constant Laurent
/// coefficients are compared and the residue is checked separately.
pub fn hurwitz_moment_check(order: u32, s: Complex64, tol: f64) -> Result<VerificationReport> {
    if order == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    if !(s.re > 1.0) {
        return Err(Error::Precondition(format!("hurwitz moment check needs Re(s) > 1, got {s}")));
    }
    let (m, dist) = nearest_integer(s);
    let pole = i64::from(order) + 1;
    let near_special = dist < SINGULAR_EXCLUSION && (2..=pole).contains(&m);
    if near_special && m == pole {
        let center = c(m as f64, 0.0);
        let lhs = hurwitz_moment_quadrature(order, center)?;
        let rhs = circle_average_avoiding_integers(center, DEFAULT_CIRCLE_RADIUS, |z| hurwitz_moment_closed(order, z))?;
        let residue = circle_average_avoiding_integers(center, DEFAULT_CIRCLE_RADIUS, |z| {
            Ok(hurwitz_moment_closed(order, z)? * (z - center))
        })?;
        let residue_err = (residue + 1.0).norm();
        let mut report = VerificationReport::new(order, center, lhs, rhs, tol)
            .with_meta("comparison", "laurent_constant_term")
            .with_meta("rhs_method", "circle_average")
            .with_meta("rhs_residue", format!("{:.17e}", residue.re))
            .with_meta("residue_err", format!("{residue_err:.3e}"));
        if residue_err > tol {
            report = report.fail_because("residue of the closed form differs from -1");
        }
        return Ok(report);
    }
    let lhs = hurwitz_moment_quadrature(order, s)? + c(1.0, 0.0) / (f64::from(order) - s + 1.0);
    let (rhs, route) = if near_special {
        (
            circle_average_avoiding_integers(s, DEFAULT_CIRCLE_RADIUS, |z| hurwitz_moment_closed(order, z))?,
            "circle_average",
        )
    } else {
        (hurwitz_moment_closed(order, s)?, "closed_form")
    };
    Ok(VerificationReport::new(order, s, lhs, rhs, tol)
        .with_meta("comparison", "value")
        .with_meta("rhs_method", route))
}

/// Quadrature of `int_0^inf y^{s-1} trig(2 pi y) dy` for real `0 < s < 1`.
///
/// `[0, 1/2]` is integrated after the substitution `y = u^{1/s}`, the range
/// `[1/2, cutoff]` by half-period panels, and the tail past the integer
/// `cutoff` by repeated integration by parts.
pub fn trig_mellin_quadrature(kind: Trig, s: f64, cutoff: u64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Precondition(format!("trigonometric Mellin pair needs 0 < s < 1, got {s}")));
    }
    if cutoff < 1 {
        return Err(Error::Precondition("cutoff must be at least 1".into()));
    }
    let trig = |y: f64| match kind {
        Trig::Sin => (2.0 * PI * y).sin(),
        Trig::Cos => (2.0 * PI * y).cos(),
    };
    let rule = GaussLegendre::new(64);
    let mut acc = Compensated::default();
    let head_end = 0.5f64.powf(s);
    acc.add(rule.integrate_on(0.0, head_end, |u| trig(u.powf(1.0 / s))) / s);
    for j in 1..(2 * cutoff) {
        let a = j as f64 * 0.5;
        acc.add(rule.integrate_on(a, a + 0.5, |y| y.powf(s - 1.0) * trig(y)));
    }
    acc.add(oscillatory_tail(kind, s - 1.0, cutoff as f64, 12));
    Ok(acc.value())
}

/// `int_Y^inf y^a trig(2 pi y) dy` for integer `Y` by integration by parts:
/// `C(a) = -a/(2 pi) S(a-1)`, `S(a) = Y^a/(2 pi) + a/(2 pi) C(a-1)`.
fn oscillatory_tail(kind: Trig, a: f64, y: f64, depth: u32) -> f64 {
    if depth == 0 {
        return 0.0;
    }
    let w = 2.0 * PI;
    match kind {
        Trig::Cos => -a / w * oscillatory_tail(Trig::Sin, a - 1.0, y, depth - 1),
        Trig::Sin => y.powf(a) / w + a / w * oscillatory_tail(Trig::Cos, a - 1.0, y, depth - 1),
    }
}

/// `(2 pi)^{-s} Gamma(s) trig(pi s / 2)`.
pub fn trig_mellin_closed(kind: Trig, s: f64) -> Result<f64> {
    let g = gamma(c(s, 0.0))?.re;
    let t = match kind {
        Trig::Sin => (PI * s / 2.0).sin(),
        Trig::Cos => (PI * s / 2.0).cos(),
    };
    Ok((2.0 * PI).powf(-s) * g * t)
}
