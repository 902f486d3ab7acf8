//! Fixed Gauss-Legendre panels and the circle-average evaluator for
//! removable singularities.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::summation::{Compensated, CompensatedComplex};

/// Gauss-Legendre rule mapped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are roots of `P_n` found by Newton iteration from the Chebyshev guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map [-1, 1] -> [0, 1]
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int_0^1 f(t) dt`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .collect::<Compensated>()
            .value()
    }

    /// `int_0^1 f(t) dt` for complex-valued `f`.
    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| f(t) * w)
            .collect::<CompensatedComplex>()
            .value()
    }

    /// `int_a^b f(t) dt` by affine map of the unit rule.
    pub fn integrate_on<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        h * self.integrate(|t| f(a + h * t))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Points used by [`circle_average`]: `center + radius * e^{i (2 pi j / count + phase)}`.
pub fn circle_points(center: Complex64, radius: f64, count: usize, phase: f64) -> Vec<Complex64> {
    (0..count)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / count as f64 + phase;
            center + Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Mean of `f` over equispaced circle points. For `f` analytic on the closed
/// disc this reproduces `f(center)` up to the Taylor coefficient of order
/// `count`; a simple pole at the center contributes nothing, so the result
/// is the constant Laurent coefficient there.
pub fn circle_average<F, E>(center: Complex64, radius: f64, count: usize, phase: f64, mut f: F) -> Result<Complex64, E>
where
    F: FnMut(Complex64) -> Result<Complex64, E>,
{
    let mut acc = CompensatedComplex::default();
    for z in circle_points(center, radius, count, phase) {
        acc.add(f(z)?);
    }
    Ok(acc.value() / count as f64)
}
