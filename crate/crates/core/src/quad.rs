//! Quadrature rules: Gauss-Legendre on an interval and the full-period
//! trapezoid rule, which is spectrally exact on trigonometric polynomials.

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [a, b], computed by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..m {
        // Chebyshev-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(m, x);
        nodes[m - 1 - i] = mid + half * x;
        weights[m - 1 - i] = 2.0 * half / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Kind of rule per the transform layer's needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadKind {
    /// Trapezoid on the full period [0, 2 pi rho]; exact on trig polynomials
    /// of degree < M.
    FullPeriodTrapezoid,
    /// Gauss-Legendre on [0, pi rho].
    GaussLegendreHalf,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadKind,
    pub m: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(kind: QuadKind, m: usize, rho: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("node count {m} < 2")));
        }
        let (nodes, weights) = match kind {
            QuadKind::FullPeriodTrapezoid => {
                let period = 2.0 * std::f64::consts::PI * rho;
                let h = period / m as f64;
                ((0..m).map(|j| h * j as f64).collect(), vec![h; m])
            }
            QuadKind::GaussLegendreHalf => {
                gauss_legendre(m, 0.0, std::f64::consts::PI * rho)
            }
        };
        Ok(QuadratureRule { kind, m, nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut s = 0.0;
        for (t, w) in self.nodes.iter().zip(self.weights.iter()) {
            s += w * f(*t);
        }
        s
    }

    /// Integrate at M and 2M nodes; returns (value at 2M, |difference|).
    pub fn integrate_checked<F: FnMut(f64) -> f64>(
        &self,
        rho: f64,
        mut f: F,
    ) -> Result<(f64, f64)> {
        let coarse = self.integrate(&mut f);
        let fine_rule = QuadratureRule::new(self.kind, 2 * self.m, rho)?;
        let fine = fine_rule.integrate(&mut f);
        Ok((fine, (fine - coarse).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_exact_on_polynomials() {
        // degree-9 polynomial integrated exactly with 5 nodes
        let (x, w) = gauss_legendre(5, 0.0, 1.0);
        let val: f64 = x
            .iter()
            .zip(w.iter())
            .map(|(x, w)| w * x.powi(9))
            .sum();
        assert_abs_diff_eq!(val, 0.1, epsilon = 1e-14);
    }

    #[test]
    fn trapezoid_exact_on_trig_polynomials() {
        // integrates cos(k t)^2 over the period for all trig degrees < M
        let m = 16;
        let rule = QuadratureRule::new(QuadKind::FullPeriodTrapezoid, m, 1.0).unwrap();
        for k in 1..8usize {
            let val = rule.integrate(|t| (k as f64 * t).cos().powi(2));
            assert_abs_diff_eq!(val, std::f64::consts::PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn gl_half_period_sine_powers() {
        // int_0^pi sin^3 = 4/3
        let rule = QuadratureRule::new(QuadKind::GaussLegendreHalf, 32, 1.0).unwrap();
        let val = rule.integrate(|t| t.sin().powi(3));
        assert_abs_diff_eq!(val, 4.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_tiny_rules() {
        assert!(QuadratureRule::new(QuadKind::GaussLegendreHalf, 1, 1.0).is_err());
    }
}
