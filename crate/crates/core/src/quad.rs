//! Deterministic quadrature rules: Gauss–Legendre, Gauss–Jacobi and a
//! double-exponential (exp-sinh) rule for `[0, inf)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use crate::compensated::NeumaierSum;

/// Nodes and weights of an `n`-point rule on a fixed reference interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum w_i f(x_i)` with compensated summation.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect::<NeumaierSum>()
            .value()
    }

    /// The rule affinely mapped from `[-1, 1]` to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on the three-term recurrence from Chebyshev-like initial
/// guesses; accurate to a few ulps for the orders used here.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
    let d = nf * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// `n`-point Gauss–Jacobi rule on `[-1, 1]` for the weight
/// `(1 - x)^a (1 + x)^b`, `a, b > -1`, by the Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Rule {
    assert!(n >= 1, "rule needs at least one node");
    assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
    let ab = a + b;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
        jm[(k, k)] = if denom.abs() < 1e-300 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / denom
        };
    }
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + ab);
        let den = s * s * (s + 1.0) * (s - 1.0);
        let off = (num / den).sqrt();
        jm[(k, k - 1)] = off;
        jm[(k - 1, k)] = off;
    }
    let mu0 = ((ab + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Double-exponential (exp-sinh) rule for `int_0^inf f(v) dv`, tolerant of
/// integrable endpoint singularities at 0 and slow algebraic-exponential
/// decay at infinity.
pub fn exp_sinh_integrate<F: FnMut(f64) -> f64>(mut f: F) -> f64 {
    const H: f64 = 1.0 / 64.0;
    const L: f64 = 5.0;
    let steps = (L / H) as i64;
    let mut acc = NeumaierSum::new();
    for k in -steps..=steps {
        let x = k as f64 * H;
        let v = (0.5 * PI * x.sinh()).exp();
        let dv = v * 0.5 * PI * x.cosh();
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        let fx = f(v);
        if fx != 0.0 {
            acc.add(H * dv * fx);
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64] {
            let rule = gauss_legendre(n);
            assert_eq!(rule.len(), n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "n = {n}");
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got = rule.integrate(|x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-13, "n = {n}, deg = {deg}");
            }
        }
    }

    #[test]
    fn legendre_smooth_integrand() {
        let rule = gauss_legendre(20).mapped(0.0, PI);
        let got = rule.integrate(f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        let gj = gauss_jacobi(12, 0.0, 0.0);
        let gl = gauss_legendre(12);
        for (x, y) in gj.nodes.iter().zip(&gl.nodes) {
            assert!((x - y).abs() < 1e-13);
        }
        for (x, y) in gj.weights.iter().zip(&gl.weights) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobi_moments_match_beta_integrals() {
        // int_{-1}^{1} (1-x)^a (1+x)^j dx = 2^{a+j+1} B(a+1, j+1)
        for a in [-0.6, -0.2, 0.5, 2.0] {
            let rule = gauss_jacobi(10, a, 0.0);
            for j in 0..15i32 {
                let exact = ((a + j as f64 + 1.0) * 2f64.ln() + ln_gamma(a + 1.0)
                    + ln_gamma(j as f64 + 1.0)
                    - ln_gamma(a + j as f64 + 2.0))
                .exp();
                let got = rule.integrate(|x| (1.0 + x).powi(j));
                assert!((got - exact).abs() <= 1e-12 * exact, "a = {a}, j = {j}");
            }
        }
    }

    #[test]
    fn exp_sinh_gamma_integrals() {
        for alpha in [0.3, 0.5, 1.0, 2.0, 4.5] {
            let got = exp_sinh_integrate(|t| (-t).exp() * t.powf(alpha - 1.0));
            let exact = statrs::function::gamma::gamma(alpha);
            assert!((got - exact).abs() < 1e-12 * exact, "alpha = {alpha}");
        }
    }
}
