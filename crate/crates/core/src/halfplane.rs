//! Conformal maps between half-planes and the unit disc, Cauchy measures on
//! the line, and quadrature for Hardy and Bergman norms on the disc.
//!
//! Half-plane Bergman norms are always computed by pulling the function back
//! to the disc with `tau^{-1}` and integrating there. The radial weight
//! `beta (1 - |w|^2)^{beta - 1}` is absorbed into a Gauss–Jacobi rule in
//! `rho = |w|^2`, so weights that blow up at the boundary (`beta < 1`) need
//! no special treatment.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution};
use rayon::prelude::*;

use crate::compensated::NeumaierSum;
use crate::error::{BohrError, Result};
use crate::mc::{mc_mean, Estimate};
use crate::quad::{gauss_jacobi, gauss_legendre};
use crate::series::DirichletPolynomial;

/// Which named map a [`MoebiusMap`] instantiates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapTag {
    /// `(s - 3/2) / (s + 1/2)`, from `Re s > 1/2` onto the disc.
    Tau,
    TauInverse,
    /// `(s - c0 xi) / (s + c0 xi)`, from `Re s > 0` onto the disc.
    Tau1 { xi: f64, c0: u32 },
    Tau1Inverse { xi: f64, c0: u32 },
    /// `(s - xi) / (s + xi)`.
    Tau2 { xi: f64 },
    Tau2Inverse { xi: f64 },
    Custom,
}

impl MapTag {
    fn inverse(self) -> MapTag {
        match self {
            MapTag::Tau => MapTag::TauInverse,
            MapTag::TauInverse => MapTag::Tau,
            MapTag::Tau1 { xi, c0 } => MapTag::Tau1Inverse { xi, c0 },
            MapTag::Tau1Inverse { xi, c0 } => MapTag::Tau1 { xi, c0 },
            MapTag::Tau2 { xi } => MapTag::Tau2Inverse { xi },
            MapTag::Tau2Inverse { xi } => MapTag::Tau2 { xi },
            MapTag::Custom => MapTag::Custom,
        }
    }
}

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    tag: MapTag,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::tagged(a, b, c, d, MapTag::Custom)
    }

    fn tagged(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tag: MapTag) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(BohrError::domain("Moebius map is degenerate (ad - bc = 0)"));
        }
        Ok(MoebiusMap { a, b, c, d, tag })
    }

    /// `tau(s) = (s - 3/2) / (s + 1/2)`.
    pub fn tau() -> Self {
        Self::tagged(re(1.0), re(-1.5), re(1.0), re(0.5), MapTag::Tau).expect("det = 2")
    }

    /// `tau_1(s) = (s - c0 xi) / (s + c0 xi)`.
    pub fn tau1(xi: f64, c0: u32) -> Result<Self> {
        if !(xi > 0.0) || c0 == 0 {
            return Err(BohrError::domain("tau_1 needs xi > 0 and c0 >= 1"));
        }
        let k = c0 as f64 * xi;
        Self::tagged(re(1.0), re(-k), re(1.0), re(k), MapTag::Tau1 { xi, c0 })
    }

    /// `tau_2(s) = (s - xi) / (s + xi)`.
    pub fn tau2(xi: f64) -> Result<Self> {
        if !(xi > 0.0) {
            return Err(BohrError::domain("tau_2 needs xi > 0"));
        }
        Self::tagged(re(1.0), re(-xi), re(1.0), re(xi), MapTag::Tau2 { xi })
    }

    pub fn tag(&self) -> MapTag {
        self.tag
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
            tag: self.tag.inverse(),
        }
    }

    /// Image of `z`; the pole `c z + d = 0` is a domain error.
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() == 0.0 {
            return Err(BohrError::domain(format!("{z} is the pole of {:?}", self.tag)));
        }
        let w = (self.a * z + self.b) / den;
        if !w.is_finite() {
            return Err(BohrError::domain(format!("{z} maps to infinity under {:?}", self.tag)));
        }
        Ok(w)
    }
}

pub fn tau(s: Complex64) -> Result<Complex64> {
    MoebiusMap::tau().apply(s)
}

pub fn tau_inv(w: Complex64) -> Result<Complex64> {
    MoebiusMap::tau().inverse().apply(w)
}

/// Selects `tau_1` or `tau_2` and the direction for [`tau12`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tau12 {
    Tau1,
    Tau1Inverse,
    Tau2,
    Tau2Inverse,
}

pub fn tau12(s: Complex64, xi: f64, c0: u32, which: Tau12) -> Result<Complex64> {
    let map = match which {
        Tau12::Tau1 => MoebiusMap::tau1(xi, c0)?,
        Tau12::Tau1Inverse => MoebiusMap::tau1(xi, c0)?.inverse(),
        Tau12::Tau2 => MoebiusMap::tau2(xi)?,
        Tau12::Tau2Inverse => MoebiusMap::tau2(xi)?.inverse(),
    };
    map.apply(s)
}

/// A function on the unit disc.
#[derive(Clone)]
pub enum DiscFunction {
    /// `sum b_k w^k`.
    Taylor(Vec<Complex64>),
    /// `w -> f(map(w))` for a Dirichlet polynomial `f`.
    Pullback {
        f: DirichletPolynomial,
        map: MoebiusMap,
    },
    /// `w -> outer(inner(w))`.
    Composed {
        outer: Box<DiscFunction>,
        inner: Box<DiscFunction>,
    },
    Closure(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for DiscFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscFunction::Taylor(b) => f.debug_tuple("Taylor").field(b).finish(),
            DiscFunction::Pullback { f: g, map } => f
                .debug_struct("Pullback")
                .field("f", g)
                .field("map", map)
                .finish(),
            DiscFunction::Composed { outer, inner } => f
                .debug_struct("Composed")
                .field("outer", outer)
                .field("inner", inner)
                .finish(),
            DiscFunction::Closure(_) => f.write_str("Closure(..)"),
        }
    }
}

impl DiscFunction {
    pub fn taylor(coeffs: Vec<Complex64>) -> Self {
        DiscFunction::Taylor(coeffs)
    }

    /// `f o tau^{-1}`, the disc picture of a function on `Re s > 1/2`.
    pub fn tau_pullback(f: DirichletPolynomial) -> Self {
        DiscFunction::Pullback {
            f,
            map: MoebiusMap::tau().inverse(),
        }
    }

    pub fn closure<F: Fn(Complex64) -> Complex64 + Send + Sync + 'static>(g: F) -> Self {
        DiscFunction::Closure(Arc::new(g))
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &DiscFunction) -> Self {
        DiscFunction::Composed {
            outer: Box::new(self.clone()),
            inner: Box::new(inner.clone()),
        }
    }

    /// Value at `w`; NaN at a pole of a pulled-back map.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            DiscFunction::Taylor(b) => b
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c),
            DiscFunction::Pullback { f, map } => match map.apply(w) {
                Ok(s) => f.evaluate_complex(s),
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            },
            DiscFunction::Composed { outer, inner } => outer.eval(inner.eval(w)),
            DiscFunction::Closure(g) => g(w),
        }
    }
}

/// Gauss–Jacobi order in `|w|^2` and trapezoid order in the angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub radial_order: usize,
    pub angular_order: usize,
}

impl QuadratureSpec {
    pub fn new(radial_order: usize, angular_order: usize) -> Result<Self> {
        if radial_order < 4 || angular_order < 4 {
            return Err(BohrError::domain("quadrature orders must be at least 4"));
        }
        Ok(QuadratureSpec {
            radial_order,
            angular_order,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_order: 48,
            angular_order: 512,
        }
    }
}

/// One draw from the Cauchy distribution with density `(a / pi) / (t^2 + a^2)`.
pub fn cauchy_sample(scale: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let dist = Cauchy::new(0.0, scale)
        .map_err(|_| BohrError::domain(format!("Cauchy scale must be positive, got {scale}")))?;
    Ok(dist.sample(rng))
}

/// Monte Carlo mean of `g(t)` under the Cauchy distribution of scale `scale`.
pub fn cauchy_average<G: Fn(f64) -> f64 + Sync>(
    g: G,
    scale: f64,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    let dist = Cauchy::new(0.0, scale)
        .map_err(|_| BohrError::domain(format!("Cauchy scale must be positive, got {scale}")))?;
    mc_mean(samples, seed, || (), |_, rng| g(dist.sample(rng)))
}

/// `int g dlambda` for the Cauchy measure by Gauss–Legendre in the angle
/// `t = scale tan(theta)`. Weights are renormalized to sum to one, so
/// constants integrate exactly.
pub fn cauchy_quadrature<G: Fn(f64) -> f64>(g: G, scale: f64, order: usize) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(BohrError::domain(format!("Cauchy scale must be positive, got {scale}")));
    }
    let rule = gauss_legendre(order.max(1)).mapped(-0.5 * PI, 0.5 * PI);
    let total: NeumaierSum = rule.weights.iter().copied().collect();
    let integral = rule.integrate(|theta| g(scale * theta.tan()));
    Ok(integral / total.value())
}

fn angular_mean_pow(f: &DiscFunction, r: f64, p: f64, order: usize) -> f64 {
    let h = TAU / order as f64;
    let sum: NeumaierSum = (0..order)
        .map(|j| f.eval(Complex64::from_polar(r, j as f64 * h)).norm().powf(p))
        .collect();
    sum.value() / order as f64
}

/// `(int_0^{2 pi} |F(r e^{i theta})|^p dtheta / 2pi)^{1/p}` by the trapezoid rule.
pub fn disc_hardy_norm(f: &DiscFunction, p: f64, r: f64, angular_order: usize) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(BohrError::domain(format!("radius must lie in (0, 1], got {r}")));
    }
    if !(p > 0.0) || angular_order == 0 {
        return Err(BohrError::domain("need p > 0 and a positive angular order"));
    }
    Ok(angular_mean_pow(f, r, p, angular_order).powf(1.0 / p))
}

/// `(int_D |F|^p beta (1 - |w|^2)^{beta - 1} dm(w))^{1/p}` with `m` the
/// normalized area measure. `beta = 1` is the unweighted Bergman norm.
pub fn disc_bergman_norm(f: &DiscFunction, p: f64, beta: f64, quad: QuadratureSpec) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(BohrError::domain(format!("beta must be positive, got {beta}")));
    }
    if !(p >= 1.0) {
        return Err(BohrError::domain(format!("p must be at least 1, got {p}")));
    }
    // rho = (1 + x) / 2: int_0^1 beta (1-rho)^{beta-1} M(rho) drho
    //   = beta 2^{-beta} int_{-1}^{1} (1-x)^{beta-1} M((1+x)/2) dx
    let rule = gauss_jacobi(quad.radial_order, beta - 1.0, 0.0);
    let terms: Vec<f64> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&x, &w)| {
            let rho = 0.5 * (1.0 + x);
            w * angular_mean_pow(f, rho.sqrt(), p, quad.angular_order)
        })
        .collect();
    let integral = terms.into_iter().collect::<NeumaierSum>().value() * beta * 2f64.powf(-beta);
    Ok(integral.powf(1.0 / p))
}

/// `||f||_{D_beta,i(C_{1/2})} = ||f o tau^{-1}||_{D_beta(D)}`.
pub fn halfplane_bergman_norm(f: &DirichletPolynomial, beta: f64, quad: QuadratureSpec) -> Result<f64> {
    disc_bergman_norm(&DiscFunction::tau_pullback(f.clone()), 2.0, beta, quad)
}

/// Same norm for an arbitrary function on `Re s > 1/2`.
pub fn halfplane_bergman_norm_fn<G>(g: G, beta: f64, quad: QuadratureSpec) -> Result<f64>
where
    G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
{
    let map = MoebiusMap::tau().inverse();
    let pulled = DiscFunction::closure(move |w| match map.apply(w) {
        Ok(s) => g(s),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    });
    disc_bergman_norm(&pulled, 2.0, beta, quad)
}

/// `||F||_{H^p, r} - ||F o psi||_{H^p, r}`; nonnegative up to quadrature
/// error whenever `psi` is an analytic self-map of the disc fixing 0.
pub fn littlewood_gap(
    psi: &DiscFunction,
    f: &DiscFunction,
    p: f64,
    r: f64,
    angular_order: usize,
) -> Result<f64> {
    let base = disc_hardy_norm(f, p, r, angular_order)?;
    let composed = disc_hardy_norm(&f.compose(psi), p, r, angular_order)?;
    Ok(base - composed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream_rng;
    use rand::Rng;
    use statrs::function::gamma::ln_gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(c(1.5, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(tau_inv(c(0.0, 0.0)).unwrap(), c(1.5, 0.0));
        for t in [1.0, 2.0, 5.0] {
            assert!((tau(c(0.5, t)).unwrap().norm() - 1.0).abs() < 1e-15);
        }
        assert!(tau(c(-0.5, 0.0)).is_err());
        assert!(tau_inv(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn tau12_examples() {
        let xi = 3.7;
        assert_eq!(tau12(c(xi, 0.0), xi, 2, Tau12::Tau2).unwrap(), c(0.0, 0.0));
        assert_eq!(tau12(c(2.0 * xi, 0.0), xi, 2, Tau12::Tau1).unwrap(), c(0.0, 0.0));
        assert_eq!(tau12(c(0.0, 0.0), xi, 2, Tau12::Tau2Inverse).unwrap(), c(xi, 0.0));
        assert!(tau12(c(-xi, 0.0), xi, 1, Tau12::Tau2).is_err());
        assert!(tau12(c(1.0, 0.0), 0.0, 1, Tau12::Tau2).is_err());
        assert!(tau12(c(1.0, 0.0), 1.0, 0, Tau12::Tau1).is_err());
        // imaginary axis to the circle
        for t in [-3.0, 0.2, 9.0] {
            let w = tau12(c(0.0, t), xi, 3, Tau12::Tau1).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn maps_and_inverses_round_trip() {
        let mut rng = stream_rng(21, 0);
        let maps = [
            MoebiusMap::tau(),
            MoebiusMap::tau1(2.5, 3).unwrap(),
            MoebiusMap::tau2(0.7).unwrap(),
        ];
        for map in maps {
            let inv = map.inverse();
            assert_eq!(inv.inverse(), map);
            for _ in 0..100 {
                let w = Complex64::from_polar(rng.random::<f64>().sqrt() * 0.999, rng.random_range(0.0..TAU));
                let back = map.apply(inv.apply(w).unwrap()).unwrap();
                assert!((back - w).norm() < 1e-12);
            }
        }
        assert!(MoebiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).is_err());
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_average(|_| 1.0, 2.0, 1000, 1).unwrap().value, 1.0);
        assert_eq!(cauchy_quadrature(|_| 1.0, 2.0, 37).unwrap(), 1.0);
        for a in [0.5, 1.0, 3.0] {
            let e = cauchy_average(f64::cos, a, 100_000, 5).unwrap();
            assert!(e.within((-a).exp(), 3.0), "scale {a}: {e:?}");
        }
        let est = cauchy_average(|t| if t < 0.0 { 1.0 } else { 0.0 }, 1.0, 100_000, 9).unwrap();
        assert!(est.within(0.5, 4.0));
        let mut rng = stream_rng(2, 0);
        assert!(cauchy_sample(0.0, &mut rng).is_err());
        // smooth, decaying integrand: 1/(1+t^2) against Cauchy(a) is 1/(1+a)
        let q = cauchy_quadrature(|t| 1.0 / (1.0 + t * t), 2.0, 64).unwrap();
        assert!((q - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hardy_examples() {
        let k = DiscFunction::taylor(vec![c(0.3, -0.4)]);
        assert!((disc_hardy_norm(&k, 1.5, 0.7, 16).unwrap() - 0.5).abs() < 1e-15);
        let w = DiscFunction::taylor(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((disc_hardy_norm(&w, 2.0, 0.6, 16).unwrap() - 0.6).abs() < 1e-15);
        let one_plus_w = DiscFunction::taylor(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let got = disc_hardy_norm(&one_plus_w, 1.0, 1.0, 1 << 16).unwrap();
        // oracle: (1/2pi) int |1 + e^{i theta}| = (1/pi) int_0^pi 2 cos(theta/2)
        let oracle = gauss_legendre(30).mapped(0.0, PI).integrate(|t| 2.0 * (0.5 * t).cos()) / PI;
        assert!((oracle - 4.0 / PI).abs() < 1e-14);
        assert!((got - oracle).abs() < 1e-8);
        assert!(disc_hardy_norm(&w, 1.0, 0.0, 8).is_err());
    }

    #[test]
    fn bergman_monomials_match_beta_integrals() {
        let quad = QuadratureSpec::new(32, 64).unwrap();
        for beta in [0.2, 2f64.sqrt() - 1.0, 0.5, 1.0, 1.7, 3.0] {
            let one = DiscFunction::taylor(vec![c(1.0, 0.0)]);
            assert!((disc_bergman_norm(&one, 2.0, beta, quad).unwrap() - 1.0).abs() < 1e-12);
            for k in 0..8usize {
                let mut b = vec![c(0.0, 0.0); k + 1];
                b[k] = c(1.0, 0.0);
                let f = DiscFunction::taylor(b);
                let got = disc_bergman_norm(&f, 2.0, beta, quad).unwrap();
                // beta B(k+1, beta) = Gamma(k+1) Gamma(beta+1) / Gamma(k+beta+1)
                let exact = (ln_gamma(k as f64 + 1.0) + ln_gamma(beta + 1.0)
                    - ln_gamma(k as f64 + beta + 1.0))
                .exp()
                .sqrt();
                assert!((got - exact).abs() < 1e-9, "beta {beta}, k {k}");
                if beta == 1.0 {
                    assert!((got - (k as f64 + 1.0).powf(-0.5)).abs() < 1e-12);
                }
            }
        }
        let one = DiscFunction::taylor(vec![c(1.0, 0.0)]);
        assert!(disc_bergman_norm(&one, 2.0, 0.0, quad).is_err());
    }

    #[test]
    fn halfplane_constant_and_tau_powers() {
        let quad = QuadratureSpec::default();
        let one = DirichletPolynomial::one(16);
        for beta in [0.5, 1.0, 3.0] {
            assert!((halfplane_bergman_norm(&one, beta, quad).unwrap() - 1.0).abs() < 1e-12);
        }
        // tau^k pulls back to w^k
        for k in 1..5 {
            for beta in [0.4, 1.0, 2.0] {
                let got =
                    halfplane_bergman_norm_fn(move |s| tau(s).unwrap().powu(k), beta, quad).unwrap();
                let exact = (ln_gamma(k as f64 + 1.0) + ln_gamma(beta + 1.0)
                    - ln_gamma(k as f64 + beta + 1.0))
                .exp()
                .sqrt();
                assert!((got - exact).abs() < 1e-9, "k {k}, beta {beta}");
            }
        }
    }

    // Direct quadrature of
    //   4^beta beta int_{Re s > 1/2} |f(s)|^2 (sigma - 1/2)^{beta-1} |s + 1/2|^{-2 beta - 2} dA(s) / pi
    // on a (sigma, t) grid: sigma = 1/2 + u / (1 - u), t = (sigma + 1/2) tan(theta).
    fn halfplane_grid_oracle(f: &DirichletPolynomial, beta: f64) -> f64 {
        let us = gauss_legendre(200).mapped(0.0, 1.0);
        let ts = gauss_legendre(200).mapped(-0.5 * PI, 0.5 * PI);
        let mut acc = NeumaierSum::new();
        for (&u, &wu) in us.nodes.iter().zip(&us.weights) {
            let x = u / (1.0 - u);
            let dsigma = 1.0 / ((1.0 - u) * (1.0 - u));
            let sigma = 0.5 + x;
            let a = sigma + 0.5;
            for (&th, &wt) in ts.nodes.iter().zip(&ts.weights) {
                let t = a * th.tan();
                let dt = a / (th.cos() * th.cos());
                let s = c(sigma, t);
                let val = f.evaluate_complex(s).norm_sqr() * x.powf(beta - 1.0)
                    / (a * a + t * t).powf(beta + 1.0);
                acc.add(wu * wt * dsigma * dt * val);
            }
        }
        acc.value() * 4f64.powf(beta) * beta / PI
    }

    #[test]
    fn halfplane_norm_agrees_with_direct_grid() {
        let f = DirichletPolynomial::monomial(2, c(1.0, 0.0), 16);
        let quad = QuadratureSpec::default();
        let got = halfplane_bergman_norm(&f, 1.0, quad).unwrap();
        let oracle = halfplane_grid_oracle(&f, 1.0).sqrt();
        assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
        let g = DirichletPolynomial::from_terms(16, [(1, c(0.5, 0.0)), (3, c(0.0, 1.0))]).unwrap();
        let got = halfplane_bergman_norm(&g, 2.0, quad).unwrap();
        let oracle = halfplane_grid_oracle(&g, 2.0).sqrt();
        assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
    }

    #[test]
    fn littlewood_examples() {
        let id = DiscFunction::closure(|w| w);
        let f = DiscFunction::taylor(vec![c(1.0, 0.0), c(-0.5, 0.2), c(0.3, 0.0)]);
        assert!(littlewood_gap(&id, &f, 2.0, 0.8, 64).unwrap().abs() < 1e-15);
        let sq = DiscFunction::closure(|w| w * w);
        let w = DiscFunction::taylor(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let r = 0.7;
        let gap = littlewood_gap(&sq, &w, 2.0, r, 64).unwrap();
        assert!((gap - (r - r * r)).abs() < 1e-14);
    }

    #[test]
    fn littlewood_random_blaschke() {
        let mut rng = stream_rng(33, 0);
        for _ in 0..20 {
            let a = Complex64::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..TAU));
            let rot = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
            // w (w - a) / (1 - conj(a) w), a self-map fixing 0
            let psi = DiscFunction::closure(move |w| rot * w * (w - a) / (1.0 - a.conj() * w));
            let coeffs: Vec<Complex64> = (0..6)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let f = DiscFunction::taylor(coeffs);
            for p in [1.0, 2.0, 3.0] {
                let gap = littlewood_gap(&psi, &f, p, 0.9, 2048).unwrap();
                assert!(gap >= -1e-9, "gap {gap}");
            }
        }
    }
}
