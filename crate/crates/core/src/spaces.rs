//! Norms and measures on Dirichlet series.
//!
//! Exact norms are weighted `l^2` sums over coefficients:
//!
//! | space              | weight on `|a_n|^2`        |
//! |--------------------|----------------------------|
//! | `D_alpha`          | `d(n)^{-alpha}`            |
//! | `H_beta` (Omega)   | `(1 + Omega(n))^{-beta}`   |
//! | McCarthy `A_alpha` | `(1 + ln n)^{-alpha}`      |
//!
//! `H^p` and `A^p` for even `p = 2k` are exact through `||f||_p^p = ||f^k||_2^2`;
//! for other `p` they are Monte Carlo integrals of the Bohr lift over the
//! polytorus (Haar measure) or polydisc (product of normalized area measures).
//!
//! Truncating a measure to the first `pi(N)` coordinates is exact, not an
//! approximation, for series of horizon `N`: index `n <= N` only involves
//! primes `<= N`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Gamma};
use statrs::function::gamma::gamma;

use crate::arith::{coordinates_for_horizon, divisor_weight, factorize, CharacterPoint};
use crate::compensated::{ComplexSum, NeumaierSum};
use crate::error::{BohrError, Result};
use crate::mc::{mc_mean, Estimate};
use crate::quad::exp_sinh_integrate;
use crate::series::DirichletPolynomial;

/// A function space of Dirichlet series with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    Dalpha(f64),
    HbetaOmega(f64),
    McCarthy(f64),
    Hp(f64),
    Ap(f64),
    HalfPlaneD(f64),
}

/// How a norm is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Exact,
    Quadrature { order: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub space: Space,
    pub strategy: Strategy,
}

impl NormSpec {
    pub fn new(space: Space, strategy: Strategy) -> Result<Self> {
        let spec = NormSpec { space, strategy };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self.space {
            Space::Dalpha(a) | Space::McCarthy(a) if !(a > 0.0) => {
                return Err(BohrError::domain(format!("alpha must be positive, got {a}")))
            }
            Space::HbetaOmega(b) | Space::HalfPlaneD(b) if !(b > 0.0) => {
                return Err(BohrError::domain(format!("beta must be positive, got {b}")))
            }
            Space::Hp(p) | Space::Ap(p) if !(p >= 1.0) => {
                return Err(BohrError::domain(format!("p must be at least 1, got {p}")))
            }
            _ => {}
        }
        match (self.space, self.strategy) {
            (Space::Dalpha(_) | Space::HbetaOmega(_) | Space::McCarthy(_), Strategy::Exact) => Ok(()),
            (Space::Hp(p) | Space::Ap(p), Strategy::Exact) if is_even_integer(p) => Ok(()),
            (Space::Hp(_) | Space::Ap(_), Strategy::MonteCarlo { .. }) => Ok(()),
            (Space::HalfPlaneD(_), Strategy::Quadrature { .. }) => Ok(()),
            (space, strategy) => Err(BohrError::domain(format!(
                "{strategy:?} is not available for {space:?}"
            ))),
        }
    }
}

fn is_even_integer(p: f64) -> bool {
    p >= 2.0 && p.fract() == 0.0 && (p as u64) % 2 == 0
}

/// A measure on the (truncated) polydisc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    /// Normalized Haar measure on the polytorus.
    HaarTorus,
    /// Product of normalized area measures on the disc.
    UniformDisc,
    /// Product of the radial measures with moments `(k + 1)^{-alpha}`.
    NuAlpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub dimension: usize,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(BohrError::domain("measure dimension must be at least 1"));
        }
        if let MeasureKind::NuAlpha(a) = kind {
            if !(a > 0.0) {
                return Err(BohrError::domain(format!("alpha must be positive, got {a}")));
            }
        }
        Ok(MeasureSpec { kind, dimension })
    }

    /// Dimension covering every prime up to the horizon of `f` (at least 1).
    pub fn covering(kind: MeasureKind, f: &DirichletPolynomial) -> Result<Self> {
        let dim = coordinates_for_horizon(f.max_index().unwrap_or(1)).max(1);
        Self::new(kind, dim)
    }
}

fn weighted_norm<W: Fn(u64) -> f64>(f: &DirichletPolynomial, weight: W) -> f64 {
    f.iter()
        .map(|(n, a)| a.norm_sqr() / weight(n))
        .collect::<NeumaierSum>()
        .value()
        .sqrt()
}

/// `(sum |a_n|^2 / d(n)^alpha)^{1/2}`; `alpha = 0` gives the `H^2` norm.
pub fn norm_dalpha(f: &DirichletPolynomial, alpha: f64) -> f64 {
    weighted_norm(f, |n| {
        divisor_weight(factorize(n).expect("indices are positive").divisor_count(), alpha)
    })
}

/// `(sum |a_n|^2 / (1 + Omega(n))^beta)^{1/2}`.
pub fn norm_hbeta_omega(f: &DirichletPolynomial, beta: f64) -> f64 {
    weighted_norm(f, |n| {
        let omega = factorize(n).expect("indices are positive").big_omega();
        divisor_weight(1 + omega as u64, beta)
    })
}

/// `(sum |a_n|^2 / (1 + ln n)^alpha)^{1/2}`.
pub fn norm_mccarthy(f: &DirichletPolynomial, alpha: f64) -> f64 {
    weighted_norm(f, |n| (1.0 + (n as f64).ln()).powf(alpha))
}

/// An even-exponent norm together with whether the power was cut by the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenNorm {
    pub value: f64,
    /// `true` when `horizon < (max index)^k`, i.e. the value may undercount.
    pub truncated: bool,
}

fn even_norm(f: &DirichletPolynomial, p: u32, horizon: u64, alpha: f64) -> Result<EvenNorm> {
    if p == 0 || p % 2 == 1 {
        return Err(BohrError::domain(format!("exponent {p} is not a positive even integer")));
    }
    let k = p / 2;
    let needed = f.max_index().unwrap_or(1).checked_pow(k);
    let truncated = needed.is_none_or(|m| m > horizon);
    let fk = f.power(k, horizon);
    let value = norm_dalpha(&fk, alpha).powf(1.0 / k as f64);
    Ok(EvenNorm { value, truncated })
}

/// `||f||_{H^p}` for even `p` via `(sum |(f^{p/2})_n|^2)^{1/p}`.
pub fn norm_even_hp(f: &DirichletPolynomial, p: u32, horizon: u64) -> Result<EvenNorm> {
    even_norm(f, p, horizon, 0.0)
}

/// `||f||_{A^p}` for even `p` via `(sum |(f^{p/2})_n|^2 / d(n))^{1/p}`.
pub fn norm_even_ap(f: &DirichletPolynomial, p: u32, horizon: u64) -> Result<EvenNorm> {
    even_norm(f, p, horizon, 1.0)
}

/// The Bohr lift of a Dirichlet polynomial: each index as a list of
/// `(coordinate, exponent)` pairs, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct BohrLift {
    terms: Vec<(Complex64, Vec<(usize, u32)>)>,
    dimension: usize,
}

impl BohrLift {
    /// Fails when an index has a prime factor beyond the shared sieve.
    pub fn new(f: &DirichletPolynomial) -> Result<Self> {
        let sieve = crate::arith::shared_sieve();
        let mut dimension = 0;
        let mut terms = Vec::with_capacity(f.len());
        for (n, a) in f.iter() {
            let fact = factorize(n)?;
            let mut exps = Vec::with_capacity(fact.pairs().len());
            for &(p, k) in fact.pairs() {
                let j = sieve.prime_index(p).ok_or(BohrError::Coverage {
                    prime: p,
                    needed: usize::MAX,
                    len: sieve.primes().len(),
                })?;
                dimension = dimension.max(j + 1);
                exps.push((j, k));
            }
            terms.push((a, exps));
        }
        Ok(BohrLift { terms, dimension })
    }

    /// Number of coordinates the lift reads.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `sum a_n z^{kappa(n)}`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert!(z.len() >= self.dimension, "point has too few coordinates");
        self.terms
            .iter()
            .map(|(a, exps)| {
                exps.iter()
                    .fold(*a, |acc, &(j, k)| acc * z[j].powu(k))
            })
            .collect::<ComplexSum>()
            .value()
    }
}

/// Fills `out` with one draw from the product measure.
pub fn sample_into(kind: MeasureKind, rng: &mut ChaCha8Rng, out: &mut [Complex64]) {
    match kind {
        MeasureKind::HaarTorus => {
            for w in out.iter_mut() {
                *w = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            }
        }
        MeasureKind::UniformDisc => {
            for w in out.iter_mut() {
                let r = rng.random::<f64>().sqrt();
                *w = Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU));
            }
        }
        MeasureKind::NuAlpha(alpha) => {
            let g = Gamma::new(alpha, 1.0).expect("alpha > 0");
            for w in out.iter_mut() {
                // |w|^2 = exp(-G) with G ~ Gamma(alpha, 1)
                let r = (-0.5 * g.sample(rng)).exp();
                *w = Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU));
            }
        }
    }
}

/// One draw from the measure as a character point.
pub fn sample_measure(spec: MeasureSpec, rng: &mut ChaCha8Rng) -> CharacterPoint {
    let mut v = vec![Complex64::new(0.0, 0.0); spec.dimension];
    sample_into(spec.kind, rng, &mut v);
    CharacterPoint::new(v).expect("samples lie in the closed polydisc")
}

/// One draw from `nu_alpha` on `m` coordinates.
pub fn sample_nu_alpha(alpha: f64, m: usize, rng: &mut ChaCha8Rng) -> Result<CharacterPoint> {
    Ok(sample_measure(
        MeasureSpec::new(MeasureKind::NuAlpha(alpha), m)?,
        rng,
    ))
}

/// Monte Carlo estimate of `(int |Bf|^p dmeasure)^{1/p}`.
pub fn mc_norm(
    f: &DirichletPolynomial,
    p: f64,
    measure: MeasureSpec,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    if !(p >= 1.0) {
        return Err(BohrError::domain(format!("p must be at least 1, got {p}")));
    }
    let lift = BohrLift::new(f)?;
    if measure.dimension < lift.dimension() {
        return Err(BohrError::domain(format!(
            "measure has {} coordinates, series needs {}",
            measure.dimension,
            lift.dimension()
        )));
    }
    let dim = measure.dimension;
    let est = mc_mean(
        samples,
        seed,
        || vec![Complex64::new(0.0, 0.0); dim],
        |z, rng| {
            sample_into(measure.kind, rng, z);
            lift.eval(z).norm().powf(p)
        },
    )?;
    Ok(est.root(p))
}

/// Estimate of a norm as described by a [`NormSpec`] with Monte Carlo strategy.
pub fn mc_norm_spec(f: &DirichletPolynomial, spec: NormSpec) -> Result<Estimate> {
    spec.validate()?;
    let Strategy::MonteCarlo { samples, seed } = spec.strategy else {
        return Err(BohrError::domain("norm spec does not request Monte Carlo"));
    };
    let (p, kind) = match spec.space {
        Space::Hp(p) => (p, MeasureKind::HaarTorus),
        Space::Ap(p) => (p, MeasureKind::UniformDisc),
        other => {
            return Err(BohrError::domain(format!("no Monte Carlo estimator for {other:?}")))
        }
    };
    mc_norm(f, p, MeasureSpec::covering(kind, f)?, samples, seed)
}

/// `int |w|^{2k} dm_alpha(w) = int_0^inf e^{-(k+1)t} t^{alpha-1} dt / Gamma(alpha)`
/// by double-exponential quadrature.
///
/// After `t = v^{1/alpha}` the integrand is `exp(-(k+1) v^{1/alpha}) / Gamma(alpha + 1)`,
/// which has no singular weight. The result equals `(k+1)^{-alpha}`.
pub fn moment_nu_alpha(k: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(BohrError::domain(format!("alpha must be positive, got {alpha}")));
    }
    let c = k as f64 + 1.0;
    let inv = 1.0 / alpha;
    let integral = exp_sinh_integrate(|v| (-c * v.powf(inv)).exp());
    Ok(integral / gamma(alpha + 1.0))
}

/// Monte Carlo estimate of
/// `(int int |f_chi(sigma + it)|^2 dlambda(t) dnu_alpha(chi))^{1/2}`
/// with `lambda` the standard Cauchy distribution.
///
/// By rotation invariance of `nu_alpha` the exact value is
/// `norm_dalpha(f.shift(sigma), alpha)`.
pub fn mc_norm_dalpha_flow(
    f: &DirichletPolynomial,
    alpha: f64,
    sigma: f64,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    if !(sigma > 0.0) {
        return Err(BohrError::domain(format!("sigma must be positive, got {sigma}")));
    }
    if !(alpha > 0.0) {
        return Err(BohrError::domain(format!("alpha must be positive, got {alpha}")));
    }
    let lift = BohrLift::new(f)?;
    let dim = lift.dimension().max(1);
    let logs: Vec<(Complex64, f64)> = f.iter().map(|(n, a)| (a, (n as f64).ln())).collect();
    let gamma_dist = Gamma::new(alpha, 1.0).expect("alpha > 0");
    let cauchy = Cauchy::new(0.0, 1.0).expect("unit scale");
    let est = mc_mean(
        samples,
        seed,
        || vec![Complex64::new(0.0, 0.0); dim],
        |z, rng| {
            for w in z.iter_mut() {
                let r = (-0.5 * gamma_dist.sample(rng)).exp();
                *w = Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU));
            }
            let t = cauchy.sample(rng);
            let s = Complex64::new(sigma, t);
            let value: ComplexSum = lift
                .terms
                .iter()
                .zip(&logs)
                .map(|((a, exps), &(_, ln_n))| {
                    let chi_n = exps.iter().fold(Complex64::new(1.0, 0.0), |acc, &(j, k)| {
                        acc * z[j].powu(k)
                    });
                    a * chi_n * (-s * ln_n).exp()
                })
                .collect();
            value.value().norm_sqr()
        },
    )?;
    Ok(est.root(2.0))
}
