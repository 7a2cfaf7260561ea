//! Composition symbols `Phi(s) = c0 s + phi(s)` and the composition operator
//! `f -> f o Phi` on truncated Dirichlet series.
//!
//! `m^{-Phi(s)} = m^{-c0 s} m^{-c1} exp(-(ln m) tail(phi))`, and the exponential
//! is a finite sum of convolution powers below any horizon, so composition is
//! exact coefficientwise up to the requested horizon.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::arith::{char_power, CharacterPoint};
use crate::compensated::ComplexSum;
use crate::error::{BohrError, Result};
use crate::halfplane::{halfplane_bergman_norm, tau, MoebiusMap, QuadratureSpec};
use crate::series::{ComplexPoint, DirichletPolynomial};
use crate::spaces::{norm_dalpha, norm_hbeta_omega};

/// Default horizon of composed series.
pub const DEFAULT_WORK_HORIZON: u64 = 1 << 14;

/// Amount by which `Re phi` must undershoot its bound to count as a violation.
pub const VIOLATION_TOLERANCE: f64 = 1e-12;

/// Points at which [`check_membership`] samples `Re phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipGrid {
    /// Abscissae, typically decreasing towards a small `epsilon > 0`.
    pub sigmas: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
}

impl MembershipGrid {
    /// Geometric abscissae from 4 down to `epsilon`, ordinates on `[-50, 50]`.
    pub fn standard(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 4.0) {
            return Err(BohrError::domain(format!("epsilon must lie in (0, 4), got {epsilon}")));
        }
        let levels = 12;
        let ratio = (epsilon / 4.0).powf(1.0 / (levels - 1) as f64);
        let mut sigmas: Vec<f64> = (0..levels).map(|i| 4.0 * ratio.powi(i)).collect();
        sigmas[levels as usize - 1] = epsilon;
        Ok(MembershipGrid {
            sigmas,
            t_min: -50.0,
            t_max: 50.0,
            t_count: 1001,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.sigmas.is_empty() || self.t_count == 0 {
            return Err(BohrError::domain("membership grid is empty"));
        }
        if self.sigmas.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(BohrError::domain("grid abscissae must be positive and finite"));
        }
        if !(self.t_min <= self.t_max) {
            return Err(BohrError::domain("grid needs t_min <= t_max"));
        }
        Ok(())
    }

    fn points(&self) -> impl Iterator<Item = ComplexPoint> + '_ {
        let step = if self.t_count > 1 {
            (self.t_max - self.t_min) / (self.t_count - 1) as f64
        } else {
            0.0
        };
        self.sigmas.iter().flat_map(move |&sigma| {
            (0..self.t_count).map(move |j| ComplexPoint::new(sigma, self.t_min + j as f64 * step))
        })
    }
}

/// Outcome of a sampled search for a violation of the mapping property.
/// Sampling can refute membership but never establish it.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum GVerdict {
    #[default]
    Unchecked,
    Falsified {
        witness: ComplexPoint,
        /// `Re phi(witness)`.
        real_part: f64,
        grid: MembershipGrid,
    },
    NoViolationFound {
        grid: MembershipGrid,
    },
}

impl GVerdict {
    pub fn is_falsified(&self) -> bool {
        matches!(self, GVerdict::Falsified { .. })
    }
}

/// `Phi(s) = c0 s + phi(s)`. The index-1 coefficient of `phi` is `c1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionSymbol {
    pub c0: u32,
    pub phi: DirichletPolynomial,
    pub verdict: GVerdict,
}

impl CompositionSymbol {
    pub fn new(c0: u32, phi: DirichletPolynomial) -> Self {
        CompositionSymbol {
            c0,
            phi,
            verdict: GVerdict::Unchecked,
        }
    }

    /// `Phi(s) = c0 s`.
    pub fn stretch(c0: u32, horizon: u64) -> Self {
        Self::new(c0, DirichletPolynomial::zero(horizon))
    }

    /// `Phi(s) = s`.
    pub fn identity(horizon: u64) -> Self {
        Self::stretch(1, horizon)
    }

    pub fn c1(&self) -> Complex64 {
        self.phi.constant_term()
    }

    /// Required lower bound for `Re phi`: `1/2` when `c0 = 0`, else `0`.
    pub fn theta(&self) -> f64 {
        if self.c0 == 0 {
            0.5
        } else {
            0.0
        }
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        s * self.c0 as f64 + self.phi.evaluate_complex(s)
    }

    /// `Re c1 - sum_{n >= 2} |c_n| - theta`. Positive means the symbol is in
    /// the class by the triangle inequality. `phi = 0` with `c0 >= 1` is a
    /// member outright and reports infinity.
    pub fn certificate_margin(&self) -> f64 {
        if self.c0 >= 1 && self.phi.is_zero() {
            return f64::INFINITY;
        }
        self.c1().re - self.phi.tail().l1_norm() - self.theta()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate_margin() > 0.0
    }

    /// Text form: a `c0 <integer>` line followed by the series lines of `phi`.
    pub fn parse(text: &str, max_horizon: u64) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let c0 = loop {
            let Some((lineno, raw)) = lines.next() else {
                return Err(BohrError::parse(1, "missing `c0 <integer>` line"));
            };
            let line = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            match fields.as_slice() {
                [] => continue,
                ["c0", v] => {
                    break v
                        .parse::<u32>()
                        .map_err(|_| BohrError::parse(lineno, format!("bad c0 `{v}`")))?
                }
                _ => return Err(BohrError::parse(lineno, "expected `c0 <integer>`")),
            }
        };
        let phi = DirichletPolynomial::parse_lines(lines, max_horizon)?;
        Ok(Self::new(c0, phi))
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "c0 {}", self.c0);
        out.push_str(&self.phi.write());
        out
    }
}

/// `f o Phi` truncated at `horizon`:
/// `(f o Phi)_n = sum_{m^c0 | n} a_m m^{-c1} [exp(-(ln m) tail(phi))]_{n / m^c0}`.
pub fn compose(f: &DirichletPolynomial, symbol: &CompositionSymbol, horizon: u64) -> DirichletPolynomial {
    assert!(horizon >= 1, "horizon must be at least 1");
    // The convolution powers of tail(phi) are shared by every m; only the
    // scalar -ln m changes.
    let terms = DirichletPolynomial::exp_terms(&symbol.phi.tail(), horizon);
    let c1 = symbol.c1();
    let parts: Vec<(u64, DirichletPolynomial)> = f
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|(m, a)| {
            let step = m.checked_pow(symbol.c0).filter(|&q| q <= horizon)?;
            let ln_m = (m as f64).ln();
            let scale = a * (-c1 * ln_m).exp();
            let lambda = Complex64::new(-ln_m, 0.0);
            let e = DirichletPolynomial::combine_terms(&terms, lambda, horizon / step);
            Some((step, e.scale(scale)))
        })
        .collect();
    let mut acc: BTreeMap<u64, ComplexSum> = BTreeMap::new();
    for (step, part) in &parts {
        for (j, c) in part.iter() {
            acc.entry(j * step).or_default().add(c);
        }
    }
    DirichletPolynomial::from_sums(horizon, acc)
}

/// `f(Phi(s))` evaluated directly.
pub fn evaluate_direct(f: &DirichletPolynomial, symbol: &CompositionSymbol, s: Complex64) -> Complex64 {
    f.evaluate_complex(symbol.evaluate(s))
}

/// `Phi_chi(s) = c0 s + phi_chi(s)`.
pub fn symbol_twist(symbol: &CompositionSymbol, chi: &CharacterPoint) -> Result<CompositionSymbol> {
    Ok(CompositionSymbol::new(symbol.c0, symbol.phi.twist(chi)?))
}

/// `Phi_delta(s) = Phi(s + delta) = c0 (s + delta) + phi(s + delta)`.
pub fn symbol_shift(symbol: &CompositionSymbol, delta: Complex64) -> CompositionSymbol {
    let h = symbol.phi.horizon();
    let shifted = symbol
        .phi
        .shift(delta)
        .add(&DirichletPolynomial::monomial(1, delta * symbol.c0 as f64, h));
    CompositionSymbol::new(symbol.c0, shifted)
}

/// `|(f o Phi)_chi(s) - (f_{chi^c0} o Phi_chi)(s)|` with both compositions
/// truncated at `horizon`. Twisting is a ring homomorphism, so this vanishes
/// up to rounding.
pub fn twisted_composition_residual(
    f: &DirichletPolynomial,
    symbol: &CompositionSymbol,
    chi: &CharacterPoint,
    s: Complex64,
    horizon: u64,
) -> Result<f64> {
    let left = compose(f, symbol, horizon).twist(chi)?.evaluate_complex(s);
    let f_twisted = f.twist(&char_power(chi, symbol.c0))?;
    let right = compose(&f_twisted, &symbol_twist(symbol, chi)?, horizon).evaluate_complex(s);
    Ok((left - right).norm())
}

/// Samples `Re phi` on `grid` and reports the worst point if it undershoots
/// the required bound by more than [`VIOLATION_TOLERANCE`].
pub fn check_membership(symbol: &CompositionSymbol, grid: &MembershipGrid) -> Result<GVerdict> {
    grid.validate()?;
    if symbol.c0 >= 1 && symbol.phi.is_zero() {
        return Ok(GVerdict::NoViolationFound { grid: grid.clone() });
    }
    let theta = symbol.theta();
    let mut worst: Option<(ComplexPoint, f64)> = None;
    for p in grid.points() {
        let re = symbol.phi.evaluate(p).re;
        if worst.is_none_or(|(_, w)| re < w) {
            worst = Some((p, re));
        }
    }
    let (witness, real_part) = worst.expect("grid is non-empty");
    if theta - real_part > VIOLATION_TOLERANCE {
        Ok(GVerdict::Falsified {
            witness,
            real_part,
            grid: grid.clone(),
        })
    } else {
        Ok(GVerdict::NoViolationFound { grid: grid.clone() })
    }
}

/// Limits for [`make_safe_symbol`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolBudget {
    /// Largest index in `phi`.
    pub horizon: u64,
    /// Number of indices `>= 2` drawn for the tail.
    pub tail_terms: usize,
    /// Cap on `sum_{n >= 2} |c_n|`.
    pub tail_l1: f64,
    /// Cap on `Re c1`.
    pub c1_re_max: f64,
    /// Cap on `|Im c1|`.
    pub c1_im_max: f64,
}

impl Default for SymbolBudget {
    fn default() -> Self {
        SymbolBudget {
            horizon: 16,
            tail_terms: 3,
            tail_l1: 1.0,
            c1_re_max: 3.0,
            c1_im_max: 1.0,
        }
    }
}

/// A random symbol satisfying `Re c1 - sum_{n >= 2} |c_n| > theta`, which puts
/// it in the class by the triangle inequality.
pub fn make_safe_symbol<R: Rng + ?Sized>(c0: u32, budget: SymbolBudget, rng: &mut R) -> Result<CompositionSymbol> {
    let theta = if c0 == 0 { 0.5 } else { 0.0 };
    let room = budget.c1_re_max - theta;
    if !(room > 0.0) || !room.is_finite() {
        return Err(BohrError::domain(format!(
            "Re c1 must exceed {theta} but is capped at {}",
            budget.c1_re_max
        )));
    }
    if !(budget.tail_l1 >= 0.0 && budget.tail_l1.is_finite()) || !(budget.c1_im_max >= 0.0) {
        return Err(BohrError::domain("tail and imaginary budgets must be finite and nonnegative"));
    }
    if budget.horizon < 2 && budget.tail_terms > 0 {
        return Err(BohrError::domain("a nonempty tail needs horizon >= 2"));
    }
    // Keep a slice of the room for a strictly positive margin.
    let tail_total = rng.random_range(0.0..=1.0) * budget.tail_l1.min(0.9 * room);
    let mut raw: Vec<(u64, Complex64)> = (0..budget.tail_terms)
        .map(|_| {
            let n = rng.random_range(2..=budget.horizon);
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (n, z)
        })
        .collect();
    raw.sort_by_key(|&(n, _)| n);
    let raw_l1: f64 = raw.iter().map(|(_, z)| z.norm()).sum();
    let factor = if raw_l1 > 0.0 { tail_total / raw_l1 } else { 0.0 };
    let lo = theta + tail_total;
    let re = lo + (budget.c1_re_max - lo) * rng.random_range(0.05..=1.0);
    let im = budget.c1_im_max * rng.random_range(-1.0..=1.0);
    let mut terms: Vec<(u64, Complex64)> = raw.into_iter().map(|(n, z)| (n, z * factor)).collect();
    terms.push((1, Complex64::new(re, im)));
    let phi = DirichletPolynomial::from_terms(budget.horizon.max(1), terms)?;
    let symbol = CompositionSymbol::new(c0, phi);
    if !symbol.is_certified() {
        // Rounding in the rescaled tail can only matter at the last ulp.
        return Err(BohrError::domain("generated symbol failed its certificate"));
    }
    Ok(symbol)
}

/// `sum_{k <= K} (k+1)^{(alpha-1)/2} 2^{-ks}` at horizon `2^K`. Its squared
/// `D_alpha` norm is the harmonic number `H_{K+1}`.
pub fn fixture_sharpness(alpha: f64, k_max: u32) -> Result<DirichletPolynomial> {
    if k_max > 62 {
        return Err(BohrError::domain(format!("K = {k_max} overflows 64-bit indices")));
    }
    let horizon = 1u64 << k_max;
    DirichletPolynomial::from_terms(
        horizon,
        (0..=k_max).map(|k| (1u64 << k, Complex64::new(((k + 1) as f64).powf(0.5 * (alpha - 1.0)), 0.0))),
    )
}

/// `sum_{p <= N prime} p^{-s} / (sqrt(p) ln p)`.
pub fn fixture_prime_series(horizon: u64) -> Result<DirichletPolynomial> {
    let primes = crate::arith::sieve_primes(horizon);
    DirichletPolynomial::from_terms(
        horizon.max(1),
        primes.into_iter().map(|p| {
            let x = p as f64;
            (p, Complex64::new(1.0 / (x.sqrt() * x.ln()), 0.0))
        }),
    )
}

/// `||m f||_{D_alpha} - sup_estimate ||f||_{D_alpha}` with the product
/// truncated at `horizon`.
pub fn multiplier_defect(
    m: &DirichletPolynomial,
    f: &DirichletPolynomial,
    alpha: f64,
    horizon: u64,
    sup_estimate: f64,
) -> f64 {
    norm_dalpha(&m.convolve(f, horizon), alpha) - sup_estimate * norm_dalpha(f, alpha)
}

/// `(tau_1 o Phi_{chi,sigma} o tau_2^{-1})(0)` for a symbol that has already
/// been twisted, i.e. `tau_1(Phi(xi + sigma))`.
pub fn centering_value(symbol: &CompositionSymbol, sigma: f64, xi: f64) -> Result<Complex64> {
    if symbol.c0 == 0 {
        return Err(BohrError::domain("centering needs c0 >= 1"));
    }
    let shifted = symbol_shift(symbol, Complex64::new(sigma, 0.0));
    let s = MoebiusMap::tau2(xi)?.inverse().apply(Complex64::new(0.0, 0.0))?;
    MoebiusMap::tau1(xi, symbol.c0)?.apply(shifted.evaluate(s))
}

/// Both sides of the `c0 = 0` estimate
/// `sum_{n <= N} |b_n|^2 / (1 + Omega(n))^beta <= ((1 + |tau(c1)|) / (1 - |tau(c1)|))^{1+beta} ||f||^2`,
/// where `b = f o Phi` and the right-hand norm is the half-plane Bergman norm.
pub fn omega_pull_bound(
    f: &DirichletPolynomial,
    symbol: &CompositionSymbol,
    beta: f64,
    horizon: u64,
    quad: QuadratureSpec,
) -> Result<(f64, f64)> {
    if symbol.c0 != 0 {
        return Err(BohrError::domain("the Omega bound concerns c0 = 0 symbols"));
    }
    let composed = compose(f, symbol, horizon);
    let lhs = norm_hbeta_omega(&composed, beta).powi(2);
    let r = tau(symbol.c1())?.norm();
    if r >= 1.0 {
        return Err(BohrError::domain("|tau(c1)| >= 1: Re c1 must exceed 1/2"));
    }
    let constant = ((1.0 + r) / (1.0 - r)).powf(1.0 + beta);
    let rhs = constant * halfplane_bergman_norm(f, beta, quad)?.powi(2);
    Ok((lhs, rhs))
}

/// Random series with `terms` draws of index in `1..=horizon` and complex
/// coefficients uniform in the unit square.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, horizon: u64, terms: usize) -> DirichletPolynomial {
    let pairs: Vec<(u64, Complex64)> = (0..terms)
        .map(|_| {
            (
                rng.random_range(1..=horizon),
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    DirichletPolynomial::from_terms(horizon, pairs).expect("indices drawn inside the horizon")
}

/// Uniform point of the closed polydisc with `len` coordinates.
pub fn random_character<R: Rng + ?Sized>(rng: &mut R, len: usize) -> CharacterPoint {
    let values = (0..len)
        .map(|_| {
            let r: f64 = rng.random_range(0.0..=1.0f64).sqrt();
            Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    CharacterPoint::new(values).expect("points lie in the closed disc")
}
