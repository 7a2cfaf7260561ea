//! Verification suites and table builders behind the `bohr` command line.
//!
//! Every randomized check derives its per-trial seed from the master seed as
//! `trial_seed(master, (suite_id << 32) | trial)`, so a report depends only on
//! the master seed and the budgets, never on scheduling.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{big_omega, coordinates_for_horizon, divisor_count, divisor_counts_upto, divisor_sum_alpha, factorize};
use crate::error::{BohrError, Result};
use crate::halfplane::{disc_bergman_norm, disc_hardy_norm, DiscFunction, QuadratureSpec};
use crate::mc::{mc_mean, stream_rng, trial_seed};
use crate::operators::{
    compose, make_safe_symbol, multiplier_defect, omega_pull_bound, random_character, random_polynomial,
    twisted_composition_residual, SymbolBudget, DEFAULT_WORK_HORIZON,
};
use crate::quad::gauss_legendre;
use crate::series::DirichletPolynomial;
use crate::spaces::{
    mc_norm, moment_nu_alpha, norm_dalpha, norm_even_ap, norm_even_hp, norm_hbeta_omega, norm_mccarthy,
    sample_into, MeasureKind, MeasureSpec, NormSpec, Space, Strategy,
};
use crate::textfmt::format_f64;

/// A named verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Contraction,
    Helson,
    Carleman,
    OmegaBound,
    Lemma25,
    Moments,
    Multiplier,
    /// Searches for evidence on the exponent for `c0 = 0`; never fails.
    BetaSearch,
}

impl Suite {
    /// The suites run by `verify all`, in report order.
    pub const ALL: [Suite; 7] = [
        Suite::Contraction,
        Suite::Helson,
        Suite::Carleman,
        Suite::OmegaBound,
        Suite::Lemma25,
        Suite::Moments,
        Suite::Multiplier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Contraction => "contraction",
            Suite::Helson => "helson",
            Suite::Carleman => "carleman",
            Suite::OmegaBound => "omega-bound",
            Suite::Lemma25 => "lemma25",
            Suite::Moments => "moments",
            Suite::Multiplier => "multiplier",
            Suite::BetaSearch => "beta-search",
        }
    }

    fn id(self) -> u64 {
        self as u64 + 1
    }
}

impl FromStr for Suite {
    type Err = BohrError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .chain(&[Suite::BetaSearch])
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| BohrError::domain(format!("unknown suite `{s}`")))
    }
}

/// Budgets for a suite run; `None` picks the suite default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: Option<usize>,
    pub alphas: Option<Vec<f64>>,
    pub samples: Option<usize>,
}

/// Tally of one property over many checks. A check passes when its margin
/// (bound minus observed value) is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub worst_margin: f64,
    /// Informational properties report but never fail.
    pub informational: bool,
}

impl PropertyOutcome {
    fn new(name: impl Into<String>) -> Self {
        PropertyOutcome {
            name: name.into(),
            checks: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            informational: false,
        }
    }

    fn info(name: impl Into<String>) -> Self {
        PropertyOutcome {
            informational: true,
            ..Self::new(name)
        }
    }

    fn record(&mut self, margin: f64) {
        self.checks += 1;
        // NaN margins count as failures.
        if !(margin >= 0.0) && !self.informational {
            self.failures += 1;
        }
        if margin.is_nan() || (!self.worst_margin.is_nan() && margin < self.worst_margin) {
            self.worst_margin = margin;
        }
    }

    fn extend(&mut self, margins: impl IntoIterator<Item = f64>) {
        for m in margins {
            self.record(m);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub parameters: String,
    pub properties: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    /// Plain-text rendering; contains no timings, so equal inputs give equal bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(
                out,
                "suite {} seed={} {} status={}",
                s.suite.name(),
                s.seed,
                s.parameters,
                if s.passed() { "PASS" } else { "FAIL" }
            );
            for p in &s.properties {
                let status = if p.informational {
                    "INFO"
                } else if p.passed() {
                    "PASS"
                } else {
                    "FAIL"
                };
                let _ = writeln!(
                    out,
                    "  {status} {} passed={}/{} worst_margin={}",
                    p.name,
                    p.checks - p.failures,
                    p.checks,
                    format_f64(p.worst_margin)
                );
            }
        }
        let _ = writeln!(out, "overall {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn trial_rng(master: u64, suite: Suite, trial: usize) -> ChaCha8Rng {
    stream_rng(trial_seed(master, (suite.id() << 32) | trial as u64), 0)
}

/// Runs `trial` for `0..n` in parallel and returns the results in trial order.
fn run_trials<T: Send, F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync>(
    master: u64,
    suite: Suite,
    n: usize,
    trial: F,
) -> Result<Vec<T>> {
    (0..n)
        .into_par_iter()
        .map(|i| trial(i, &mut trial_rng(master, suite, i)))
        .collect()
}

const DEFAULT_ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];

fn alphas(opts: &SuiteOptions) -> Vec<f64> {
    opts.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec())
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| format_f64(x)).collect::<Vec<_>>().join(",")
}

/// Runs one suite.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Contraction => contraction(opts),
        Suite::Helson => helson(opts),
        Suite::Carleman => carleman(opts),
        Suite::OmegaBound => omega_bound(opts),
        Suite::Lemma25 => lemma25(opts),
        Suite::Moments => moments(opts),
        Suite::Multiplier => multiplier(opts),
        Suite::BetaSearch => beta_search(opts),
    }
}

/// Runs every suite of [`Suite::ALL`] with the shared options.
pub fn run_all(opts: &SuiteOptions) -> Result<Report> {
    let suites = Suite::ALL
        .iter()
        .map(|&s| run_suite(s, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report { suites })
}

/// `||C_Phi f||_{D_alpha}^2 <= ||f||_{D_alpha}^2` for certified `c0 >= 1`
/// symbols, measured on the retained support of the composed series.
fn contraction(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(200);
    let alphas = alphas(opts);
    let margins = run_trials(opts.seed, Suite::Contraction, trials, |i, rng| {
        let c0 = 1 + (i % 3) as u32;
        let f = random_fixture(rng, 64, 10);
        let sym = make_safe_symbol(c0, SymbolBudget::default(), rng)?;
        let g = compose(&f, &sym, DEFAULT_WORK_HORIZON);
        Ok(alphas
            .iter()
            .map(|&a| norm_dalpha(&f, a).powi(2) + 1e-10 - norm_dalpha(&g, a).powi(2))
            .collect::<Vec<_>>())
    })?;
    let mut props: Vec<PropertyOutcome> = alphas
        .iter()
        .map(|&a| PropertyOutcome::new(format!("contraction alpha={}", format_f64(a))))
        .collect();
    for row in margins {
        for (p, m) in props.iter_mut().zip(row) {
            p.record(m);
        }
    }
    Ok(SuiteReport {
        suite: Suite::Contraction,
        seed: opts.seed,
        parameters: format!(
            "trials={trials} c0=1,2,3 source_horizon=64 work_horizon={DEFAULT_WORK_HORIZON} alphas={}",
            list(&alphas)
        ),
        properties: props,
    })
}

/// `(1/2pi) int |1 + e^{i theta}| dtheta`, computed as `(1/pi) int_0^pi 2 cos(theta/2)`.
pub fn hardy_one_of_one_plus_z() -> f64 {
    gauss_legendre(40).mapped(0.0, PI).integrate(|t| 2.0 * (0.5 * t).cos()) / PI
}

/// `||f||_{A^2} <= ||f||_{H^1}`, the latter by Monte Carlo on the polytorus.
fn helson(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(100);
    let samples = opts.samples.unwrap_or(100_000);
    let margins = run_trials(opts.seed, Suite::Helson, trials, |_, rng| {
        let f = random_fixture(rng, 32, 6);
        let mc_seed: u64 = rng.random();
        let spec = MeasureSpec::covering(MeasureKind::HaarTorus, &f)?;
        let h1 = mc_norm(&f, 1.0, spec, samples, mc_seed)?;
        Ok(h1.value + 4.0 * h1.standard_error - norm_dalpha(&f, 1.0))
    })?;
    let mut random = PropertyOutcome::new("A2 <= H1 + 4SE on random fixtures");
    random.extend(margins);

    let fixture = DirichletPolynomial::from_terms(2, [(1, Complex64::new(1.0, 0.0)), (2, Complex64::new(1.0, 0.0))])?;
    let quad = hardy_one_of_one_plus_z();
    let mut exact = PropertyOutcome::new("H1(1+2^-s) = 4/pi by quadrature to 1e-10");
    exact.record(1e-10 - (quad - 4.0 / PI).abs());
    let mut worked = PropertyOutcome::new("A2(1+2^-s) = sqrt(3/2) <= 4/pi");
    worked.record(4.0 / PI - norm_dalpha(&fixture, 1.0));
    let mut mc = PropertyOutcome::new("H1(1+2^-s) Monte Carlo within 4SE of 4/pi");
    let spec = MeasureSpec::covering(MeasureKind::HaarTorus, &fixture)?;
    let est = mc_norm(&fixture, 1.0, spec, samples, trial_seed(opts.seed, Suite::Helson.id() << 32 | 0xffff_ffff))?;
    mc.record(4.0 * est.standard_error - (est.value - 4.0 / PI).abs());
    Ok(SuiteReport {
        suite: Suite::Helson,
        seed: opts.seed,
        parameters: format!("trials={trials} samples={samples} horizon=32"),
        properties: vec![random, exact, worked, mc],
    })
}

fn random_fixture(rng: &mut ChaCha8Rng, horizon: u64, max_terms: usize) -> DirichletPolynomial {
    let terms = rng.random_range(1..=max_terms);
    random_polynomial(rng, horizon, terms)
}

fn random_disc_polynomial(rng: &mut ChaCha8Rng) -> DiscFunction {
    let degree = rng.random_range(0..=6);
    DiscFunction::taylor(
        (0..=degree)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

/// `||F||_{A^{2p}} <= ||F||_{H^p}` on the disc.
fn carleman(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(50);
    let ps = [1.0, 2.0, 3.0];
    let quad = QuadratureSpec::new(32, 512)?;
    let margins = run_trials(opts.seed, Suite::Carleman, trials, |_, rng| {
        let f = random_disc_polynomial(rng);
        ps.iter()
            .map(|&p| {
                let hardy = disc_hardy_norm(&f, p, 1.0, 4096)?;
                let bergman = disc_bergman_norm(&f, 2.0 * p, 1.0, quad)?;
                Ok(hardy + 1e-6 - bergman)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut props: Vec<PropertyOutcome> = ps
        .iter()
        .map(|&p| PropertyOutcome::new(format!("A^{} <= H^{}", format_f64(2.0 * p), format_f64(p))))
        .collect();
    for row in margins {
        for (p, m) in props.iter_mut().zip(row) {
            p.record(m);
        }
    }
    Ok(SuiteReport {
        suite: Suite::Carleman,
        seed: opts.seed,
        parameters: format!("trials={trials} degree<=6 radial=32 angular=512 boundary=4096"),
        properties: props,
    })
}

/// Worst `d(n) - 1 - Omega(n)` for `n <= limit`.
pub fn omega_le_divisor_margin(limit: u64) -> Result<f64> {
    let d = divisor_counts_upto(limit);
    let margins = (1..=limit)
        .into_par_iter()
        .map(|n| Ok(d[n as usize] as f64 - 1.0 - big_omega(n)? as f64))
        .collect::<Result<Vec<f64>>>()?;
    Ok(margins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Worst `d(n^c0) - d(n)` for `n <= limit`, `1 <= c0 <= c_max`.
pub fn divisor_power_margin(limit: u64, c_max: u32) -> Result<f64> {
    let margins = (1..=limit)
        .into_par_iter()
        .map(|n| {
            let fact = factorize(n)?;
            let dn = fact.divisor_count();
            Ok((1..=c_max)
                .map(|c| fact.pow(c).divisor_count() as f64 - dn as f64)
                .fold(f64::INFINITY, f64::min))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(margins.into_iter().fold(f64::INFINITY, f64::min))
}

/// The exponents checked by the `c0 = 0` bound.
pub fn omega_betas() -> [f64; 3] {
    [1.0, 2f64.sqrt() - 1.0, 3.0]
}

/// `1 + Omega(n) <= d(n)`, `d(n^c0) >= d(n)`, and the `c0 = 0` estimate
/// against the half-plane Bergman norm.
fn omega_bound(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(50);
    let mut arith = PropertyOutcome::new("1+Omega(n) <= d(n) for n <= 10^6");
    arith.record(omega_le_divisor_margin(1_000_000)?);
    let mut power = PropertyOutcome::new("d(n^c0) >= d(n) for n <= 10^5, c0 <= 5");
    power.record(divisor_power_margin(100_000, 5)?);

    let betas = omega_betas();
    let quad = QuadratureSpec::default();
    let rows = run_trials(opts.seed, Suite::OmegaBound, trials, |_, rng| {
        let f = random_fixture(rng, 16, 5);
        let sym = make_safe_symbol(0, SymbolBudget::default(), rng)?;
        betas
            .iter()
            .map(|&b| {
                let (lhs, rhs) = omega_pull_bound(&f, &sym, b, DEFAULT_WORK_HORIZON, quad)?;
                Ok(rhs + 1e-6 - lhs)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut props = vec![arith, power];
    let mut bound: Vec<PropertyOutcome> = betas
        .iter()
        .map(|&b| PropertyOutcome::new(format!("c0=0 Omega-weighted bound beta={}", format_f64(b))))
        .collect();
    for row in rows {
        for (p, m) in bound.iter_mut().zip(row) {
            p.record(m);
        }
    }
    props.extend(bound);
    Ok(SuiteReport {
        suite: Suite::OmegaBound,
        seed: opts.seed,
        parameters: format!(
            "trials={trials} source_horizon=16 work_horizon={DEFAULT_WORK_HORIZON} radial={} angular={}",
            quad.radial_order, quad.angular_order
        ),
        properties: props,
    })
}

/// `(f o Phi)_chi = f_{chi^c0} o Phi_chi` evaluated at `s = 3`.
fn lemma25(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(50);
    let horizon = 1u64 << 12;
    let coords = coordinates_for_horizon(horizon);
    let margins = run_trials(opts.seed, Suite::Lemma25, trials, |i, rng| {
        let c0 = (i % 3) as u32;
        let f = random_fixture(rng, 32, 6);
        let sym = make_safe_symbol(c0, SymbolBudget::default(), rng)?;
        let chi = random_character(rng, coords);
        let r = twisted_composition_residual(&f, &sym, &chi, Complex64::new(3.0, 0.0), horizon)?;
        Ok(1e-8 - r)
    })?;
    let mut p = PropertyOutcome::new("twisted composition residual <= 1e-8 at s=3");
    p.extend(margins);
    Ok(SuiteReport {
        suite: Suite::Lemma25,
        seed: opts.seed,
        parameters: format!("trials={trials} c0=0,1,2 horizon={horizon}"),
        properties: vec![p],
    })
}

/// Quadrature moments of `nu_alpha` against `(k+1)^{-alpha}`, and sampler moments.
fn moments(opts: &SuiteOptions) -> Result<SuiteReport> {
    let alphas = alphas(opts);
    let samples = opts.samples.unwrap_or(100_000);
    let mut props = Vec::new();
    for (ai, &a) in alphas.iter().enumerate() {
        let mut q = PropertyOutcome::new(format!("moment quadrature alpha={} k<=20 to 1e-10", format_f64(a)));
        for k in 0..=20u32 {
            let m = moment_nu_alpha(k, a)?;
            q.record(1e-10 - (m - (k as f64 + 1.0).powf(-a)).abs());
        }
        let mut s = PropertyOutcome::new(format!("sampler moments alpha={} k<=4 within 4SE", format_f64(a)));
        for k in 1..=4u32 {
            let seed = trial_seed(opts.seed, (Suite::Moments.id() << 32) | (ai as u64 * 8 + k as u64));
            let est = mc_mean(
                samples,
                seed,
                || [Complex64::new(0.0, 0.0)],
                |w, rng| {
                    sample_into(MeasureKind::NuAlpha(a), rng, w);
                    w[0].norm_sqr().powi(k as i32)
                },
            )?;
            s.record(4.0 * est.standard_error - (est.value - (k as f64 + 1.0).powf(-a)).abs());
        }
        props.push(q);
        props.push(s);
    }
    Ok(SuiteReport {
        suite: Suite::Moments,
        seed: opts.seed,
        parameters: format!("samples={samples} alphas={}", list(&alphas)),
        properties: props,
    })
}

/// `||m f||_{D_alpha} <= (sum |m_n|) ||f||_{D_alpha}`.
fn multiplier(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(50);
    let alphas = alphas(opts);
    let horizon = 1u64 << 12;
    let rows = run_trials(opts.seed, Suite::Multiplier, trials, |_, rng| {
        let m = random_fixture(rng, 8, 4);
        let f = random_fixture(rng, 64, 10);
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let constant = DirichletPolynomial::monomial(1, c, 1);
        let mut out = Vec::new();
        for &a in &alphas {
            let scale = 1e-12 * (1.0 + norm_dalpha(&f, a) * m.l1_norm());
            out.push(scale - multiplier_defect(&m, &f, a, horizon, m.l1_norm()));
            out.push(scale - multiplier_defect(&f, &f, a, horizon, f.l1_norm()));
            out.push(1e-12 * (1.0 + norm_dalpha(&f, a)) - multiplier_defect(&constant, &f, a, horizon, c.norm()).abs());
        }
        Ok(out)
    })?;
    let mut props = Vec::new();
    for &a in &alphas {
        let a = format_f64(a);
        props.push(PropertyOutcome::new(format!("l1 multiplier bound alpha={a}")));
        props.push(PropertyOutcome::new(format!("self-multiplier bound alpha={a}")));
        props.push(PropertyOutcome::new(format!("constant multiplier exact alpha={a}")));
    }
    for row in rows {
        for (p, m) in props.iter_mut().zip(row) {
            p.record(m);
        }
    }
    Ok(SuiteReport {
        suite: Suite::Multiplier,
        seed: opts.seed,
        parameters: format!("trials={trials} horizon={horizon} alphas={}", list(&alphas)),
        properties: props,
    })
}

/// For `c0 = 0` symbols, reports `sum |b_n|^2 / d(n)^alpha` over the
/// half-plane norm bound at exponents below `2^alpha - 1`. Informational:
/// the margin is `1 - ratio` and a negative value is evidence, not a failure.
fn beta_search(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(20);
    let alphas = alphas(opts);
    let fractions = [0.25, 0.5, 0.75, 1.0];
    let quad = QuadratureSpec::default();
    let rows = run_trials(opts.seed, Suite::BetaSearch, trials, |_, rng| {
        let f = random_fixture(rng, 16, 5);
        let sym = make_safe_symbol(0, SymbolBudget::default(), rng)?;
        let g = compose(&f, &sym, DEFAULT_WORK_HORIZON);
        let mut out = Vec::new();
        for &a in &alphas {
            let lhs = norm_dalpha(&g, a).powi(2);
            for &fr in &fractions {
                let beta = fr * (2f64.powf(a) - 1.0);
                let (_, rhs) = omega_pull_bound(&f, &sym, beta, 1, quad)?;
                out.push(1.0 - lhs / rhs);
            }
        }
        Ok(out)
    })?;
    let mut props = Vec::new();
    for &a in &alphas {
        for &fr in &fractions {
            props.push(PropertyOutcome::info(format!(
                "1 - D_alpha ratio alpha={} beta={}*(2^alpha-1)",
                format_f64(a),
                format_f64(fr)
            )));
        }
    }
    for row in rows {
        for (p, m) in props.iter_mut().zip(row) {
            p.record(m);
        }
    }
    Ok(SuiteReport {
        suite: Suite::BetaSearch,
        seed: opts.seed,
        parameters: format!("trials={trials} alphas={}", list(&alphas)),
        properties: props,
    })
}

/// A row of the divisor-sum asymptotics table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRow {
    pub x: u64,
    pub sum: f64,
    /// `S(x) / (x (ln x)^{2^alpha - 1})`.
    pub ratio: f64,
}

/// `S(x) = sum_{n <= x} d(n)^alpha` at each `x`, with the least-squares slope
/// of `ln(S/x)` against `ln ln x`.
pub fn asymptotic_table(alpha: f64, xs: &[u64]) -> Result<(Vec<AsymptoticRow>, f64)> {
    if xs.is_empty() {
        return Err(BohrError::domain("need at least one x"));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BohrError::domain("x values must be strictly ascending"));
    }
    if xs[0] < 3 {
        return Err(BohrError::domain("x must be at least 3 so that ln ln x is defined"));
    }
    if !(alpha >= 0.0) {
        return Err(BohrError::domain(format!("alpha must be nonnegative, got {alpha}")));
    }
    let beta = 2f64.powf(alpha) - 1.0;
    let rows: Vec<AsymptoticRow> = xs
        .iter()
        .map(|&x| {
            let sum = divisor_sum_alpha(x, alpha);
            let xf = x as f64;
            AsymptoticRow {
                x,
                sum,
                ratio: sum / (xf * xf.ln().powf(beta)),
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.x as f64).ln().ln(), (r.sum / r.x as f64).ln()))
        .collect();
    Ok((rows, least_squares_slope(&pts)))
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

pub fn asymptotic_csv(alpha: f64, xs: &[u64]) -> Result<String> {
    let (rows, slope) = asymptotic_table(alpha, xs)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "S", "ratio", "slope"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.x.to_string(), format_f64(r.sum), format_f64(r.ratio), format_f64(slope)])
            .map_err(csv_err)?;
    }
    finish_csv(w)
}

/// `count` draws from a product measure on `dimension` coordinates, one row
/// per coordinate. All draws come from stream 0 of `seed`.
pub fn sample_csv(kind: MeasureKind, dimension: usize, count: usize, seed: u64) -> Result<String> {
    let spec = MeasureSpec::new(kind, dimension)?;
    if count == 0 {
        return Err(BohrError::domain("count must be at least 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let mut z = vec![Complex64::new(0.0, 0.0); spec.dimension];
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sample", "coordinate", "re", "im", "modulus"]).map_err(csv_err)?;
    for i in 0..count {
        sample_into(kind, &mut rng, &mut z);
        for (j, v) in z.iter().enumerate() {
            w.write_record([
                i.to_string(),
                j.to_string(),
                format_f64(v.re),
                format_f64(v.im),
                format_f64(v.norm()),
            ])
            .map_err(csv_err)?;
        }
    }
    finish_csv(w)
}

/// The value of a norm with its Monte Carlo metadata (zeros when exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub standard_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Largest horizon used for exact even-`p` norms.
pub const EVEN_NORM_HORIZON_CAP: u64 = 1 << 24;

/// Evaluates a norm according to `spec`.
pub fn evaluate_norm(f: &DirichletPolynomial, spec: NormSpec) -> Result<NormValue> {
    spec.validate()?;
    let exact = |value: f64| NormValue {
        value,
        standard_error: 0.0,
        samples: 0,
        seed: 0,
    };
    match (spec.space, spec.strategy) {
        (Space::Dalpha(a), _) => Ok(exact(norm_dalpha(f, a))),
        (Space::HbetaOmega(b), _) => Ok(exact(norm_hbeta_omega(f, b))),
        (Space::McCarthy(a), _) => Ok(exact(norm_mccarthy(f, a))),
        (Space::Hp(p) | Space::Ap(p), Strategy::Exact) => {
            let k = (p / 2.0) as u32;
            let horizon = f
                .max_index()
                .unwrap_or(1)
                .checked_pow(k)
                .filter(|&h| h <= EVEN_NORM_HORIZON_CAP)
                .ok_or_else(|| {
                    BohrError::domain(format!(
                        "f^{k} would exceed horizon {EVEN_NORM_HORIZON_CAP}; use Monte Carlo"
                    ))
                })?;
            let v = if matches!(spec.space, Space::Hp(_)) {
                norm_even_hp(f, p as u32, horizon)?
            } else {
                norm_even_ap(f, p as u32, horizon)?
            };
            Ok(exact(v.value))
        }
        (Space::Hp(_) | Space::Ap(_), Strategy::MonteCarlo { .. }) => {
            let e = crate::spaces::mc_norm_spec(f, spec)?;
            Ok(NormValue {
                value: e.value,
                standard_error: e.standard_error,
                samples: e.samples,
                seed: e.seed,
            })
        }
        (Space::HalfPlaneD(b), Strategy::Quadrature { order }) => {
            let quad = QuadratureSpec::new(order, 8 * order)?;
            Ok(exact(crate::halfplane::halfplane_bergman_norm(f, b, quad)?))
        }
        (space, strategy) => Err(BohrError::domain(format!("{strategy:?} is not available for {space:?}"))),
    }
}

fn space_label(space: Space) -> (&'static str, String) {
    match space {
        Space::Dalpha(a) => ("Dalpha", format!("alpha={}", format_f64(a))),
        Space::HbetaOmega(b) => ("HbetaOmega", format!("beta={}", format_f64(b))),
        Space::McCarthy(a) => ("McCarthy", format!("alpha={}", format_f64(a))),
        Space::Hp(p) => ("Hp", format!("p={}", format_f64(p))),
        Space::Ap(p) => ("Ap", format!("p={}", format_f64(p))),
        Space::HalfPlaneD(b) => ("HalfPlaneD", format!("beta={}", format_f64(b))),
    }
}

fn strategy_label(s: Strategy) -> String {
    match s {
        Strategy::Exact => "exact".into(),
        Strategy::Quadrature { order } => format!("quadrature:{order}"),
        Strategy::MonteCarlo { .. } => "montecarlo".into(),
    }
}

/// CSV with one row per spec: `space,params,strategy,value,stderr,samples,seed`.
pub fn norm_csv(f: &DirichletPolynomial, specs: &[NormSpec], seed: u64) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["space", "params", "strategy", "value", "stderr", "samples", "seed"])
        .map_err(csv_err)?;
    for &spec in specs {
        let v = evaluate_norm(f, spec)?;
        let (name, params) = space_label(spec.space);
        let row_seed = if let Strategy::MonteCarlo { seed, .. } = spec.strategy { seed } else { seed };
        w.write_record([
            name.to_string(),
            params,
            strategy_label(spec.strategy),
            format_f64(v.value),
            format_f64(v.standard_error),
            v.samples.to_string(),
            row_seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

fn csv_err(e: csv::Error) -> BohrError {
    BohrError::Io(e.to_string())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| BohrError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| BohrError::Io(e.to_string()))
}

/// `d(n)` as exposed to callers that only have an index.
pub fn divisor_count_of(n: u64) -> Result<u64> {
    divisor_count(n)
}
