//! Truncated ordinary Dirichlet series `f(s) = sum_{n <= N} a_n n^{-s}`.
//!
//! Every value carries an explicit horizon `N`; no operation grows a horizon
//! on its own. Coefficients are kept in canonical sparse form: indices in
//! `1..=N`, exact zeros removed. Products are Dirichlet convolutions
//! `(f g)_n = sum_{de = n} a_d b_e`, which is what makes `exp` exact under
//! truncation: the `k`-th convolution power of a series without constant term
//! is supported on indices `>= 2^k`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::arith::{char_eval, CharacterPoint};
use crate::compensated::ComplexSum;
use crate::error::{BohrError, Result};
use crate::textfmt::format_f64;

/// Default cap on the horizon of parsed series.
pub const DEFAULT_MAX_HORIZON: u64 = 1 << 20;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A point `s = sigma + i t` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub const fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    /// Whether the point lies in the open half-plane `Re s > theta`.
    pub fn in_half_plane(self, theta: f64) -> bool {
        self.sigma > theta
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

/// A Dirichlet polynomial truncated at an explicit horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPolynomial {
    horizon: u64,
    coeffs: BTreeMap<u64, Complex64>,
}

impl DirichletPolynomial {
    /// The zero series.
    pub fn zero(horizon: u64) -> Self {
        assert!(horizon >= 1, "horizon must be at least 1");
        Self {
            horizon,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit series `1`.
    pub fn one(horizon: u64) -> Self {
        Self::monomial(1, ONE, horizon)
    }

    /// `c n^{-s}`; the zero series if `n > horizon` or `c == 0`.
    pub fn monomial(n: u64, c: Complex64, horizon: u64) -> Self {
        assert!(n >= 1, "indices start at 1");
        let mut out = Self::zero(horizon);
        if n <= horizon && c != Complex64::new(0.0, 0.0) {
            out.coeffs.insert(n, c);
        }
        out
    }

    /// Builds a series from `(n, a_n)` pairs. Repeated indices are summed.
    pub fn from_terms<I>(horizon: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        if horizon == 0 {
            return Err(BohrError::domain("horizon must be at least 1"));
        }
        let mut acc: BTreeMap<u64, ComplexSum> = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 || n > horizon {
                return Err(BohrError::domain(format!(
                    "index {n} outside 1..={horizon}"
                )));
            }
            acc.entry(n).or_default().add(c);
        }
        Ok(Self::from_sums(horizon, acc))
    }

    pub(crate) fn from_sums(horizon: u64, acc: BTreeMap<u64, ComplexSum>) -> Self {
        let coeffs = acc
            .into_iter()
            .map(|(n, s)| (n, s.value()))
            .filter(|(_, c)| !is_zero(*c))
            .collect();
        Self { horizon, coeffs }
    }

    fn from_map(horizon: u64, mut coeffs: BTreeMap<u64, Complex64>) -> Self {
        coeffs.retain(|&n, c| n <= horizon && !is_zero(*c));
        Self { horizon, coeffs }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Coefficient at `n` (zero when absent).
    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    /// The constant term `a_1`.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(1)
    }

    /// Nonzero terms in ascending index order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest index carrying a nonzero coefficient.
    pub fn max_index(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Same coefficients under a different horizon; indices above it are dropped.
    pub fn with_horizon(&self, horizon: u64) -> Self {
        assert!(horizon >= 1, "horizon must be at least 1");
        Self::from_map(horizon, self.coeffs.clone())
    }

    /// Drops every index above `horizon` (which also becomes the new horizon).
    pub fn truncate(&self, horizon: u64) -> Self {
        self.with_horizon(horizon.min(self.horizon))
    }

    /// The series with its constant term removed.
    pub fn tail(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&1);
        out
    }

    /// Coefficientwise sum; the horizon is the smaller of the two.
    pub fn add(&self, other: &Self) -> Self {
        let horizon = self.horizon.min(other.horizon);
        let mut acc: BTreeMap<u64, ComplexSum> = BTreeMap::new();
        for (n, c) in self.iter().chain(other.iter()) {
            if n <= horizon {
                acc.entry(n).or_default().add(c);
            }
        }
        Self::from_sums(horizon, acc)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_map(
            self.horizon,
            self.coeffs.iter().map(|(&n, &a)| (n, a * c)).collect(),
        )
    }

    /// Dirichlet convolution truncated at `horizon`.
    pub fn convolve(&self, other: &Self, horizon: u64) -> Self {
        assert!(horizon >= 1, "horizon must be at least 1");
        let (f, g) = (&self.coeffs, &other.coeffs);
        let bound = (f.len() as u128 * g.len() as u128).min(horizon as u128);
        let dense = bound * 8 > horizon as u128 && horizon <= DENSE_LIMIT;
        let mut acc = if dense {
            Accumulator::dense(horizon)
        } else {
            Accumulator::sparse()
        };
        for (&d, &a) in f {
            if d > horizon {
                break;
            }
            let emax = horizon / d;
            for (&e, &b) in g.range(..=emax) {
                acc.add(d * e, a * b);
            }
        }
        acc.finish(horizon)
    }

    /// `k`-fold convolution power; `power(0)` is the unit series.
    pub fn power(&self, k: u32, horizon: u64) -> Self {
        let mut result = Self::one(horizon);
        let mut base = self.truncate(horizon).with_horizon(horizon);
        let mut k = k;
        // Square-and-multiply keeps the number of convolutions logarithmic.
        while k > 0 {
            if k & 1 == 1 {
                result = result.convolve(&base, horizon);
            }
            k >>= 1;
            if k > 0 {
                base = base.convolve(&base, horizon);
            }
        }
        result
    }

    /// Scaled convolution powers `tail^{*k} / k!` for `k = 0, 1, ...` while
    /// `2^k <= horizon`. The argument must have no constant term.
    pub fn exp_terms(tail: &Self, horizon: u64) -> Vec<Self> {
        debug_assert!(is_zero(tail.constant_term()));
        let tail = tail.truncate(horizon);
        let mut terms = vec![Self::one(horizon)];
        let mut k = 1u32;
        while k < 64 && (1u64 << k) <= horizon {
            let prev = terms.last().expect("non-empty");
            if prev.is_zero() {
                break;
            }
            let next = prev
                .convolve(&tail, horizon)
                .scale(Complex64::new(1.0 / k as f64, 0.0));
            terms.push(next);
            k += 1;
        }
        terms
    }

    /// `sum_k lambda^k terms[k]`, summed per index in increasing `k`.
    pub(crate) fn combine_terms(terms: &[Self], lambda: Complex64, horizon: u64) -> Self {
        let mut acc: BTreeMap<u64, ComplexSum> = BTreeMap::new();
        let mut lk = ONE;
        for term in terms {
            for (n, c) in term.iter() {
                if n <= horizon {
                    acc.entry(n).or_default().add(c * lk);
                }
            }
            lk *= lambda;
        }
        Self::from_sums(horizon, acc)
    }

    /// Formal exponential `exp(f)` truncated at `horizon`.
    ///
    /// With `f = a_1 + tail`, the result is `e^{a_1} sum_k tail^{*k} / k!`;
    /// terms with `2^k > horizon` vanish identically below the horizon, so
    /// the truncation is exact.
    pub fn exp(&self, horizon: u64) -> Self {
        let terms = Self::exp_terms(&self.tail(), horizon);
        Self::combine_terms(&terms, ONE, horizon).scale(self.constant_term().exp())
    }

    /// Formal logarithm, inverse of [`exp`](Self::exp); principal branch for
    /// the constant term.
    pub fn log(&self, horizon: u64) -> Result<Self> {
        let a1 = self.constant_term();
        if is_zero(a1) {
            return Err(BohrError::domain("log needs a nonzero constant term"));
        }
        let normalized = self.truncate(horizon).scale(a1.inv());
        let one = Self::one(horizon);
        let mut g = Self::zero(horizon);
        // Each step squares the error, whose support starts at 2, 4, 16, ...
        let mut reach: u128 = 2;
        let mut steps = 0;
        while reach <= horizon as u128 || steps < 2 {
            let r = normalized.convolve(&g.scale(-ONE).exp(horizon), horizon);
            g = g.add(&r.sub(&one).tail());
            reach = reach.saturating_mul(reach);
            steps += 1;
        }
        Ok(g.add(&Self::monomial(1, a1.ln(), horizon)))
    }

    /// `sum a_n n^{-s}` in ascending index order with compensated summation.
    pub fn evaluate(&self, s: ComplexPoint) -> Complex64 {
        self.evaluate_complex(s.to_complex())
    }

    pub fn evaluate_complex(&self, s: Complex64) -> Complex64 {
        self.iter()
            .map(|(n, a)| a * (-s * (n as f64).ln()).exp())
            .collect::<ComplexSum>()
            .value()
    }

    /// `f(s + delta)`: `a_n -> a_n n^{-delta}`.
    pub fn shift(&self, delta: Complex64) -> Self {
        Self::from_map(
            self.horizon,
            self.coeffs
                .iter()
                .map(|(&n, &a)| (n, a * (-delta * (n as f64).ln()).exp()))
                .collect(),
        )
    }

    /// Twisted series `a_n -> a_n chi(n)`.
    pub fn twist(&self, chi: &CharacterPoint) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (n, a) in self.iter() {
            out.insert(n, a * char_eval(chi, n)?);
        }
        Ok(Self::from_map(self.horizon, out))
    }

    /// `f(c0 s)`: coefficient `a_m` moves to index `m^c0`, dropped when that
    /// exceeds `horizon`.
    pub fn stretch(&self, c0: u32, horizon: u64) -> Result<Self> {
        if c0 == 0 {
            return Err(BohrError::domain("stretch factor must be at least 1"));
        }
        let mut out = BTreeMap::new();
        for (m, a) in self.iter() {
            match m.checked_pow(c0) {
                Some(n) if n <= horizon => {
                    out.insert(n, a);
                }
                _ => {}
            }
        }
        Ok(Self::from_map(horizon, out))
    }

    /// Sum of `|a_n|`; an upper bound for `|f|` on the closed right half-plane.
    pub fn l1_norm(&self) -> f64 {
        self.iter().map(|(_, a)| a.norm()).sum()
    }

    /// Parses the line format `n re im` (see [`write`](Self::write)).
    pub fn parse(text: &str, max_horizon: u64) -> Result<Self> {
        Self::parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)), max_horizon)
    }

    pub(crate) fn parse_lines<'a, I>(lines: I, max_horizon: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, &'a str)>,
    {
        let mut terms = Vec::new();
        for (lineno, raw) in lines {
            let line = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() != 3 {
                return Err(BohrError::parse(
                    lineno,
                    format!("expected `n re im`, found {} fields", fields.len()),
                ));
            }
            let n: u64 = fields[0]
                .parse()
                .map_err(|_| BohrError::parse(lineno, format!("bad index `{}`", fields[0])))?;
            if n == 0 {
                return Err(BohrError::parse(lineno, "index must be at least 1"));
            }
            if n > max_horizon {
                return Err(BohrError::parse(
                    lineno,
                    format!("index {n} exceeds the maximum horizon {max_horizon}"),
                ));
            }
            let re = parse_float(fields[1], lineno)?;
            let im = parse_float(fields[2], lineno)?;
            terms.push((n, Complex64::new(re, im)));
        }
        Self::from_terms(max_horizon, terms)
    }

    /// Writes one `n re im` line per nonzero coefficient, ascending, with
    /// shortest round-trip floats.
    pub fn write(&self) -> String {
        let mut out = String::new();
        for (n, a) in self.iter() {
            let _ = writeln!(out, "{n} {} {}", format_f64(a.re), format_f64(a.im));
        }
        out
    }
}

fn parse_float(field: &str, lineno: usize) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(BohrError::parse(lineno, format!("bad number `{field}`"))),
    }
}

#[inline]
fn is_zero(c: Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

// Above this horizon convolutions always accumulate sparsely.
const DENSE_LIMIT: u64 = 1 << 22;

enum Accumulator {
    Dense(Vec<ComplexSum>),
    Sparse(BTreeMap<u64, ComplexSum>),
}

impl Accumulator {
    fn dense(horizon: u64) -> Self {
        Accumulator::Dense(vec![ComplexSum::new(); horizon as usize + 1])
    }

    fn sparse() -> Self {
        Accumulator::Sparse(BTreeMap::new())
    }

    #[inline]
    fn add(&mut self, n: u64, z: Complex64) {
        match self {
            Accumulator::Dense(v) => v[n as usize].add(z),
            Accumulator::Sparse(m) => m.entry(n).or_default().add(z),
        }
    }

    fn finish(self, horizon: u64) -> DirichletPolynomial {
        match self {
            Accumulator::Dense(v) => {
                let coeffs = v
                    .into_iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, s)| (n as u64, s.value()))
                    .filter(|(_, c)| !is_zero(*c))
                    .collect();
                DirichletPolynomial { horizon, coeffs }
            }
            Accumulator::Sparse(m) => DirichletPolynomial::from_sums(horizon, m),
        }
    }
}
