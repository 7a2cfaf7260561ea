//! Integer-side number theory behind the Bohr lift: sieving, factorization,
//! the divisor function, and completely multiplicative characters built from
//! points of the closed polydisc.
//!
//! An index `n = p_1^k_1 p_2^k_2 ...` is identified with its exponent vector
//! `(k_1, k_2, ...)`, where `p_j` is the `j`-th prime. A [`CharacterPoint`]
//! attaches one complex number of modulus at most one to each prime and
//! evaluates to `chi(n) = prod chi_j^k_j`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::compensated::NeumaierSum;
use crate::error::{BohrError, Result};

/// Size of the shared smallest-prime-factor table. Indices up to this bound
/// factor by table lookup; larger ones fall back to trial division.
pub const SIEVE_LIMIT: u64 = 1 << 20;

/// Smallest-prime-factor table together with the ascending list of primes.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl Sieve {
    /// Linear sieve on `[0, limit]`.
    pub fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i] as u64;
            for &p in &primes {
                let ip = i as u64 * p;
                if p > si || ip > limit as u64 {
                    break;
                }
                spf[ip as usize] = p as u32;
            }
        }
        Sieve { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Smallest prime factor of `2 <= n <= limit`.
    #[inline]
    pub fn smallest_factor(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Zero-based position of the prime `p` in the prime sequence, if `p` is a
    /// prime within the table.
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }
}

/// The process-wide sieve on `[0, SIEVE_LIMIT]`, built on first use.
pub fn shared_sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(SIEVE_LIMIT))
}

/// All primes `<= limit` in ascending order; empty when `limit < 2`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    if limit <= SIEVE_LIMIT {
        let primes = shared_sieve().primes();
        let end = primes.partition_point(|&p| p <= limit);
        return primes[..end].to_vec();
    }
    Sieve::new(limit).primes
}

/// The `j`-th prime (zero-based), for primes inside the shared table.
pub fn nth_prime(j: usize) -> Option<u64> {
    shared_sieve().primes().get(j).copied()
}

/// Prime-exponent decomposition `[(p, k), ...]` with primes ascending.
/// The integer 1 is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// The represented integer; `None` on `u64` overflow.
    pub fn value(&self) -> Option<u64> {
        self.0.iter().try_fold(1u64, |acc, &(p, k)| {
            p.checked_pow(k).and_then(|pk| acc.checked_mul(pk))
        })
    }

    /// `d(n) = prod (k_j + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.0.iter().map(|&(_, k)| k as u64 + 1).product()
    }

    /// `Omega(n) = sum k_j`, prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    /// Factorization of `n^c`.
    pub fn pow(&self, c: u32) -> Factorization {
        Factorization(self.0.iter().map(|&(p, k)| (p, k * c)).collect())
    }
}

/// Factor `n >= 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(BohrError::domain("cannot factor 0"));
    }
    let sieve = shared_sieve();
    let mut pairs = Vec::new();
    let mut m = n;
    if m > sieve.limit() {
        m = strip_by_trial_division(m, sieve, &mut pairs);
    }
    while m > 1 {
        let p = sieve.smallest_factor(m);
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        pairs.push((p, k));
    }
    pairs.sort_unstable();
    Ok(Factorization(pairs))
}

// Removes prime factors until the cofactor fits in the sieve table or is
// itself prime (in which case it is pushed and 1 is returned).
fn strip_by_trial_division(mut m: u64, sieve: &Sieve, pairs: &mut Vec<(u64, u32)>) -> u64 {
    let mut candidates = sieve.primes().iter().copied();
    let mut next_odd = 0u64;
    loop {
        if m <= sieve.limit() {
            return m;
        }
        let p = match candidates.next() {
            Some(p) => p,
            None => {
                // Beyond the table: plain odd trial divisors.
                if next_odd == 0 {
                    next_odd = sieve.limit() | 1;
                }
                let d = next_odd;
                next_odd += 2;
                d
            }
        };
        if p.saturating_mul(p) > m {
            pairs.push((m, 1));
            return 1;
        }
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            pairs.push((p, k));
        }
    }
}

/// Number of divisors of `n >= 1`.
pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(factorize(n)?.divisor_count())
}

/// Number of prime factors of `n >= 1` with multiplicity.
pub fn big_omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.big_omega())
}

/// `d^alpha`, exact for integer `alpha` in `0..=3`, otherwise `exp(alpha ln d)`.
pub fn divisor_weight(d: u64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 1.0;
    }
    if alpha == 1.0 {
        return d as f64;
    }
    if alpha == 2.0 {
        return (d as u128 * d as u128) as f64;
    }
    if alpha == 3.0 {
        return (d as u128 * d as u128 * d as u128) as f64;
    }
    (alpha * (d as f64).ln()).exp()
}

/// `d(n)` for every `n <= x` by a linear sieve tracking the exponent of the
/// smallest prime factor. Entry 0 is unused and set to 0.
pub fn divisor_counts_upto(x: u64) -> Vec<u32> {
    let x = x as usize;
    let mut d = vec![0u32; x + 1];
    if x >= 1 {
        d[1] = 1;
    }
    // exponent of the smallest prime in i
    let mut e = vec![0u32; x + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=x {
        if d[i] == 0 {
            primes.push(i);
            d[i] = 2;
            e[i] = 1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > x {
                break;
            }
            if i % p == 0 {
                e[ip] = e[i] + 1;
                d[ip] = d[i] / (e[i] + 1) * (e[i] + 2);
                break;
            }
            e[ip] = 1;
            d[ip] = d[i] * 2;
        }
    }
    d
}

/// `sum_{n <= x} d(n)^alpha`.
pub fn divisor_sum_alpha(x: u64, alpha: f64) -> f64 {
    let d = divisor_counts_upto(x);
    let exact_power = [0.0, 1.0, 2.0, 3.0].iter().position(|&a| a == alpha);
    match exact_power {
        Some(k) => {
            let total: u128 = d
                .iter()
                .skip(1)
                .map(|&dn| (dn as u128).pow(k as u32))
                .sum();
            total as f64
        }
        None => d
            .iter()
            .skip(1)
            .map(|&dn| divisor_weight(dn as u64, alpha))
            .collect::<NeumaierSum>()
            .value(),
    }
}

/// Slack allowed on `|chi_j| <= 1` for points produced by floating-point
/// rotations of unimodular values.
const MODULUS_SLACK: f64 = 1e-12;

/// A point of the closed polydisc, one coordinate per prime (2, 3, 5, ...),
/// defining the completely multiplicative function `chi(n) = prod chi_j^k_j`.
///
/// Only finitely many coordinates are stored. For a series truncated at
/// horizon `N` the coordinates of primes `<= N` are all that is ever read.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterPoint {
    values: Vec<Complex64>,
}

impl CharacterPoint {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some((j, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.norm() <= 1.0 + MODULUS_SLACK))
        {
            return Err(BohrError::domain(format!(
                "coordinate {j} has modulus {} > 1",
                v.norm()
            )));
        }
        Ok(Self { values })
    }

    /// The point `(1, 1, ..., 1)` with `len` coordinates.
    pub fn ones(len: usize) -> Self {
        Self {
            values: vec![Complex64::new(1.0, 0.0); len],
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn from_values_unchecked(values: Vec<Complex64>) -> Self {
        Self { values }
    }
}

/// Number of coordinates needed to cover every prime `<= horizon`.
pub fn coordinates_for_horizon(horizon: u64) -> usize {
    let primes = shared_sieve().primes();
    primes.partition_point(|&p| p <= horizon)
}

/// `chi(n)` evaluated from a factorization.
pub fn char_eval_factored(chi: &CharacterPoint, fact: &Factorization) -> Result<Complex64> {
    let sieve = shared_sieve();
    let mut acc = Complex64::new(1.0, 0.0);
    for &(p, k) in fact.pairs() {
        let j = sieve.prime_index(p).ok_or(BohrError::Coverage {
            prime: p,
            needed: usize::MAX,
            len: chi.len(),
        })?;
        let v = chi.values.get(j).ok_or(BohrError::Coverage {
            prime: p,
            needed: j,
            len: chi.len(),
        })?;
        acc *= v.powu(k);
    }
    Ok(acc)
}

/// `chi(n)`; completely multiplicative in `n`.
pub fn char_eval(chi: &CharacterPoint, n: u64) -> Result<Complex64> {
    char_eval_factored(chi, &factorize(n)?)
}

/// Coordinatewise power `chi^c0`, so that `chi^c0(n) = chi(n^c0)`.
pub fn char_power(chi: &CharacterPoint, c0: u32) -> CharacterPoint {
    CharacterPoint::from_values_unchecked(chi.values.iter().map(|v| v.powu(c0)).collect())
}

/// The Kronecker flow: coordinate `j` rotated by `p_j^{-it}`.
pub fn kronecker_flow(chi: &CharacterPoint, t: f64) -> CharacterPoint {
    let primes = shared_sieve().primes();
    let values = chi
        .values
        .iter()
        .zip(primes)
        .map(|(v, &p)| v * Complex64::from_polar(1.0, -t * (p as f64).ln()))
        .collect();
    CharacterPoint::from_values_unchecked(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn sieve_small_cases() {
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2), vec![2]);
        assert!(sieve_primes(1).is_empty());
        assert!(sieve_primes(0).is_empty());
    }

    #[test]
    fn sieve_matches_trial_division_to_100() {
        let oracle: Vec<u64> = (2..=100).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(oracle.len(), 25);
        assert_eq!(sieve_primes(100), oracle);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert!(factorize(1).unwrap().is_one());
        let primorial: Vec<(u64, u32)> =
            [2, 3, 5, 7, 11, 13, 17, 19].iter().map(|&p| (p, 1)).collect();
        assert_eq!(factorize(9_699_690).unwrap().pairs(), primorial.as_slice());
        assert!(matches!(factorize(0), Err(BohrError::Domain(_))));
    }

    #[test]
    fn factorize_above_the_table() {
        // 2^20 + 7 = 1048583 is prime; 1048583 * 3 exercises the fallback.
        let big = 1_048_583u64;
        assert!(trial_division_is_prime(big));
        assert_eq!(factorize(big).unwrap().pairs(), &[(big, 1)]);
        assert_eq!(factorize(3 * big).unwrap().pairs(), &[(3, 1), (big, 1)]);
        let n = 2u64.pow(40) * 3u64.pow(5);
        assert_eq!(factorize(n).unwrap().pairs(), &[(2, 40), (3, 5)]);
        let pq = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(pq).unwrap().pairs(), &[(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn divisor_function_examples() {
        assert_eq!(divisor_count(12).unwrap(), 6);
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(divisor_count(1 << 10).unwrap(), 11);
        assert_eq!(big_omega(12).unwrap(), 3);
        assert_eq!(big_omega(1).unwrap(), 0);
        for p in sieve_primes(200) {
            assert_eq!(big_omega(p).unwrap(), 1);
        }
    }

    #[test]
    fn divisor_sieve_matches_brute_force_prefix() {
        let d = divisor_counts_upto(10_000);
        for n in 1..=10_000u64 {
            let brute = (1..=n).filter(|k| n % k == 0).count() as u32;
            assert_eq!(d[n as usize], brute, "n = {n}");
        }
    }

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum_alpha(4, 1.0), 8.0);
        assert_eq!(divisor_sum_alpha(4, 0.0), 4.0);
        // Dirichlet hyperbola identity sum d(n) = sum floor(x / k) as an
        // independent check at x = 10^6.
        let x = 1_000_000u64;
        let hyperbola: u64 = (1..=x).map(|k| x / k).sum();
        assert_eq!(divisor_sum_alpha(x, 1.0), hyperbola as f64);
    }

    #[test]
    fn divisor_weight_fast_and_slow_paths_agree() {
        for d in 1..50u64 {
            for a in [0.0, 1.0, 2.0, 3.0] {
                let slow = (a * (d as f64).ln()).exp();
                assert!((divisor_weight(d, a) - slow).abs() <= 1e-12 * slow);
            }
        }
    }

    #[test]
    fn character_examples() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let chi = CharacterPoint::new(vec![i, one]).unwrap();
        assert_eq!(char_eval(&chi, 12).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(char_eval(&chi, 1).unwrap(), one);
        let half = CharacterPoint::new(vec![Complex64::new(0.5, 0.0); 2]).unwrap();
        assert_eq!(char_eval(&half, 6).unwrap(), Complex64::new(0.25, 0.0));
        assert!(matches!(
            char_eval(&half, 5),
            Err(BohrError::Coverage { prime: 5, .. })
        ));
        assert!(CharacterPoint::new(vec![Complex64::new(1.5, 0.0)]).is_err());
    }

    #[test]
    fn character_power_examples() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let chi = CharacterPoint::new(vec![i, one]).unwrap();
        assert_eq!(
            char_power(&chi, 2).values(),
            &[Complex64::new(-1.0, 0.0), one]
        );
        assert_eq!(char_power(&chi, 0), CharacterPoint::ones(2));
        let c = CharacterPoint::new(vec![Complex64::new(0.5, 0.0), Complex64::new(1.0 / 3.0, 0.0)])
            .unwrap();
        let c3 = char_power(&c, 3);
        assert!((c3.values()[0] - Complex64::new(0.125, 0.0)).norm() < 1e-15);
        assert!((c3.values()[1] - Complex64::new(1.0 / 27.0, 0.0)).norm() < 1e-15);
    }

    fn strip(mut m: u64, p: u64) -> u64 {
        while m % p == 0 {
            m /= p;
        }
        m
    }

    #[test]
    fn kronecker_flow_rotates() {
        let chi = CharacterPoint::ones(2);
        assert_eq!(kronecker_flow(&chi, 0.0), chi);
        let t = 1.7;
        let flowed = kronecker_flow(&chi, t);
        for (v, p) in flowed.values().iter().zip([2.0f64, 3.0]) {
            assert!((v.norm() - 1.0).abs() < 1e-15);
            assert!((v - Complex64::from_polar(1.0, -t * p.ln())).norm() < 1e-15);
        }
        let chi = CharacterPoint::new(vec![
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.5, 0.1),
            Complex64::new(0.0, 0.9),
        ])
        .unwrap();
        for n in (1..=30u64).filter(|n| [2, 3, 5].iter().fold(*n, |m, p| strip(m, *p)) == 1) {
            let lhs = char_eval(&kronecker_flow(&chi, t), n).unwrap();
            let rhs = char_eval(&chi, n).unwrap() * Complex64::from_polar(1.0, -t * (n as f64).ln());
            assert!((lhs - rhs).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn coordinates_cover_primes() {
        assert_eq!(coordinates_for_horizon(1), 0);
        assert_eq!(coordinates_for_horizon(10), 4);
        assert_eq!(coordinates_for_horizon(11), 5);
    }
}
