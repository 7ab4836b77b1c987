//! Primes, prime powers, growth-conditioned prime chains and the exact
//! good-integer census behind the three-prime decomposition of `r - 1`.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

/// Default sieve bound.
pub const DEFAULT_SIEVE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimesError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Sieve of Eratosthenes over `0..=limit`.
#[derive(Debug, Clone)]
pub struct Sieve {
    composite: Vec<bool>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let mut composite = vec![false; limit + 1];
        composite[0] = true;
        if limit >= 1 {
            composite[1] = true;
        }
        let mut i = 2;
        while i * i <= limit {
            if !composite[i] {
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        Sieve { composite }
    }

    pub fn limit(&self) -> usize {
        self.composite.len() - 1
    }

    /// Exact primality; falls back to trial division above the sieve bound.
    pub fn is_prime(&self, n: u64) -> bool {
        match self.composite.get(n as usize) {
            Some(&c) if n <= self.limit() as u64 => !c,
            _ => is_prime_trial(n),
        }
    }

    /// Number of primes in `[1, x]`.
    pub fn count_upto(&self, x: u64) -> usize {
        (2..=x).filter(|&n| self.is_prime(n)).count()
    }

    pub fn primes_in(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        (lo..=hi).filter(move |&n| self.is_prime(n))
    }
}

/// Shared default sieve, built on first use.
pub fn default_sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(DEFAULT_SIEVE_LIMIT))
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    default_sieve().is_prime(n)
}

/// Factorisation summary of `n` as a prime power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePowerFact {
    pub n: u64,
    /// Smallest prime factor, or 0 when `n < 2`.
    pub base: u64,
    /// Multiplicity of `base` in `n`.
    pub exponent: u32,
    pub is_prime_power: bool,
}

pub fn is_prime_power(n: u64) -> PrimePowerFact {
    if n < 2 {
        return PrimePowerFact {
            n,
            base: 0,
            exponent: 0,
            is_prime_power: false,
        };
    }
    let base = smallest_prime_factor(n);
    let mut rest = n;
    let mut exponent = 0;
    while rest.is_multiple_of(base) {
        rest /= base;
        exponent += 1;
    }
    PrimePowerFact {
        n,
        base,
        exponent,
        is_prime_power: rest == 1,
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// A sequence of prime powers `p_1, ..., p_k` with
/// `p_i >= 1 + p_1 + ... + p_{i-1}` for every `i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain is empty")]
    Empty,
    #[error("chain entry {index} ({value}) is not a prime power")]
    NotAPrimePower { index: usize, value: u64 },
    #[error("chain condition violated at index {index}: {value} < 1 + {prefix_sum}")]
    ChainConditionViolated {
        index: usize,
        value: u64,
        prefix_sum: u64,
    },
}

impl ChainDecomposition {
    pub fn new(primes: Vec<u64>) -> Result<Self, ChainError> {
        if primes.is_empty() {
            return Err(ChainError::Empty);
        }
        let mut prefix = 0u64;
        for (index, &value) in primes.iter().enumerate() {
            if !is_prime_power(value).is_prime_power {
                return Err(ChainError::NotAPrimePower { index, value });
            }
            if index > 0 && value < prefix + 1 {
                return Err(ChainError::ChainConditionViolated {
                    index,
                    value,
                    prefix_sum: prefix,
                });
            }
            prefix += value;
        }
        Ok(ChainDecomposition { primes })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn k(&self) -> usize {
        self.primes.len()
    }

    /// Number of vertex classes of the hypergraph the chain builds.
    pub fn r(&self) -> u64 {
        1 + self.primes.iter().sum::<u64>()
    }

    /// Defect `k - 1`: the built hypergraph has cover number at least
    /// `r - 1 - d`.
    pub fn d(&self) -> usize {
        self.primes.len() - 1
    }
}

impl fmt::Display for ChainDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Lexicographically least chain of length `k` with `sum = r - 1`, or
/// `None` after exhausting the search space.
pub fn find_chain(r: u64, k: usize, allow_prime_powers: bool) -> Option<ChainDecomposition> {
    if r < 3 || k == 0 {
        return None;
    }
    let admissible = |n: u64| {
        if allow_prime_powers {
            is_prime_power(n).is_prime_power
        } else {
            is_prime(n)
        }
    };
    let mut chain = Vec::with_capacity(k);
    if search_chain(r - 1, k, 0, &mut chain, &admissible) {
        Some(ChainDecomposition::new(chain).expect("search yields valid chains"))
    } else {
        None
    }
}

/// Smallest possible sum of `slots` further entries after a prefix summing
/// to `prefix`: each entry is at least one more than everything before it.
fn min_tail(prefix: u64, slots: usize) -> u64 {
    let mut total = 0;
    let mut running = prefix;
    for _ in 0..slots {
        let next = running + 1;
        total += next;
        running += next;
    }
    total
}

fn search_chain(
    remaining: u64,
    slots: usize,
    prefix: u64,
    chain: &mut Vec<u64>,
    admissible: &dyn Fn(u64) -> bool,
) -> bool {
    if slots == 0 {
        return remaining == 0;
    }
    let lo = if chain.is_empty() { 2 } else { prefix + 1 };
    if slots == 1 {
        if remaining >= lo && admissible(remaining) {
            chain.push(remaining);
            return true;
        }
        return false;
    }
    let mut value = lo;
    while value <= remaining {
        if value + min_tail(prefix + value, slots - 1) > remaining {
            break;
        }
        if admissible(value) {
            chain.push(value);
            if search_chain(
                remaining - value,
                slots - 1,
                prefix + value,
                chain,
                admissible,
            ) {
                return true;
            }
            chain.pop();
        }
        value += 1;
    }
    false
}

/// Exact finite version of the good-integer count for a target odd `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodIntegerCensus {
    pub t: u64,
    /// Primes `p_3` in `(t/2, 3t/4]`.
    pub w: usize,
    /// Even integers in `[t/4, t/2)` that are not a sum of two primes.
    pub z: usize,
    /// Integers in `[t/4, t/2)` of the form `2p` with `p` prime.
    pub y: usize,
    /// Integers `t - p_3` that are a sum of two distinct primes.
    pub good: Vec<u64>,
    /// `(p_1, p_2, p_3)` for the smallest `p_3`, smallest `p_1`.
    pub witness: Option<(u64, u64, u64)>,
}

impl GoodIntegerCensus {
    /// `|good| >= w - z - y`.
    pub fn is_consistent(&self) -> bool {
        self.good.len() as i64 >= self.w as i64 - self.z as i64 - self.y as i64
    }

    pub fn lower_estimate(&self) -> i64 {
        self.w as i64 - self.z as i64 - self.y as i64
    }
}

/// Least prime `a` with `n = a + b`, `b` prime, and `a <= b` (or `a < b`
/// when `distinct`).
fn two_prime_split(sieve: &Sieve, n: u64, distinct: bool) -> Option<(u64, u64)> {
    let mut a = 2;
    while 2 * a <= n {
        let b = n - a;
        if (!distinct || a < b) && sieve.is_prime(a) && sieve.is_prime(b) {
            return Some((a, b));
        }
        a += 1;
    }
    None
}

pub fn is_sum_of_two_primes(sieve: &Sieve, n: u64) -> bool {
    two_prime_split(sieve, n, false).is_some()
}

pub fn is_sum_of_two_distinct_primes(sieve: &Sieve, n: u64) -> bool {
    two_prime_split(sieve, n, true).is_some()
}

/// Integer interval bounds for odd `t`, computed exactly with integer
/// arithmetic:
/// `(t/2, 3t/4]` is `[(t+1)/2, floor(3t/4)]`,
/// `[t/4, t/2)` is `[ceil(t/4), (t-1)/2]`.
fn census_bounds(t: u64) -> ((u64, u64), (u64, u64)) {
    let p3 = (t.div_ceil(2), 3 * t / 4);
    let target = (t.div_ceil(4), (t - 1) / 2);
    (p3, target)
}

pub fn good_census(t: u64) -> Result<GoodIntegerCensus, PrimesError> {
    good_census_with(default_sieve(), t)
}

pub fn good_census_with(sieve: &Sieve, t: u64) -> Result<GoodIntegerCensus, PrimesError> {
    if t.is_multiple_of(2) || t < 5 {
        return Err(PrimesError::PreconditionViolated(format!(
            "census target t must be odd and at least 5, got {t}"
        )));
    }
    let ((p3_lo, p3_hi), (lo, hi)) = census_bounds(t);
    let p3s: Vec<u64> = sieve.primes_in(p3_lo, p3_hi).collect();
    let w = p3s.len();
    let z = (lo..=hi)
        .filter(|n| n % 2 == 0 && !is_sum_of_two_primes(sieve, *n))
        .count();
    let y = (lo..=hi)
        .filter(|n| n % 2 == 0 && sieve.is_prime(n / 2))
        .count();
    let mut good = Vec::new();
    let mut witness = None;
    for &p3 in &p3s {
        let n = t - p3;
        if let Some((p1, p2)) = two_prime_split(sieve, n, true) {
            good.push(n);
            if witness.is_none() {
                witness = Some((p1, p2, p3));
            }
        }
    }
    good.sort_unstable();
    Ok(GoodIntegerCensus {
        t,
        w,
        z,
        y,
        good,
        witness,
    })
}

/// Three-prime chain for even `r` via the census of `t = r - 1`.
pub fn decompose_even_r(r: u64) -> Result<Option<ChainDecomposition>, PrimesError> {
    if r % 2 == 1 || r < 6 {
        return Err(PrimesError::PreconditionViolated(format!(
            "r must be even and at least 6, got {r}"
        )));
    }
    let census = good_census(r - 1)?;
    Ok(census.witness.map(|(p1, p2, p3)| {
        ChainDecomposition::new(vec![p1, p2, p3])
            .expect("census witnesses satisfy the chain condition")
    }))
}
