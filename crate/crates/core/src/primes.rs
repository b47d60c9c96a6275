//! Primality testing, sieving and the prime windows used by the witness
//! searches: P(m) = primes p with (m+1)/2 < p <= m+1, and its subset
//! P(m; k, 1) of primes congruent to 1 mod k.
//!
//! The interval boundary is always evaluated as `2p > m + 1` in integer
//! arithmetic.

use std::sync::OnceLock;

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // This base set is known to be exact for all n < 2^64.
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Sorted primes up to a fixed limit, immutable after construction.
pub struct Sieve {
    limit: u64,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        Sieve { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes p with lo <= p <= hi.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        debug_assert!(hi <= self.limit);
        let start = self.primes.partition_point(|&p| p < lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end]
    }

    pub fn count_range(&self, lo: u64, hi: u64) -> usize {
        self.range(lo, hi).len()
    }
}

const SHARED_SIEVE_LIMIT: u64 = 1 << 21;

/// Process-wide sieve cache; built once, read concurrently.
pub fn shared_sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(SHARED_SIEVE_LIMIT))
}

/// Smallest integer strictly greater than (m+1)/2, i.e. the lower end of P(m).
fn window_lo(m: u64) -> u64 {
    (m + 1) / 2 + 1
}

pub fn window_contains(m: u64, p: u64) -> bool {
    2 * p > m + 1 && p <= m + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWindow {
    pub m: u64,
    pub primes: Vec<u64>,
    pub k: Option<u64>,
    pub primes_k1: Vec<u64>,
}

fn window_primes(m: u64) -> Vec<u64> {
    let lo = window_lo(m);
    let hi = m + 1;
    let sieve = shared_sieve();
    if hi <= sieve.limit() {
        sieve.range(lo, hi).to_vec()
    } else {
        (lo..=hi).filter(|&c| is_prime(c)).collect()
    }
}

pub fn prime_window(m: u64) -> PrimeWindow {
    PrimeWindow {
        m,
        primes: window_primes(m),
        k: None,
        primes_k1: Vec::new(),
    }
}

pub fn prime_window_k1(m: u64, k: u64) -> Result<PrimeWindow> {
    if k == 2 || !is_prime(k) {
        return Err(Error::Precondition(format!("k = {k} is not an odd prime")));
    }
    let primes = window_primes(m);
    let primes_k1 = primes.iter().copied().filter(|&p| p % k == 1).collect();
    Ok(PrimeWindow {
        m,
        primes,
        k: Some(k),
        primes_k1,
    })
}

/// Smallest p in P(m) with p = residue (mod modulus) and p not excluded.
pub fn find_window_prime(
    m: u64,
    modulus: u64,
    residue: u64,
    exclusions: &[u64],
) -> Option<u64> {
    let r = residue % modulus;
    window_primes(m)
        .into_iter()
        .find(|&p| p % modulus == r && !exclusions.contains(&p))
}

/// Smallest p in P(m) with p != k and p not congruent to 1 mod k.
pub fn find_window_prime_not1modk(m: u64, k: u64) -> Option<u64> {
    window_primes(m)
        .into_iter()
        .find(|&p| p != k && p % k != 1)
}

/// Outcome of one finite-range window sweep.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub checked: u64,
    pub violations: Vec<u64>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// |P(m)| >= 2 for all m <= m_max outside {1, 3, 5, 9}.
pub fn lemma3_sweep(sieve: &Sieve, m_max: u64) -> SweepReport {
    assert!(sieve.limit() >= m_max + 1);
    let mut checked = 0;
    let mut violations = Vec::new();
    for m in 1..=m_max {
        if matches!(m, 1 | 3 | 5 | 9) {
            continue;
        }
        checked += 1;
        if sieve.count_range(window_lo(m), m + 1) < 2 {
            violations.push(m);
        }
    }
    SweepReport { checked, violations }
}

/// |P(m)| > |P(m; k, 1)| for all m with 4k <= m <= m_max (k an odd prime >= 5).
pub fn lemma4_sweep(sieve: &Sieve, k: u64, m_max: u64) -> SweepReport {
    assert!(sieve.limit() >= m_max + 1);
    assert!(k >= 5 && is_prime(k));
    let k1: Vec<u64> = sieve
        .primes()
        .iter()
        .copied()
        .filter(|&p| p % k == 1)
        .collect();
    let mut checked = 0;
    let mut violations = Vec::new();
    for m in 4 * k..=m_max {
        checked += 1;
        let total = sieve.count_range(window_lo(m), m + 1);
        let lo = window_lo(m);
        let start = k1.partition_point(|&p| p < lo);
        let end = k1.partition_point(|&p| p <= m + 1);
        if total <= end - start {
            violations.push(m);
        }
    }
    SweepReport { checked, violations }
}

/// Some p in P(m) with p = 2 (mod 3) for all 4 <= m <= m_max, m != 9.
pub fn lemma5_sweep(sieve: &Sieve, m_max: u64) -> SweepReport {
    assert!(sieve.limit() >= m_max + 1);
    let two_mod3: Vec<u64> = sieve
        .primes()
        .iter()
        .copied()
        .filter(|&p| p % 3 == 2)
        .collect();
    let mut checked = 0;
    let mut violations = Vec::new();
    for m in 4..=m_max {
        if m == 9 {
            continue;
        }
        checked += 1;
        let lo = window_lo(m);
        let start = two_mod3.partition_point(|&p| p < lo);
        if two_mod3.get(start).map_or(true, |&p| p > m + 1) {
            violations.push(m);
        }
    }
    SweepReport { checked, violations }
}
