//! Brute-force ground truth: full factorization of every term, pointwise
//! exponent aggregation, and the exact powerful-number test.
//!
//! Factoring is trial division by sieved primes followed by Brent's cycle
//! variant of Pollard rho, recursing on composite cofactors. All randomness
//! is seeded deterministically so runs are reproducible. Budget violations
//! are loud errors, never silent truncation.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::primes::{is_prime, shared_sieve};
use crate::valuation::Instance;

/// prime -> exponent multiset; reconstructing the product recovers the
/// factored value exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactorMap {
    entries: BTreeMap<BigUint, u32>,
}

impl FactorMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, p: BigUint, e: u32) {
        if e > 0 {
            *self.entries.entry(p).or_insert(0) += e;
        }
    }

    /// Pointwise exponent addition.
    pub fn merge(&mut self, other: &FactorMap) {
        for (p, e) in &other.entries {
            self.add(p.clone(), *e);
        }
    }

    pub fn entries(&self) -> &BTreeMap<BigUint, u32> {
        &self.entries
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.entries {
            acc *= p.pow(*e);
        }
        acc
    }

    /// Smallest prime with exponent exactly 1, if any.
    pub fn smallest_exponent_one(&self) -> Option<&BigUint> {
        self.entries.iter().find(|(_, &e)| e == 1).map(|(p, _)| p)
    }
}

/// t > 1 and every prime exponent >= 2.
pub fn is_powerful(f: &FactorMap) -> bool {
    !f.is_empty() && f.entries.values().all(|&e| e >= 2)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Brent's variant of Pollard rho for u64 composites. Deterministic:
/// sweeps the polynomial offset c = 1, 2, 3, ...
fn pollard_brent_u64(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    for c in 1..n {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut ys) = (2u64, 2u64);
        let (mut y, mut d) = (2u64, 1u64);
        let (mut r, mut q) = (1u64, 1u64);
        while d == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && d == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                d = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if d == n {
            // backtrack one step at a time
            d = 1;
            let mut y = ys;
            while d == 1 {
                y = f(y);
                d = x.abs_diff(y).gcd(&n);
            }
        }
        if d != n {
            return d;
        }
    }
    unreachable!("composite {n} resisted every rho offset");
}

fn factor_u64_into(mut m: u64, out: &mut FactorMap) {
    while m % 2 == 0 {
        out.add(BigUint::from(2u32), 1);
        m /= 2;
    }
    let mut d = 3u64;
    while d <= 100_000 && d * d <= m {
        while m % d == 0 {
            out.add(BigUint::from(d), 1);
            m /= d;
        }
        d += 2;
    }
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.add(BigUint::from(m), 1);
        return;
    }
    let f = pollard_brent_u64(m);
    factor_u64_into(f, out);
    factor_u64_into(m / f, out);
}

/// Miller-Rabin for big integers: exact below 2^64, 40 fixed prime bases
/// above (sound at the sizes the oracle budget permits).
fn is_prime_big(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime(v);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let small = shared_sieve().primes();
    'base: for &a in small.iter().take(40) {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_big(n: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    let one = BigUint::one();
    loop {
        let c = BigUint::from(rng.gen_range(1u64..1 << 40));
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(rng.gen_range(2u64..1 << 40));
        let mut x;
        let mut d = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        while d == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && d == one {
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                d = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if d != one && d != *n {
            return d;
        }
        // batched gcd collapsed to n; retry with a fresh (c, y)
    }
}

fn factor_big_into(m: BigUint, out: &mut FactorMap, rng: &mut ChaCha8Rng) {
    if m.is_one() {
        return;
    }
    if let Some(v) = m.to_u64() {
        factor_u64_into(v, out);
        return;
    }
    let mut m = m;
    // trial division by sieved primes up to 10^6
    for &p in shared_sieve().primes() {
        if p > 1_000_000 {
            break;
        }
        let pb = BigUint::from(p);
        loop {
            let (quot, rem) = m.div_rem(&pb);
            if !rem.is_zero() {
                break;
            }
            out.add(pb.clone(), 1);
            m = quot;
        }
        if m.is_one() {
            return;
        }
        if let Some(v) = m.to_u64() {
            factor_u64_into(v, out);
            return;
        }
    }
    fn recurse(m: BigUint, out: &mut FactorMap, rng: &mut ChaCha8Rng) {
        if m.is_one() {
            return;
        }
        if let Some(v) = m.to_u64() {
            factor_u64_into(v, out);
            return;
        }
        if is_prime_big(&m) {
            out.add(m, 1);
            return;
        }
        let f = pollard_brent_big(&m, rng);
        let cof = &m / &f;
        recurse(f, out, rng);
        recurse(cof, out, rng);
    }
    recurse(m, out, rng);
}

fn seeded_rng(m: &BigUint) -> ChaCha8Rng {
    // seed depends only on the value; reruns are identical
    let digest = m.iter_u64_digits().fold(0x9e3779b97f4a7c15u64, |acc, d| {
        acc.rotate_left(13) ^ d.wrapping_mul(0xbf58476d1ce4e5b9)
    });
    ChaCha8Rng::seed_from_u64(digest)
}

/// Complete factorization of m >= 1. Empty map for m = 1.
pub fn factor(m: &BigUint, bit_budget: u64) -> Result<FactorMap> {
    if m.is_zero() {
        return Err(Error::Precondition("cannot factor 0".into()));
    }
    if m.bits() > bit_budget {
        return Err(Error::BudgetExceeded {
            bits: m.bits(),
            budget: bit_budget,
        });
    }
    let mut out = FactorMap::new();
    let mut rng = seeded_rng(m);
    factor_big_into(m.clone(), &mut out, &mut rng);
    Ok(out)
}

/// Factorization of the whole product, term by term. Each term is split as
/// (a + q) * ((a^l + q^l)/(a + q)) — exact for odd l — and the two pieces
/// are factored separately, then merged by exponent addition.
pub fn product_factorization(inst: &Instance, bit_budget: u64) -> Result<FactorMap> {
    let mut total = FactorMap::new();
    for a in 1..=inst.n() {
        let term = inst.term(a);
        if term.bits() > bit_budget {
            return Err(Error::TermBudgetExceeded {
                a,
                bits: term.bits(),
                budget: bit_budget,
            });
        }
        let shift = BigUint::from(a + inst.q());
        let (cofactor, rem) = term.div_rem(&shift);
        assert!(rem.is_zero(), "(a+q) must divide a^l + q^l for odd l");
        let mut tf = factor(&shift, bit_budget).map_err(|e| lift_term_err(e, a))?;
        tf.merge(&factor(&cofactor, bit_budget).map_err(|e| lift_term_err(e, a))?);
        debug_assert_eq!(tf.value(), inst.term(a));
        total.merge(&tf);
    }
    Ok(total)
}

fn lift_term_err(e: Error, a: u64) -> Error {
    match e {
        Error::BudgetExceeded { bits, budget } => Error::TermBudgetExceeded { a, bits, budget },
        other => other,
    }
}
