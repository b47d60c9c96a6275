//! Exact p-adic valuations of integers, of the shifted-power terms
//! a^l + q^l, and of the whole product.
//!
//! The product valuation is always accumulated term by term; the full
//! product is never constructed. Terms whose residue mod p is nonzero are
//! skipped before any big-integer work.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::primes::mod_pow;

/// One product instance: (1^l + q^l)(2^l + q^l) ... (n^l + q^l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instance {
    q: u64,
    ell: u64,
    n: u64,
}

impl Instance {
    pub fn new(q: u64, ell: u64, n: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInstance("q must be >= 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInstance("n must be >= 1".into()));
        }
        if ell == 0 || ell % 2 == 0 {
            return Err(Error::InvalidInstance(format!(
                "ell must be a positive odd integer, got {ell}"
            )));
        }
        Ok(Instance { q, ell, n })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The term a^l + q^l as an exact big integer.
    pub fn term(&self, a: u64) -> BigUint {
        BigUint::from(a).pow(self.ell as u32) + BigUint::from(self.q).pow(self.ell as u32)
    }

    /// Upper estimate of the bit length of the whole product.
    pub fn product_bits_estimate(&self) -> u64 {
        (1..=self.n)
            .map(|a| self.ell * (64 - a.max(self.q).leading_zeros() as u64) + 2)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    Lte,
    Direct,
}

/// Valuation evidence for a single term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermValuation {
    pub a: u64,
    pub p: u64,
    pub nu: u32,
    pub via: Via,
}

/// nu_p of a nonzero u64.
pub fn nu_u64(p: u64, mut m: u64) -> Result<u32> {
    debug_assert!(p >= 2);
    if m == 0 {
        return Err(Error::ZeroValuation);
    }
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    Ok(k)
}

/// nu_p of a nonzero big integer.
pub fn nu(p: u64, m: &BigUint) -> Result<u32> {
    debug_assert!(p >= 2);
    if m.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p = BigUint::from(p);
    let mut k = 0;
    let mut m = m.clone();
    loop {
        let (quot, rem) = num_integer::Integer::div_rem(&m, &p);
        if !rem.is_zero() {
            return Ok(k);
        }
        m = quot;
        k += 1;
    }
}

/// Lifting-the-exponent: nu_p(x^l + y^l) = nu_p(x + y) + nu_p(l), for odd
/// prime p with p | x + y, p not dividing x or y, and odd l.
/// Hypothesis violations are errors; callers must not silently fall back.
pub fn lte_valuation(x: u64, y: u64, ell: u64, p: u64) -> Result<u32> {
    if p == 2 || !crate::primes::is_prime(p) {
        return Err(Error::LtePrecondition("p must be an odd prime"));
    }
    if ell % 2 == 0 || ell == 0 {
        return Err(Error::LtePrecondition("ell must be a positive odd integer"));
    }
    if (x + y) % p != 0 {
        return Err(Error::LtePrecondition("p must divide x + y"));
    }
    if x % p == 0 || y % p == 0 {
        return Err(Error::LtePrecondition("p must divide neither x nor y"));
    }
    Ok(nu_u64(p, x + y)? + nu_u64(p, ell)?)
}

/// Valuation of one term, via LTE when its hypotheses hold, else by direct
/// big-integer evaluation and repeated division. p = 2 always goes direct.
pub fn term_valuation(inst: &Instance, a: u64, p: u64) -> TermValuation {
    debug_assert!(1 <= a && a <= inst.n());
    let q = inst.q();
    if p > 2 && (a + q) % p == 0 && a % p != 0 && q % p != 0 {
        let nu = nu_u64(p, a + q).unwrap() + nu_u64(p, inst.ell()).unwrap();
        TermValuation { a, p, nu, via: Via::Lte }
    } else {
        let nu = nu(p, &inst.term(a)).unwrap();
        TermValuation { a, p, nu, via: Via::Direct }
    }
}

/// nu_p of the whole product, summed term-wise. Terms with
/// a^l + q^l != 0 (mod p) are skipped after a cheap residue test.
pub fn product_valuation(inst: &Instance, p: u64) -> u64 {
    let qp = mod_pow(inst.q() % p, inst.ell(), p);
    let mut total = 0u64;
    for a in 1..=inst.n() {
        if (mod_pow(a % p, inst.ell(), p) + qp) % p == 0 {
            total += term_valuation(inst, a, p).nu as u64;
        }
    }
    total
}
