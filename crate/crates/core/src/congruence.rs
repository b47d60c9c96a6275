//! Solutions of x^l + q^l = 0 (mod p).
//!
//! When l is odd and gcd(l, p-1) = 1 (p odd) the congruence has exactly one
//! solution, x = -q mod p; that is the fast path. Everything else falls back
//! to a plain exhaustive scan of 0..p with modular exponentiation.

use num_integer::gcd;

use crate::error::{Error, Result};
use crate::primes::{is_prime, mod_pow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionMethod {
    UniqueByLemma1,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub p: u64,
    pub residues: Vec<u64>,
    pub method: SolutionMethod,
}

fn scan_residues(ell: u64, q: u64, p: u64) -> Vec<u64> {
    let target = (p - mod_pow(q % p, ell, p)) % p;
    (0..p).filter(|&r| mod_pow(r, ell, p) == target).collect()
}

pub fn solve_power_congruence(ell: u64, q: u64, p: u64) -> SolutionSet {
    debug_assert!(is_prime(p));
    if p > 2 && ell % 2 == 1 && gcd(ell, p - 1) == 1 {
        SolutionSet {
            p,
            residues: vec![(p - q % p) % p],
            method: SolutionMethod::UniqueByLemma1,
        }
    } else {
        SolutionSet {
            p,
            residues: scan_residues(ell, q, p),
            method: SolutionMethod::Exhaustive,
        }
    }
}

/// Writes ell = k^s for an odd prime k, if possible.
pub fn odd_prime_power_base(ell: u64) -> Option<(u64, u32)> {
    if ell < 3 || ell % 2 == 0 {
        return None;
    }
    let mut k = 3;
    while k * k <= ell {
        if ell % k == 0 {
            break;
        }
        k += 2;
    }
    if k * k > ell {
        return Some((ell, 1)); // ell itself prime
    }
    let mut m = ell;
    let mut s = 0;
    while m % k == 0 {
        m /= k;
        s += 1;
    }
    if m == 1 {
        Some((k, s))
    } else {
        None
    }
}

/// For ell = k^s an odd prime power: does k not divide p - 1?
/// That condition forces gcd(ell, p-1) = 1, hence a unique solution.
pub fn corollary1_applies(ell: u64, p: u64) -> Result<bool> {
    let (k, _) = odd_prime_power_base(ell).ok_or(Error::NotPrimePower(ell))?;
    Ok((p - 1) % k != 0)
}

/// Independent uniqueness test: exhaustively enumerate and check the
/// solution set is exactly {(-q) mod p}. Never takes the fast path.
pub fn uniqueness_check(ell: u64, q: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("p = {p} is not prime")));
    }
    if ell % 2 == 0 {
        return Err(Error::Precondition(format!("ell = {ell} is even")));
    }
    if gcd(ell, p - 1) != 1 {
        return Err(Error::Precondition(format!(
            "gcd(ell, p-1) = gcd({ell}, {}) != 1",
            p - 1
        )));
    }
    let residues = scan_residues(ell, q, p);
    Ok(residues == vec![(p - q % p) % p])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let s = solve_power_congruence(3, 1, 5);
        assert_eq!(s.residues, vec![4]);
        assert_eq!(s.method, SolutionMethod::UniqueByLemma1);

        let s = solve_power_congruence(3, 1, 7);
        assert_eq!(s.residues, vec![3, 5, 6]);
        assert_eq!(s.method, SolutionMethod::Exhaustive);

        // p | q: unique solution 0
        let s = solve_power_congruence(5, 10, 5);
        assert_eq!(s.residues, vec![0]);
        assert_eq!(s.method, SolutionMethod::UniqueByLemma1);
    }

    #[test]
    fn solve_p2_by_scan() {
        let s = solve_power_congruence(3, 2, 2);
        assert_eq!(s.method, SolutionMethod::Exhaustive);
        assert_eq!(s.residues, vec![0]);
        let s = solve_power_congruence(3, 1, 2);
        assert_eq!(s.residues, vec![1]);
    }

    #[test]
    fn prime_power_base() {
        assert_eq!(odd_prime_power_base(3), Some((3, 1)));
        assert_eq!(odd_prime_power_base(27), Some((3, 3)));
        assert_eq!(odd_prime_power_base(25), Some((5, 2)));
        assert_eq!(odd_prime_power_base(1), None);
        assert_eq!(odd_prime_power_base(15), None);
        assert_eq!(odd_prime_power_base(9), Some((3, 2)));
        assert_eq!(odd_prime_power_base(8), None);
    }

    #[test]
    fn corollary1_examples() {
        assert!(corollary1_applies(9, 11).unwrap());
        assert!(!corollary1_applies(9, 7).unwrap());
        assert!(!corollary1_applies(25, 11).unwrap());
        assert!(matches!(
            corollary1_applies(15, 7),
            Err(Error::NotPrimePower(15))
        ));
    }

    #[test]
    fn uniqueness_examples() {
        assert!(uniqueness_check(3, 1, 5).unwrap());
        assert!(uniqueness_check(9, 4, 11).unwrap());
        assert!(uniqueness_check(5, 3, 7).unwrap());
        assert!(uniqueness_check(3, 1, 7).is_err()); // gcd(3, 6) != 1
    }

    #[test]
    fn fast_path_agrees_with_scan() {
        for p in [3u64, 5, 11, 13, 23, 101] {
            for ell in [3u64, 5, 9, 15] {
                if gcd(ell, p - 1) != 1 {
                    continue;
                }
                for q in 1..=10 {
                    let fast = solve_power_congruence(ell, q, p);
                    assert_eq!(fast.method, SolutionMethod::UniqueByLemma1);
                    assert_eq!(fast.residues, scan_residues(ell, q, p));
                }
            }
        }
    }

    #[test]
    fn solution_count_is_zero_or_gcd() {
        for p in (3u64..=500).filter(|&p| is_prime(p)) {
            for ell in [3u64, 5, 9, 15] {
                for q in 1..=10u64 {
                    if q % p == 0 {
                        continue;
                    }
                    let n = scan_residues(ell, q, p).len() as u64;
                    assert!(n == 0 || n == gcd(ell, p - 1), "p={p} ell={ell} q={q} n={n}");
                }
            }
        }
    }
}
