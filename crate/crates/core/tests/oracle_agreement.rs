//! Brute-force equivalence: term-wise valuations and the full decision
//! procedure against complete factorizations of the product.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use powerprod_core::oracle::{factor, is_powerful, product_factorization, FactorMap};
use powerprod_core::primes::shared_sieve;
use powerprod_core::valuation::{product_valuation, Instance};
use powerprod_core::witness::{check_instance, CheckConfig, Verdict};

const BUDGET: u64 = 200_000;

/// Incrementally factored products for one (q, ell), n = 1..=n_max.
fn factored_prefixes(q: u64, ell: u64, n_max: u64) -> Vec<FactorMap> {
    let mut acc = FactorMap::new();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let inst = Instance::new(q, ell, n).unwrap();
        acc.merge(&factor(&inst.term(n), BUDGET).unwrap());
        out.push(acc.clone());
    }
    out
}

#[test]
fn product_valuation_matches_oracle_exponents() {
    for q in 1..=6u64 {
        for ell in [3u64, 5, 7, 9] {
            let prefixes = factored_prefixes(q, ell, 40);
            for n in 1..=40u64 {
                let inst = Instance::new(q, ell, n).unwrap();
                let oracle = &prefixes[(n - 1) as usize];
                for &p in shared_sieve().range(2, n + q) {
                    assert_eq!(
                        product_valuation(&inst, p),
                        oracle.exponent_of(&BigUint::from(p)) as u64,
                        "q={q} ell={ell} n={n} p={p}"
                    );
                }
            }
        }
    }
}

#[test]
fn split_by_shift_is_exact() {
    use num_integer::Integer;
    use num_traits::Zero;
    for q in 1..=6u64 {
        for ell in [3u64, 5, 9] {
            for a in 1..=40u64 {
                let inst = Instance::new(q, ell, a).unwrap();
                let (_, rem) = inst.term(a).div_rem(&BigUint::from(a + q));
                assert!(rem.is_zero(), "q={q} ell={ell} a={a}");
            }
        }
    }
}

#[test]
fn verdicts_match_oracle_ground_truth() {
    let cfg = CheckConfig::default();
    for q in 1..=6u64 {
        for ell in [1u64, 3, 5, 7, 9] {
            let prefixes = factored_prefixes(q, ell, 40);
            for n in 1..=40u64 {
                let inst = Instance::new(q, ell, n).unwrap();
                let oracle = &prefixes[(n - 1) as usize];
                let truth = is_powerful(oracle);
                match check_instance(&inst, &cfg).unwrap() {
                    Verdict::NotPowerful(cert) => {
                        assert!(!truth, "q={q} ell={ell} n={n}");
                        assert!(cert.verify(), "q={q} ell={ell} n={n}");
                        assert_eq!(
                            oracle.exponent_of(&BigUint::from(cert.p)),
                            1,
                            "q={q} ell={ell} n={n} p={}",
                            cert.p
                        );
                    }
                    Verdict::Powerful(f) => {
                        assert!(truth, "q={q} ell={ell} n={n}");
                        assert_eq!(&f, oracle);
                    }
                    Verdict::Unknown(reason) => {
                        panic!("unexpected Unknown at q={q} ell={ell} n={n}: {reason}")
                    }
                }
            }
        }
    }
}

#[test]
fn product_factorization_agrees_with_prefixes() {
    for (q, ell, n) in [(1u64, 3u64, 10u64), (2, 5, 8), (6, 9, 12)] {
        let inst = Instance::new(q, ell, n).unwrap();
        let direct = product_factorization(&inst, BUDGET).unwrap();
        let prefix = factored_prefixes(q, ell, n).pop().unwrap();
        assert_eq!(direct, prefix);
        // the reconstructed value is the literal product
        let mut value = BigUint::from(1u32);
        for a in 1..=n {
            value *= inst.term(a);
        }
        assert_eq!(direct.value(), value);
    }
}

#[test]
fn term_budget_error_names_the_offender() {
    // 5^31 is the first term over 64 bits; everything before it is easy
    let inst = Instance::new(2, 31, 50).unwrap();
    match product_factorization(&inst, 64) {
        Err(powerprod_core::Error::TermBudgetExceeded { a, bits, budget }) => {
            assert_eq!(a, 5);
            assert!(bits > budget);
            let prev = Instance::new(2, 31, a - 1).unwrap().term(a - 1);
            assert!(prev.bits() <= 64);
        }
        other => panic!("expected TermBudgetExceeded, got {other:?}"),
    }
}
