//! Command-line surface tests: exit codes, serialization round-trips,
//! lemma verification runs.

use std::process::Command;

use powerprod_cli::wire::{certificate_json, CertificateWire};
use powerprod_core::witness::{theorem1_witness, theorem2_witness};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_powerprod"))
}

#[test]
fn check_exit_codes() {
    let out = bin().args(["check", "--q", "1", "--ell", "3", "--n", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("witness prime 11"), "{text}");

    let out = bin().args(["check", "--q", "2", "--ell", "3", "--n", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // even ell is a usage error
    let out = bin().args(["check", "--q", "1", "--ell", "4", "--n", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    assert!(!out.stderr.is_empty());

    // malformed flags as well
    let out = bin().args(["check", "--q", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));

    // undersized bit budget
    let out = bin()
        .args(["check", "--q", "1", "--ell", "3", "--n", "3", "--bit-budget", "16"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn witness_command_emits_schema_json() {
    let out = bin().args(["witness", "--q", "1", "--ell", "3", "--n", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["q"], 1);
    assert_eq!(v["ell"], 3);
    assert_eq!(v["n"], 10);
    assert_eq!(v["strategy"], "theorem1");
    assert_eq!(v["witness_prime"], 11);
    assert_eq!(v["total_valuation"], 1);
    assert_eq!(v["hits"][0]["a"], 10);
    assert_eq!(v["hits"][0]["nu"], 1);
    assert_eq!(v["hits"][0]["via"], "lte");

    // no certificate in range: exit 3
    let out = bin().args(["witness", "--q", "1", "--ell", "7", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn certificate_json_round_trips() {
    for cert in [
        theorem1_witness(1, 3, 10).unwrap(),
        theorem1_witness(3, 25, 8).unwrap(),
        theorem2_witness(1, 15, 16).unwrap().unwrap(),
    ] {
        let json = certificate_json(&cert).to_string();
        let wire: CertificateWire = serde_json::from_str(&json).unwrap();
        assert_eq!(wire.into_certificate().unwrap(), cert);
    }
}

#[test]
fn scan_empty_range_is_header_only() {
    let out = bin()
        .args(["scan", "--q-range", "1:3", "--ell", "3", "--n-max", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "q,ell,n,verdict,witness_p,strategy\n");
}

#[test]
fn scan_rejects_even_ell() {
    let out = bin()
        .args(["scan", "--q-range", "1:1", "--ell", "6", "--n-max", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn verify_lemmas_minimal_run() {
    let out = bin().args(["verify-lemmas", "--m-max", "1000"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("all lemma sweeps pass"), "{text}");

    let out = bin().args(["verify-lemmas", "--m-max", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn factor_product_output() {
    let out = bin()
        .args(["factor-product", "--q", "1", "--ell", "3", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2^3 * 3^2 * 7");

    let out = bin()
        .args(["factor-product", "--q", "1", "--ell", "3", "--n", "3", "--format", "json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"2": 3, "3": 2, "7": 1}));
}
