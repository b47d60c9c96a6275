use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use powerprod_cli::scan::{run_scan, ScanError, ScanSpec};
use powerprod_cli::wire::{certificate_json, factorization_text, verdict_json, verdict_text};
use powerprod_core::congruence::uniqueness_check;
use powerprod_core::oracle::product_factorization;
use powerprod_core::primes::{lemma3_sweep, lemma4_sweep, lemma5_sweep, shared_sieve, Sieve};
use powerprod_core::valuation::Instance;
use powerprod_core::witness::{check_instance, theorem1_witness, theorem2_witness, CheckConfig};
use powerprod_core::{Error as CoreError, Verdict};

const EXIT_NOT_POWERFUL: u8 = 0;
const EXIT_POWERFUL: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTEGRITY: u8 = 70;

const MIN_BIT_BUDGET: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "powerprod",
    about = "Decides whether (1^l + q^l)(2^l + q^l)...(n^l + q^l) is a powerful number",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one instance and print the verdict.
    Check {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long = "bit-budget", default_value_t = 200_000)]
        bit_budget: u64,
    },
    /// Produce a witness certificate (theorem searches only, no oracle).
    Witness {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan a grid of instances, emitting CSV; resumable via --state.
    Scan {
        #[arg(long = "q-range", value_parser = parse_range)]
        q_range: (u64, u64),
        #[arg(long, value_delimiter = ',')]
        ell: Vec<u64>,
        #[arg(long = "n-max")]
        n_max: u64,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long = "bit-budget", default_value_t = 200_000)]
        bit_budget: u64,
    },
    /// Finite-range verification of the window lemmas and the congruence
    /// uniqueness statement.
    VerifyLemmas {
        #[arg(long = "m-max")]
        m_max: u64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![5u64, 7, 11, 13])]
        k: Vec<u64>,
    },
    /// Fully factor the product via the brute-force oracle.
    FactorProduct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long = "bit-budget", default_value_t = 200_000)]
        bit_budget: u64,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a = a.parse().map_err(|e| format!("bad range start: {e}"))?;
    let b = b.parse().map_err(|e| format!("bad range end: {e}"))?;
    Ok((a, b))
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("run with --help for usage");
    ExitCode::from(EXIT_USAGE)
}

fn instance_or_usage(q: u64, ell: u64, n: u64) -> Result<Instance, ExitCode> {
    Instance::new(q, ell, n).map_err(|e| usage_error(&e.to_string()))
}

fn budget_or_usage(bits: u64) -> Result<u64, ExitCode> {
    if bits < MIN_BIT_BUDGET {
        Err(usage_error(&format!(
            "--bit-budget must be at least {MIN_BIT_BUDGET}"
        )))
    } else {
        Ok(bits)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output still goes to stdout with code 0
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(EXIT_USAGE);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::Check {
            q,
            ell,
            n,
            format,
            bit_budget,
        } => cmd_check(q, ell, n, format, bit_budget),
        Command::Witness { q, ell, n, format } => cmd_witness(q, ell, n, format),
        Command::Scan {
            q_range,
            ell,
            n_max,
            state,
            jobs,
            bit_budget,
        } => cmd_scan(q_range, ell, n_max, state, jobs, bit_budget),
        Command::VerifyLemmas { m_max, k } => cmd_verify_lemmas(m_max, k),
        Command::FactorProduct {
            q,
            ell,
            n,
            format,
            bit_budget,
        } => cmd_factor_product(q, ell, n, format, bit_budget),
    }
}

fn cmd_check(q: u64, ell: u64, n: u64, format: Format, bit_budget: u64) -> ExitCode {
    let inst = match instance_or_usage(q, ell, n) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let bit_budget = match budget_or_usage(bit_budget) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let verdict = match check_instance(&inst, &CheckConfig { bit_budget }) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTEGRITY);
        }
    };
    match format {
        Format::Json => println!("{}", verdict_json(&verdict)),
        _ => println!("{}", verdict_text(&verdict)),
    }
    match verdict {
        Verdict::NotPowerful(_) => ExitCode::from(EXIT_NOT_POWERFUL),
        Verdict::Powerful(_) => ExitCode::from(EXIT_POWERFUL),
        Verdict::Unknown(_) => ExitCode::from(EXIT_UNKNOWN),
    }
}

fn cmd_witness(q: u64, ell: u64, n: u64, format: Format) -> ExitCode {
    if instance_or_usage(q, ell, n).is_err() {
        return ExitCode::from(EXIT_USAGE);
    }
    let cert = match theorem1_witness(q, ell, n) {
        Ok(c) => Some(c),
        Err(CoreError::Integrity(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INTEGRITY);
        }
        Err(_) => match theorem2_witness(q, ell, n) {
            Ok(c) => c,
            Err(CoreError::Integrity(msg)) => {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_INTEGRITY);
            }
            Err(e) => {
                return usage_error(&e.to_string());
            }
        },
    };
    match cert {
        Some(c) => {
            match format {
                Format::Json => println!("{}", certificate_json(&c)),
                _ => println!(
                    "witness prime {} for q={q} ell={ell} n={n}, product valuation 1",
                    c.p
                ),
            }
            ExitCode::from(EXIT_NOT_POWERFUL)
        }
        None => {
            eprintln!("no witness certificate found for q={q} ell={ell} n={n}");
            ExitCode::from(EXIT_UNKNOWN)
        }
    }
}

fn cmd_scan(
    (q_lo, q_hi): (u64, u64),
    ells: Vec<u64>,
    n_max: u64,
    state: Option<PathBuf>,
    jobs: usize,
    bit_budget: u64,
) -> ExitCode {
    if ells.is_empty() {
        return usage_error("--ell requires at least one value");
    }
    if let Some(&bad) = ells.iter().find(|&&e| e == 0 || e % 2 == 0) {
        return usage_error(&format!("ell must be a positive odd integer, got {bad}"));
    }
    if q_lo == 0 {
        return usage_error("q must be >= 1");
    }
    let bit_budget = match budget_or_usage(bit_budget) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let spec = ScanSpec {
        q_lo,
        q_hi,
        ells,
        n_max,
        jobs,
        bit_budget,
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run_scan(&spec, state.as_deref(), &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(ScanError::CorruptState(msg)) => {
            eprintln!("error: corrupt state file, refusing to touch it: {msg}");
            ExitCode::from(EXIT_INTEGRITY)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTEGRITY)
        }
    }
}

fn cmd_verify_lemmas(m_max: u64, ks: Vec<u64>) -> ExitCode {
    if m_max < 10 {
        return usage_error("--m-max must be at least 10");
    }
    for &k in &ks {
        if k < 5 || !powerprod_core::primes::is_prime(k) {
            return usage_error(&format!("k must be an odd prime >= 5, got {k}"));
        }
    }
    let owned;
    let sieve = if m_max + 1 < shared_sieve().limit() {
        shared_sieve()
    } else {
        owned = Sieve::new(m_max + 2);
        &owned
    };
    let mut all_ok = true;

    let r = lemma3_sweep(sieve, m_max);
    report_sweep(
        "window size >= 2 (known exceptions m in {1,3,5,9} skipped)",
        &r,
        &mut all_ok,
    );

    let r = lemma5_sweep(sieve, m_max);
    report_sweep(
        "window contains p = 2 (mod 3) (known exception m = 9 skipped)",
        &r,
        &mut all_ok,
    );

    for &k in &ks {
        if 4 * k > m_max {
            println!("window k={k}: skipped (m-max below 4k)");
            continue;
        }
        let r = lemma4_sweep(sieve, k, m_max);
        report_sweep(&format!("window has a prime not 1 mod {k}"), &r, &mut all_ok);
    }

    // congruence uniqueness sweep: fixed desk-scale grid
    let mut checked = 0u64;
    let mut first_fail = None;
    'outer: for &p in shared_sieve().range(2, 2000) {
        for ell in [3u64, 5, 7, 9, 15, 25] {
            if num_integer::gcd(ell, p - 1) != 1 {
                continue;
            }
            for q in 1..=20 {
                checked += 1;
                if !uniqueness_check(ell, q, p).unwrap_or(false) {
                    first_fail = Some((p, ell, q));
                    break 'outer;
                }
            }
        }
    }
    match first_fail {
        None => println!("congruence uniqueness: {checked} cases pass"),
        Some((p, ell, q)) => {
            println!("congruence uniqueness: FAIL at p={p} ell={ell} q={q}");
            all_ok = false;
        }
    }

    if all_ok {
        println!("all lemma sweeps pass");
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INTEGRITY)
    }
}

fn report_sweep(label: &str, r: &powerprod_core::primes::SweepReport, all_ok: &mut bool) {
    if r.passed() {
        println!("{label}: {} cases pass", r.checked);
    } else {
        println!(
            "{label}: FAIL, first counterexample m = {}, {} total",
            r.violations[0],
            r.violations.len()
        );
        *all_ok = false;
    }
}

fn cmd_factor_product(q: u64, ell: u64, n: u64, format: Format, bit_budget: u64) -> ExitCode {
    let inst = match instance_or_usage(q, ell, n) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let bit_budget = match budget_or_usage(bit_budget) {
        Ok(b) => b,
        Err(code) => return code,
    };
    match product_factorization(&inst, bit_budget) {
        Ok(f) => {
            match format {
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> = f
                        .entries()
                        .iter()
                        .map(|(p, e)| (p.to_string(), serde_json::json!(e)))
                        .collect();
                    println!("{}", serde_json::Value::Object(map));
                }
                _ => println!("{}", factorization_text(&f)),
            }
            ExitCode::SUCCESS
        }
        Err(e @ (CoreError::BudgetExceeded { .. } | CoreError::TermBudgetExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_UNKNOWN)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTEGRITY)
        }
    }
}
