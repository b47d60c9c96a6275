//! Resumable grid scan. One CSV row per instance, ascending (q, ell, n).
//!
//! State is an append-only file holding the rows already computed; on
//! restart those rows are reused verbatim, so the final output is
//! byte-identical whether or not the run was interrupted, and independent
//! of the worker count (emission is sorted at the end).

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use powerprod_core::valuation::Instance;
use powerprod_core::witness::{check_instance, CheckConfig, Verdict};
use powerprod_core::Error as CoreError;

use crate::wire::strategy_name;

pub const CSV_HEADER: &str = "q,ell,n,verdict,witness_p,strategy";

#[derive(Debug)]
pub enum ScanError {
    CorruptState(String),
    Io(std::io::Error),
    Integrity(String),
}

impl std::fmt::Display for ScanError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScanError::CorruptState(msg) => write!(f, "corrupt state file: {msg}"),
            ScanError::Io(e) => write!(f, "i/o error: {e}"),
            ScanError::Integrity(msg) => write!(f, "integrity failure: {msg}"),
        }
    }
}

impl From<std::io::Error> for ScanError {
    fn from(e: std::io::Error) -> Self {
        ScanError::Io(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub q: u64,
    pub ell: u64,
    pub n: u64,
    pub verdict: String,
    pub witness_p: String,
    pub strategy: String,
}

impl ScanRow {
    pub fn key(&self) -> (u64, u64, u64) {
        (self.q, self.ell, self.n)
    }

    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.q, self.ell, self.n, self.verdict, self.witness_p, self.strategy
        )
    }

    pub fn parse(line: &str) -> Option<ScanRow> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return None;
        }
        let q = fields[0].parse().ok()?;
        let ell = fields[1].parse().ok()?;
        let n = fields[2].parse().ok()?;
        let verdict = fields[3].to_string();
        if !matches!(verdict.as_str(), "not_powerful" | "powerful" | "unknown") {
            return None;
        }
        Some(ScanRow {
            q,
            ell,
            n,
            verdict,
            witness_p: fields[4].to_string(),
            strategy: fields[5].to_string(),
        })
    }
}

fn compute_row(q: u64, ell: u64, n: u64, cfg: &CheckConfig) -> Result<ScanRow, ScanError> {
    let inst = Instance::new(q, ell, n)
        .map_err(|e| ScanError::Integrity(format!("invalid grid point: {e}")))?;
    let verdict = check_instance(&inst, cfg).map_err(|e| match e {
        CoreError::Integrity(msg) => ScanError::Integrity(msg),
        other => ScanError::Integrity(other.to_string()),
    })?;
    let (v, p, s) = match verdict {
        Verdict::NotPowerful(c) => (
            "not_powerful",
            c.p.to_string(),
            strategy_name(c.strategy).to_string(),
        ),
        Verdict::Powerful(_) => ("powerful", String::new(), "oracle".to_string()),
        Verdict::Unknown(_) => ("unknown", String::new(), String::new()),
    };
    Ok(ScanRow {
        q,
        ell,
        n,
        verdict: v.to_string(),
        witness_p: p,
        strategy: s,
    })
}

fn load_state(path: &Path) -> Result<BTreeMap<(u64, u64, u64), ScanRow>, ScanError> {
    let mut rows = BTreeMap::new();
    if !path.exists() {
        return Ok(rows);
    }
    let reader = BufReader::new(File::open(path)?);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = ScanRow::parse(&line).ok_or_else(|| {
            ScanError::CorruptState(format!("line {}: {:?}", i + 1, line))
        })?;
        rows.insert(row.key(), row);
    }
    Ok(rows)
}

pub struct ScanSpec {
    pub q_lo: u64,
    pub q_hi: u64,
    pub ells: Vec<u64>,
    pub n_max: u64,
    pub jobs: usize,
    pub bit_budget: u64,
}

pub fn run_scan(
    spec: &ScanSpec,
    state_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), ScanError> {
    let mut ells = spec.ells.clone();
    ells.sort_unstable();
    ells.dedup();

    let mut grid = Vec::new();
    for q in spec.q_lo..=spec.q_hi.max(0) {
        for &ell in &ells {
            for n in 1..=spec.n_max {
                grid.push((q, ell, n));
            }
        }
    }

    // validate the whole state file before doing any work or any writes
    let done = match state_path {
        Some(p) => load_state(p)?,
        None => BTreeMap::new(),
    };

    let todo: Vec<(u64, u64, u64)> = grid
        .iter()
        .copied()
        .filter(|k| !done.contains_key(k))
        .collect();

    let cfg = CheckConfig {
        bit_budget: spec.bit_budget,
    };

    let appender = match state_path {
        Some(p) => Some(Mutex::new(
            OpenOptions::new().create(true).append(true).open(p)?,
        )),
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| ScanError::Integrity(e.to_string()))?;

    let computed: Result<Vec<ScanRow>, ScanError> = pool.install(|| {
        use rayon::prelude::*;
        todo.par_iter()
            .map(|&(q, ell, n)| {
                let row = compute_row(q, ell, n, &cfg)?;
                if let Some(file) = &appender {
                    let mut f = file.lock().unwrap();
                    writeln!(f, "{}", row.to_line())?;
                    f.flush()?;
                }
                Ok(row)
            })
            .collect()
    });
    let computed = computed?;

    let mut all: BTreeMap<(u64, u64, u64), ScanRow> = done;
    for row in computed {
        all.insert(row.key(), row);
    }

    writeln!(out, "{CSV_HEADER}")?;
    for key in grid {
        // rows outside the requested grid may sit in the state file; ignore them
        let row = &all[&key];
        writeln!(out, "{}", row.to_line())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_round_trip() {
        let row = ScanRow {
            q: 1,
            ell: 3,
            n: 10,
            verdict: "not_powerful".into(),
            witness_p: "11".into(),
            strategy: "theorem1".into(),
        };
        assert_eq!(ScanRow::parse(&row.to_line()).unwrap(), row);
        assert!(ScanRow::parse("garbage").is_none());
        assert!(ScanRow::parse("1,3,10,bogus,11,theorem1").is_none());
    }
}
