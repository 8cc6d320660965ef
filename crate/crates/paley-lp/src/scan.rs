//! Sweep all Paley primes below a limit, collect per-prime bound reports,
//! and aggregate the comparisons against `HP` that motivate the whole
//! exercise. Includes the CSV writer/parser for scan output.

use crate::bounds::{bound_report, floor_with_margin, BoundOptions, BoundReport, FLOOR_MARGIN};
use crate::numtheory::is_paley_prime;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Scan primes `p < limit`.
    pub limit: u64,
    pub tol: f64,
    /// Run the exact clique search only for `p <=` this (0 disables it —
    /// the search cost grows much faster than the LPs').
    pub clique_max_p: u64,
    pub clique_budget: Duration,
    /// Worker threads; `None` uses the global rayon default.
    pub jobs: Option<usize>,
}

impl ScanOptions {
    pub fn new(limit: u64) -> Self {
        ScanOptions {
            limit,
            tol: 1e-9,
            clique_max_p: 1000,
            clique_budget: Duration::from_secs(60),
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFailure {
    pub p: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub prime_count: usize,
    /// Primes with `LS(p) <= HP(p)` (up to the floor margin).
    pub count_ls_le_hp: usize,
    /// Primes with `LS(p) < floor(HP(p))` — a strictly better integer bound.
    pub count_ls_lt_floor_hp: usize,
    /// Primes where the floored bounds disagree at all.
    pub count_floor_mismatch: usize,
    pub rows: Vec<BoundReport>,
    pub failures: Vec<ScanFailure>,
}

/// The three comparison predicates, shared by the scanner and the CSV
/// parser so recomputed counts can't drift.
fn bound_flags(hp: f64, ls: f64) -> (bool, bool, bool) {
    let le = ls <= hp + FLOOR_MARGIN;
    let lt_floor = ls < floor_with_margin(hp) - FLOOR_MARGIN;
    let mismatch = floor_with_margin(ls) != floor_with_margin(hp);
    (le, lt_floor, mismatch)
}

/// Primes `p = 1 (mod 4)` with `p < limit`, ascending.
pub fn paley_primes_below(limit: u64) -> Vec<u64> {
    (5..limit).filter(|&p| is_paley_prime(p)).collect()
}

pub fn summarize(rows: Vec<BoundReport>, failures: Vec<ScanFailure>) -> ScanSummary {
    let mut summary = ScanSummary {
        prime_count: rows.len(),
        count_ls_le_hp: 0,
        count_ls_lt_floor_hp: 0,
        count_floor_mismatch: 0,
        rows,
        failures,
    };
    for row in &summary.rows {
        let (le, lt, mismatch) = bound_flags(row.hp, row.ls_bound);
        summary.count_ls_le_hp += le as usize;
        summary.count_ls_lt_floor_hp += lt as usize;
        summary.count_floor_mismatch += mismatch as usize;
    }
    summary
}

/// Run [`bound_report`] over every Paley prime below `opts.limit`. Rows come
/// back in prime order regardless of scheduling; a failing prime is recorded
/// and the sweep continues.
pub fn scan(opts: &ScanOptions) -> ScanSummary {
    let primes = paley_primes_below(opts.limit);
    let run = || {
        primes
            .par_iter()
            .map(|&p| {
                let per_prime = BoundOptions {
                    compute_omega: opts.clique_max_p > 0 && p <= opts.clique_max_p,
                    clique_budget: opts.clique_budget,
                    alpha: None,
                    tol: opts.tol,
                };
                (p, bound_report(p, &per_prime))
            })
            .collect::<Vec<_>>()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .expect("scan thread pool")
            .install(run),
        None => run(),
    };

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (p, result) in results {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(ScanFailure { p, error: e.to_string() }),
        }
    }
    summarize(rows, failures)
}

pub const CSV_HEADER: &str = "p,omega,hp,l,ls,ls_minus_hp,floor_hp_minus_hp";

/// Scan rows as CSV. Floats use the shortest representation that parses
/// back to the identical value, so a round trip is lossless.
pub fn to_csv(summary: &ScanSummary) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &summary.rows {
        let omega = r.omega.map(|w| w.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.p,
            omega,
            r.hp,
            r.l_bound,
            r.ls_bound,
            r.ls_bound - r.hp,
            floor_with_margin(r.hp) - r.hp,
        )
        .expect("writing to a String cannot fail");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("missing header line")]
    MissingHeader,
    #[error("bad header: {got:?}")]
    BadHeader { got: String },
    #[error("line {line}: expected 7 fields, got {got}")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: bad {column}: {value:?}")]
    BadField { line: usize, column: &'static str, value: String },
    #[error("line {line}: {column} does not match the other columns")]
    Inconsistent { line: usize, column: &'static str },
}

/// One parsed CSV row (the derived columns are validated, then dropped).
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub p: u64,
    pub omega: Option<u32>,
    pub hp: f64,
    pub l: f64,
    pub ls: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanCsv {
    pub rows: Vec<CsvRow>,
    pub count_ls_le_hp: usize,
    pub count_ls_lt_floor_hp: usize,
    pub count_floor_mismatch: usize,
}

impl ScanCsv {
    pub fn prime_count(&self) -> usize {
        self.rows.len()
    }
}

/// Strict parse of [`to_csv`] output: exact header, seven fields per line,
/// finite numbers, primes ascending, and derived columns consistent with
/// the values they were derived from. Counts are recomputed from scratch.
pub fn parse_csv(text: &str) -> Result<ScanCsv, CsvError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(CsvError::MissingHeader)?;
    if header.trim_end_matches('\r') != CSV_HEADER {
        return Err(CsvError::BadHeader { got: header.to_string() });
    }

    let mut rows = Vec::new();
    let mut last_p = 0u64;
    for (idx, raw) in lines.enumerate() {
        let line = idx + 2;
        let fields: Vec<&str> = raw.trim_end_matches('\r').split(',').collect();
        if fields.len() != 7 {
            return Err(CsvError::FieldCount { line, got: fields.len() });
        }
        let bad = |column: &'static str, value: &str| CsvError::BadField {
            line,
            column,
            value: value.to_string(),
        };
        let p: u64 = fields[0].parse().map_err(|_| bad("p", fields[0]))?;
        if !is_paley_prime(p) {
            return Err(bad("p", fields[0]));
        }
        if p <= last_p {
            return Err(CsvError::Inconsistent { line, column: "p" });
        }
        last_p = p;
        let omega = if fields[1].is_empty() {
            None
        } else {
            match fields[1].parse::<u32>() {
                // a clique count of zero is never right — the graphs have vertices
                Ok(0) | Err(_) => return Err(bad("omega", fields[1])),
                Ok(v) => Some(v),
            }
        };
        let float = |i: usize, column: &'static str| -> Result<f64, CsvError> {
            let v: f64 = fields[i].parse().map_err(|_| bad(column, fields[i]))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(column, fields[i]))
            }
        };
        let hp = float(2, "hp")?;
        let l = float(3, "l")?;
        let ls = float(4, "ls")?;
        let ls_minus_hp = float(5, "ls_minus_hp")?;
        let floor_hp_minus_hp = float(6, "floor_hp_minus_hp")?;
        if (ls_minus_hp - (ls - hp)).abs() > 1e-9 {
            return Err(CsvError::Inconsistent { line, column: "ls_minus_hp" });
        }
        if (floor_hp_minus_hp - (floor_with_margin(hp) - hp)).abs() > 1e-9 {
            return Err(CsvError::Inconsistent { line, column: "floor_hp_minus_hp" });
        }
        rows.push(CsvRow { p, omega, hp, l, ls });
    }

    let mut csv = ScanCsv {
        rows,
        count_ls_le_hp: 0,
        count_ls_lt_floor_hp: 0,
        count_floor_mismatch: 0,
    };
    for row in &csv.rows {
        let (le, lt, mismatch) = bound_flags(row.hp, row.ls);
        csv.count_ls_le_hp += le as usize;
        csv.count_ls_lt_floor_hp += lt as usize;
        csv.count_floor_mismatch += mismatch as usize;
    }
    Ok(csv)
}
