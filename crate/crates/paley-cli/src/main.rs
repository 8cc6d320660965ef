//! `paley` — clique-number bounds for Paley graphs from the command line.
//!
//! Subcommands map one-to-one onto the library: `bound` and `scan` solve the
//! theta LPs (per prime / over a range), `certify` re-checks a dual
//! certificate without trusting any solver, `graph` exports the local graph,
//! and `clique` runs the exact search. Exit codes: 0 success, 1 invalid
//! certificate, 2 usage or structural error, 3 clique budget exhausted.

use clap::{Parser, Subcommand, ValueEnum};
use paley_lp::bounds::{bound_report, BoundOptions, BoundReport};
use paley_lp::certificates::{verify_certificate, DualCertificate};
use paley_lp::numtheory::PrimeContext;
use paley_lp::paley::{clique_number, local_graph, GraphDump};
use paley_lp::scan::{scan, summarize, to_csv, ScanOptions, ScanSummary};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "paley", version, about = "Clique-number bounds for Paley graphs via theta LPs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// HP, Lovász and Schrijver bounds for one prime
    Bound {
        /// Prime congruent to 1 mod 4
        p: u64,
        /// Skip the exact clique search
        #[arg(long)]
        no_clique: bool,
        /// Clique-search budget in seconds
        #[arg(long, value_name = "SECONDS", default_value_t = 60.0)]
        clique_budget: f64,
        /// LP solver tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Use this generator of the squares instead of the smallest
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Bounds for every prime p = 1 (mod 4) below LIMIT
    Scan {
        limit: u64,
        /// Skip the exact clique search entirely (otherwise it runs for p <= 1000)
        #[arg(long)]
        no_clique: bool,
        /// Clique-search budget in seconds, per prime
        #[arg(long, value_name = "SECONDS", default_value_t = 60.0)]
        clique_budget: f64,
        /// LP solver tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Worker threads (falls back to PALEY_LP_JOBS, then all cores)
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Verify a dual-certificate JSON file
    Certify {
        path: PathBuf,
        /// Largest condition violation still accepted
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the local graph of p as JSON
    Graph {
        p: u64,
        #[arg(long)]
        alpha: Option<u64>,
    },
    /// Exact clique number of G_p (via its local graph)
    Clique {
        p: u64,
        /// Search budget in seconds
        #[arg(long, value_name = "SECONDS", default_value_t = 60.0)]
        clique_budget: f64,
        #[arg(long)]
        alpha: Option<u64>,
    },
}

fn main() -> ExitCode {
    // `paley scan 3000 | head` should die quietly like any unix filter;
    // Rust's default turns the closed pipe into a panic with a backtrace.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Bound { p, no_clique, clique_budget, tol, alpha, format } => {
            let opts = BoundOptions {
                compute_omega: !no_clique,
                clique_budget: budget(clique_budget)?,
                alpha,
                tol,
            };
            let report = bound_report(p, &opts).map_err(|e| e.to_string())?;
            match format {
                OutputFormat::Table => println!("{}", bound_line(&report)),
                OutputFormat::Json => println!("{}", pretty(&report)?),
                OutputFormat::Csv => print!("{}", to_csv(&summarize(vec![report], Vec::new()))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Scan { limit, no_clique, clique_budget, tol, jobs, format } => {
            let opts = ScanOptions {
                limit,
                tol,
                clique_max_p: if no_clique { 0 } else { 1000 },
                clique_budget: budget(clique_budget)?,
                jobs: jobs_or_env(jobs)?,
            };
            let summary = scan(&opts);
            match format {
                OutputFormat::Csv => {
                    print!("{}", to_csv(&summary));
                    for line in summary_lines(&summary) {
                        eprintln!("{line}");
                    }
                }
                OutputFormat::Json => println!("{}", pretty(&summary)?),
                OutputFormat::Table => {
                    for row in &summary.rows {
                        println!("{}", bound_line(row));
                    }
                    for line in summary_lines(&summary) {
                        println!("{line}");
                    }
                }
            }
            for failure in &summary.failures {
                eprintln!("p = {}: {}", failure.p, failure.error);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Certify { path, tol } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let cert = DualCertificate::from_json(&text).map_err(|e| e.to_string())?;
            let report = verify_certificate(&cert, tol).map_err(|e| e.to_string())?;
            if report.valid {
                println!("VALID, ω(G_{}) ≤ {:.4}", cert.p, report.bound);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("INVALID: {}", report.violations[0]);
                for v in &report.violations {
                    println!("  {v} (magnitude {:.3e})", v.magnitude());
                }
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Graph { p, alpha } => {
            let ctx = context(p, alpha)?;
            println!("{}", GraphDump::from_context(&ctx).to_json());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Clique { p, clique_budget, alpha } => {
            let ctx = context(p, alpha)?;
            let outcome = clique_number(&local_graph(&ctx), budget(clique_budget)?);
            // omega(G_p) = omega(L_p) + 1: a maximum clique may be assumed
            // to contain 0, and its other vertices lie in L_p
            let omega = outcome.size() + 1;
            if outcome.is_exact() {
                println!("{omega}");
                Ok(ExitCode::SUCCESS)
            } else {
                println!(">= {omega} (incomplete)");
                Ok(ExitCode::from(3))
            }
        }
    }
}

fn context(p: u64, alpha: Option<u64>) -> Result<PrimeContext, String> {
    match alpha {
        Some(a) => PrimeContext::with_alpha(p, a),
        None => PrimeContext::new(p),
    }
    .map_err(|e| e.to_string())
}

fn budget(seconds: f64) -> Result<Duration, String> {
    Duration::try_from_secs_f64(seconds)
        .map_err(|_| format!("budget must be a non-negative number of seconds, got {seconds}"))
}

fn jobs_or_env(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("PALEY_LP_JOBS") {
        Ok(s) => s
            .parse::<usize>()
            .map(Some)
            .map_err(|_| format!("PALEY_LP_JOBS must be an integer, got {s:?}")),
        Err(_) => Ok(None),
    }
}

fn bound_line(r: &BoundReport) -> String {
    let omega = r.omega.map_or_else(|| "-".to_string(), |w| w.to_string());
    format!("{}  {}  {:.4}  {:.4}  {:.4}", r.p, omega, r.hp, r.l_bound, r.ls_bound)
}

fn summary_lines(s: &ScanSummary) -> [String; 4] {
    [
        format!("primes processed: {}", s.prime_count),
        format!("LS <= HP: {}", s.count_ls_le_hp),
        format!("LS < floor(HP): {}", s.count_ls_lt_floor_hp),
        format!("floor(LS) != floor(HP): {}", s.count_floor_mismatch),
    ]
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}
