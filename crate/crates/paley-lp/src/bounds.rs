//! The three clique-number bounds: the closed-form `HP(p)` and the two
//! LP-based bounds `L(p)`, `LS(p)`.
//!
//! For a circulant graph the Lovász theta number is the value of an LP over
//! even functions on `Z_n`: maximize `n * sum f` subject to `f(0) = 1/n`,
//! `f = 0` on the connection set, and `f-hat >= 0`. Schrijver's refinement
//! adds `f >= 0`. Applied to the complement of the local graph `L_p` (plus
//! one), these give upper bounds on the clique number of `G_p` that usually
//! beat `HP(p) = (sqrt(2p-1) + 1)/2`.
//!
//! The LP is built in folded form: one variable per orbit `{k, n-k}` of a
//! non-edge difference (evenness is imposed structurally), `f(0)` substituted
//! by its pinned value `1/n`, and cosine rows only for `k = 0..n/2` — the
//! other half are duplicates under evenness and just make the simplex
//! degenerate.

use crate::numtheory::{NumTheoryError, PrimeContext};
use crate::paley::{clique_number, local_graph, CirculantGraph};
use crate::simplex::{self, Constraint, LinearProgram, LpError, LpStatus, Sense};
use crate::spectral::GridFunction;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Safety margin added before flooring a bound that may sit exactly at an
/// integer (e.g. `HP(61) = 6`): float error must not pull the floor down.
pub const FLOOR_MARGIN: f64 = 1e-6;

/// `floor(x + FLOOR_MARGIN)` — the only way bounds are ever floored.
pub fn floor_with_margin(x: f64) -> f64 {
    (x + FLOOR_MARGIN).floor()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Prime(#[from] NumTheoryError),
    #[error("theta LP construction produced an invalid program: {0}")]
    Lp(#[from] LpError),
    #[error("theta LP solve failed with status {status:?}: {detail}")]
    Solver { status: LpStatus, detail: String },
}

/// `HP(p) = (sqrt(2p - 1) + 1) / 2`.
pub fn hp_bound(p: u64) -> Result<f64, NumTheoryError> {
    if !crate::numtheory::is_paley_prime(p) {
        return Err(NumTheoryError::InvalidPrime(p));
    }
    Ok(((2 * p - 1) as f64).sqrt() / 2.0 + 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaVariant {
    /// Lovász: orbit variables are free.
    Lovasz,
    /// Schrijver: adds entrywise `f >= 0`.
    Schrijver,
}

/// A solved theta LP: the optimum, the (unfolded, even) optimizer, and
/// solver diagnostics.
#[derive(Debug, Clone)]
pub struct ThetaSolution {
    pub value: f64,
    pub f: GridFunction,
    pub iterations: usize,
}

/// Lovász theta of `g` by linear programming.
pub fn theta_l_lp(g: &CirculantGraph) -> Result<ThetaSolution, BoundsError> {
    theta_lp(g, ThetaVariant::Lovasz, 1e-9)
}

/// Schrijver theta of `g` by linear programming.
pub fn theta_ls_lp(g: &CirculantGraph) -> Result<ThetaSolution, BoundsError> {
    theta_lp(g, ThetaVariant::Schrijver, 1e-9)
}

pub fn theta_lp(
    g: &CirculantGraph,
    variant: ThetaVariant,
    tol: f64,
) -> Result<ThetaSolution, BoundsError> {
    let n = g.n();
    let nf = n as f64;

    // orbit representatives of differences where f may be nonzero
    let reps: Vec<usize> = (1..=n / 2).filter(|k| !g.conn().contains(k)).collect();
    if reps.is_empty() {
        // f is pinned everywhere except f(0) = 1/n: complete graphs and K_1
        return Ok(ThetaSolution {
            value: 1.0,
            f: GridFunction::from_fn(n, |k| if k == 0 { 1.0 / nf } else { 0.0 })
                .expect("finite by construction"),
            iterations: 0,
        });
    }
    let weights: Vec<f64> =
        reps.iter().map(|&k| if 2 * k == n { 1.0 } else { 2.0 }).collect();

    // (Cf)(r) >= 0 for r = 0..n/2, with f(0) = 1/n moved to the rhs
    let le = (0..=n / 2)
        .map(|r| {
            let coeffs = reps
                .iter()
                .zip(&weights)
                .map(|(&k, &w)| -w * (TAU * (k as f64) * (r as f64) / nf).cos())
                .collect();
            Constraint::new(coeffs, 1.0 / nf)
        })
        .collect();

    let lp = LinearProgram {
        sense: Sense::Maximize,
        objective: weights.iter().map(|&w| nf * w).collect(),
        eq: Vec::new(),
        le,
        nonneg: vec![matches!(variant, ThetaVariant::Schrijver); reps.len()],
    };
    let sol = simplex::solve(&lp, tol, tol)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            // delta_0 / n is always feasible, so this is a solver bug
            return Err(BoundsError::Solver {
                status: sol.status,
                detail: format!(
                    "theta LP reported infeasible (violation {:.3e}) but f = delta/n is feasible",
                    sol.objective_value
                ),
            });
        }
        status => {
            return Err(BoundsError::Solver {
                status,
                detail: format!("theta LP on n = {n} after {} iterations", sol.iterations),
            });
        }
    }

    let mut values = vec![0.0; n];
    values[0] = 1.0 / nf;
    for (&k, &x) in reps.iter().zip(&sol.primal) {
        values[k] = x;
        values[n - k] = x;
    }
    Ok(ThetaSolution {
        value: 1.0 + sol.objective_value,
        f: GridFunction::new(values).map_err(|e| BoundsError::Solver {
            status: LpStatus::NumericallyUnstable,
            detail: format!("optimizer has non-finite entries: {e}"),
        })?,
        iterations: sol.iterations,
    })
}

/// Everything we know about one prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: u64,
    pub alpha: u64,
    /// Exact clique number of `G_p`, when the search was run and finished.
    pub omega: Option<u32>,
    pub hp: f64,
    pub l_bound: f64,
    pub ls_bound: f64,
    pub iterations_l: usize,
    pub iterations_ls: usize,
    pub secs_l: f64,
    pub secs_ls: f64,
    /// Present iff the clique search was attempted (even if it timed out).
    pub secs_clique: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BoundOptions {
    pub compute_omega: bool,
    pub clique_budget: Duration,
    /// Generator override; `None` picks the smallest.
    pub alpha: Option<u64>,
    pub tol: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            compute_omega: true,
            clique_budget: Duration::from_secs(60),
            alpha: None,
            tol: 1e-9,
        }
    }
}

/// Compute `HP(p)`, `L(p) = theta_L(comp L_p) + 1`, `LS(p)` likewise, and
/// optionally `omega(G_p) = omega(L_p) + 1` (vertex-transitivity lets the
/// clique search run on the half-sized local graph).
pub fn bound_report(p: u64, opts: &BoundOptions) -> Result<BoundReport, BoundsError> {
    let ctx = match opts.alpha {
        Some(a) => PrimeContext::with_alpha(p, a)?,
        None => PrimeContext::new(p)?,
    };
    let hp = hp_bound(p)?;
    let local = local_graph(&ctx);
    let target = local.complement();

    let t0 = Instant::now();
    let l = theta_lp(&target, ThetaVariant::Lovasz, opts.tol)?;
    let secs_l = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let ls = theta_lp(&target, ThetaVariant::Schrijver, opts.tol)?;
    let secs_ls = t1.elapsed().as_secs_f64();

    let mut omega = None;
    let mut secs_clique = None;
    if opts.compute_omega {
        let t2 = Instant::now();
        let outcome = clique_number(&local, opts.clique_budget);
        secs_clique = Some(t2.elapsed().as_secs_f64());
        if outcome.is_exact() {
            omega = Some(outcome.size() + 1);
        }
    }

    debug_assert!(
        ls.value <= l.value + FLOOR_MARGIN,
        "Schrijver bound exceeded Lovasz bound at p = {p}"
    );
    Ok(BoundReport {
        p,
        alpha: ctx.alpha,
        omega,
        hp,
        l_bound: l.value + 1.0,
        ls_bound: ls.value + 1.0,
        iterations_l: l.iterations,
        iterations_ls: ls.iterations,
        secs_l,
        secs_ls,
        secs_clique,
    })
}
