//! Dense two-phase simplex over an explicit tableau.
//!
//! This is the single numerical engine behind every theta bound and dual
//! certificate in the crate. Design constraints, in order: never report a
//! wrong answer (suspect pivots surface as `NumericallyUnstable`), produce
//! dual multipliers good enough for certificate extraction, and stay simple
//! enough to audit. Problems here are at most a couple of thousand rows and
//! columns, so a dense tableau beats anything clever.
//!
//! Free variables are handled by the classic `x = x+ - x-` split; rows are
//! normalized to nonnegative right-hand sides; equality rows (and flipped
//! inequality rows) get artificial variables which are driven out in phase 1
//! and afterwards kept — banned from re-entering — because their reduced
//! costs are exactly the dual multipliers of their rows.
//!
//! Set `SIMPLEX_DEBUG=1` to trace long runs, rebuilds and certification
//! failures on stderr.

use thiserror::Error;

fn trace_enabled() -> bool {
    std::env::var_os("SIMPLEX_DEBUG").is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// `coeffs . x (<=|=) rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, rhs }
    }
}

/// A dense LP: optimize `objective . x` subject to equality and `<=` rows,
/// with each variable either nonnegative or free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub eq: Vec<Constraint>,
    pub le: Vec<Constraint>,
    /// `nonneg[j]` = variable j is bounded below by 0; otherwise free.
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Every candidate pivot fell below the stability threshold (or an
    /// internal certification check failed); the reported numbers are the
    /// solver's last state, not a trusted answer.
    NumericallyUnstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal value when `Optimal`; total infeasibility (phase-1 residual)
    /// when `Infeasible`; signed infinity when `Unbounded`.
    pub objective_value: f64,
    pub primal: Vec<f64>,
    /// Multipliers for eq rows then le rows, as shadow prices of their rhs:
    /// `sum_i dual[i] * rhs[i] = objective_value` at an optimum. Empty unless
    /// `Optimal`.
    pub dual: Vec<f64>,
    /// Improving feasible direction when `Unbounded`.
    pub ray: Option<Vec<f64>>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("objective has {objective} entries but bounds vector has {bounds}")]
    BoundsMismatch { objective: usize, bounds: usize },
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("linear program has no variables")]
    NoVariables,
}

/// Pivots smaller than this are never taken.
const PIVOT_TOL: f64 = 1e-9;
/// Column entries below this count as zero for the unboundedness test.
const HARD_ZERO: f64 = 1e-12;
/// Minimum pivot magnitude for driving a leftover artificial out of the
/// basis; rows with nothing above this are treated as redundant.
const EVICT_TOL: f64 = 1e-7;
/// Minimum magnitude the best pivot in a column's ratio band must have for
/// the column to be usable. Problem data is O(1), so a band living entirely
/// below this is roundoff; pivoting there scales a row by 1e7+ and poisons
/// the tableau.
const COLUMN_TOL: f64 = 1e-7;
/// Absolute amount a basic variable may be overdrawn in the ratio test so
/// that near-tied rows compete on pivot stability.
const RATIO_SLACK: f64 = 1e-12;
/// Anti-degeneracy jiggle applied to the right-hand side, relative to each
/// row's own rhs and to the largest rhs. LPs whose rows share a rhs (the
/// theta programs: every row is 1/n) tie hundreds of rows in every ratio
/// test and stall the simplex on zero-length steps for tens of thousands of
/// iterations; distinct rhs values make each step strictly improving. The
/// spacing must dominate RATIO_SLACK or the Harris band re-merges the ties.
/// The perturbation is stripped before extraction.
const PERTURB_REL: f64 = 1e-7;
const PERTURB_ABS: f64 = 1e-9;

pub fn solve_default(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve(lp, 1e-9, 1e-9)
}

pub fn solve(lp: &LinearProgram, feas_tol: f64, opt_tol: f64) -> Result<LpSolution, LpError> {
    validate(lp)?;
    let mut t = Tableau::build(lp);

    if t.art_count > 0 {
        let phase1_cost: Vec<f64> =
            (0..t.ncols).map(|j| if j >= t.art_start { -1.0 } else { 0.0 }).collect();
        t.install_cost(&phase1_cost);
        match t.optimize(opt_tol, /*ban_artificials=*/ false) {
            LoopExit::Optimal => {}
            // phase 1 is bounded above by 0, so Unbounded cannot happen
            LoopExit::Unbounded(_) | LoopExit::Stuck => {
                if trace_enabled() {
                    eprintln!("[simplex] phase-1 stuck after {} iterations", t.iterations);
                }
                return Ok(t.bail(lp, LpStatus::NumericallyUnstable));
            }
        }
        if t.z < -feas_tol {
            let mut out = t.bail(lp, LpStatus::Infeasible);
            out.objective_value = -t.z; // total violation
            return Ok(out);
        }
        t.evict_basic_artificials();
    }

    let phase2_cost = t.structural_cost(lp);
    t.install_cost(&phase2_cost);
    match t.optimize(opt_tol, /*ban_artificials=*/ true) {
        LoopExit::Optimal => {
            if !t.unperturb() {
                return Ok(t.bail(lp, LpStatus::NumericallyUnstable));
            }
            Ok(t.extract_optimal(lp, feas_tol, opt_tol))
        }
        LoopExit::Unbounded(col) => {
            let mut out = t.bail(lp, LpStatus::Unbounded);
            out.ray = Some(t.ray_through(lp, col));
            out.objective_value = match lp.sense {
                Sense::Maximize => f64::INFINITY,
                Sense::Minimize => f64::NEG_INFINITY,
            };
            Ok(out)
        }
        LoopExit::Stuck => {
            if trace_enabled() {
                eprintln!("[simplex] phase-2 stuck after {} iterations", t.iterations);
            }
            Ok(t.bail(lp, LpStatus::NumericallyUnstable))
        }
    }
}

fn validate(lp: &LinearProgram) -> Result<(), LpError> {
    let nv = lp.objective.len();
    if nv == 0 {
        return Err(LpError::NoVariables);
    }
    if lp.nonneg.len() != nv {
        return Err(LpError::BoundsMismatch { objective: nv, bounds: lp.nonneg.len() });
    }
    if !lp.objective.iter().all(|c| c.is_finite()) {
        return Err(LpError::NonFinite("objective"));
    }
    for (row, c) in lp.eq.iter().chain(&lp.le).enumerate() {
        if c.coeffs.len() != nv {
            return Err(LpError::DimensionMismatch { row, expected: nv, got: c.coeffs.len() });
        }
        if !c.rhs.is_finite() || !c.coeffs.iter().all(|a| a.is_finite()) {
            return Err(LpError::NonFinite("constraint"));
        }
    }
    Ok(())
}

enum LoopExit {
    Optimal,
    Unbounded(usize),
    Stuck,
}

struct Tableau {
    m: usize,
    ncols: usize,
    art_start: usize,
    art_count: usize,
    /// `B^-1 A`, row-major, m x ncols.
    a: Vec<f64>,
    /// `B^-1 b`, kept (approximately) nonnegative.
    b: Vec<f64>,
    /// Pristine copies of the initial `a`/`b`; rank-one pivot updates drift,
    /// and [`Tableau::refactorize`] rebuilds the tableau from these. `b0`
    /// carries the anti-degeneracy perturbation, `b0_true` does not.
    a0: Vec<f64>,
    b0: Vec<f64>,
    b0_true: Vec<f64>,
    basis: Vec<usize>,
    /// Reduced costs of the current cost vector.
    cost: Vec<f64>,
    /// Current objective `c_B . B^-1 b`.
    z: f64,
    /// Raw costs backing `cost`, needed when re-pricing after a phase switch.
    raw_cost: Vec<f64>,
    /// Per original variable: its `x+` column and optional `x-` column.
    var_cols: Vec<(usize, Option<usize>)>,
    slack_of_row: Vec<Option<usize>>,
    art_of_row: Vec<Option<usize>>,
    flipped: Vec<bool>,
    iterations: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let nv = lp.objective.len();
        let m = lp.eq.len() + lp.le.len();

        let mut next = 0usize;
        let var_cols: Vec<(usize, Option<usize>)> = (0..nv)
            .map(|j| {
                let pos = next;
                next += 1;
                let neg = if lp.nonneg[j] {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                };
                (pos, neg)
            })
            .collect();

        let rows: Vec<&Constraint> = lp.eq.iter().chain(&lp.le).collect();
        let flipped: Vec<bool> = rows.iter().map(|c| c.rhs < 0.0).collect();

        let mut slack_of_row = vec![None; m];
        for i in lp.eq.len()..m {
            slack_of_row[i] = Some(next);
            next += 1;
        }
        let art_start = next;
        let mut art_of_row = vec![None; m];
        for i in 0..m {
            let needs_art = i < lp.eq.len() || flipped[i];
            if needs_art {
                art_of_row[i] = Some(next);
                next += 1;
            }
        }
        let ncols = next;
        let art_count = ncols - art_start;

        let mut a = vec![0.0; m * ncols];
        let mut b = vec![0.0; m];
        let mut basis = vec![usize::MAX; m];
        for (i, row) in rows.iter().enumerate() {
            let sgn = if flipped[i] { -1.0 } else { 1.0 };
            for (j, &(pos, neg)) in var_cols.iter().enumerate() {
                let v = sgn * row.coeffs[j];
                a[i * ncols + pos] = v;
                if let Some(neg) = neg {
                    a[i * ncols + neg] = -v;
                }
            }
            b[i] = sgn * row.rhs;
            if let Some(s) = slack_of_row[i] {
                a[i * ncols + s] = sgn; // slack was added before the flip
            }
            if let Some(t) = art_of_row[i] {
                a[i * ncols + t] = 1.0;
                basis[i] = t;
            } else {
                basis[i] = slack_of_row[i].expect("row without artificial must have slack");
            }
        }

        let b_true = b.clone();
        let bmax = b.iter().fold(0.0f64, |acc, &v| acc.max(v));
        for (i, v) in b.iter_mut().enumerate() {
            // Only plain `<=` rows: extra slack headroom is a pure
            // relaxation, so feasible problems stay feasible. Jiggling an
            // equality or a flipped row would tighten it instead and could
            // turn a knife-edge feasible problem infeasible.
            if slack_of_row[i].is_none() || flipped[i] {
                continue;
            }
            // splitmix64 of the row index: a fixed, well-spread unit in [1, 2)
            let mut x = (i as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
            x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            x ^= x >> 31;
            let u = 1.0 + (x >> 11) as f64 / (1u64 << 53) as f64;
            *v += u * (PERTURB_ABS * bmax + PERTURB_REL * *v);
        }

        Tableau {
            m,
            ncols,
            art_start,
            art_count,
            a0: a.clone(),
            b0: b.clone(),
            b0_true: b_true,
            a,
            b,
            basis,
            cost: vec![0.0; ncols],
            z: 0.0,
            raw_cost: vec![0.0; ncols],
            var_cols,
            slack_of_row,
            art_of_row,
            flipped,
            iterations: 0,
        }
    }

    fn structural_cost(&self, lp: &LinearProgram) -> Vec<f64> {
        let sign = match lp.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let mut c = vec![0.0; self.ncols];
        for (j, &(pos, neg)) in self.var_cols.iter().enumerate() {
            c[pos] = sign * lp.objective[j];
            if let Some(neg) = neg {
                c[neg] = -sign * lp.objective[j];
            }
        }
        c
    }

    /// Set a new raw cost vector and recompute reduced costs and z by
    /// pricing out the current basis.
    fn install_cost(&mut self, raw: &[f64]) {
        self.raw_cost.copy_from_slice(raw);
        self.cost.copy_from_slice(raw);
        self.z = 0.0;
        for i in 0..self.m {
            let cb = raw[self.basis[i]];
            if cb != 0.0 {
                self.z += cb * self.b[i];
                let row = &self.a[i * self.ncols..(i + 1) * self.ncols];
                for (r, &aij) in self.cost.iter_mut().zip(row) {
                    *r -= cb * aij;
                }
            }
        }
        for i in 0..self.m {
            self.cost[self.basis[i]] = 0.0;
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let ncols = self.ncols;
        let piv = self.a[row * ncols + col];
        let inv = 1.0 / piv;
        for v in &mut self.a[row * ncols..(row + 1) * ncols] {
            *v *= inv;
        }
        self.b[row] *= inv;
        self.a[row * ncols + col] = 1.0;

        // split_at_mut gymnastics avoided by raw indexing over a flat vec
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.a[i * ncols + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..ncols {
                self.a[i * ncols + j] -= f * self.a[row * ncols + j];
            }
            self.a[i * ncols + col] = 0.0;
            self.b[i] -= f * self.b[row];
        }

        let f = self.cost[col];
        if f != 0.0 {
            for j in 0..ncols {
                self.cost[j] -= f * self.a[row * ncols + j];
            }
            self.cost[col] = 0.0;
            self.z += f * self.b[row];
        }
        self.basis[row] = col;
    }

    /// Rebuild `a`, `b`, reduced costs and `z` from the pristine problem data
    /// and the current basis, discarding all drift accumulated by the rank-one
    /// pivot updates. Returns false when the basis matrix is numerically
    /// singular, in which case the tableau is left untouched.
    ///
    /// Cost is one dense Gaussian solve, `O(m^2 (m + ncols))`; callers only
    /// invoke it every few thousand pivots or when drift is already visible.
    fn refactorize(&mut self) -> bool {
        let m = self.m;
        let nc = self.ncols;

        // Basis matrix: column k holds the original column of basis[k].
        let mut bmat = vec![0.0; m * m];
        for (k, &bj) in self.basis.iter().enumerate() {
            for i in 0..m {
                bmat[i * m + k] = self.a0[i * nc + bj];
            }
        }
        let mut x = self.a0.clone();
        let mut xb = self.b0.clone();

        // Forward elimination with partial pivoting, applied to the full
        // right-hand side [A | b].
        for col in 0..m {
            let mut pr = col;
            let mut pv = bmat[col * m + col].abs();
            for r in col + 1..m {
                let v = bmat[r * m + col].abs();
                if v > pv {
                    pv = v;
                    pr = r;
                }
            }
            if pv < 1e-12 {
                return false;
            }
            if pr != col {
                for j in col..m {
                    bmat.swap(col * m + j, pr * m + j);
                }
                for j in 0..nc {
                    x.swap(col * nc + j, pr * nc + j);
                }
                xb.swap(col, pr);
            }
            let inv = 1.0 / bmat[col * m + col];
            for r in col + 1..m {
                let f = bmat[r * m + col] * inv;
                if f == 0.0 {
                    continue;
                }
                for j in col..m {
                    bmat[r * m + j] -= f * bmat[col * m + j];
                }
                for j in 0..nc {
                    x[r * nc + j] -= f * x[col * nc + j];
                }
                xb[r] -= f * xb[col];
            }
        }
        // Back substitution.
        for col in (0..m).rev() {
            let inv = 1.0 / bmat[col * m + col];
            for j in 0..nc {
                x[col * nc + j] *= inv;
            }
            xb[col] *= inv;
            for r in 0..col {
                let f = bmat[r * m + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..nc {
                    x[r * nc + j] -= f * x[col * nc + j];
                }
                xb[r] -= f * xb[col];
            }
        }
        // Basis columns are identity by construction; make them exact so the
        // pivot invariants downstream see clean units.
        for (k, &bj) in self.basis.iter().enumerate() {
            for i in 0..m {
                x[i * nc + bj] = if i == k { 1.0 } else { 0.0 };
            }
        }

        self.a = x;
        self.b = xb;
        let raw = self.raw_cost.clone();
        self.install_cost(&raw);
        true
    }

    /// Swap the perturbed rhs for the exact one and rebuild. A basis that is
    /// optimal for the perturbed problem stays dual-feasible for the exact
    /// one (reduced costs do not depend on the rhs), so extraction and
    /// certification afterwards run on exact data.
    fn unperturb(&mut self) -> bool {
        self.b0.copy_from_slice(&self.b0_true);
        self.refactorize()
    }

    /// Ratio test for `col`; `Ok(row)` to pivot, `Err(true)` if the column
    /// only has pivots in the unstable zone, `Err(false)` if it certifies
    /// unboundedness.
    ///
    /// Two passes: find the tightest ratio, then among rows within a whisker
    /// of it take the largest pivot element (smallest basis column on a
    /// near-tie). Degenerate bases tie many rows at ratio zero, and picking
    /// by ratio alone is free to divide a row by 1e-9 when a pivot of 0.5
    /// was available at the same ratio — that is how tableaus explode.
    ///
    /// Under `bland` the stability preference is dropped: Bland's theorem
    /// needs the smallest basis column among the tied rows, on top of the
    /// smallest entering index, before it rules out cycling.
    fn leaving_row(&self, col: usize, bland: bool) -> Result<usize, bool> {
        // Largest step that overdraws no basic variable by more than
        // RATIO_SLACK. Granting each row that absolute slack (rather than a
        // slack on the ratio itself) keeps the injected infeasibility
        // independent of the step length.
        let mut theta_max = f64::INFINITY;
        let mut suspect = false;
        for i in 0..self.m {
            let aij = self.a[i * self.ncols + col];
            if aij > PIVOT_TOL {
                theta_max = theta_max.min((self.b[i].max(0.0) + RATIO_SLACK) / aij);
            } else if aij > HARD_ZERO {
                suspect = true;
            }
        }
        if theta_max == f64::INFINITY {
            return Err(suspect);
        }
        // Among the rows whose true ratio fits under that step, prefer the
        // largest pivot element; degenerate bases tie many rows at ratio
        // zero, and picking by ratio alone is free to divide a row by 1e-9
        // when a pivot of 0.5 was available at the same ratio — that is how
        // tableaus explode. The row defining theta_max always qualifies.
        let mut largest = 0.0f64;
        for i in 0..self.m {
            let aij = self.a[i * self.ncols + col];
            if aij > PIVOT_TOL && self.b[i].max(0.0) <= theta_max * aij {
                largest = largest.max(aij);
            }
        }
        if largest < COLUMN_TOL {
            return Err(true);
        }
        // Even under Bland the floor must not collapse to PIVOT_TOL: letting
        // a 1e-9 element in when a healthy one is tied at the same ratio
        // trades a possible cycle for certain corruption. The relaxed factor
        // keeps genuinely tied rows eligible for the smallest-index rule
        // (structural ties sit within a factor of a few of each other).
        let stable_floor = if bland { 0.05 * largest } else { 0.5 * largest };
        let mut pick = usize::MAX;
        for i in 0..self.m {
            let aij = self.a[i * self.ncols + col];
            if aij > PIVOT_TOL
                && aij >= stable_floor
                && self.b[i].max(0.0) <= theta_max * aij
                && (pick == usize::MAX || self.basis[i] < self.basis[pick])
            {
                pick = i;
            }
        }
        Ok(pick)
    }

    fn optimize(&mut self, opt_tol: f64, ban_artificials: bool) -> LoopExit {
        // Degenerate plateaus grow with the basis size; give the fast rule
        // that much slack, then fall back to Bland until the next strict
        // improvement.
        let stall_limit = (self.m + self.ncols).max(64);
        let iter_cap = 50_000 + 50 * (self.m + self.ncols);
        let mut bland = false;
        let mut stall = 0usize;
        let mut last_z = self.z;
        // Drift repair: z is monotone under exact pivots, so any visible slide
        // below its high-water mark is accumulated roundoff. Long runs also
        // get periodic rebuilds before drift becomes visible.
        let mut high_water = self.z;
        let mut refactors = 0usize;
        let mut last_refactor = self.iterations;
        let mut retried_without_pivot = false;
        // Reduced costs inherit the cost vector's scale, and so does their
        // roundoff; an absolute threshold would chase noise columns forever
        // on objectives with large coefficients.
        let cost_scale = 1.0 + self.raw_cost.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
        let enter_tol = opt_tol * cost_scale;

        loop {
            self.iterations += 1;
            if self.iterations > iter_cap {
                return LoopExit::Stuck;
            }
            if self.iterations % 10_000 == 0 && trace_enabled() {
                let worst = (0..self.ncols)
                    .filter(|&j| !(ban_artificials && j >= self.art_start))
                    .map(|j| self.cost[j])
                    .fold(0.0f64, f64::max);
                eprintln!(
                    "[simplex] iter {} z={:.9e} stall={} bland={} best_cost={:.3e}",
                    self.iterations, self.z, stall, bland, worst
                );
            }

            // entering candidates, best reduced cost first (or Bland: first index)
            let allowed = |j: usize| !(ban_artificials && j >= self.art_start);
            let mut candidates: Vec<usize> = (0..self.ncols)
                .filter(|&j| allowed(j) && self.cost[j] > enter_tol)
                .collect();
            if candidates.is_empty() {
                return LoopExit::Optimal;
            }
            if bland {
                candidates.truncate(1); // already in index order
            } else {
                candidates.sort_by(|&x, &y| self.cost[y].total_cmp(&self.cost[x]));
            }

            let mut pivoted = false;
            let mut any_suspect = false;
            for &col in &candidates {
                match self.leaving_row(col, bland) {
                    Ok(row) => {
                        self.pivot(row, col);
                        pivoted = true;
                        break;
                    }
                    Err(true) => any_suspect = true,
                    Err(false) => return LoopExit::Unbounded(col),
                }
            }
            if !pivoted {
                // Only unstable pivots remain. Stale dust often prices or
                // sizes differently when clean, so rebuild once and retry;
                // give up if a fresh tableau looks the same.
                if any_suspect && !retried_without_pivot && refactors < 40 {
                    if !self.refactorize() {
                        return LoopExit::Stuck;
                    }
                    refactors += 1;
                    last_refactor = self.iterations;
                    retried_without_pivot = true;
                    stall = 0;
                    last_z = self.z;
                    high_water = self.z;
                    bland = false;
                    continue;
                }
                return if any_suspect { LoopExit::Stuck } else { LoopExit::Optimal };
            }
            retried_without_pivot = false;

            if self.z > last_z + opt_tol * (1.0 + last_z.abs()) {
                // Real progress; a degenerate plateau, once left, can never
                // recur (z is monotone), so it is safe to go back to the
                // fast pivot rule.
                stall = 0;
                last_z = self.z;
                bland = false;
            } else {
                stall += 1;
                if stall >= stall_limit {
                    bland = true;
                }
            }

            if self.z > high_water {
                high_water = self.z;
            }
            // The Harris slack feeds tiny legitimate dips back into z through
            // ill-conditioned bases; only a slide well past that scale is
            // actual corruption. Smaller drift gets wiped by the periodic
            // rebuild anyway.
            let drifted = high_water - self.z > 1e-3 * (1.0 + high_water.abs());
            let due = self.iterations - last_refactor >= 5_000;
            if (drifted || due) && refactors < 40 {
                if trace_enabled() {
                    eprintln!(
                        "[simplex] refactorize #{} at iter {} (drifted={} z={:.9e} high={:.9e})",
                        refactors + 1,
                        self.iterations,
                        drifted,
                        self.z,
                        high_water
                    );
                }
                if !self.refactorize() {
                    return LoopExit::Stuck;
                }
                refactors += 1;
                last_refactor = self.iterations;
                stall = 0;
                last_z = self.z;
                high_water = self.z;
                bland = false;
            }
        }
    }

    /// After phase 1, pivot still-basic artificials out where possible.
    /// Rows that resist are redundant: their artificial stays basic at ~0,
    /// never re-enters, contributes nothing to the primal or the objective,
    /// and prices the row's dual at 0 — a valid multiplier for a redundant
    /// row.
    fn evict_basic_artificials(&mut self) {
        for i in 0..self.m {
            if self.basis[i] < self.art_start {
                continue;
            }
            // Phase 1 left this artificial basic at |b| <= feas_tol; zero it
            // exactly so the eviction pivot cannot smear the residual across
            // the column it scales by 1/pivot.
            self.b[i] = 0.0;
            let row = &self.a[i * self.ncols..i * self.ncols + self.art_start];
            let pick = row
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                .map(|(j, &v)| (j, v.abs()));
            if let Some((col, mag)) = pick {
                if mag > EVICT_TOL {
                    self.pivot(i, col);
                }
            }
        }
    }

    fn primal_from_basis(&self, lp: &LinearProgram) -> Vec<f64> {
        let mut expanded = vec![0.0; self.ncols];
        for i in 0..self.m {
            expanded[self.basis[i]] = self.b[i];
        }
        lp.objective
            .iter()
            .enumerate()
            .map(|(j, _)| {
                let (pos, neg) = self.var_cols[j];
                expanded[pos] - neg.map_or(0.0, |c| expanded[c])
            })
            .collect()
    }

    /// Flipspace dual of row i read off the reduced cost of its unit column.
    fn flipspace_dual(&self, i: usize) -> f64 {
        if let Some(s) = self.slack_of_row[i] {
            let sgn = if self.flipped[i] { -1.0 } else { 1.0 };
            -sgn * self.cost[s]
        } else {
            let t = self.art_of_row[i].expect("every row has a slack or an artificial");
            -self.cost[t]
        }
    }

    fn user_duals(&self, lp: &LinearProgram) -> Vec<f64> {
        let sign = match lp.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        (0..self.m)
            .map(|i| {
                let flip = if self.flipped[i] { -1.0 } else { 1.0 };
                sign * flip * self.flipspace_dual(i)
            })
            .collect()
    }

    fn extract_optimal(&self, lp: &LinearProgram, feas_tol: f64, opt_tol: f64) -> LpSolution {
        let primal = self.primal_from_basis(lp);
        let dual = self.user_duals(lp);
        let sign = match lp.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let objective_value = sign * self.z;

        // certification: feasibility and strong-duality residual; a failure
        // here means accumulated roundoff, which must not masquerade as an
        // answer
        let mut ok = true;
        let mut worst_rel = 0.0f64;
        for (i, c) in lp.eq.iter().chain(&lp.le).enumerate() {
            let lhs: f64 = c.coeffs.iter().zip(&primal).map(|(a, x)| a * x).sum();
            let scale = 1.0 + c.rhs.abs()
                + c.coeffs.iter().zip(&primal).map(|(a, x)| (a * x).abs()).sum::<f64>();
            let violation = if i < lp.eq.len() { (lhs - c.rhs).abs() } else { lhs - c.rhs };
            worst_rel = worst_rel.max(violation / scale);
            if violation > feas_tol * scale {
                ok = false;
            }
        }
        for (j, &nn) in lp.nonneg.iter().enumerate() {
            if nn && primal[j] < -feas_tol {
                ok = false;
            }
        }
        let rhs_dot_dual: f64 = lp
            .eq
            .iter()
            .chain(&lp.le)
            .zip(&dual)
            .map(|(c, y)| c.rhs * y)
            .sum();
        let duality_scale = 1.0 + objective_value.abs() + rhs_dot_dual.abs();
        if (rhs_dot_dual - objective_value).abs() > opt_tol * duality_scale * 10.0 {
            ok = false;
        }
        if !ok && trace_enabled() {
            eprintln!(
                "[simplex] certification failed after {} iterations: worst feasibility {:.3e} rel, duality residual {:.3e} (obj {objective_value:.6e})",
                self.iterations,
                worst_rel,
                (rhs_dot_dual - objective_value).abs()
            );
        }

        LpSolution {
            status: if ok { LpStatus::Optimal } else { LpStatus::NumericallyUnstable },
            objective_value,
            primal,
            dual,
            ray: None,
            iterations: self.iterations,
        }
    }

    /// Feasible improving direction for entering column `col`.
    fn ray_through(&self, lp: &LinearProgram, col: usize) -> Vec<f64> {
        let mut expanded = vec![0.0; self.ncols];
        expanded[col] = 1.0;
        for i in 0..self.m {
            expanded[self.basis[i]] = -self.a[i * self.ncols + col];
        }
        (0..lp.objective.len())
            .map(|j| {
                let (pos, neg) = self.var_cols[j];
                expanded[pos] - neg.map_or(0.0, |c| expanded[c])
            })
            .collect()
    }

    /// Solution skeleton for non-optimal exits.
    fn bail(&self, lp: &LinearProgram, status: LpStatus) -> LpSolution {
        let sign = match lp.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        LpSolution {
            status,
            objective_value: sign * self.z,
            primal: self.primal_from_basis(lp),
            dual: Vec::new(),
            ray: None,
            iterations: self.iterations,
        }
    }
}
