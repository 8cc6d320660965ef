//! Shared oracles for the integration tests: brute-force LP solving by
//! vertex enumeration, exhaustive clique searches with no pruning smarter
//! than adjacency, and the unfolded (redundancy-laden) theta LP.

#![allow(dead_code)] // each test binary pulls in the subset it needs

use paley_lp::paley::CirculantGraph;
use paley_lp::simplex::{Constraint, LinearProgram, LpStatus, Sense};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve a square system by Gaussian elimination with partial pivoting;
/// `None` when the matrix is (numerically) singular.
pub fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        let pivot_row = m[col].clone();
        let pivot_rhs = rhs[col];
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m[r][col] / pivot_row[col];
            if factor != 0.0 {
                for c in col..n {
                    m[r][c] -= factor * pivot_row[c];
                }
                rhs[r] -= factor * pivot_rhs;
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

/// Whether `x` satisfies every constraint of `lp` within `tol`.
pub fn feasible(lp: &LinearProgram, x: &[f64], tol: f64) -> bool {
    for c in &lp.eq {
        if (dot(&c.coeffs, x) - c.rhs).abs() > tol * (1.0 + c.rhs.abs()) {
            return false;
        }
    }
    for c in &lp.le {
        if dot(&c.coeffs, x) > c.rhs + tol * (1.0 + c.rhs.abs()) {
            return false;
        }
    }
    lp.nonneg
        .iter()
        .zip(x)
        .all(|(&nn, &v)| !nn || v >= -tol)
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Optimal value by enumerating every vertex: all equality rows plus each
/// size-(n - #eq) subset of the inequalities (constraint rows and sign
/// bounds) solved as equations, filtered for feasibility. Only sensible for
/// a handful of variables, which is the point — it cannot share a bug with
/// the simplex. `None` when no feasible vertex exists.
pub fn vertex_enum_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.objective.len();
    let eqs: Vec<(Vec<f64>, f64)> = lp.eq.iter().map(|c| (c.coeffs.clone(), c.rhs)).collect();
    let mut ineqs: Vec<(Vec<f64>, f64)> = lp.le.iter().map(|c| (c.coeffs.clone(), c.rhs)).collect();
    for (j, &nn) in lp.nonneg.iter().enumerate() {
        if nn {
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            ineqs.push((row, 0.0));
        }
    }
    let need = n.checked_sub(eqs.len())?;
    let mut best: Option<f64> = None;
    for subset in combinations(ineqs.len(), need) {
        let mut a: Vec<Vec<f64>> = eqs.iter().map(|r| r.0.clone()).collect();
        let mut b: Vec<f64> = eqs.iter().map(|r| r.1).collect();
        for &i in &subset {
            a.push(ineqs[i].0.clone());
            b.push(ineqs[i].1);
        }
        let Some(x) = solve_square(&a, &b) else { continue };
        if !feasible(lp, &x, 1e-7) {
            continue;
        }
        let val = dot(&lp.objective, &x);
        best = Some(match (best, lp.sense) {
            (None, _) => val,
            (Some(prev), Sense::Maximize) => prev.max(val),
            (Some(prev), Sense::Minimize) => prev.min(val),
        });
    }
    best
}

/// A random LP that is feasible and bounded by construction: nonnegative
/// variables capped by a simplex-shaped row, constraints arranged to keep a
/// known point (the origin, or a sampled one when there is an equality row)
/// strictly feasible.
pub fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(2..=4);
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut eq = Vec::new();
    let mut le = Vec::new();
    if rng.gen_bool(0.3) {
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        eq.push(Constraint::new(a.clone(), dot(&a, &z)));
        for _ in 0..rng.gen_range(2..=4) {
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rhs = dot(&c, &z) + rng.gen_range(0.05..1.5);
            le.push(Constraint::new(c, rhs));
        }
        le.push(Constraint::new(vec![1.0; n], z.iter().sum::<f64>() + 3.0));
    } else {
        for _ in 0..rng.gen_range(2..=5) {
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            le.push(Constraint::new(c, rng.gen_range(0.1..2.0)));
        }
        le.push(Constraint::new(vec![1.0; n], 3.0));
    }
    LinearProgram { sense, objective, eq, le, nonneg: vec![true; n] }
}

/// Exhaustive clique number: recursively extend every clique by every
/// larger-indexed compatible vertex. No colouring, no bounds — every clique
/// in the graph is visited.
pub fn clique_dfs(g: &CirculantGraph) -> u32 {
    fn extend(g: &CirculantGraph, size: u32, cands: &[usize], best: &mut u32) {
        *best = (*best).max(size);
        for (i, &v) in cands.iter().enumerate() {
            let next: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&u| g.adjacent(u, v))
                .collect();
            extend(g, size + 1, &next, best);
        }
    }
    let mut best = 0;
    let all: Vec<usize> = (0..g.n()).collect();
    extend(g, 0, &all, &mut best);
    best
}

/// Literal all-subsets clique number for graphs on at most 20 vertices:
/// test each of the 2^n vertex subsets for pairwise adjacency.
pub fn brute_subsets_clique(g: &CirculantGraph) -> u32 {
    let n = g.n();
    assert!(n <= 20, "2^n subsets only tractable for tiny n");
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            let mut m = 0u32;
            for u in 0..n {
                if u != v && g.adjacent(u, v) {
                    m |= 1 << u;
                }
            }
            m
        })
        .collect();
    let mut best = 0;
    for mask in 1u32..1 << n {
        let mut rest = mask;
        let mut is_clique = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & !(1 << v) & !adj[v] != 0 {
                is_clique = false;
                break;
            }
        }
        if is_clique {
            best = best.max(mask.count_ones());
        }
    }
    best
}

/// Theta of `g` by the *unfolded* LP: one variable per point of `Z_n`, with
/// explicit evenness equalities, explicit pins on the whole connection set,
/// and all `n` cosine rows (half of them redundant). Deliberately the
/// clumsiest correct formulation — it exercises equality handling and
/// degenerate rows, and must agree with the folded LP.
pub fn unfolded_theta(g: &CirculantGraph, schrijver: bool) -> f64 {
    let n = g.n();
    let nf = n as f64;
    let mut eq = Vec::new();
    let mut pin = vec![0.0; n];
    pin[0] = 1.0;
    eq.push(Constraint::new(pin, 1.0 / nf));
    for &d in g.conn() {
        let mut row = vec![0.0; n];
        row[d] = 1.0;
        eq.push(Constraint::new(row, 0.0));
    }
    for k in 1..n {
        if k < n - k {
            let mut row = vec![0.0; n];
            row[k] = 1.0;
            row[n - k] = -1.0;
            eq.push(Constraint::new(row, 0.0));
        }
    }
    let le = (0..n)
        .map(|r| {
            let coeffs = (0..n)
                .map(|j| -(TAU * (j as f64) * (r as f64) / nf).cos())
                .collect();
            Constraint::new(coeffs, 0.0)
        })
        .collect();
    let lp = LinearProgram {
        sense: Sense::Maximize,
        objective: vec![nf; n],
        eq,
        le,
        nonneg: vec![schrijver; n],
    };
    let sol = paley_lp::simplex::solve_default(&lp).expect("well-formed LP");
    assert_eq!(sol.status, LpStatus::Optimal, "unfolded theta LP must solve");
    sol.objective_value
}
