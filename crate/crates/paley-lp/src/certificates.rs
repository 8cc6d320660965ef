//! Dual theta programs and standalone certificate verification.
//!
//! A certificate for a prime `p` is a pair of functions `f, g` on `Z_n`
//! (`n = (p-1)/2`) such that
//!
//!   (i)   `f(k) = 0` whenever `alpha^k - 1` is a nonzero square mod `p`,
//!   (ii)  `f(k) >= g(k) + 1` for every `k`,
//!   (iii) `g` is even and `g-hat >= 0`.
//!
//! Any such pair proves `omega(G_p) <= f(0) + 1`, and verifying one takes
//! `O(n^2)` exact-ish arithmetic — no LP solve, no trust in the solver that
//! produced it. The dual LPs in this module produce optimal pairs whose
//! `f(0) + 1` equals `LS(p)` (or `L(p)` for the equality-constrained
//! variant), which is how the bounds get re-checked end to end.

use crate::bounds::BoundsError;
use crate::numtheory::{is_generator, is_paley_prime, is_residue, PrimeContext};
use crate::paley::{local_graph, CirculantGraph};
use crate::simplex::{self, Constraint, LinearProgram, LpStatus, Sense};
use crate::spectral::{cosine_transform, GridFunction};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;
use thiserror::Error;

/// On-disk certificate (the `certify` command's input).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub p: u64,
    pub alpha: u64,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl DualCertificate {
    /// The bound this certificate claims: `omega(G_p) <= f(0) + 1`.
    pub fn claimed_bound(&self) -> f64 {
        self.f.first().map_or(f64::NAN, |v| v + 1.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self, CertificateError> {
        serde_json::from_str(json).map_err(|e| CertificateError::Malformed(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("invalid JSON: {0}")]
    Malformed(String),
    #[error("p = {0} exceeds the supported range (p <= 2^31)")]
    TooLarge(u64),
    #[error("{0} is not a prime congruent to 1 mod 4")]
    BadPrime(u64),
    #[error("alpha = {alpha} does not generate the residues mod {p}")]
    BadGenerator { p: u64, alpha: u64 },
    #[error("{field} has {len} entries but (p-1)/2 = {expected}")]
    LengthMismatch { field: &'static str, len: usize, expected: u64 },
    #[error("{field}[{index}] is not finite")]
    NonFinite { field: &'static str, index: usize },
}

/// One failed certificate condition. `Display` names the condition; the
/// offending magnitude is kept in the variant for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Condition (i): `f` is nonzero at a difference that is a residue.
    SupportNonzero { k: usize, value: f64 },
    /// Condition (ii): `f(k) < g(k) + 1`.
    SeparationGap { k: usize, shortfall: f64 },
    /// Condition (iii): `g(k) != g(n-k)`.
    NotEven { k: usize, asymmetry: f64 },
    /// Condition (iii): a cosine-transform bin of `g` is negative.
    NegativeCosine { k: usize, value: f64 },
}

impl Violation {
    /// How badly the condition fails (always positive).
    pub fn magnitude(&self) -> f64 {
        match *self {
            Violation::SupportNonzero { value, .. } => value.abs(),
            Violation::SeparationGap { shortfall, .. } => shortfall,
            Violation::NotEven { asymmetry, .. } => asymmetry,
            Violation::NegativeCosine { value, .. } => -value,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SupportNonzero { k, .. } => write!(out, "f(k) != 0 at k={k}"),
            Violation::SeparationGap { k, .. } => write!(out, "f(k) < g(k)+1 at k={k}"),
            Violation::NotEven { k, .. } => write!(out, "g is not even at k={k}"),
            Violation::NegativeCosine { k, .. } => write!(out, "(Cg)(k) < 0 at k={k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub valid: bool,
    /// `f(0) + 1`, meaningful only when `valid`.
    pub bound: f64,
    pub violations: Vec<Violation>,
}

/// Condition (i)'s index set: `{ k : alpha^k - 1 in Q_p* }`. This is spelled
/// out from the residue definition rather than borrowed from the graph
/// builder, so certificate checking stays independent of it.
pub fn zero_support(ctx: &PrimeContext) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for k in 1..ctx.n as usize {
        let x = (ctx.residue_order[k] + ctx.p - 1) % ctx.p;
        if is_residue(x, ctx.p) {
            out.insert(k);
        }
    }
    out
}

/// Check a certificate against the three conditions at tolerance `tol`.
///
/// Structural problems (wrong prime, wrong lengths, non-finite entries) are
/// errors; a well-formed certificate that fails the mathematics comes back
/// as `valid = false` with the list of violations.
pub fn verify_certificate(
    cert: &DualCertificate,
    tol: f64,
) -> Result<VerificationReport, CertificateError> {
    if cert.p > 1 << 31 {
        return Err(CertificateError::TooLarge(cert.p));
    }
    if !is_paley_prime(cert.p) {
        return Err(CertificateError::BadPrime(cert.p));
    }
    let expected = (cert.p - 1) / 2;
    for (field, vals) in [("f", &cert.f), ("g", &cert.g)] {
        if vals.len() as u64 != expected {
            return Err(CertificateError::LengthMismatch { field, len: vals.len(), expected });
        }
        if let Some(index) = vals.iter().position(|v| !v.is_finite()) {
            return Err(CertificateError::NonFinite { field, index });
        }
    }
    if !is_generator(cert.p, cert.alpha) {
        return Err(CertificateError::BadGenerator { p: cert.p, alpha: cert.alpha });
    }
    let ctx = PrimeContext::with_alpha(cert.p, cert.alpha)
        .expect("prime and generator were just validated");

    let n = cert.f.len();
    let mut violations = Vec::new();
    for &k in &zero_support(&ctx) {
        if cert.f[k].abs() > tol {
            violations.push(Violation::SupportNonzero { k, value: cert.f[k] });
        }
    }
    for k in 0..n {
        let shortfall = cert.g[k] + 1.0 - cert.f[k];
        if shortfall > tol {
            violations.push(Violation::SeparationGap { k, shortfall });
        }
    }
    for k in 1..n.div_ceil(2) {
        let asymmetry = (cert.g[k] - cert.g[n - k]).abs();
        if asymmetry > tol {
            violations.push(Violation::NotEven { k, asymmetry });
        }
    }
    let g = GridFunction::new(cert.g.clone()).expect("finiteness was just validated");
    let cg = cosine_transform(&g);
    for k in 0..=n / 2 {
        // bins k and n-k of a cosine transform agree; report each once
        let v = cg.at(k);
        if v < -tol {
            violations.push(Violation::NegativeCosine { k, value: v });
        }
    }

    Ok(VerificationReport {
        valid: violations.is_empty(),
        bound: cert.claimed_bound(),
        violations,
    })
}

/// An optimal dual pair together with the bound it certifies.
#[derive(Debug, Clone)]
pub struct DualSolution {
    /// `f(0)` at the optimum — equals the theta number of the graph.
    pub value: f64,
    pub f: GridFunction,
    pub g: GridFunction,
    pub iterations: usize,
}

fn orbit_weight(o: usize, n: usize) -> f64 {
    if o == 0 || 2 * o == n {
        1.0
    } else {
        2.0
    }
}

fn cosine_rows(n: usize, gcol: impl Fn(usize) -> usize, ncols: usize) -> Vec<Constraint> {
    // (Cg)(r) >= 0 for r = 0..n/2, g folded into one variable per orbit
    let nf = n as f64;
    (0..=n / 2)
        .map(|r| {
            let mut coeffs = vec![0.0; ncols];
            for o in 0..=n / 2 {
                coeffs[gcol(o)] =
                    -orbit_weight(o, n) * (TAU * (o as f64) * (r as f64) / nf).cos();
            }
            Constraint::new(coeffs, 0.0)
        })
        .collect()
}

fn solved(lp: &LinearProgram, what: &str) -> Result<simplex::LpSolution, BoundsError> {
    let sol = simplex::solve_default(lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(BoundsError::Solver {
            status: sol.status,
            detail: format!("{what} after {} iterations", sol.iterations),
        });
    }
    Ok(sol)
}

/// Schrijver theta of `graph` via the certificate program, transcribed
/// whole: variables for `f` off the pinned set and for the orbits of `g`,
/// rows `g(k) + 1 <= f(k)` (with `f = 0` hard-wired on the pinned set) and
/// `(Cg)(r) >= 0`, objective `min f(0)`.
pub fn dual_theta_ls(graph: &CirculantGraph) -> Result<DualSolution, BoundsError> {
    let n = graph.n();
    let pinned = graph.complement().conn().clone();

    let mut fcol = vec![None; n];
    let mut n_f = 0usize;
    for k in 0..n {
        if !pinned.contains(&k) {
            fcol[k] = Some(n_f);
            n_f += 1;
        }
    }
    let gcol = |o: usize| n_f + o;
    let ncols = n_f + n / 2 + 1;

    let mut le = Vec::with_capacity(n + n / 2 + 1);
    for k in 0..n {
        let mut coeffs = vec![0.0; ncols];
        coeffs[gcol(k.min(n - k))] = 1.0;
        if let Some(c) = fcol[k] {
            coeffs[c] = -1.0;
        }
        le.push(Constraint::new(coeffs, -1.0));
    }
    le.extend(cosine_rows(n, gcol, ncols));

    let mut objective = vec![0.0; ncols];
    objective[fcol[0].expect("0 is never in a connection set")] = 1.0;
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective,
        eq: Vec::new(),
        le,
        nonneg: vec![false; ncols],
    };
    let sol = solved(&lp, "full dual LP")?;

    let mut f = vec![0.0; n];
    for k in 0..n {
        if let Some(c) = fcol[k] {
            f[k] = sol.primal[c];
        }
    }
    let g: Vec<f64> = (0..n).map(|k| sol.primal[gcol(k.min(n - k))]).collect();
    Ok(DualSolution {
        value: sol.objective_value,
        f: GridFunction::new(f).expect("finite LP solution"),
        g: GridFunction::new(g).expect("finite LP solution"),
        iterations: sol.iterations,
    })
}

/// Same optimum as [`dual_theta_ls`] from a much smaller LP: only the `g`
/// orbits are variables (`min g(0) + 1` s.t. `g <= -1` on the pinned set and
/// `(Cg) >= 0`), and `f = max(g + 1, 0)` off the pinned set afterwards.
pub fn dual_theta_ls_reduced(graph: &CirculantGraph) -> Result<DualSolution, BoundsError> {
    let n = graph.n();
    let pinned = graph.complement().conn().clone();
    let ncols = n / 2 + 1;
    let gcol = |o: usize| o;

    let mut le = Vec::new();
    for &o in pinned.iter().filter(|&&o| o <= n / 2) {
        let mut coeffs = vec![0.0; ncols];
        coeffs[o] = 1.0;
        le.push(Constraint::new(coeffs, -1.0));
    }
    le.extend(cosine_rows(n, gcol, ncols));

    let mut objective = vec![0.0; ncols];
    objective[0] = 1.0;
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective,
        eq: Vec::new(),
        le,
        nonneg: vec![false; ncols],
    };
    let sol = solved(&lp, "reduced dual LP")?;

    let g: Vec<f64> = (0..n).map(|k| sol.primal[k.min(n - k)]).collect();
    let f: Vec<f64> = (0..n)
        .map(|k| if pinned.contains(&k) { 0.0 } else { (g[k] + 1.0).max(0.0) })
        .collect();
    Ok(DualSolution {
        value: sol.objective_value + 1.0,
        f: GridFunction::new(f).expect("finite LP solution"),
        g: GridFunction::new(g).expect("finite LP solution"),
        iterations: sol.iterations,
    })
}

/// Lovász theta of `graph` by the dual route: like the reduced program but
/// with `g = -1` held exactly on the pinned set, and `f = g + 1` everywhere.
pub fn dual_theta_l(graph: &CirculantGraph) -> Result<DualSolution, BoundsError> {
    let n = graph.n();
    let pinned = graph.complement().conn().clone();
    let ncols = n / 2 + 1;
    let gcol = |o: usize| o;

    let mut eq = Vec::new();
    for &o in pinned.iter().filter(|&&o| o <= n / 2) {
        let mut coeffs = vec![0.0; ncols];
        coeffs[o] = 1.0;
        eq.push(Constraint::new(coeffs, -1.0));
    }
    let le = cosine_rows(n, gcol, ncols);

    let mut objective = vec![0.0; ncols];
    objective[0] = 1.0;
    let lp = LinearProgram {
        sense: Sense::Minimize,
        objective,
        eq,
        le,
        nonneg: vec![false; ncols],
    };
    let sol = solved(&lp, "Lovasz dual LP")?;

    let g: Vec<f64> = (0..n).map(|k| sol.primal[k.min(n - k)]).collect();
    let f: Vec<f64> = g.iter().map(|&v| v + 1.0).collect();
    Ok(DualSolution {
        value: sol.objective_value + 1.0,
        f: GridFunction::new(f).expect("finite LP solution"),
        g: GridFunction::new(g).expect("finite LP solution"),
        iterations: sol.iterations,
    })
}

/// Solve the dual for `p`'s local-graph complement and package the optimizer
/// as a verifiable certificate. The certified bound is `LS(p)`.
pub fn certificate_for(ctx: &PrimeContext) -> Result<(DualCertificate, DualSolution), BoundsError> {
    let target = local_graph(ctx).complement();
    let sol = dual_theta_ls(&target)?;
    let cert = DualCertificate {
        p: ctx.p,
        alpha: ctx.alpha,
        f: sol.f.values().to_vec(),
        g: sol.g.values().to_vec(),
    };
    Ok((cert, sol))
}

/// Primal and dual `theta_LS` for one prime, solved independently.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakDualityReport {
    pub p: u64,
    pub primal: f64,
    pub dual: f64,
    /// `dual - primal`; weak duality says this is never meaningfully negative,
    /// strong duality that it is zero.
    pub gap: f64,
    /// Whether the packaged dual optimizer passes [`verify_certificate`].
    pub certificate_valid: bool,
}

pub fn weak_duality_check(p: u64) -> Result<WeakDualityReport, BoundsError> {
    let ctx = PrimeContext::new(p)?;
    let target = local_graph(&ctx).complement();
    let primal = crate::bounds::theta_ls_lp(&target)?.value;
    let (cert, sol) = certificate_for(&ctx)?;
    let report = verify_certificate(&cert, 1e-7)
        .expect("self-produced certificate is structurally sound");
    Ok(WeakDualityReport {
        p,
        primal,
        dual: sol.value,
        gap: sol.value - primal,
        certificate_valid: report.valid,
    })
}
