//! Exact arithmetic mod p: primality, quadratic residues, and generators of
//! the group of nonzero squares.
//!
//! Everything here is integer-exact. The rest of the crate leans on one fact
//! established in this module: for a prime `p = 1 (mod 4)` the nonzero
//! squares `Q_p*` form a cyclic group of order `n = (p-1)/2` containing `-1`,
//! and listing them as powers of a generator is what makes the local graph
//! circulant.

use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("{0} is not a prime congruent to 1 mod 4")]
    InvalidPrime(u64),
    #[error("{alpha} does not generate the group of nonzero squares mod {p}")]
    NotAGenerator { p: u64, alpha: u64 },
}

/// `(a * b) mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `(base ^ exp) mod m` by square-and-multiply.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin. The base set covers all of u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// True iff `p` is a prime with `p = 1 (mod 4)` — the primes for which the
/// Paley graph is defined (and undirected).
pub fn is_paley_prime(p: u64) -> bool {
    p % 4 == 1 && is_prime(p)
}

fn require_paley_prime(p: u64) -> Result<(), NumTheoryError> {
    if is_paley_prime(p) {
        Ok(())
    } else {
        Err(NumTheoryError::InvalidPrime(p))
    }
}

/// Euler's criterion: `x` is a nonzero square mod `p` iff `x^((p-1)/2) = 1`.
///
/// Caller must pass a validated Paley prime and `0 < x < p`.
pub fn is_residue(x: u64, p: u64) -> bool {
    debug_assert!(is_paley_prime(p));
    debug_assert!(x > 0 && x < p);
    pow_mod(x, (p - 1) / 2, p) == 1
}

/// The set `Q_p*` of nonzero quadratic residues mod `p`, ascending.
pub fn quadratic_residues(p: u64) -> Result<BTreeSet<u64>, NumTheoryError> {
    require_paley_prime(p)?;
    let mut out = BTreeSet::new();
    for x in 1..p {
        out.insert(mul_mod(x, x, p));
    }
    debug_assert_eq!(out.len() as u64, (p - 1) / 2);
    Ok(out)
}

/// Distinct prime factors by trial division; fine at the sizes we scan.
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `alpha` generates all of `Q_p*`, i.e. has order exactly `(p-1)/2`.
pub fn is_generator(p: u64, alpha: u64) -> bool {
    debug_assert!(is_paley_prime(p));
    if alpha == 0 || alpha >= p || !is_residue(alpha, p) {
        return false;
    }
    // alpha in Q_p* always satisfies alpha^n = 1; full order iff no proper
    // divisor n/q already reaches 1.
    let n = (p - 1) / 2;
    prime_factors(n).iter().all(|&q| pow_mod(alpha, n / q, p) != 1)
}

/// Smallest generator of `Q_p*`.
pub fn find_generator(p: u64) -> Result<u64, NumTheoryError> {
    require_paley_prime(p)?;
    (2..p)
        .find(|&a| is_generator(p, a))
        .ok_or(NumTheoryError::InvalidPrime(p))
}

/// Every generator of `Q_p*`, ascending. Used to check that nothing
/// downstream depends on which one was picked.
pub fn all_generators(p: u64) -> Result<Vec<u64>, NumTheoryError> {
    require_paley_prime(p)?;
    Ok((2..p).filter(|&a| is_generator(p, a)).collect())
}

/// A prime `p = 1 (mod 4)` together with a fixed discrete-log ordering of its
/// nonzero squares: `residue_order[k] = alpha^k mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    pub p: u64,
    /// `(p - 1) / 2`, the number of nonzero squares.
    pub n: u64,
    /// The chosen generator of `Q_p*`.
    pub alpha: u64,
    /// `alpha^0, alpha^1, ..., alpha^(n-1)` mod `p` — a permutation of `Q_p*`.
    pub residue_order: Vec<u64>,
}

impl PrimeContext {
    /// Context with the smallest generator.
    pub fn new(p: u64) -> Result<Self, NumTheoryError> {
        let alpha = find_generator(p)?;
        Self::with_alpha(p, alpha)
    }

    /// Context with a caller-chosen generator.
    pub fn with_alpha(p: u64, alpha: u64) -> Result<Self, NumTheoryError> {
        require_paley_prime(p)?;
        if !is_generator(p, alpha) {
            return Err(NumTheoryError::NotAGenerator { p, alpha });
        }
        let n = (p - 1) / 2;
        let mut residue_order = Vec::with_capacity(n as usize);
        let mut x = 1u64;
        for _ in 0..n {
            residue_order.push(x);
            x = mul_mod(x, alpha, p);
        }
        debug_assert_eq!(x, 1, "generator order must be exactly n");
        Ok(PrimeContext { p, n, alpha, residue_order })
    }

    /// Discrete log base `alpha` restricted to `Q_p*`.
    pub fn log_of(&self, residue: u64) -> Option<u64> {
        self.residue_order
            .iter()
            .position(|&r| r == residue)
            .map(|k| k as u64)
    }
}
