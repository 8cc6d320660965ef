//! Circulant graphs, Paley graphs and their local graphs, and exact clique
//! search.
//!
//! The Paley graph `G_p` is itself circulant on `Z_p` (connection set
//! `Q_p*`). Listing the neighbourhood of 0 in discrete-log order turns the
//! induced subgraph `L_p` into a circulant graph on `Z_n`, `n = (p-1)/2`,
//! whose connection set is `D = { d : alpha^d - 1 in Q_p* }`. All theta-bound
//! machinery downstream works on these circulant representations.

use crate::numtheory::{is_generator, is_paley_prime, is_residue, PrimeContext};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    Empty,
    #[error("connection set contains 0 (loops are not allowed)")]
    LoopEdge,
    #[error("connection-set entry {d} out of range for n = {n}")]
    OutOfRange { d: usize, n: usize },
    #[error("connection set is not symmetric: contains {d} but not {mirror}")]
    Asymmetric { d: usize, mirror: usize },
}

/// A graph on `Z_n` where `j ~ k` iff `(j - k) mod n` lies in a fixed
/// symmetric connection set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantGraph {
    n: usize,
    conn: BTreeSet<usize>,
}

impl CirculantGraph {
    pub fn new(n: usize, conn: BTreeSet<usize>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if conn.contains(&0) {
            return Err(GraphError::LoopEdge);
        }
        for &d in &conn {
            if d >= n {
                return Err(GraphError::OutOfRange { d, n });
            }
            if !conn.contains(&(n - d)) {
                return Err(GraphError::Asymmetric { d, mirror: n - d });
            }
        }
        Ok(CirculantGraph { n, conn })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conn(&self) -> &BTreeSet<usize> {
        &self.conn
    }

    /// Degree of every vertex (the graph is vertex-transitive).
    pub fn degree(&self) -> usize {
        self.conn.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        let d = (self.n + i - j) % self.n;
        self.conn.contains(&d)
    }

    /// Complement graph: connection set `(1..n) \ conn`. Involution.
    pub fn complement(&self) -> CirculantGraph {
        let conn = (1..self.n).filter(|d| !self.conn.contains(d)).collect();
        CirculantGraph { n: self.n, conn }
    }

    /// Row-0 adjacency as bitset words; row k is a rotation.
    fn adjacency_bitsets(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.n];
        for v in 0..self.n {
            for &d in &self.conn {
                let u = (v + d) % self.n;
                rows[v][u / 64] |= 1 << (u % 64);
            }
        }
        rows
    }
}

/// `G_p` as a circulant graph on `Z_p` with connection set `Q_p*`.
pub fn paley_graph(ctx: &PrimeContext) -> CirculantGraph {
    let conn = ctx
        .residue_order
        .iter()
        .map(|&r| r as usize)
        .collect::<BTreeSet<usize>>();
    CirculantGraph { n: ctx.p as usize, conn }
}

/// `L_p`, the subgraph of `G_p` induced on `Q_p*`, with vertices in
/// discrete-log order: position `k` holds `alpha^k`, and `j ~ k` iff
/// `alpha^(j-k) - 1` is a residue.
pub fn local_graph(ctx: &PrimeContext) -> CirculantGraph {
    let n = ctx.n as usize;
    let mut conn = BTreeSet::new();
    for d in 1..n {
        // alpha^d - 1 mod p, never zero for 0 < d < n
        let x = (ctx.residue_order[d] + ctx.p - 1) % ctx.p;
        if is_residue(x, ctx.p) {
            conn.insert(d);
        }
    }
    debug_assert!(
        CirculantGraph::new(n, conn.clone()).is_ok(),
        "local connection set must be symmetric"
    );
    CirculantGraph { n, conn }
}

/// Outcome of a budgeted clique search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueOutcome {
    /// Search ran to completion; `size` is the exact clique number.
    Exact { size: u32, witness: Vec<usize> },
    /// Budget ran out; `size` is only a lower bound.
    Exceeded { size: u32, witness: Vec<usize> },
}

impl CliqueOutcome {
    pub fn size(&self) -> u32 {
        match self {
            CliqueOutcome::Exact { size, .. } | CliqueOutcome::Exceeded { size, .. } => *size,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CliqueOutcome::Exact { .. })
    }

    pub fn witness(&self) -> &[usize] {
        match self {
            CliqueOutcome::Exact { witness, .. } | CliqueOutcome::Exceeded { witness, .. } => {
                witness
            }
        }
    }
}

struct CliqueSearch {
    adj: Vec<Vec<u64>>,
    words: usize,
    best: u32,
    best_witness: Vec<usize>,
    current: Vec<usize>,
    deadline: Instant,
    // checking the clock every node is measurable; amortize it
    ticks: u32,
    out_of_time: bool,
}

impl CliqueSearch {
    fn timed_out(&mut self) -> bool {
        if self.out_of_time {
            return true;
        }
        self.ticks += 1;
        if self.ticks >= 1024 {
            self.ticks = 0;
            if Instant::now() >= self.deadline {
                self.out_of_time = true;
            }
        }
        self.out_of_time
    }

    /// Greedy colouring of `cand` (ascending vertex order within colour
    /// classes); returns vertices sorted by colour along with their colour
    /// numbers, so `colour(v)` bounds the clique size inside `cand` up to v.
    fn colour_sort(&self, cand: &[u64]) -> Vec<(usize, u32)> {
        let mut ordered = Vec::new();
        let mut uncoloured = cand.to_vec();
        let mut colour = 0u32;
        let mut class_mask = vec![0u64; self.words];
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            class_mask.copy_from_slice(&uncoloured);
            loop {
                let Some(v) = first_set(&class_mask) else { break };
                ordered.push((v, colour));
                clear_bit(&mut uncoloured, v);
                clear_bit(&mut class_mask, v);
                // remove v's neighbours from the current class
                for (m, a) in class_mask.iter_mut().zip(&self.adj[v]) {
                    *m &= !a;
                }
            }
        }
        ordered
    }

    fn expand(&mut self, cand: &mut Vec<u64>) {
        if self.timed_out() {
            return;
        }
        let order = self.colour_sort(cand);
        // highest colour first; once colour bound fails it fails for the rest
        for &(v, colour) in order.iter().rev() {
            if self.current.len() as u32 + colour <= self.best {
                return;
            }
            self.current.push(v);
            let mut next: Vec<u64> = cand
                .iter()
                .zip(&self.adj[v])
                .map(|(c, a)| c & a)
                .collect();
            if self.current.len() as u32 > self.best {
                self.best = self.current.len() as u32;
                self.best_witness = self.current.clone();
            }
            if next.iter().any(|&w| w != 0) {
                self.expand(&mut next);
            }
            self.current.pop();
            clear_bit(cand, v);
            if self.out_of_time {
                return;
            }
        }
    }
}

fn first_set(mask: &[u64]) -> Option<usize> {
    for (i, &w) in mask.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn clear_bit(mask: &mut [u64], v: usize) {
    mask[v / 64] &= !(1 << (v % 64));
}

/// Exact clique number by branch-and-bound with a greedy-colouring bound.
///
/// Vertices are explored in ascending index (after the colour sort), so
/// search traces are reproducible. If `budget` elapses the best clique found
/// so far is returned as a lower bound.
pub fn clique_number(g: &CirculantGraph, budget: Duration) -> CliqueOutcome {
    let words = g.n.div_ceil(64);
    let search = &mut CliqueSearch {
        adj: g.adjacency_bitsets(),
        words,
        best: 0,
        best_witness: Vec::new(),
        current: Vec::new(),
        deadline: Instant::now() + budget,
        ticks: 0,
        out_of_time: false,
    };
    let mut cand = vec![!0u64; words];
    // mask off bits past n
    let spare = words * 64 - g.n;
    if spare > 0 {
        cand[words - 1] >>= spare;
    }
    search.expand(&mut cand);
    let witness = std::mem::take(&mut search.best_witness);
    debug_assert!(witness
        .iter()
        .enumerate()
        .all(|(i, &u)| witness[..i].iter().all(|&v| g.adjacent(u, v))));
    if search.out_of_time {
        CliqueOutcome::Exceeded { size: search.best, witness }
    } else {
        CliqueOutcome::Exact { size: search.best, witness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DumpError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0} is not a prime congruent to 1 mod 4")]
    BadPrime(u64),
    #[error("p = {0} exceeds the supported range (p <= 2^31)")]
    TooLarge(u64),
    #[error("alpha = {alpha} does not generate the residues mod {p}")]
    BadGenerator { p: u64, alpha: u64 },
    #[error("n = {n} but (p-1)/2 = {expected}")]
    WrongN { n: u64, expected: u64 },
    #[error("connection set does not match the local graph of p = {p}, alpha = {alpha}")]
    WrongConnectionSet { p: u64, alpha: u64 },
}

/// On-disk form of a local graph (the `graph` command's output).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDump {
    pub p: u64,
    pub n: u64,
    pub alpha: u64,
    pub connection_set: Vec<u64>,
}

impl GraphDump {
    pub fn from_context(ctx: &PrimeContext) -> GraphDump {
        let local = local_graph(ctx);
        GraphDump {
            p: ctx.p,
            n: ctx.n,
            alpha: ctx.alpha,
            connection_set: local.conn.iter().map(|&d| d as u64).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph dump serialization cannot fail")
    }

    /// Parse and fully validate a dump: `p` must be a supported Paley prime,
    /// `alpha` a generator, and the connection set exactly the local graph's.
    pub fn parse(json: &str) -> Result<(GraphDump, PrimeContext, CirculantGraph), DumpError> {
        let dump: GraphDump =
            serde_json::from_str(json).map_err(|e| DumpError::Json(e.to_string()))?;
        let (ctx, graph) = dump.validate()?;
        Ok((dump, ctx, graph))
    }

    pub fn validate(&self) -> Result<(PrimeContext, CirculantGraph), DumpError> {
        if self.p > 1 << 31 {
            return Err(DumpError::TooLarge(self.p));
        }
        if !is_paley_prime(self.p) {
            return Err(DumpError::BadPrime(self.p));
        }
        let expected_n = (self.p - 1) / 2;
        if self.n != expected_n {
            return Err(DumpError::WrongN { n: self.n, expected: expected_n });
        }
        if !is_generator(self.p, self.alpha) {
            return Err(DumpError::BadGenerator { p: self.p, alpha: self.alpha });
        }
        // cheap size screen before building anything of size n
        if self.connection_set.len() as u64 != connection_size(self.p) {
            return Err(DumpError::WrongConnectionSet { p: self.p, alpha: self.alpha });
        }
        let ctx = PrimeContext::with_alpha(self.p, self.alpha)
            .expect("validated prime and generator");
        let graph = local_graph(&ctx);
        let claimed: BTreeSet<usize> =
            self.connection_set.iter().map(|&d| d as usize).collect();
        if claimed != *graph.conn() {
            return Err(DumpError::WrongConnectionSet { p: self.p, alpha: self.alpha });
        }
        Ok((ctx, graph))
    }
}

/// `|D| = (p-5)/4`: every vertex of `L_p` has this many neighbours.
pub fn connection_size(p: u64) -> u64 {
    (p - 5) / 4
}
