//! Upper bounds on clique numbers of Paley graphs.
//!
//! For a prime `p = 1 (mod 4)` the Paley graph `G_p` joins `x, y` in `F_p`
//! whenever `x - y` is a nonzero square. Its local graph `L_p` (the subgraph
//! induced on the neighbourhood of 0) is circulant once the squares are
//! written in discrete-log order, so the Lovász and Schrijver theta numbers
//! of the complement collapse from semidefinite to *linear* programs over
//! functions on `Z_n`, `n = (p-1)/2`. Solving those LPs gives
//!
//! ```text
//! omega(G_p) <= LS(p) <= L(p),    L(p) = theta(comp L_p) + 1,
//! ```
//!
//! both of which beat the classical `(sqrt(2p-1)+1)/2` bound for most primes.
//!
//! The crate is organised bottom-up: exact arithmetic in [`numtheory`],
//! graph construction and exact clique search in [`paley`], transforms on
//! `Z_n` in [`spectral`], a self-contained dense simplex in [`simplex`], the
//! bound LPs in [`bounds`], dual certificates and their verifier in
//! [`certificates`], and batch runs over prime ranges in [`scan`].

pub mod bounds;
pub mod certificates;
pub mod numtheory;
pub mod paley;
pub mod scan;
pub mod simplex;
pub mod spectral;

pub use bounds::{bound_report, hp_bound, BoundReport};
pub use certificates::{verify_certificate, DualCertificate, VerificationReport};
pub use numtheory::PrimeContext;
pub use paley::CirculantGraph;
pub use scan::{scan, ScanOptions, ScanSummary};
