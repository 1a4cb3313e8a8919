//! Exact computation, classification and finite certification of the gcd
//! of the infinite family phi(ax+b), its analogue over the Gaussian and
//! Eisenstein integers, and empirical sweeps over higher-degree
//! polynomials.
//!
//! Module map:
//! * [`arith`] — 64-bit primality, factorization, Euler phi, quadratic
//!   residues mod composites, primes in arithmetic progressions.
//! * [`theorem1`] — exact classifiers for g(a, b) under both index-range
//!   conventions, plus the literal published case split with discrepancy
//!   flagging.
//! * [`oracle`] — brute-force running gcds, l-adic witnesses and
//!   certificates bracketing a claimed g from both sides.
//! * [`quadfield`] — Z[i] / Z[omega] arithmetic, ideal totients, and box
//!   scans against the mu^2 divisibility bound.
//! * [`polyscan`] — gcds of phi(P(x)) and exhaustive coefficient sweeps.

pub mod arith;
pub mod error;
pub mod oracle;
pub mod polyscan;
pub mod quadfield;
pub mod theorem1;

pub use error::{Error, Result};
