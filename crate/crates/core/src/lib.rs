//! Exact arithmetic for Mahler's 3/2 problem over the positive integers.
//!
//! A Z-number is a real x > 0 with {x(3/2)^n} < 1/2 for every n ≥ 0. This
//! crate analyzes the integer side of that question with no floating
//! point anywhere in the math:
//!
//! - [`orbit`] evaluates the fractional parts {x(3/2)^n} exactly as dyadic
//!   rationals and classifies each step as permissible (< 1/2) or not.
//! - [`sieve`] materializes the permissible residue sets X_n and Y_n
//!   mod 2^n as bit vectors and intersects them across depths; the prefix
//!   intersection collapses to the single class of 2^n.
//! - [`census`] measures survival depths σ(x) — the first failing n — over
//!   ranges, in parallel, and checks the closed form σ(x) = v₂(x) + 1.
//! - [`tijdeman`] constructs Tijdeman sequences for rational β > 2 whose
//!   limit η keeps {ηβ^n} inside [0, 1/(β−1)] — or [0, 1/(2(β−1))] when
//!   2β is an odd integer — with exact rational enclosures for η and
//!   post-hoc certification of serialized runs.
//! - [`refine`] intersects a unit interval [g₀, g₀+1) with the first N
//!   Z-number constraints, producing the exact surviving subintervals and
//!   their measure.
//! - [`cache`] persists residue sets in a small binary format with atomic
//!   writes.
//!
//! Machine-word fast paths cover the depths that fit in 64 bits and agree
//! bit for bit with the big-integer paths; results are exact rationals or
//! exact bit vectors throughout.

pub mod cache;
pub mod census;
pub mod error;
pub mod orbit;
pub mod ratio;
pub mod refine;
pub mod sieve;
pub mod tijdeman;

pub use error::{Error, Result};
