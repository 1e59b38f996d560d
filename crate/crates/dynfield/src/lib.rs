//! Exact arithmetic and arithmetic dynamics over rational function fields
//! F_q(t) in odd characteristic: orbits of polynomial maps, height growth,
//! primitive prime divisors in orbits, elliptic-curve certificates for
//! quadratic maps, and empirical densities of orbit primes.
//!
//! The `examples/` directory is the guided tour; each file is runnable with
//! `cargo run --example <name>`:
//!
//! - `fields_and_factoring`: finite fields, polynomial factoring, counting
//!   irreducibles
//! - `orbits_and_heights`: orbit values, height growth, canonical-height
//!   intervals, preperiodic vs wandering points
//! - `primitive_prime_divisors`: which primes appear in an orbit for the
//!   first time, and the indices where none do
//! - `curve_certificates`: j-invariants of marked cubics, non-isotriviality,
//!   and the checkable hypotheses behind finiteness statements
//! - `prime_density_scan`: the proportion of primes of each degree dividing
//!   some orbit value
//!
//! The same capabilities are exposed as subcommands of the `dynfield`
//! binary; see [`cli`] and the JSON report shapes in [`report`].

pub mod error;
pub mod factor;
pub mod field;
pub mod dynamics;
pub mod places;
pub mod cli;
pub mod curves;
pub mod density;
pub mod parse;
pub mod report;
pub mod zsigmondy;
pub mod poly;
pub mod ratfunc;
