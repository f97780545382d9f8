//! fracg — a desk-scale numerical laboratory for the fractional
//! g-Laplacian and its variational problems.
//!
//! The toolkit makes the objects of nonlocal, nonstandard-growth
//! analysis computable on uniform grids:
//!
//! - [`young`]: Young functions `G` with controlled growth, their
//!   conjugates, critical Sobolev functions and the inequality calculus
//!   around them;
//! - [`grid`]: cell-centered discretizations of a bounded domain plus a
//!   truncated exterior collar, with precomputed singular-kernel tables;
//! - [`modulars`]: discrete modulars, Luxemburg norms and the combined
//!   space norm;
//! - [`operator`]: the matrix-free fractional g-Laplacian (full and
//!   regional), the nonlocal normal derivative, duality pairings, the
//!   divergence/integration-by-parts identities and the fractional
//!   perimeter;
//! - [`eigen`]: constrained Rayleigh-quotient minimization on modular
//!   level sets for Dirichlet/Neumann/regional/Robin boundary
//!   structures, with eigenvalue extraction and ordering checks;
//! - [`multiplicity`]: the three-solution energy functional, growth
//!   hypothesis harnesses, heuristic estimation of the abstract
//!   threshold quantities, and a multistart/deflation critical-point
//!   search;
//! - [`verify`]: randomized inequality batteries behind the
//!   `verify-calculus` / `verify-operator` subcommands;
//! - [`config`] and [`cli`]: declarative run configuration and the
//!   subcommand dispatcher used by the `fracg` binary.
//!
//! Every runnable capability also ships as an example under
//! `examples/`; start there.

// validation sites use `!(x > 0.0)` so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod descent;
pub mod eigen;
pub mod error;
pub mod fields;
pub mod grid;
pub mod modulars;
pub mod multiplicity;
pub mod operator;
pub mod verify;
pub mod young;

pub use error::{Error, Result};
