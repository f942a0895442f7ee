//! Exact invariants of plane branches under holomorphic flows.
//!
//! The crate works over `Q(zeta_L)` with truncated power series and
//! bivariate polynomials. It computes contact exponents, shared blow-up paths,
//! the Zariski invariant and analytic normal forms, and it certifies
//! resonance obstructions for jets of diffeomorphisms.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line front end live in the companion `branchflow` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod scalars;
pub mod series;
pub mod puiseux;
pub mod vfield;
pub mod blowup;
pub mod moduli;
pub mod embedding;

pub use error::{Error, ErrorKind, Result};
pub use scalars::{CycloField, Rational, Scalar};
pub use series::{BiPoly, EpsPoly, Order, Series, TSeries, EXACT};
