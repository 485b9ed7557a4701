//! Exact reduction of holonomic power series modulo primes, differential
//! operator analysis and Lucas-type algebraicity certificates.
//!
//! Modules, bottom up:
//! - [`exactfield`]: rationals, prime fields, polynomials, rational functions.
//! - [`diffop`]: differential operators, singularities, recurrences, p-curvature.
//! - [`holoseries`]: truncated series, section operators, the sequence catalog.
//! - [`certify`]: splitting, certificates, orbits, the Frobenius shadow.
//! - [`casebook`]: the worked examples as executable checks.
//! - [`cli`]: the `holocert` command line.

pub mod casebook;
pub mod certify;
pub mod cli;
pub mod diffop;
pub mod error;
pub mod exactfield;
pub mod holoseries;

pub use error::{Error, Result};
