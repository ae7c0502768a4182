//! Exact, desk-scale verification of the proximity argument for the
//! expansion of `f(x, y, z) = (x - y)^2 + (phi(x) - z)^2`.
//!
//! The crate is split along the argument's moving parts:
//!
//! * [`exact`]: rationals, dense univariate and sparse bivariate polynomials,
//!   bivariate gcd.
//! * [`geometry`]: plane isometries, the congruence/conic dichotomy for point
//!   triples, and symmetries of polynomial graphs.
//! * [`expansion`]: image sets, proximity partitions, level sets, quadruple
//!   counts and the lower-bound counting chain.
//! * [`curves`]: the proximity curve family, shared components, the
//!   exceptional family and incidence accounting.
//! * [`harness`]: instance generators, experiment orchestration, exponent
//!   fitting and CSV/JSON output.

pub mod curves;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod geometry;
pub mod harness;
pub mod rng;

pub use error::{Error, Result};
