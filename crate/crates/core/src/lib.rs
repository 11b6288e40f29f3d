//! Exact anti-concentration computations for sums of independent lattice
//! random variables.
//!
//! Measures are finitely supported on `ℤ^d` with exact rational masses
//! ([`Dist`]). On top of that the crate provides the extremal families
//! (`U^α`, binomial differences), the rearrangement and peakedness
//! inequalities, the reduction steps behind the balancing bound, exact versus
//! asymptotic comparisons, and exhaustive searches over sign and weight
//! patterns.

pub mod asymptotics;
pub mod cli;
pub mod dist;
pub mod error;
pub mod families;
pub mod par;
pub mod random;
pub mod reduction;
mod report;
pub mod search;
pub mod transforms;

pub use dist::{format_rational, parse_rational, ratio, Dist, LatticePoint, Rational, WeightVector};
pub use error::{Error, Result};
pub use families::{AlphaParam, BernoulliParam};
pub use par::ExecMode;
