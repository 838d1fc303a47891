//! plawlab: a laboratory for prime creation and prime-distribution experiments.
//!
//! The crate has three layers:
//!
//! * generators and oracles: the species-table generator ([`species`]),
//!   which creates 1 and the odd primes by repeatedly materializing the
//!   smallest missing number, and the classical oracles ([`classic`]:
//!   trial division, bit-packed and segmented sieves, and an addition-based
//!   primality predicate) used to validate it;
//! * analytics: the offset logarithmic integral, N/ln N, and checkpoint
//!   tables of pi(N) − Li(N) with sqrt(N)-normalized margins ([`analytics`]);
//! * experiments: seeded fair-coin and prime-coin simulations ([`coin`])
//!   and the suite runner that persists reproducible reports as CSV and SVG
//!   under a run directory ([`experiments`]).
//!
//! Everything is deterministic: generators take no randomness at all, and
//! every stochastic model derives its streams from an explicit
//! [`coin::RngSpec`] so that reruns are bit-identical.

pub mod analytics;
pub mod classic;
pub mod coin;
pub mod error;
pub mod experiments;
pub mod species;
pub mod svg;

pub use error::{Error, Result};

/// Crate version, echoed into run-directory configs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
