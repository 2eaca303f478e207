//! Regression depth, deepest-fit regression medians, and finite-sample
//! breakdown bounds for the maximum-depth estimator.
//!
//! The crate computes, for a dataset of `n` observations `(x, y)` with
//! `x` in `R^{p-1}` and a candidate fit `beta = (intercept, slopes)` in
//! `R^p`:
//!
//! - the regression depth of `beta` (exact enumeration, an `O(n log n)`
//!   sweep for `p = 2`, a randomized upper bound, and a brute-force tilt
//!   oracle for cross-checking),
//! - the maximum depth `k*` over all fits together with the full set of
//!   depth maximizers and their average (the deepest-fit median),
//! - exact rational breakdown-point bounds derived from `k*`, the
//!   constructive contamination attacks that realize them, and an
//!   empirical breakdown search,
//! - seeded Monte Carlo experiments summarizing the distribution of the
//!   bounds over random samples.
//!
//! The crate is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature instead of `std` for freestanding builds. The `parallel`
//! feature (std-only) runs the enumeration kernels on rayon with
//! deterministic, worker-count-independent results.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("regdepth-core requires either the `std` or the `libm` feature");

pub mod breakdown;
mod combin;
pub mod dataset;
pub mod depth;
mod error;
mod fmath;
pub mod linalg;
pub mod median;
pub mod oracle;
pub mod position;
pub mod rng;
pub mod sim;

pub use dataset::{fit_through_points, residual_signs, residuals, Dataset, Fit, Sign};
pub use depth::{rdepth_approx, rdepth_exact, rdepth_sweep_p2, replay_witness, DepthWitness, TiltSide};
pub use error::{Error, Result};
pub use median::{k_star_exact, k_star_approx, DeepestFitResult, EnumerationBudget, Maximizer, SearchMode};
pub use oracle::rdepth_oracle;
pub use position::{is_general_position, is_general_position_x_only, PositionReport};

/// Exact rational with small integer terms; all bound formulas fit in `i64`.
pub type Rational = num_rational::Ratio<i64>;
