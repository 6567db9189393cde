//! Monte Carlo engine for Hawkes jump-diffusion asset dynamics.
//!
//! The crate simulates an asset whose log-price is driven by a Brownian
//! motion and a self-exciting (Hawkes) jump process realized by thinning a
//! dominating Poisson measure on a strip. On top of the simulator it builds
//! five delta estimators for European and Asian call options:
//!
//! * `EXACT` — pathwise delta, using that the terminal value scales linearly
//!   in the initial price.
//! * `WM` — Wiener (Brownian) Malliavin weight.
//! * `PM` — Poisson Malliavin weight, evaluated through add-one-point
//!   configuration differences and a Skorokhod integral.
//! * `WP` — the average of `WM` and `PM` on shared paths.
//! * `FD` — symmetric finite differences with common random numbers.
//!
//! All randomness flows through counter-based streams keyed by
//! `(seed, path index, purpose, attempt)`, so results are reproducible and
//! independent of the parallel schedule.

pub mod error;
pub mod estimators;
pub mod hawkes;
pub mod malliavin;
pub mod model;
pub mod quad;
pub mod rng;
pub mod scheme;

pub use error::SimError;
pub use estimators::{DeltaEstimate, DeltaMethod, McConfig, McEstimate};
pub use hawkes::{BaseConfiguration, HawkesParams, HawkesRealization};
pub use malliavin::{ImpactKernel, PerturbationDiff, Region, WeightField};
pub use model::{JumpFn, ModelParams, OptionKind, PathRealization};
pub use scheme::DiscretizedPath;
