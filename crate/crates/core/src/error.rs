//! Error types shared across the simulation and estimation layers.

use thiserror::Error;

/// Errors surfaced by simulation, perturbation and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// The intensity exceeded the dominating strip during thinning; the
    /// caller must resample the path with a taller strip.
    #[error("intensity exceeded strip height {strip_height} at t={at}")]
    StripOverflow { at: f64, strip_height: f64 },

    /// Parameter validation failed.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A query fell outside the simulated horizon.
    #[error("time {t} outside [0, {horizon}]")]
    OutOfRange { t: f64, horizon: f64 },

    /// The jump map is identically zero, so jump-channel weights do not
    /// exist (perturbing the jump configuration never moves the price).
    #[error("degenerate jump model: jump map is identically zero")]
    DegenerateJumpModel,

    /// The impact kernel never becomes positive, so the jump-weight
    /// localization has no valid branch.
    #[error("impact kernel never positive on the horizon")]
    ImpactNeverPositive,

    /// Path regeneration exhausted its strip-doubling budget.
    #[error("strip doubling exhausted after {attempts} attempts (path {path}, last strip {strip_height})")]
    OverflowExhausted {
        path: u64,
        attempts: u32,
        strip_height: f64,
    },
}

impl SimError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SimError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
