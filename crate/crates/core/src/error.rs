//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building a model or running a computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The ladder needs an even number of sites so that every doubled cell is complete.
    #[error("number of sites must be even and at least 2, got {n_sites}")]
    BadSiteCount { n_sites: usize },

    /// The potential tilt per site must be finite and non-negative.
    #[error("level spacing must be finite and non-negative, got {delta}")]
    BadLevelSpacing { delta: f64 },

    /// A pulse parameter (peak amplitude, switch time, truncation length) is unusable.
    #[error("pulse parameter {name} must be positive and finite, got {value}")]
    BadPulseParameter { name: &'static str, value: f64 },

    /// Hopping amplitudes fed directly into the Hamiltonian must be finite and non-negative.
    #[error("hopping amplitudes must be finite and non-negative, got alpha={alpha}, beta={beta}")]
    BadHopping { alpha: f64, beta: f64 },

    /// Vector or matrix dimensions do not match the lattice.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The requested integration window is empty or reversed.
    #[error("time window is empty or reversed: [{t_start}, {t_end}]")]
    BadWindow { t_start: f64, t_end: f64 },

    /// The time step violates the accuracy guard of the propagator.
    #[error("time step {dt} exceeds the stability guard {limit} for peak energy scale {e_max}")]
    StepTooLarge { dt: f64, limit: f64, e_max: f64 },

    /// The time step is non-positive, non-finite, or produces an absurd step count.
    #[error("unusable time step {dt} for window of length {span}")]
    BadStep { dt: f64, span: f64 },

    /// The initial state handed to the propagator is not normalized.
    #[error("initial state norm {norm} is not within 1e-8 of 1")]
    NotNormalized { norm: f64 },

    /// Amplitudes stopped being finite during propagation (pathological input).
    #[error("non-finite amplitudes at step {step}")]
    NonFinite { step: usize },

    /// Inverse iteration failed to produce an eigenvector within the iteration budget.
    #[error("inverse iteration did not converge for eigenvalue {eigenvalue}")]
    EigenvectorNoConvergence { eigenvalue: f64 },

    /// The Jacobi reference solver ran out of sweeps before reaching its threshold.
    #[error("jacobi rotation sweeps exceeded the limit of {limit}")]
    JacobiNoConvergence { limit: usize },

    /// A matrix handed to the dense reference solver is not symmetric.
    #[error("matrix is not symmetric at ({row}, {col}): asymmetry {asymmetry}")]
    NotSymmetric { row: usize, col: usize, asymmetry: f64 },

    /// A sweep needs at least one coupling value, in ascending positive order.
    #[error("sweep grid must be non-empty, ascending and positive")]
    BadSweepGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
