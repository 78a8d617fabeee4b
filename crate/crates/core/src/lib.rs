//! Simulation and analysis of quantized adiabatic particle transport in a
//! finite, tilted superlattice.
//!
//! The system is a single particle on `N` sites (N even) with a uniform energy
//! tilt `delta` per site and alternating hopping amplitudes on the two bond
//! families. Ramping the two families through a complementary sigmoid
//! crossing, with `alpha(t)^2 + beta(t)^2` pinned to a peak value `gamma^2`,
//! drags a particle that starts on the highest-energy site down the ladder by
//! a quantized number of doubled cells. The cell count is set only by the
//! ratio `gamma / delta` through the interval rule implemented in
//! [`spectrum::quantum_number`]: ratios in
//! `(sqrt((2k-3)(2k-2)), sqrt((2k-1) 2k))` move the particle `k - 1` cells.
//!
//! The crate provides:
//!
//! - [`model`]: the lattice, the pulse schedules, and the tridiagonal
//!   Hamiltonian they generate;
//! - [`spectrum`]: a bisection eigensolver, closed-form asymptotic spectra,
//!   and the interval-rule transport prediction;
//! - [`dynamics`]: a norm-conserving Crank-Nicolson integrator;
//! - [`observables`]: site and cell populations, staircase moments, and
//!   fidelity against predictions;
//! - [`sweep`]: data-parallel coupling sweeps, staircase transition detection,
//!   and spectral-gap scans;
//! - [`oracle`]: slow, independent reference implementations (dense Jacobi,
//!   stepwise exact exponentials, characteristic-polynomial counts) used to
//!   validate everything else.
//!
//! The `parallel` feature (on by default) runs sweeps on a rayon pool;
//! disabling it gives a dependency-free sequential build with bit-identical
//! results.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod spectrum;
pub mod sweep;

pub use dynamics::{
    convergence_check, default_dt, default_time_window, energy_scale, initial_state, propagate,
    EvolutionResult, TrajectorySample,
};
pub use error::{Error, Result};
pub use model::{
    build_hamiltonian, hamiltonian_at, LatticeSpec, PulseSchedule, TridiagonalHamiltonian,
};
pub use observables::{
    cell_distribution, cell_variance, mean_cell, prediction_fidelity, site_probabilities,
    CellDistribution,
};
pub use spectrum::{
    asymptotic_spectrum_early, asymptotic_spectrum_late, eigen_decompose, initial_rank,
    interval_bounds, mixing_angle, predict_transport, quantum_number, SpectralDecomposition,
    TransportPrediction,
};
pub use sweep::{
    detect_transitions, evaluate_sweep_point, gap_scan, run_sweep, GapScan, PulseTemplate,
    SweepConfig, SweepRow, Transition,
};
