//! Greedy sparse recovery (CoSaMP and Subspace Pursuit) together with the
//! restricted-isometry machinery used to bound their iteration counts.
//!
//! * [`sparse`] and [`matrix`]: dense matrices, supports, thresholding and
//!   support-restricted least squares.
//! * [`recovery`]: the two iteration loops with per-iteration traces, plus a
//!   brute-force oracle for small instances.
//! * [`ric`]: exact and sampled restricted isometry constants.
//! * [`theory`] and [`schedule`]: decay rates, noise constants, `⌈cK⌉`
//!   iteration bounds, thresholds, the SP bound crossover and the
//!   magnitude-band partition schedule.
//! * [`experiment`]: seeded instances and the validation experiments.
//! * [`io`]: CSV formats.

pub mod error;
pub mod experiment;
pub mod io;
pub mod matrix;
pub mod recovery;
pub mod ric;
pub mod schedule;
pub mod sparse;
pub mod theory;
pub mod util;

pub use error::{Error, Result};
pub use experiment::{
    bounds_sweep, decay_validation, gaussian_sensing_matrix, iteration_bound_experiment,
    random_sparse_signal, run_trials, CertifiedSuite, MatrixEnsemble, SignalDistribution,
    TrialConfig, TrialRecord,
};
pub use matrix::DenseMatrix;
pub use recovery::{
    cosamp_step, exhaustive_oracle_recovery, missed_energy, run, sp_step, Algorithm,
    RecoveryConfig, RecoveryResult, RecoveryTrace, StoppingError,
};
pub use ric::{exact_ric, monte_carlo_ric_lower_bound, RicEstimate, RicMethod};
pub use schedule::{excess_iterations, greedy_partition, kmin_noiseless, PartitionSchedule};
pub use sparse::{
    hard_threshold, least_squares_on_support, magnitude_order, residual, restrict, MagnitudeOrder,
    SparseSignal, SupportSet,
};
pub use theory::{BoundsRow, DaiVariant};
pub use util::mix_seed;
