//! CoSaMP and Subspace Pursuit iterations with per-iteration instrumentation.
//!
//! Both algorithms share one loop: the stopping rule `‖y − A x‖₂ > ε` is
//! checked before each step, and the final estimate is the last iterate.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{norm2, DenseMatrix};
use crate::sparse::{hard_threshold, least_squares_min_norm, residual, SparseSignal, SupportSet};
use crate::util::binomial;

/// Largest number of supports [`exhaustive_oracle_recovery`] will enumerate.
pub const ORACLE_SUBSET_LIMIT: u128 = 1_000_000;

/// Relative residual factor used by [`StoppingError::Relative`].
pub const RELATIVE_STOPPING_FACTOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Cosamp,
    Sp,
}

impl Algorithm {
    /// Order of the restricted isometry constant that governs the algorithm's
    /// decay rate: `4K` for CoSaMP, `3K` for SP.
    pub fn ric_order(self, sparsity: usize) -> usize {
        match self {
            Algorithm::Cosamp => 4 * sparsity,
            Algorithm::Sp => 3 * sparsity,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Cosamp => "cosamp",
            Algorithm::Sp => "sp",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosamp" => Ok(Algorithm::Cosamp),
            "sp" => Ok(Algorithm::Sp),
            other => Err(Error::Argument(format!(
                "unknown algorithm '{other}' (expected cosamp or sp)"
            ))),
        }
    }
}

/// Residual-norm threshold `ε` of the stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingError {
    Absolute(f64),
    /// `1e-10 · ‖y‖₂`.
    Relative,
}

impl StoppingError {
    pub fn resolve(self, y: &[f64]) -> f64 {
        match self {
            StoppingError::Absolute(eps) => eps,
            StoppingError::Relative => RELATIVE_STOPPING_FACTOR * norm2(y),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryConfig {
    pub sparsity: usize,
    pub stopping_error: StoppingError,
    pub max_iterations: usize,
    /// All-zero when `None`.
    pub initial_estimate: Option<SparseSignal>,
}

impl RecoveryConfig {
    /// Relative stopping error and `6K + 10` iterations.
    pub fn new(sparsity: usize) -> Self {
        Self {
            sparsity,
            stopping_error: StoppingError::Relative,
            max_iterations: default_max_iterations(sparsity),
            initial_estimate: None,
        }
    }

    pub fn with_stopping_error(mut self, eps: StoppingError) -> Self {
        self.stopping_error = eps;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_initial_estimate(mut self, x0: SparseSignal) -> Self {
        self.initial_estimate = Some(x0);
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.sparsity == 0 {
            return Err(Error::Argument("sparsity must be at least 1".into()));
        }
        if self.sparsity > n {
            return Err(Error::Argument(format!(
                "sparsity {} exceeds signal length {n}",
                self.sparsity
            )));
        }
        if let StoppingError::Absolute(eps) = self.stopping_error {
            if eps.is_nan() || eps < 0.0 {
                return Err(Error::Argument(format!(
                    "stopping error must be nonnegative, got {eps}"
                )));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::Argument("max_iterations must be at least 1".into()));
        }
        if let Some(x0) = &self.initial_estimate {
            if x0.len() != n {
                return Err(Error::Dimension {
                    context: "initial estimate length vs columns",
                    expected: n,
                    actual: x0.len(),
                });
            }
            if x0.sparsity() > self.sparsity {
                return Err(Error::Argument(format!(
                    "initial estimate has {} nonzeros, sparsity is {}",
                    x0.sparsity(),
                    self.sparsity
                )));
            }
        }
        Ok(())
    }
}

/// `⌈6K⌉ + 10`.
pub fn default_max_iterations(sparsity: usize) -> usize {
    6 * sparsity + 10
}

/// Intermediate quantities of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// `hⁿ`
    pub identified: SupportSet,
    /// `Uⁿ = Sⁿ⁻¹ ∪ hⁿ`
    pub merged: SupportSet,
    /// `uⁿ`, the least-squares fit on `Uⁿ`.
    pub merged_estimate: Vec<f64>,
    /// Some least-squares solve in this step fell back to the minimum-norm
    /// solution.
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub identified: SupportSet,
    pub merged: SupportSet,
    pub support: SupportSet,
    pub residual_norm: f64,
    /// `‖(x_S) outside Sⁿ‖₂`, present iff ground truth was supplied.
    pub missed_energy: Option<f64>,
    /// `‖(x_S) outside Uⁿ‖₂`, present iff ground truth was supplied.
    pub missed_energy_merged: Option<f64>,
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecoveryTrace {
    /// Missed energy of the initial estimate's support, with ground truth.
    pub initial_missed_energy: Option<f64>,
    pub records: Vec<IterationRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub estimate: SparseSignal,
    pub iterations_used: usize,
    pub converged: bool,
    pub final_residual_norm: f64,
    pub trace: RecoveryTrace,
}

fn check_step_inputs(a: &DenseMatrix, y: &[f64], previous: &SparseSignal, k: usize) -> Result<()> {
    if y.len() != a.rows() {
        return Err(Error::Dimension {
            context: "measurement length vs rows",
            expected: a.rows(),
            actual: y.len(),
        });
    }
    if previous.len() != a.cols() {
        return Err(Error::Dimension {
            context: "estimate length vs columns",
            expected: a.cols(),
            actual: previous.len(),
        });
    }
    if k == 0 || k > a.cols() {
        return Err(Error::Argument(format!(
            "sparsity {k} must lie in 1..={}",
            a.cols()
        )));
    }
    if previous.sparsity() > k {
        return Err(Error::Argument(format!(
            "previous estimate has {} nonzeros, sparsity is {k}",
            previous.sparsity()
        )));
    }
    Ok(())
}

/// Identification and augmentation shared by both algorithms.
///
/// Only nonzero proxy entries are identified, so `hⁿ` can be smaller than
/// `width` when the proxy is sparse.
fn identify_and_merge(
    a: &DenseMatrix,
    y: &[f64],
    previous: &SparseSignal,
    width: usize,
) -> Result<(SupportSet, SupportSet)> {
    let r = residual(a, previous.values(), y)?;
    let proxy = a.apply_transpose(&r)?;
    let identified = hard_threshold(&proxy, width.min(proxy.len()))?
        .support()
        .clone();
    let merged = previous.support().union(&identified);
    Ok((identified, merged))
}

/// One CoSaMP iteration: identify `2K` proxy entries, merge, least squares on
/// the merged support, prune to `K`.
pub fn cosamp_step(
    a: &DenseMatrix,
    y: &[f64],
    previous: &SparseSignal,
    k: usize,
) -> Result<(SparseSignal, StepRecord)> {
    check_step_inputs(a, y, previous, k)?;
    let (identified, merged) = identify_and_merge(a, y, previous, 2 * k)?;
    let fit = least_squares_min_norm(a, y, &merged)?;
    let next = hard_threshold(&fit.coefficients, k)?;
    Ok((
        next,
        StepRecord {
            identified,
            merged,
            merged_estimate: fit.coefficients,
            rank_deficient: fit.rank_deficient,
        },
    ))
}

/// One Subspace Pursuit iteration: identify `K` proxy entries, merge, least
/// squares on the merged support, prune to `K`, then re-solve least squares
/// on the pruned support.
pub fn sp_step(
    a: &DenseMatrix,
    y: &[f64],
    previous: &SparseSignal,
    k: usize,
) -> Result<(SparseSignal, StepRecord)> {
    check_step_inputs(a, y, previous, k)?;
    let (identified, merged) = identify_and_merge(a, y, previous, k)?;
    let fit = least_squares_min_norm(a, y, &merged)?;
    let pruned = hard_threshold(&fit.coefficients, k)?.support().clone();
    let refit = least_squares_min_norm(a, y, &pruned)?;
    Ok((
        SparseSignal::new(refit.coefficients),
        StepRecord {
            identified,
            merged,
            merged_estimate: fit.coefficients,
            rank_deficient: fit.rank_deficient || refit.rank_deficient,
        },
    ))
}

/// `‖x_true restricted to the complement of support‖₂`.
pub fn missed_energy(x_true: &SparseSignal, support: &SupportSet) -> f64 {
    x_true
        .support()
        .iter()
        .filter(|&i| !support.contains(i))
        .fold(0.0, |acc, i| acc + x_true.values()[i].powi(2))
        .sqrt()
}

/// Runs `algorithm` until the residual norm drops to `ε` or the iteration
/// budget is spent.
pub fn run(
    algorithm: Algorithm,
    a: &DenseMatrix,
    y: &[f64],
    config: &RecoveryConfig,
    ground_truth: Option<&SparseSignal>,
) -> Result<RecoveryResult> {
    let n = a.cols();
    config.validate(n)?;
    if y.len() != a.rows() {
        return Err(Error::Dimension {
            context: "measurement length vs rows",
            expected: a.rows(),
            actual: y.len(),
        });
    }
    if let Some(g) = ground_truth {
        if g.len() != n {
            return Err(Error::Dimension {
                context: "ground truth length vs columns",
                expected: n,
                actual: g.len(),
            });
        }
    }

    let eps = config.stopping_error.resolve(y);
    let k = config.sparsity;
    let mut estimate = config
        .initial_estimate
        .clone()
        .unwrap_or_else(|| SparseSignal::zeros(n));
    let mut residual_norm = norm2(&residual(a, estimate.values(), y)?);
    let mut trace = RecoveryTrace {
        initial_missed_energy: ground_truth.map(|g| missed_energy(g, estimate.support())),
        records: Vec::new(),
    };

    let mut iteration = 0;
    while residual_norm > eps && iteration < config.max_iterations {
        iteration += 1;
        let (next, step) = match algorithm {
            Algorithm::Cosamp => cosamp_step(a, y, &estimate, k),
            Algorithm::Sp => sp_step(a, y, &estimate, k),
        }
        .map_err(|e| Error::AtIteration {
            iteration,
            source: Box::new(e),
        })?;
        estimate = next;
        residual_norm = norm2(&residual(a, estimate.values(), y)?);
        trace.records.push(IterationRecord {
            iteration,
            missed_energy: ground_truth.map(|g| missed_energy(g, estimate.support())),
            missed_energy_merged: ground_truth.map(|g| missed_energy(g, &step.merged)),
            identified: step.identified,
            merged: step.merged,
            support: estimate.support().clone(),
            residual_norm,
            rank_deficient: step.rank_deficient,
        });
    }

    Ok(RecoveryResult {
        converged: residual_norm <= eps,
        iterations_used: iteration,
        final_residual_norm: residual_norm,
        estimate,
        trace,
    })
}

/// Brute-force best `K`-sparse least-squares fit over every size-`K` support.
///
/// Residuals within `1e-12 · ‖y‖₂` of each other count as ties, resolved in
/// favour of the lexicographically smallest support.
pub fn exhaustive_oracle_recovery(a: &DenseMatrix, y: &[f64], k: usize) -> Result<SparseSignal> {
    let n = a.cols();
    if y.len() != a.rows() {
        return Err(Error::Dimension {
            context: "measurement length vs rows",
            expected: a.rows(),
            actual: y.len(),
        });
    }
    if k > n {
        return Err(Error::Argument(format!("sparsity {k} exceeds {n} columns")));
    }
    let required = binomial(n, k);
    if required > ORACLE_SUBSET_LIMIT {
        return Err(Error::Capacity {
            what: "exhaustive oracle recovery",
            required,
            limit: ORACLE_SUBSET_LIMIT,
        });
    }
    let y_norm = norm2(y);
    if y_norm == 0.0 {
        return Ok(SparseSignal::zeros(n));
    }
    let tie = 1e-12 * y_norm;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for combo in (0..n).combinations(k) {
        let support = SupportSet::from_unsorted(combo);
        let Ok(fit) = least_squares_min_norm(a, y, &support) else {
            continue;
        };
        let r = norm2(&residual(a, &fit.coefficients, y)?);
        if best.as_ref().is_none_or(|(b, _)| r < b - tie) {
            best = Some((r, fit.coefficients));
        }
    }
    best.map(|(_, x)| SparseSignal::new(x))
        .ok_or(Error::Singular {
            support: Vec::new(),
        })
}
