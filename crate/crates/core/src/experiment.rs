//! Seeded instance generation and the validation experiments.
//!
//! Every random quantity derives from a `u64` seed through ChaCha8, and trial
//! `t` of a batch uses [`mix_seed`]`(master_seed, t)`, so records do not
//! depend on trial order or on how many worker threads ran them.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{norm2, DenseMatrix};
use crate::recovery::{run, Algorithm, RecoveryConfig, RecoveryResult, StoppingError};
use crate::ric::{exact_ric, EXACT_SUBSET_LIMIT};
use crate::schedule::greedy_partition;
use crate::sparse::SparseSignal;
use crate::theory::{
    bounds_row, cosamp_contracts, iteration_bound, iteration_constant_cosamp,
    iteration_constant_sp, rho_cosamp, rho_sp, sp_contracts, BoundsRow, DaiVariant,
};
use crate::util::{binomial, mix_seed};

/// `1/√5`: the RIC level below which the `⌈cK⌉` iteration bounds are claimed.
pub const BOUND_HYPOTHESIS_DELTA: f64 = 0.447_213_595_499_957_9;

/// Relative error at or below which a recovery with the right support counts
/// as exact.
pub const EXACT_RECOVERY_TOLERANCE: f64 = 1e-8;

/// Additive slack in the per-iteration decay inequality.
pub const DECAY_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalDistribution {
    /// Standard normal values.
    Gaussian,
    /// Values ±1.
    Flat,
    /// Magnitudes `r^0, r^1, …` with random signs.
    Geometric(f64),
}

impl fmt::Display for SignalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalDistribution::Gaussian => f.write_str("gaussian"),
            SignalDistribution::Flat => f.write_str("flat"),
            SignalDistribution::Geometric(r) => write!(f, "geometric:{r}"),
        }
    }
}

impl FromStr for SignalDistribution {
    type Err = Error;

    /// `gaussian`, `flat` or `geometric:<ratio>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(SignalDistribution::Gaussian),
            "flat" => Ok(SignalDistribution::Flat),
            _ => {
                let ratio = s
                    .strip_prefix("geometric:")
                    .and_then(|r| r.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Argument(format!(
                            "unknown distribution '{s}' (expected gaussian, flat or geometric:<ratio>)"
                        ))
                    })?;
                if !(ratio > 0.0 && ratio <= 1.0) {
                    return Err(Error::Argument(format!(
                        "geometric ratio must lie in (0, 1], got {ratio}"
                    )));
                }
                Ok(SignalDistribution::Geometric(ratio))
            }
        }
    }
}

/// Family the sensing matrix is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixEnsemble {
    /// I.i.d. `N(0, 1/m)` entries.
    Gaussian,
    /// `Q [I_m | V]` with `Q` a random orthogonal matrix and each column of
    /// `V` a random-sign vector with entries `±1/√m`. With a single extra
    /// column, `δ_K = sqrt((K − 1)/m)` exactly.
    FlatAugmented,
}

impl fmt::Display for MatrixEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixEnsemble::Gaussian => "gaussian",
            MatrixEnsemble::FlatAugmented => "flat-augmented",
        })
    }
}

impl FromStr for MatrixEnsemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(MatrixEnsemble::Gaussian),
            "flat-augmented" => Ok(MatrixEnsemble::FlatAugmented),
            other => Err(Error::Argument(format!(
                "unknown ensemble '{other}' (expected gaussian or flat-augmented)"
            ))),
        }
    }
}

/// `m × n` matrix of i.i.d. `N(0, 1)` entries scaled by `1/√m`.
pub fn gaussian_sensing_matrix(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (m as f64).sqrt();
    let data = (0..m * n)
        .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
        .collect();
    DenseMatrix::new(m, n, data)
}

/// See [`MatrixEnsemble::FlatAugmented`]. Requires `n >= m`.
pub fn flat_augmented_matrix(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    if n < m || m == 0 {
        return Err(Error::Argument(format!(
            "flat-augmented ensemble needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<f64>::from_fn(m, m, |_, _| rng.sample(StandardNormal));
    let q = g.qr().q();
    let amp = 1.0 / (m as f64).sqrt();
    let mut base = DMatrix::<f64>::zeros(m, n);
    for i in 0..m {
        base[(i, i)] = 1.0;
    }
    for j in m..n {
        for i in 0..m {
            base[(i, j)] = if rng.random::<bool>() { amp } else { -amp };
        }
    }
    let a = q * base;
    DenseMatrix::new(
        m,
        n,
        (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)])
            .collect(),
    )
}

pub fn sensing_matrix(
    ensemble: MatrixEnsemble,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<DenseMatrix> {
    match ensemble {
        MatrixEnsemble::Gaussian => gaussian_sensing_matrix(m, n, seed),
        MatrixEnsemble::FlatAugmented => flat_augmented_matrix(m, n, seed),
    }
}

/// Length-`n` signal with a uniformly random size-`k` support.
pub fn random_sparse_signal(
    n: usize,
    k: usize,
    distribution: SignalDistribution,
    seed: u64,
) -> Result<SparseSignal> {
    if k > n {
        return Err(Error::Argument(format!("sparsity {k} exceeds length {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = sample(&mut rng, n, k).into_vec();
    let mut values = vec![0.0; n];
    for (rank, &pos) in positions.iter().enumerate() {
        let sign = |rng: &mut ChaCha8Rng| if rng.random::<bool>() { 1.0 } else { -1.0 };
        values[pos] = match distribution {
            SignalDistribution::Gaussian => loop {
                let v: f64 = rng.sample(StandardNormal);
                if v != 0.0 {
                    break v;
                }
            },
            SignalDistribution::Flat => sign(&mut rng),
            SignalDistribution::Geometric(r) => sign(&mut rng) * r.powi(rank as i32),
        };
    }
    Ok(SparseSignal::new(values))
}

/// A generated recovery problem `y = A x + e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub matrix: DenseMatrix,
    pub signal: SparseSignal,
    pub noise: Vec<f64>,
    pub measurements: Vec<f64>,
}

/// Builds one instance from `seed`: the matrix uses `seed`, the signal
/// `mix_seed(seed, 1)` and the noise `mix_seed(seed, 2)`.
#[allow(clippy::too_many_arguments)]
pub fn generate_instance(
    ensemble: MatrixEnsemble,
    m: usize,
    n: usize,
    k: usize,
    distribution: SignalDistribution,
    noise_sigma: f64,
    seed: u64,
) -> Result<Instance> {
    let matrix = sensing_matrix(ensemble, m, n, seed)?;
    let signal = random_sparse_signal(n, k, distribution, mix_seed(seed, 1))?;
    let mut noise = vec![0.0; m];
    if noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 2));
        for e in noise.iter_mut() {
            *e = noise_sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }
    let measurements = matrix
        .apply(signal.values())?
        .into_iter()
        .zip(&noise)
        .map(|(ax, e)| ax + e)
        .collect();
    Ok(Instance {
        matrix,
        signal,
        noise,
        measurements,
    })
}

/// `(support matches, ‖x̂ − x‖ / ‖x‖)`; a zero truth uses the absolute error.
pub fn recovery_error(estimate: &SparseSignal, truth: &SparseSignal) -> (bool, f64) {
    let diff: Vec<f64> = estimate
        .values()
        .iter()
        .zip(truth.values())
        .map(|(a, b)| a - b)
        .collect();
    let norm = truth.norm();
    let err = if norm > 0.0 {
        norm2(&diff) / norm
    } else {
        norm2(&diff)
    };
    (estimate.support() == truth.support(), err)
}

/// Support equality and relative error at most [`EXACT_RECOVERY_TOLERANCE`].
pub fn is_exact_recovery(estimate: &SparseSignal, truth: &SparseSignal) -> bool {
    let (same, err) = recovery_error(estimate, truth);
    same && err <= EXACT_RECOVERY_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub algorithm: Algorithm,
    pub distribution: SignalDistribution,
    pub ensemble: MatrixEnsemble,
    pub noise_sigma: f64,
    pub master_seed: u64,
    pub trials: usize,
    /// Absolute threshold; `None` means `1e-10 · ‖y‖₂`.
    pub epsilon: Option<f64>,
    pub max_iterations: usize,
    /// Compute the exact RIC of the governing order per trial and attach the
    /// `⌈cK⌉` bound.
    pub certify: bool,
}

impl TrialConfig {
    /// Gaussian matrices and signals, noiseless, relative `ε`, default
    /// iteration budget, no certification.
    pub fn new(
        m: usize,
        n: usize,
        k: usize,
        algorithm: Algorithm,
        trials: usize,
        master_seed: u64,
    ) -> Self {
        Self {
            m,
            n,
            k,
            algorithm,
            distribution: SignalDistribution::Gaussian,
            ensemble: MatrixEnsemble::Gaussian,
            noise_sigma: 0.0,
            master_seed,
            trials,
            epsilon: None,
            max_iterations: crate::recovery::default_max_iterations(k),
            certify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.m || self.m > self.n {
            return Err(Error::Argument(format!(
                "need 1 <= K <= m <= n, got K = {}, m = {}, n = {}",
                self.k, self.m, self.n
            )));
        }
        if self.trials == 0 {
            return Err(Error::Argument("trials must be at least 1".into()));
        }
        if self.noise_sigma.is_nan() || self.noise_sigma < 0.0 {
            return Err(Error::Argument(format!(
                "noise sigma must be nonnegative, got {}",
                self.noise_sigma
            )));
        }
        if self.certify {
            let order = self.algorithm.ric_order(self.k);
            check_certifiable(self.n, order)?;
        }
        Ok(())
    }

    pub fn recovery_config(&self) -> RecoveryConfig {
        RecoveryConfig::new(self.k)
            .with_stopping_error(
                self.epsilon
                    .map_or(StoppingError::Relative, StoppingError::Absolute),
            )
            .with_max_iterations(self.max_iterations)
    }

    pub fn instance(&self, seed: u64) -> Result<Instance> {
        generate_instance(
            self.ensemble,
            self.m,
            self.n,
            self.k,
            self.distribution,
            self.noise_sigma,
            seed,
        )
    }
}

fn check_certifiable(n: usize, order: usize) -> Result<()> {
    if order > n {
        return Err(Error::Argument(format!(
            "RIC order {order} exceeds {n} columns"
        )));
    }
    let required = binomial(n, order);
    if required > EXACT_SUBSET_LIMIT {
        return Err(Error::Capacity {
            what: "exact restricted isometry constant",
            required,
            limit: EXACT_SUBSET_LIMIT,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub iterations_used: usize,
    pub converged: bool,
    pub exact_recovery: bool,
    pub relative_error: f64,
    /// `⌈cK⌉` from the exact RIC, when certified and the decay contracts.
    pub bound: Option<usize>,
    /// Exact RIC of order `4K` (CoSaMP) or `3K` (SP), when certified.
    pub delta: Option<f64>,
    /// The certified RIC lies below `1/√5`.
    pub hypothesis_met: bool,
    /// Recovery error message for a failed trial.
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn bound_violated(&self) -> bool {
        self.hypothesis_met && self.bound.is_some_and(|b| self.iterations_used > b)
    }
}

fn governing_constant(algorithm: Algorithm, delta: f64) -> Option<f64> {
    match algorithm {
        Algorithm::Cosamp => iteration_constant_cosamp(delta).ok(),
        Algorithm::Sp => iteration_constant_sp(delta).ok(),
    }
}

/// Runs trial `index` of `config`.
pub fn run_trial(config: &TrialConfig, index: usize) -> TrialRecord {
    let seed = mix_seed(config.master_seed, index as u64);
    let mut record = TrialRecord {
        trial: index,
        seed,
        iterations_used: 0,
        converged: false,
        exact_recovery: false,
        relative_error: f64::NAN,
        bound: None,
        delta: None,
        hypothesis_met: false,
        error: None,
    };
    let outcome = config.instance(seed).and_then(|inst| {
        if config.certify {
            let ric = exact_ric(&inst.matrix, config.algorithm.ric_order(config.k))?;
            record.delta = Some(ric.delta);
            record.bound = governing_constant(config.algorithm, ric.delta)
                .map(|c| iteration_bound(c, config.k));
            record.hypothesis_met = ric.delta < BOUND_HYPOTHESIS_DELTA;
        }
        let res = run(
            config.algorithm,
            &inst.matrix,
            &inst.measurements,
            &config.recovery_config(),
            None,
        )?;
        Ok((inst, res))
    });
    match outcome {
        Ok((inst, res)) => {
            let (_, err) = recovery_error(&res.estimate, &inst.signal);
            record.iterations_used = res.iterations_used;
            record.converged = res.converged;
            record.relative_error = err;
            record.exact_recovery = is_exact_recovery(&res.estimate, &inst.signal);
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Runs every trial on the current rayon pool; records come back in trial
/// order.
pub fn run_trials(config: &TrialConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    Ok((0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub config: TrialConfig,
    pub success_fraction: f64,
    /// Largest iteration count among exact recoveries.
    pub max_iterations: Option<usize>,
    pub hypothesis_met_count: usize,
    /// Hypothesis-met trials that exceeded their `⌈cK⌉` bound.
    pub violations: usize,
    pub failed_trials: usize,
}

pub fn summarize(config: &TrialConfig, records: &[TrialRecord]) -> ExperimentSummary {
    let successes = records.iter().filter(|r| r.exact_recovery).count();
    ExperimentSummary {
        config: config.clone(),
        success_fraction: successes as f64 / records.len().max(1) as f64,
        max_iterations: records
            .iter()
            .filter(|r| r.exact_recovery)
            .map(|r| r.iterations_used)
            .max(),
        hypothesis_met_count: records.iter().filter(|r| r.hypothesis_met).count(),
        violations: records.iter().filter(|r| r.bound_violated()).count(),
        failed_trials: records.iter().filter(|r| r.error.is_some()).count(),
    }
}

/// Noiseless trials on matrices whose RIC is computed exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedSuite {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub seed: u64,
    pub ensemble: MatrixEnsemble,
    pub distribution: SignalDistribution,
}

impl CertifiedSuite {
    /// Gaussian matrices and signals.
    pub fn new(
        m: usize,
        n: usize,
        k: usize,
        algorithm: Algorithm,
        trials: usize,
        seed: u64,
    ) -> Self {
        Self {
            m,
            n,
            k,
            algorithm,
            trials,
            seed,
            ensemble: MatrixEnsemble::Gaussian,
            distribution: SignalDistribution::Gaussian,
        }
    }

    pub fn with_ensemble(mut self, ensemble: MatrixEnsemble) -> Self {
        self.ensemble = ensemble;
        self
    }

    pub fn with_distribution(mut self, distribution: SignalDistribution) -> Self {
        self.distribution = distribution;
        self
    }

    fn validate(&self) -> Result<()> {
        let order = self.algorithm.ric_order(self.k);
        if self.k == 0 || order > self.m || self.m > self.n {
            return Err(Error::Argument(format!(
                "need 1 <= K, {order} (RIC order) <= m <= n, got K = {}, m = {}, n = {}",
                self.k, self.m, self.n
            )));
        }
        if self.trials == 0 {
            return Err(Error::Argument("trials must be at least 1".into()));
        }
        check_certifiable(self.n, order)
    }

    fn trial_config(&self) -> TrialConfig {
        let mut cfg = TrialConfig::new(
            self.m,
            self.n,
            self.k,
            self.algorithm,
            self.trials,
            self.seed,
        );
        cfg.ensemble = self.ensemble;
        cfg.distribution = self.distribution;
        cfg
    }
}

/// One certified, noiseless run with its exact RIC.
struct CertifiedRun {
    trial: usize,
    seed: u64,
    delta: f64,
    signal: SparseSignal,
    result: RecoveryResult,
}

fn certified_runs(
    suite: &CertifiedSuite,
) -> Result<Vec<std::result::Result<CertifiedRun, (usize, String)>>> {
    suite.validate()?;
    let cfg = suite.trial_config();
    let order = suite.algorithm.ric_order(suite.k);
    Ok((0..suite.trials)
        .into_par_iter()
        .map(|t| {
            let seed = mix_seed(suite.seed, t as u64);
            let attempt = cfg.instance(seed).and_then(|inst| {
                let ric = exact_ric(&inst.matrix, order)?;
                let result = run(
                    suite.algorithm,
                    &inst.matrix,
                    &inst.measurements,
                    &cfg.recovery_config(),
                    Some(&inst.signal),
                )?;
                Ok(CertifiedRun {
                    trial: t,
                    seed,
                    delta: ric.delta,
                    signal: inst.signal,
                    result,
                })
            });
            attempt.map_err(|e| (t, e.to_string()))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayViolation {
    pub trial: usize,
    pub seed: u64,
    pub iteration: usize,
    pub delta: f64,
    pub previous: f64,
    pub current: f64,
    pub allowed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub suite: CertifiedSuite,
    pub hypothesis_met: usize,
    pub hypothesis_not_met: usize,
    pub failed_trials: usize,
    /// Consecutive-iteration pairs that were checked.
    pub checked_pairs: usize,
    /// Largest observed `current / previous` among checked pairs with a
    /// nonzero predecessor.
    pub max_observed_ratio: Option<f64>,
    pub violations: Vec<DecayViolation>,
}

/// Checks the per-iteration contraction of the missed energy along every
/// certified trace.
///
/// CoSaMP: `‖x outside Uⁿ‖ ≤ ρ₄K ‖x outside Uⁿ⁻¹‖ + 1e-10` for `n ≥ 2`.
/// SP: `‖x outside Sⁿ‖ ≤ ρ₃K ‖x outside Sⁿ⁻¹‖ + 1e-10` for `n ≥ 1`, with `S⁰`
/// the (empty) initial support. Trials whose exact RIC leaves `ρ ≥ 1` are
/// counted as hypothesis-not-met and skipped.
pub fn decay_validation(suite: &CertifiedSuite) -> Result<DecayReport> {
    let runs = certified_runs(suite)?;
    let mut report = DecayReport {
        suite: suite.clone(),
        hypothesis_met: 0,
        hypothesis_not_met: 0,
        failed_trials: 0,
        checked_pairs: 0,
        max_observed_ratio: None,
        violations: Vec::new(),
    };
    for run in runs {
        let Ok(run) = run else {
            report.failed_trials += 1;
            continue;
        };
        let (contracts, rho) = match suite.algorithm {
            Algorithm::Cosamp => (cosamp_contracts(run.delta), rho_cosamp(run.delta)),
            Algorithm::Sp => (sp_contracts(run.delta), rho_sp(run.delta)),
        };
        let rho = match rho {
            Ok(r) if contracts => r,
            _ => {
                report.hypothesis_not_met += 1;
                continue;
            }
        };
        report.hypothesis_met += 1;

        let series: Vec<(usize, f64)> = match suite.algorithm {
            Algorithm::Cosamp => run
                .result
                .trace
                .records
                .iter()
                .map(|r| {
                    (
                        r.iteration,
                        r.missed_energy_merged.expect("ground truth supplied"),
                    )
                })
                .collect(),
            Algorithm::Sp => std::iter::once((
                0,
                run.result
                    .trace
                    .initial_missed_energy
                    .expect("ground truth supplied"),
            ))
            .chain(
                run.result
                    .trace
                    .records
                    .iter()
                    .map(|r| (r.iteration, r.missed_energy.expect("ground truth supplied"))),
            )
            .collect(),
        };
        for pair in series.windows(2) {
            let ((_, previous), (iteration, current)) = (pair[0], pair[1]);
            report.checked_pairs += 1;
            if previous > 0.0 {
                let ratio = current / previous;
                report.max_observed_ratio = Some(
                    report
                        .max_observed_ratio
                        .map_or(ratio, |m: f64| m.max(ratio)),
                );
            }
            let allowed = rho * previous + DECAY_SLACK;
            if current > allowed {
                report.violations.push(DecayViolation {
                    trial: run.trial,
                    seed: run.seed,
                    iteration,
                    delta: run.delta,
                    previous,
                    current,
                    allowed,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub trial: usize,
    pub seed: u64,
    pub delta: f64,
    pub iterations: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationBoundSummary {
    pub suite: CertifiedSuite,
    pub hypothesis_met_count: usize,
    pub hypothesis_not_met_count: usize,
    pub failed_trials: usize,
    /// Largest iteration count among hypothesis-met trials.
    pub max_observed_iterations: Option<usize>,
    /// Largest `⌈cK⌉` among hypothesis-met trials.
    pub max_bound: Option<usize>,
    pub violations: Vec<BoundViolation>,
    /// CoSaMP only: hypothesis-met trials whose iteration count exceeded the
    /// magnitude-band schedule total.
    pub schedule_violations: Vec<BoundViolation>,
}

/// Checks `iterations_used ≤ ⌈cK⌉` on every trial whose exact RIC is below
/// `1/√5`, with `c` computed from that RIC.
pub fn iteration_bound_experiment(suite: &CertifiedSuite) -> Result<IterationBoundSummary> {
    let runs = certified_runs(suite)?;
    let mut summary = IterationBoundSummary {
        suite: suite.clone(),
        hypothesis_met_count: 0,
        hypothesis_not_met_count: 0,
        failed_trials: 0,
        max_observed_iterations: None,
        max_bound: None,
        violations: Vec::new(),
        schedule_violations: Vec::new(),
    };
    for run in runs {
        let Ok(run) = run else {
            summary.failed_trials += 1;
            continue;
        };
        let constant = governing_constant(suite.algorithm, run.delta);
        let (true, Some(c)) = (run.delta < BOUND_HYPOTHESIS_DELTA, constant) else {
            summary.hypothesis_not_met_count += 1;
            continue;
        };
        summary.hypothesis_met_count += 1;
        let bound = iteration_bound(c, suite.k);
        let used = run.result.iterations_used;
        summary.max_observed_iterations = summary.max_observed_iterations.max(Some(used));
        summary.max_bound = summary.max_bound.max(Some(bound));
        let violation = |bound| BoundViolation {
            trial: run.trial,
            seed: run.seed,
            delta: run.delta,
            iterations: used,
            bound,
        };
        if used > bound || !run.result.converged {
            summary.violations.push(violation(bound));
        }
        if suite.algorithm == Algorithm::Cosamp {
            let schedule = greedy_partition(&run.signal, run.delta)?;
            if used > schedule.total {
                summary.schedule_violations.push(violation(schedule.total));
            }
        }
    }
    Ok(summary)
}

/// Uniform grid of `steps` points on `[delta_min, delta_max]`.
pub fn bounds_sweep(
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    variant: DaiVariant,
) -> Result<Vec<BoundsRow>> {
    if !(0.0 <= delta_min && delta_min < delta_max && delta_max < 1.0) {
        return Err(Error::Argument(format!(
            "need 0 <= delta_min < delta_max < 1, got [{delta_min}, {delta_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::Argument(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let h = (delta_max - delta_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let delta = if i == steps - 1 {
                delta_max
            } else {
                delta_min + h * i as f64
            };
            bounds_row(delta, variant)
        })
        .collect())
}
