//! Restricted isometry constants.
//!
//! `δ_K` is the largest deviation from 1 of any eigenvalue of a size-`K`
//! column Gram block `A_Tᵀ A_T`. The exact value enumerates every block; the
//! Monte-Carlo value samples blocks and is therefore a lower bound.

use std::cmp::Ordering;

use itertools::Itertools;
use nalgebra::SymmetricEigen;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::sparse::SupportSet;
use crate::util::binomial;

/// Largest number of column subsets [`exact_ric`] will enumerate.
pub const EXACT_SUBSET_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RicMethod {
    Exact,
    MonteCarloLowerBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicEstimate {
    pub order: usize,
    pub delta: f64,
    pub method: RicMethod,
    pub subsets_examined: u128,
    /// A subset attaining `delta`, lexicographically smallest among ties.
    pub extremal_support: SupportSet,
}

impl RicEstimate {
    /// Definition-valid constants lie below 1.
    pub fn is_valid(&self) -> bool {
        self.delta < 1.0
    }
}

/// Extreme eigenvalues `(λ_min, λ_max)` of the Gram block on `support`.
pub fn gram_extremes(a: &DenseMatrix, support: &SupportSet) -> (f64, f64) {
    let eig = SymmetricEigen::new(a.gram(support));
    let lo = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let hi = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `max(1 − λ_min, λ_max − 1)` for one Gram block.
pub fn subset_isometry_defect(a: &DenseMatrix, support: &SupportSet) -> f64 {
    let (lo, hi) = gram_extremes(a, support);
    (1.0 - lo).max(hi - 1.0).max(0.0)
}

fn check_order(a: &DenseMatrix, k: usize) -> Result<()> {
    if k == 0 || k > a.cols() {
        return Err(Error::Argument(format!(
            "RIC order {k} must lie in 1..={}",
            a.cols()
        )));
    }
    Ok(())
}

// larger delta wins; equal deltas keep the lexicographically smaller subset
fn better(a: (f64, Vec<usize>), b: (f64, Vec<usize>)) -> (f64, Vec<usize>) {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Exact `δ_K` by enumerating all `C(n, K)` column subsets.
///
/// Subsets are evaluated on the current rayon pool; the result does not
/// depend on the number of workers.
pub fn exact_ric(a: &DenseMatrix, k: usize) -> Result<RicEstimate> {
    check_order(a, k)?;
    let required = binomial(a.cols(), k);
    if required > EXACT_SUBSET_LIMIT {
        return Err(Error::Capacity {
            what: "exact restricted isometry constant",
            required,
            limit: EXACT_SUBSET_LIMIT,
        });
    }
    let (delta, subset) = (0..a.cols())
        .combinations(k)
        .par_bridge()
        .map(|c| {
            let d = subset_isometry_defect(a, &SupportSet::from_unsorted(c.iter().copied()));
            (d, c)
        })
        .reduce(|| (f64::NEG_INFINITY, Vec::new()), better);
    Ok(RicEstimate {
        order: k,
        delta,
        method: RicMethod::Exact,
        subsets_examined: required,
        extremal_support: SupportSet::from_unsorted(subset),
    })
}

/// Lower bound on `δ_K` from `trials` uniformly sampled size-`K` subsets.
pub fn monte_carlo_ric_lower_bound(
    a: &DenseMatrix,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<RicEstimate> {
    check_order(a, k)?;
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for _ in 0..trials {
        let mut subset = sample(&mut rng, a.cols(), k).into_vec();
        subset.sort_unstable();
        let d = subset_isometry_defect(a, &SupportSet::from_unsorted(subset.iter().copied()));
        best = better(best, (d, subset));
    }
    Ok(RicEstimate {
        order: k,
        delta: best.0,
        method: RicMethod::MonteCarloLowerBound,
        subsets_examined: trials as u128,
        extremal_support: SupportSet::from_unsorted(best.1),
    })
}
