//! Signal-dependent iteration counts: the noiseless `k_min`, the excess
//! iterations needed to capture further large entries, and the magnitude-band
//! partition schedule whose total bounds CoSaMP's iteration count.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::sparse::{magnitude_order, SparseSignal};
use crate::theory::{gamma, rho_cosamp};

fn contraction(delta_4k: f64) -> Result<f64> {
    let rho = rho_cosamp(delta_4k)?;
    if rho >= 1.0 {
        return Err(Error::Domain(format!(
            "rho_4k({delta_4k}) = {rho} is not a contraction"
        )));
    }
    Ok(rho)
}

/// Nonzero magnitudes of `x` in nonincreasing order, plus the matching
/// original indices.
fn sorted_nonzeros(x: &SparseSignal) -> (Vec<f64>, Vec<usize>) {
    let order = magnitude_order(x.values());
    let k = x.sparsity();
    (
        order.sorted_magnitudes[..k].to_vec(),
        order.permutation[..k].to_vec(),
    )
}

/// `ln(‖x‖ / x*_K) / ln(1/ρ₄K)` with `K = |supp(x)|`; zero when `ρ₄K = 0`.
pub fn kmin_noiseless(x: &SparseSignal, delta_4k: f64) -> Result<f64> {
    if x.sparsity() == 0 {
        return Err(Error::Domain(
            "k_min is undefined for the zero signal".into(),
        ));
    }
    let rho = contraction(delta_4k)?;
    let (mags, _) = sorted_nonzeros(x);
    let smallest = *mags.last().expect("nonempty support");
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok((x.norm() / smallest).ln() / -rho.ln())
}

/// Smallest `k ≥ 0` with `x*_{p+q} > ρ₄K^k ‖x*_{p+1..K}‖₂ + γ ‖e‖₂`.
///
/// `None` when the noise floor `γ‖e‖₂` already reaches `x*_{p+q}`, so that no
/// number of iterations satisfies the condition.
pub fn excess_iterations(
    p: usize,
    q: usize,
    x: &SparseSignal,
    delta_3k: f64,
    delta_4k: f64,
    noise_norm: f64,
) -> Result<Option<usize>> {
    let k = x.sparsity();
    if q == 0 || p + q > k {
        return Err(Error::Argument(format!(
            "need q >= 1 and p + q <= {k}, got p = {p}, q = {q}"
        )));
    }
    if noise_norm.is_nan() || noise_norm < 0.0 {
        return Err(Error::Argument(format!(
            "noise norm must be nonnegative, got {noise_norm}"
        )));
    }
    let rho = contraction(delta_4k)?;
    let g = gamma(delta_3k, delta_4k)?;
    let (mags, _) = sorted_nonzeros(x);
    let target = mags[p + q - 1];
    let tail = mags[p..].iter().map(|m| m * m).sum::<f64>().sqrt();
    let floor = if noise_norm > 0.0 {
        g * noise_norm
    } else {
        0.0
    };
    if floor >= target {
        return Ok(None);
    }
    let holds = |k: usize| target > rho.powi(k as i32) * tail + floor;
    if holds(0) {
        return Ok(Some(0));
    }
    if rho == 0.0 {
        return Ok(Some(1));
    }
    // ρ^k < (target − floor) / tail, then settle rounding by direct checks
    let ratio = (target - floor) / tail;
    let mut steps = ((ratio.ln() / rho.ln()).floor().max(0.0) as usize) + 1;
    while steps > 1 && holds(steps - 1) {
        steps -= 1;
    }
    while !holds(steps) {
        steps += 1;
    }
    Ok(Some(steps))
}

/// Magnitude bands `Q₁..Q_r` of a signal and the iteration budget of each.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSchedule {
    /// Original indices of each band, in nonincreasing magnitude order.
    pub partitions: Vec<Vec<usize>>,
    /// `k_i` for each band.
    pub iterations: Vec<usize>,
    pub total: usize,
}

/// Splits the support into bands led by `x*_{q_{i−1}+1}`, each holding every
/// following magnitude strictly above `leader/√2`, and assigns
/// `k_i = ⌊ln(2 Σ_{j≥i} |Q_j| / 2^{j−i}) / ln(1/ρ₄K²)⌋ + 1`.
pub fn greedy_partition(x: &SparseSignal, delta_4k: f64) -> Result<PartitionSchedule> {
    if x.sparsity() == 0 {
        return Err(Error::Domain(
            "partition is undefined for the zero signal".into(),
        ));
    }
    let rho = contraction(delta_4k)?;
    let (mags, perm) = sorted_nonzeros(x);

    let mut partitions = Vec::new();
    let mut start = 0;
    while start < mags.len() {
        let cutoff = mags[start] * FRAC_1_SQRT_2;
        let mut end = start + 1;
        while end < mags.len() && mags[end] > cutoff {
            end += 1;
        }
        partitions.push(perm[start..end].to_vec());
        start = end;
    }

    let log_inv = -2.0 * rho.ln();
    let iterations: Vec<usize> = (0..partitions.len())
        .map(|i| {
            let weighted: f64 = partitions[i..]
                .iter()
                .enumerate()
                .map(|(offset, q)| q.len() as f64 / 2f64.powi(offset as i32))
                .sum();
            let v = (2.0 * weighted).ln() / log_inv;
            v.floor() as usize + 1
        })
        .collect();
    let total = iterations.iter().sum();
    Ok(PartitionSchedule {
        partitions,
        iterations,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{iteration_bound, iteration_constant_cosamp};
    use approx::assert_abs_diff_eq;

    const D: f64 = 0.447_213_595_499_957_9;

    #[test]
    fn kmin_examples() {
        let rho = 0.7f64.sqrt();
        let x = SparseSignal::new(vec![2.0, 1.0]);
        let k = kmin_noiseless(&x, D).unwrap();
        assert_abs_diff_eq!(k, 5f64.sqrt().ln() / (1.0 / rho).ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(k, 4.512, epsilon = 1e-3);

        let flat = SparseSignal::new(vec![0.0, -3.0, 3.0, 3.0, 0.0]);
        assert_abs_diff_eq!(
            kmin_noiseless(&flat, D).unwrap(),
            3f64.sqrt().ln() / (1.0 / rho).ln(),
            epsilon = 1e-12
        );
        let spike = SparseSignal::new(vec![0.0, 7.0, 0.0]);
        assert_eq!(kmin_noiseless(&spike, D).unwrap(), 0.0);
        assert!(kmin_noiseless(&SparseSignal::zeros(3), D).is_err());
        assert!(kmin_noiseless(&x, 0.5).is_err());
    }

    #[test]
    fn excess_examples() {
        let x = SparseSignal::new(vec![2.0, 1.0]);
        assert_eq!(excess_iterations(0, 1, &x, D, D, 0.0).unwrap(), Some(1));
        let x = SparseSignal::new(vec![1.0, 1.0]);
        assert_eq!(excess_iterations(0, 2, &x, D, D, 0.0).unwrap(), Some(2));
        assert_eq!(excess_iterations(0, 2, &x, D, D, 1e6).unwrap(), None);
        assert!(excess_iterations(0, 3, &x, D, D, 0.0).is_err());
        assert!(excess_iterations(1, 0, &x, D, D, 0.0).is_err());
        assert!(excess_iterations(0, 1, &x, D, 0.5, 0.0).is_err());
    }

    #[test]
    fn excess_with_zero_rho() {
        let x = SparseSignal::new(vec![2.0, 1.0]);
        // k = 0 needs 1 > ‖x‖ = √5: fails; k = 1 leaves 1 > 0
        assert_eq!(excess_iterations(0, 2, &x, 0.0, 0.0, 0.0).unwrap(), Some(1));
        let spike = SparseSignal::new(vec![3.0]);
        assert_eq!(excess_iterations(0, 1, &spike, D, D, 0.0).unwrap(), Some(1));
    }

    #[test]
    fn excess_prior_capture_shortens_wait() {
        let x = SparseSignal::new(vec![8.0, 4.0, 2.0, 1.0]);
        let from_scratch = excess_iterations(0, 4, &x, D, D, 0.0).unwrap().unwrap();
        let after_three = excess_iterations(3, 1, &x, D, D, 0.0).unwrap().unwrap();
        assert!(after_three < from_scratch);
        // x*_4 = 1 equals the tail norm, so one contraction is still needed
        assert_eq!(after_three, 1);
    }

    #[test]
    fn partition_examples() {
        let flat = SparseSignal::new(vec![1.0, 0.0, -1.0, 1.0, 1.0]);
        let s = greedy_partition(&flat, D).unwrap();
        assert_eq!(s.partitions, vec![vec![0, 2, 3, 4]]);

        let geo = SparseSignal::new(vec![1.0, -8.0, 2.0, 4.0]);
        let s = greedy_partition(&geo, D).unwrap();
        assert_eq!(s.partitions, vec![vec![1], vec![3], vec![2], vec![0]]);
        assert_eq!(s.iterations.len(), 4);
        assert_eq!(s.total, s.iterations.iter().sum::<usize>());
        assert!(s.iterations.iter().all(|&k| k >= 1));

        assert!(greedy_partition(&SparseSignal::zeros(2), D).is_err());
        assert!(greedy_partition(&flat, 0.6).is_err());
    }

    #[test]
    fn partition_band_boundary_is_strict() {
        // 1/√2 exactly belongs to the next band
        let x = SparseSignal::new(vec![1.0, FRAC_1_SQRT_2, 0.70]);
        let s = greedy_partition(&x, D).unwrap();
        assert_eq!(s.partitions, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn partition_iteration_counts_by_hand() {
        // single band of K = 4: k₁ = ⌊ln 8 / ln(1/0.7)⌋ + 1 = ⌊5.83⌋ + 1 = 6
        let flat = SparseSignal::new(vec![1.0; 4]);
        let s = greedy_partition(&flat, D).unwrap();
        assert_eq!(s.iterations, vec![6]);
        let bound = iteration_bound(iteration_constant_cosamp(D).unwrap(), 4);
        assert!(s.total <= bound);
        // δ = 0: every band takes one iteration
        let geo = SparseSignal::new(vec![8.0, 4.0, 2.0, 1.0]);
        assert_eq!(greedy_partition(&geo, 0.0).unwrap().iterations, vec![1; 4]);
    }
}
