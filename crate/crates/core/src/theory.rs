//! Closed-form constants of the CoSaMP / SP convergence analysis.
//!
//! All functions take restricted isometry constants `δ` and return `f64`.
//! Where a constant is only meaningful for a contraction (`ρ < 1`) the
//! function returns [`Error::Domain`] outside that region.

use std::f64::consts::{LN_2, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::util::bisect;

/// Tolerance used when bisecting for the `ρ = 1` thresholds.
pub const UNIT_ROOT_TOLERANCE: f64 = 1e-9;
/// Tolerance used when bisecting for the SP bound crossover.
pub const CROSSOVER_TOLERANCE: f64 = 1e-6;

const LN_4: f64 = 2.0 * LN_2;

fn check_delta(delta: f64, name: &str) -> Result<()> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!(
            "{name} = {delta} must lie in [0, 1)"
        )));
    }
    Ok(())
}

/// CoSaMP decay rate `ρ₄K = sqrt(2δ²(1 + 2δ²) / (1 − δ²))` with `δ = δ₄K`.
pub fn rho_cosamp(delta_4k: f64) -> Result<f64> {
    check_delta(delta_4k, "delta_4k")?;
    let d2 = delta_4k * delta_4k;
    Ok((2.0 * d2 * (1.0 + 2.0 * d2) / (1.0 - d2)).sqrt())
}

/// SP decay rate `ρ₃K = sqrt(2δ²(1 + δ²)) / (1 − δ²)` with `δ = δ₃K`.
pub fn rho_sp(delta_3k: f64) -> Result<f64> {
    check_delta(delta_3k, "delta_3k")?;
    let d2 = delta_3k * delta_3k;
    Ok((2.0 * d2 * (1.0 + d2)).sqrt() / (1.0 - d2))
}

/// Noise gain of the CoSaMP estimation step, `sqrt(1 + δ₃K) / (1 − δ₄K)`.
pub fn tau1(delta_3k: f64, delta_4k: f64) -> Result<f64> {
    if delta_3k.is_nan() || delta_3k < 0.0 {
        return Err(Error::Domain(format!(
            "delta_3k = {delta_3k} must be nonnegative"
        )));
    }
    check_delta(delta_4k, "delta_4k")?;
    Ok((1.0 + delta_3k).sqrt() / (1.0 - delta_4k))
}

fn contraction(delta_4k: f64) -> Result<f64> {
    let rho = rho_cosamp(delta_4k)?;
    if rho >= 1.0 {
        return Err(Error::Domain(format!(
            "rho_4k({delta_4k}) = {rho} is not a contraction"
        )));
    }
    Ok(rho)
}

/// Noise term `τ` of the missed-energy recursion
/// `‖x outside Uⁿ‖ < ρ₄K ‖x outside Uⁿ⁻¹‖ + (1 − ρ₄K) τ ‖e‖`, where
/// `(1 − ρ₄K) τ = δ₄K sqrt(6(1 + δ₃K)) / (1 − δ₄K) + sqrt(2(1 + δ₄K))`.
pub fn noise_tau(delta_3k: f64, delta_4k: f64) -> Result<f64> {
    if delta_3k.is_nan() || delta_3k < 0.0 {
        return Err(Error::Domain(format!(
            "delta_3k = {delta_3k} must be nonnegative"
        )));
    }
    let rho = contraction(delta_4k)?;
    let scaled = delta_4k * (6.0 * (1.0 + delta_3k)).sqrt() / (1.0 - delta_4k)
        + (2.0 * (1.0 + delta_4k)).sqrt();
    Ok(scaled / (1.0 - rho))
}

/// Noise multiplier of the excess-iteration condition, `τ + √2 τ₁`.
pub fn gamma(delta_3k: f64, delta_4k: f64) -> Result<f64> {
    Ok(noise_tau(delta_3k, delta_4k)? + SQRT_2 * tau1(delta_3k, delta_4k)?)
}

/// `ln(4/ρ²) / ln(1/ρ²)`; the limit 1 at `ρ = 0`.
fn iteration_constant(rho: f64) -> Result<f64> {
    if rho >= 1.0 {
        return Err(Error::Domain(format!("rho = {rho} is not a contraction")));
    }
    if rho == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 + LN_4 / (-2.0 * rho.ln()))
}

/// `c` in the CoSaMP bound `⌈cK⌉`, from `ρ₄K`.
pub fn iteration_constant_cosamp(delta_4k: f64) -> Result<f64> {
    iteration_constant(rho_cosamp(delta_4k)?)
}

/// `c` in the SP bound `⌈cK⌉`, from `ρ₃K` in both numerator and denominator.
pub fn iteration_constant_sp(delta_3k: f64) -> Result<f64> {
    iteration_constant(rho_sp(delta_3k)?)
}

/// `⌈cK⌉` for a known `c`.
pub fn iteration_bound(c: f64, sparsity: usize) -> usize {
    (c * sparsity as f64).ceil() as usize
}

/// Which decay constant enters the earlier SP bound `1.5K / ln(1/ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DaiVariant {
    /// `ρ₃K` from [`rho_sp`].
    #[default]
    SameRho,
    /// The original SP contraction `2δ(1 + δ) / (1 − δ)³`.
    DaiRho,
}

impl fmt::Display for DaiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DaiVariant::SameRho => "same_rho",
            DaiVariant::DaiRho => "dai_rho",
        })
    }
}

impl FromStr for DaiVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same_rho" | "same-rho" => Ok(DaiVariant::SameRho),
            "dai_rho" | "dai-rho" => Ok(DaiVariant::DaiRho),
            other => Err(Error::Argument(format!(
                "unknown variant '{other}' (expected same-rho or dai-rho)"
            ))),
        }
    }
}

/// Original SP contraction constant `2δ(1 + δ) / (1 − δ)³`.
pub fn rho_dai(delta_3k: f64) -> Result<f64> {
    check_delta(delta_3k, "delta_3k")?;
    Ok(2.0 * delta_3k * (1.0 + delta_3k) / (1.0 - delta_3k).powi(3))
}

fn variant_rho(delta_3k: f64, variant: DaiVariant) -> Result<f64> {
    match variant {
        DaiVariant::SameRho => rho_sp(delta_3k),
        DaiVariant::DaiRho => rho_dai(delta_3k),
    }
}

/// Earlier SP iteration bound `1.5K / ln(1/ρ)` before the ceiling; 0 in the
/// `ρ → 0` limit.
pub fn dai_iteration_bound(delta_3k: f64, sparsity: usize, variant: DaiVariant) -> Result<f64> {
    let rho = variant_rho(delta_3k, variant)?;
    if rho >= 1.0 {
        return Err(Error::Domain(format!(
            "{variant} decay {rho} at delta {delta_3k} is not a contraction"
        )));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(1.5 * sparsity as f64 / -rho.ln())
}

/// Sufficient RIC thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceThresholds {
    /// Root of `ρ₄K(δ) = 1`.
    pub cosamp_unit_root: f64,
    /// Root of `ρ₃K(δ) = 1`, by bisection.
    pub sp_unit_root: f64,
    /// `1/√3`: largest `δ₄K` with `√2 δ / sqrt(1 − δ²) ≤ 1`.
    pub merge_capture: f64,
}

pub fn convergence_thresholds() -> ConvergenceThresholds {
    // ρ₄K = 1  ⇔  4δ⁴ + 3δ² − 1 = 0  ⇔  δ² = 1/4
    let cosamp_unit_root = ((-3.0 + 25f64.sqrt()) / 8.0).sqrt();
    let sp_unit_root = bisect(
        |d| rho_sp(d).map_or(f64::INFINITY, |r| r - 1.0),
        0.0,
        0.9,
        UNIT_ROOT_TOLERANCE,
    )
    .expect("rho_sp crosses 1 on [0, 0.9]");
    ConvergenceThresholds {
        cosamp_unit_root,
        sp_unit_root,
        merge_capture: 1.0 / 3f64.sqrt(),
    }
}

/// `ρ₄K(δ) < 1`.
pub fn cosamp_contracts(delta_4k: f64) -> bool {
    rho_cosamp(delta_4k).is_ok_and(|r| r < 1.0)
}

/// `ρ₃K(δ) < 1`.
pub fn sp_contracts(delta_3k: f64) -> bool {
    rho_sp(delta_3k).is_ok_and(|r| r < 1.0)
}

/// `√2 δ₄K / sqrt(1 − δ₄K²) ≤ 1`, i.e. `δ₄K ≤ 1/√3`.
pub fn merge_capture_condition(delta_4k: f64) -> bool {
    (0.0..1.0).contains(&delta_4k) && SQRT_2 * delta_4k / (1.0 - delta_4k * delta_4k).sqrt() <= 1.0
}

/// Result of [`crossover_delta`], with the bracket that was bisected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub variant: DaiVariant,
    pub delta: f64,
    pub lo: f64,
    pub hi: f64,
    /// `c_sp − dai_per_k` at `lo` (positive: earlier bound is smaller).
    pub f_lo: f64,
    /// `c_sp − dai_per_k` at `hi` (negative: this bound is smaller).
    pub f_hi: f64,
}

/// `c_sp(δ) − dai_iteration_bound(δ, 1)`; `K` cancels.
pub fn sp_bound_gap(delta_3k: f64, variant: DaiVariant) -> Result<f64> {
    Ok(iteration_constant_sp(delta_3k)? - dai_iteration_bound(delta_3k, 1, variant)?)
}

/// `δ₃K` where the SP bound `c_sp K` equals the earlier `1.5K / ln(1/ρ)`.
pub fn crossover_delta(variant: DaiVariant) -> Result<Crossover> {
    let limit = match variant {
        DaiVariant::SameRho => convergence_thresholds().sp_unit_root,
        DaiVariant::DaiRho => bisect(
            |d| rho_dai(d).map_or(f64::INFINITY, |r| r - 1.0),
            0.0,
            0.9,
            UNIT_ROOT_TOLERANCE,
        )?,
    };
    let lo = 1e-9;
    // stay strictly inside the contraction region
    let hi = limit - 1e-6;
    let f = |d: f64| sp_bound_gap(d, variant).unwrap_or(f64::NAN);
    let delta = bisect(f, lo, hi, CROSSOVER_TOLERANCE)?;
    Ok(Crossover {
        variant,
        delta,
        lo,
        hi,
        f_lo: f(lo),
        f_hi: f(hi),
    })
}

/// One row of the bounds table; out-of-domain cells hold `NaN`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub delta: f64,
    pub rho_4k: f64,
    pub rho_3k: f64,
    pub c_cosamp: f64,
    pub c_sp: f64,
    pub dai_per_k_same_rho: f64,
    /// Present only when the `dai_rho` variant was requested.
    pub dai_per_k_dai_rho: Option<f64>,
}

impl BoundsRow {
    /// Earlier-bound column for the requested variant.
    pub fn dai_per_k(&self, variant: DaiVariant) -> f64 {
        match variant {
            DaiVariant::SameRho => self.dai_per_k_same_rho,
            DaiVariant::DaiRho => self.dai_per_k_dai_rho.unwrap_or(f64::NAN),
        }
    }
}

/// Evaluates every constant at a single `δ`, used for both `δ₄K` and `δ₃K`.
pub fn bounds_row(delta: f64, variant: DaiVariant) -> BoundsRow {
    let or_nan = |r: Result<f64>| r.unwrap_or(f64::NAN);
    BoundsRow {
        delta,
        rho_4k: or_nan(rho_cosamp(delta)),
        rho_3k: or_nan(rho_sp(delta)),
        c_cosamp: or_nan(iteration_constant_cosamp(delta)),
        c_sp: or_nan(iteration_constant_sp(delta)),
        dai_per_k_same_rho: or_nan(dai_iteration_bound(delta, 1, DaiVariant::SameRho)),
        dai_per_k_dai_rho: (variant == DaiVariant::DaiRho)
            .then(|| or_nan(dai_iteration_bound(delta, 1, DaiVariant::DaiRho))),
    }
}
