//! Sparse-vector primitives: supports, restriction, hard thresholding,
//! magnitude ordering, residuals and support-restricted least squares.
//!
//! Vectors are always dense `Vec<f64>`; supports are kept alongside as
//! explicit ascending index sets.

use std::cmp::Ordering;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::{norm2, DenseMatrix};

/// Relative rank tolerance for restricted least squares: a pivot is treated as
/// zero when it falls below this fraction of the largest column norm.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Strictly increasing set of indices into a length-`n` vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    /// Validates that `indices` are strictly increasing and below `n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::Argument(format!(
                "support index {bad} out of range for length {n}"
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(
                "support indices must be strictly increasing".into(),
            ));
        }
        Ok(Self { indices })
    }

    /// Sorts and deduplicates; no range check.
    pub fn from_unsorted<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut indices: Vec<usize> = iter.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (
            self.indices.iter().peekable(),
            other.indices.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => match x.cmp(&y) {
                    Ordering::Less => {
                        out.push(x);
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push(y);
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push(x);
                        a.next();
                        b.next();
                    }
                },
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        SupportSet { indices: out }
    }

    pub fn complement(&self, n: usize) -> SupportSet {
        SupportSet {
            indices: (0..n).filter(|&i| !self.contains(i)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last >= n => Err(Error::Argument(format!(
                "support index {last} out of range for length {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for SupportSet {
    /// Semicolon-joined ascending indices, e.g. `1;3;7`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Dense vector whose support is exactly its set of nonzero positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal {
    values: Vec<f64>,
    support: SupportSet,
}

impl SparseSignal {
    pub fn new(values: Vec<f64>) -> Self {
        let support = SupportSet {
            indices: values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, _)| i)
                .collect(),
        };
        Self { values, support }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    /// Length-`n` signal with the given `(index, value)` entries.
    pub fn from_entries(n: usize, entries: &[(usize, f64)]) -> Result<Self> {
        let mut values = vec![0.0; n];
        for &(i, v) in entries {
            if i >= n {
                return Err(Error::Argument(format!(
                    "entry index {i} out of range for length {n}"
                )));
            }
            values[i] = v;
        }
        Ok(Self::new(values))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.values)
    }
}

/// Indices sorted by nonincreasing magnitude, with the sorted magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeOrder {
    pub permutation: Vec<usize>,
    pub sorted_magnitudes: Vec<f64>,
}

/// Sorts `|x|` in nonincreasing order; ties go to the smaller index.
pub fn magnitude_order(x: &[f64]) -> MagnitudeOrder {
    let mut permutation: Vec<usize> = (0..x.len()).collect();
    permutation.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    let sorted_magnitudes = permutation.iter().map(|&i| x[i].abs()).collect();
    MagnitudeOrder {
        permutation,
        sorted_magnitudes,
    }
}

/// Keeps `x` on `support`, zeros elsewhere.
pub fn restrict(x: &[f64], support: &SupportSet) -> Result<Vec<f64>> {
    support.check_range(x.len())?;
    let mut out = vec![0.0; x.len()];
    for i in support.iter() {
        out[i] = x[i];
    }
    Ok(out)
}

/// `H_K(v)`: the `k` largest-magnitude entries of `v`.
pub fn hard_threshold(v: &[f64], k: usize) -> Result<SparseSignal> {
    if k > v.len() {
        return Err(Error::Argument(format!(
            "threshold level {k} exceeds vector length {}",
            v.len()
        )));
    }
    let order = magnitude_order(v);
    let mut out = vec![0.0; v.len()];
    for &i in &order.permutation[..k] {
        out[i] = v[i];
    }
    Ok(SparseSignal::new(out))
}

/// `y − A x`.
pub fn residual(a: &DenseMatrix, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != a.rows() {
        return Err(Error::Dimension {
            context: "measurement length vs rows",
            expected: a.rows(),
            actual: y.len(),
        });
    }
    let ax = a.apply(x)?;
    Ok(y.iter().zip(ax).map(|(yi, axi)| yi - axi).collect())
}

/// Solution of a support-restricted least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSolution {
    /// Length-`n` coefficients, zero outside the support.
    pub coefficients: Vec<f64>,
    /// The restricted system was rank deficient and the minimum-norm solution
    /// was returned instead.
    pub rank_deficient: bool,
}

fn check_ls_inputs(a: &DenseMatrix, y: &[f64], support: &SupportSet) -> Result<()> {
    if y.len() != a.rows() {
        return Err(Error::Dimension {
            context: "measurement length vs rows",
            expected: a.rows(),
            actual: y.len(),
        });
    }
    support.check_range(a.cols())
}

/// Householder QR solve on full-rank supports. `None` when a diagonal entry
/// of `R` falls under the rank tolerance.
///
/// Columns already zero below the diagonal are left unreflected, so
/// orthonormal coordinate columns solve exactly.
fn qr_solve(a: &DenseMatrix, y: &[f64], support: &SupportSet) -> Option<Vec<f64>> {
    let m = a.rows();
    let k = support.len();
    if k > m {
        return None;
    }
    let mut cols: Vec<Vec<f64>> = support.iter().map(|j| a.column(j)).collect();
    let largest = cols.iter().map(|c| norm2(c)).fold(0.0, f64::max);
    if largest == 0.0 {
        return None;
    }
    let tol = RANK_TOLERANCE * largest;
    let mut rhs = y.to_vec();

    for j in 0..k {
        let alpha = cols[j][j];
        let tail = norm2(&cols[j][j + 1..]);
        if tail == 0.0 {
            continue;
        }
        let beta = -alpha.signum() * alpha.hypot(tail);
        let scale = alpha - beta;
        // v = (1, x[j+1..] / scale), H = I − τ v vᵀ
        let v: Vec<f64> = std::iter::once(1.0)
            .chain(cols[j][j + 1..].iter().map(|x| x / scale))
            .collect();
        let tau = (beta - alpha) / beta;
        let reflect = |w: &mut [f64]| {
            let dot: f64 = v.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi -= tau * dot * vi;
            }
        };
        for col in cols.iter_mut().skip(j + 1) {
            reflect(&mut col[j..]);
        }
        reflect(&mut rhs[j..]);
        cols[j][j] = beta;
        for x in cols[j][j + 1..].iter_mut() {
            *x = 0.0;
        }
    }

    if (0..k).any(|j| cols[j][j].abs() <= tol) {
        return None;
    }
    let mut coeffs = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| cols[j][i] * coeffs[j]).sum();
        coeffs[i] = (rhs[i] - s) / cols[i][i];
    }
    Some(coeffs)
}

fn scatter(n: usize, support: &SupportSet, coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, c) in support.iter().zip(coeffs) {
        out[i] = *c;
    }
    out
}

/// `argmin ‖y − A z‖₂` over `z` supported on `support`.
///
/// Uses a QR factorisation of the restricted columns. A rank-deficient
/// restricted system (any `R` pivot at or below `RANK_TOLERANCE` times the
/// largest restricted column norm) is an [`Error::Singular`].
pub fn least_squares_on_support(
    a: &DenseMatrix,
    y: &[f64],
    support: &SupportSet,
) -> Result<Vec<f64>> {
    check_ls_inputs(a, y, support)?;
    if support.is_empty() {
        return Ok(vec![0.0; a.cols()]);
    }
    qr_solve(a, y, support)
        .map(|c| scatter(a.cols(), support, &c))
        .ok_or_else(|| Error::Singular {
            support: support.indices().to_vec(),
        })
}

/// Like [`least_squares_on_support`], but dependent columns fall back to the
/// minimum-norm (pseudo-inverse) solution. Only numerically zero columns are
/// an error.
pub fn least_squares_min_norm(
    a: &DenseMatrix,
    y: &[f64],
    support: &SupportSet,
) -> Result<SupportSolution> {
    check_ls_inputs(a, y, support)?;
    if support.is_empty() {
        return Ok(SupportSolution {
            coefficients: vec![0.0; a.cols()],
            rank_deficient: false,
        });
    }
    if let Some(c) = qr_solve(a, y, support) {
        return Ok(SupportSolution {
            coefficients: scatter(a.cols(), support, &c),
            rank_deficient: false,
        });
    }
    let sub = a.select_columns(support);
    let norms: Vec<f64> = sub.column_iter().map(|c| c.norm()).collect();
    let largest = norms.iter().copied().fold(0.0, f64::max);
    if norms.iter().any(|&c| c <= RANK_TOLERANCE * largest) {
        return Err(Error::Singular {
            support: support.indices().to_vec(),
        });
    }
    let svd = sub.svd(true, true);
    let smax = svd.singular_values.max();
    let coeffs = svd
        .solve(&DVector::from_column_slice(y), RANK_TOLERANCE * smax)
        .map_err(|e| Error::Domain(format!("pseudo-inverse solve failed: {e}")))?;
    Ok(SupportSolution {
        coefficients: scatter(a.cols(), support, coeffs.as_slice()),
        rank_deficient: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s(idx: &[usize], n: usize) -> SupportSet {
        SupportSet::new(idx.to_vec(), n).unwrap()
    }

    #[test]
    fn support_validation() {
        assert!(SupportSet::new(vec![0, 3], 3).is_err());
        assert!(SupportSet::new(vec![1, 1], 3).is_err());
        assert!(SupportSet::new(vec![2, 1], 3).is_err());
        assert_eq!(
            SupportSet::from_unsorted([3, 1, 3, 0]).indices(),
            &[0, 1, 3]
        );
    }

    #[test]
    fn union_and_complement() {
        let a = s(&[0, 2, 5], 6);
        let b = s(&[1, 2, 4], 6);
        assert_eq!(a.union(&b).indices(), &[0, 1, 2, 4, 5]);
        assert_eq!(a.complement(6).indices(), &[1, 3, 4]);
        assert_eq!(a.to_string(), "0;2;5");
        assert_eq!(SupportSet::empty().to_string(), "");
    }

    #[test]
    fn signal_support_tracks_nonzeros() {
        let x = SparseSignal::new(vec![0.0, 2.0, 0.0, -1.0]);
        assert_eq!(x.support().indices(), &[1, 3]);
        assert_eq!(x.sparsity(), 2);
        assert!(SparseSignal::from_entries(3, &[(3, 1.0)]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let x = [3.0, 0.0, 4.0];
        assert_eq!(restrict(&x, &s(&[0], 3)).unwrap(), vec![3.0, 0.0, 0.0]);
        assert_eq!(restrict(&x, &SupportSet::empty()).unwrap(), vec![0.0; 3]);
        assert_eq!(restrict(&x, &SupportSet::full(3)).unwrap(), x.to_vec());
        assert!(restrict(&x, &SupportSet::from_unsorted([5])).is_err());
    }

    #[test]
    fn hard_threshold_examples() {
        let h = hard_threshold(&[3.0, -1.0, 4.0, 0.5], 2).unwrap();
        assert_eq!(h.values(), &[3.0, 0.0, 4.0, 0.0]);
        let h = hard_threshold(&[3.0, -1.0], 2).unwrap();
        assert_eq!(h.values(), &[3.0, -1.0]);
        let h = hard_threshold(&[1.0, -1.0, 1.0], 2).unwrap();
        assert_eq!(h.support().indices(), &[0, 1]);
        assert!(hard_threshold(&[1.0], 2).is_err());
    }

    #[test]
    fn hard_threshold_drops_zero_entries_from_support() {
        let h = hard_threshold(&[0.0, 2.0, 0.0, 0.0], 3).unwrap();
        assert_eq!(h.support().indices(), &[1]);
    }

    #[test]
    fn residual_examples() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(
            residual(&i2, &[1.0, 2.0], &[1.0, 2.0]).unwrap(),
            vec![0.0, 0.0]
        );
        assert_eq!(
            residual(&i2, &[0.0, 0.0], &[1.0, 2.0]).unwrap(),
            vec![1.0, 2.0]
        );
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(
            residual(&a, &[1.0, 1.0, 1.0], &[2.0, 1.0]).unwrap(),
            vec![0.0, 0.0]
        );
        assert!(residual(&a, &[1.0, 1.0], &[2.0, 1.0]).is_err());
        assert!(residual(&a, &[1.0, 1.0, 1.0], &[2.0]).is_err());
    }

    #[test]
    fn magnitude_order_examples() {
        let o = magnitude_order(&[0.0, 5.0, 0.0, -2.0]);
        assert_eq!(o.permutation, vec![1, 3, 0, 2]);
        assert_eq!(o.sorted_magnitudes, vec![5.0, 2.0, 0.0, 0.0]);
        assert_eq!(magnitude_order(&[1.0, 1.0]).permutation, vec![0, 1]);
        assert!(magnitude_order(&[]).permutation.is_empty());
        assert_eq!(magnitude_order(&[0.0; 4]).permutation, vec![0, 1, 2, 3]);
    }

    #[test]
    fn least_squares_examples() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, r], vec![0.0, 1.0, r]]).unwrap();
        let z = least_squares_on_support(&a, &[3.0, 4.0], &s(&[0, 1], 3)).unwrap();
        assert_abs_diff_eq!(z[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z[1], 4.0, epsilon = 1e-14);
        assert_eq!(z[2], 0.0);

        let col = DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let z = least_squares_on_support(&col, &[1.0, 3.0], &s(&[0], 1)).unwrap();
        assert_abs_diff_eq!(z[0], 2.0, epsilon = 1e-14);

        let z = least_squares_on_support(&a, &[3.0, 4.0], &SupportSet::empty()).unwrap();
        assert_eq!(z, vec![0.0; 3]);
    }

    #[test]
    fn least_squares_rank_deficiency() {
        // columns 0 and 2 are parallel
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let t = s(&[0, 2], 3);
        match least_squares_on_support(&a, &[1.0, 0.0], &t) {
            Err(Error::Singular { support }) => assert_eq!(support, vec![0, 2]),
            other => panic!("expected singular error, got {other:?}"),
        }
        let sol = least_squares_min_norm(&a, &[5.0, 0.0], &t).unwrap();
        assert!(sol.rank_deficient);
        // minimum-norm split along (1, 2): z = 5/5 * (1, 2)
        assert_abs_diff_eq!(sol.coefficients[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.coefficients[2], 2.0, epsilon = 1e-12);

        let z = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            least_squares_min_norm(&z, &[1.0, 1.0], &s(&[0, 1], 2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn more_columns_than_rows_is_rank_deficient() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(least_squares_on_support(&a, &[1.0], &SupportSet::full(3)).is_err());
        let sol = least_squares_min_norm(&a, &[14.0], &SupportSet::full(3)).unwrap();
        for (c, e) in sol.coefficients.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*c, e, epsilon = 1e-12);
        }
    }
}
