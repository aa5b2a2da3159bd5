//! Dense symmetric linear algebra: deterministic eigendecomposition,
//! numerical rank, PSD testing, Moore-Penrose pseudo-inverse, Kronecker
//! products and the generalized Schur complement PSD test.
//!
//! Everything here is a pure function on immutable values. The eigensolver
//! post-processes its output into a canonical form (eigenvalues sorted
//! descending, a fixed sign for each eigenvector) so that identical input
//! bits always produce identical output bits.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol::Tolerance;

/// Default cap on the order of generated or composed matrices.
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Factor in the `kappa * n * eps * scale` bounds used for reconstruction
/// and centering checks.
pub(crate) const RESIDUAL_KAPPA: f64 = 100.0;

/// Dense symmetric real matrix.
///
/// Symmetry is enforced at construction: inputs whose asymmetry exceeds a
/// rejection threshold are refused, anything below it is averaged with its
/// transpose, so the stored entries satisfy `m[(i, j)] == m[(j, i)]` exactly.
/// File round-trips introduce last-bit asymmetry; averaging an already
/// symmetric matrix is a no-op bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    /// Relative asymmetry above which construction is rejected instead of
    /// repaired by averaging.
    pub const DEFAULT_ASYM_REL: f64 = 1e-10;

    /// Build from row-major entries, with the default asymmetry threshold.
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self> {
        Self::with_asym_tol(order, entries, Self::DEFAULT_ASYM_REL)
    }

    /// Build from row-major entries with an explicit asymmetry threshold.
    pub fn with_asym_tol(order: usize, entries: Vec<f64>, asym_rel: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidMatrix("order must be positive".into()));
        }
        let expected = order
            .checked_mul(order)
            .ok_or_else(|| Error::InvalidMatrix(format!("order {order} overflows")))?;
        if entries.len() != expected {
            return Err(Error::InvalidMatrix(format!(
                "expected {expected} entries for order {order}, got {}",
                entries.len()
            )));
        }
        Self::from_dmatrix_with(DMatrix::from_row_slice(order, order, &entries), asym_rel)
    }

    /// Wrap an `n x n` matrix, validating and symmetrizing it.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        Self::from_dmatrix_with(m, Self::DEFAULT_ASYM_REL)
    }

    fn from_dmatrix_with(m: DMatrix<f64>, asym_rel: f64) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(Error::InvalidMatrix(format!(
                "expected a square matrix of positive order, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let scale = m.amax().max(1.0);
        let mut asym: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asym > asym_rel * scale {
            return Err(Error::InvalidMatrix(format!(
                "asymmetry {asym:.3e} exceeds {:.3e}",
                asym_rel * scale
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Average a numerically symmetric matrix with its transpose.
    ///
    /// `(x + x) / 2 == x` exactly, so already symmetric data is preserved
    /// bit for bit.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut s = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        Self { m: s }
    }

    /// Wrap a matrix that is exactly symmetric by construction.
    pub(crate) fn from_symmetric_unchecked(m: DMatrix<f64>) -> Self {
        debug_assert!(m.is_square());
        debug_assert!((0..m.nrows())
            .all(|i| (0..m.nrows()).all(|j| m[(i, j)].to_bits() == m[(j, i)].to_bits())));
        Self { m }
    }

    /// Build from a function of the (row, column) index pair.
    ///
    /// The function is evaluated on `i <= j` only and mirrored, so the result
    /// is exactly symmetric even if `f` is not.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidMatrix("order must be positive".into()));
        }
        let mut m = DMatrix::zeros(order, order);
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { m })
    }

    pub fn zeros(order: usize) -> Self {
        assert!(order > 0, "order must be positive");
        Self {
            m: DMatrix::zeros(order, order),
        }
    }

    pub fn identity(order: usize) -> Self {
        assert!(order > 0, "order must be positive");
        Self {
            m: DMatrix::identity(order, order),
        }
    }

    /// The all-ones matrix `E = e eᵀ`.
    pub fn all_ones(order: usize) -> Self {
        assert!(order > 0, "order must be positive");
        Self {
            m: DMatrix::from_element(order, order, 1.0),
        }
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.m.amax()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn row_major(&self) -> Vec<f64> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.m[idx]
    }
}

/// Eigendecomposition of a symmetric matrix in canonical form.
///
/// Eigenvalues are sorted descending; column `i` of the eigenvector matrix
/// pairs with eigenvalue `i`. In each eigenvector the entry of largest
/// magnitude (first such index on ties) is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues, sorted descending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    /// Orthonormal eigenvectors as columns, paired with `eigenvalues()`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.values[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `max(1, |λ_1|, |λ_n|)` — the scale used for rank thresholds.
    pub fn spectral_scale(&self) -> f64 {
        self.max_eigenvalue()
            .abs()
            .max(self.min_eigenvalue().abs())
            .max(1.0)
    }

    /// Count of eigenvalues with `|λ| > rel * max(1, |λ_1|, |λ_n|)`.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let thresh = tol.rel() * self.spectral_scale();
        self.values.iter().filter(|l| l.abs() > thresh).count()
    }

    /// True iff `λ_min >= -rel * max(1, |λ_1|)`.
    pub fn is_psd(&self, tol: &Tolerance) -> bool {
        self.min_eigenvalue() >= -tol.rel() * self.max_eigenvalue().abs().max(1.0)
    }

    /// Moore-Penrose pseudo-inverse `V Λ† Vᵀ`: eigenvalues above the rank
    /// threshold are inverted, the rest are zeroed.
    pub fn pinv(&self, tol: &Tolerance) -> SymMatrix {
        let n = self.order();
        let thresh = tol.rel() * self.spectral_scale();
        let mut acc = DMatrix::zeros(n, n);
        for k in 0..n {
            let lam = self.values[k];
            if lam.abs() > thresh {
                let v = self.vectors.column(k);
                acc += (v * v.transpose()) / lam;
            }
        }
        SymMatrix::symmetrized(acc)
    }

    /// `V Λ Vᵀ`, for residual checks.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut acc = DMatrix::zeros(n, n);
        for k in 0..n {
            let v = self.vectors.column(k);
            acc += self.values[k] * (v * v.transpose());
        }
        acc
    }
}

/// Deterministic symmetric eigendecomposition.
///
/// Same input bits produce the same output bits: the underlying solver is
/// sequential, the descending sort is stable and the sign convention fixes
/// each eigenvector up to degenerate clusters.
pub fn sym_eigen(m: &SymMatrix) -> EigenDecomposition {
    let n = m.order();
    let se = m.as_dmatrix().clone().symmetric_eigen();

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));

    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (new_col, &old_col) in idx.iter().enumerate() {
        values[new_col] = se.eigenvalues[old_col];
        let col = se.eigenvectors.column(old_col);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let flip = col[pivot] < 0.0;
        for i in 0..n {
            vectors[(i, new_col)] = if flip { -col[i] } else { col[i] };
        }
    }
    EigenDecomposition { values, vectors }
}

/// Numerical rank: eigenvalues above `rel * max(1, |λ_1|, |λ_n|)` in magnitude.
pub fn numerical_rank(m: &SymMatrix, tol: &Tolerance) -> usize {
    sym_eigen(m).rank(tol)
}

/// Positive semidefiniteness test with a relative eigenvalue threshold.
pub fn is_psd(m: &SymMatrix, tol: &Tolerance) -> bool {
    sym_eigen(m).is_psd(tol)
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix.
pub fn pinv(m: &SymMatrix, tol: &Tolerance) -> SymMatrix {
    sym_eigen(m).pinv(tol)
}

/// Kronecker product of two symmetric matrices.
///
/// With 1-based indices, `(A ⊗ B)[(i-1)n+k, (j-1)n+l] = A[i,j] * B[k,l]`.
pub fn kron(a: &SymMatrix, b: &SymMatrix, max_order: usize) -> Result<SymMatrix> {
    let m = a.order();
    let n = b.order();
    let prod = m.checked_mul(n).ok_or(Error::TooLarge {
        requested: usize::MAX,
        max: max_order,
    })?;
    if prod > max_order {
        return Err(Error::TooLarge {
            requested: prod,
            max: max_order,
        });
    }
    let mut out = DMatrix::zeros(prod, prod);
    for i in 0..m {
        for j in 0..m {
            let aij = a[(i, j)];
            for k in 0..n {
                for l in 0..n {
                    out[(i * n + k, j * n + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    // a_ij b_kl == a_ji b_lk entrywise, so the result is exactly symmetric
    Ok(SymMatrix::from_symmetric_unchecked(out))
}

/// Generalized Schur complement PSD test on the partition `[[A, B], [Bᵀ, C]]`
/// with `A` of order `k`.
///
/// `M ⪰ 0` iff `C ⪰ 0`, `A - B C† Bᵀ ⪰ 0`, and the null space of `C` lies in
/// the null space of `B`. The null-space condition is implemented as
/// `‖B v‖ ≤ rel * max(1, ‖M‖_max)` for every eigenvector `v` of `C` whose
/// eigenvalue sits below the rank threshold.
pub fn schur_psd_test(m: &SymMatrix, k: usize, tol: &Tolerance) -> Result<bool> {
    let n = m.order();
    if k == 0 || k >= n {
        return Err(Error::InvalidPartition { k, n });
    }
    let md = m.as_dmatrix();
    let a = md.view((0, 0), (k, k)).into_owned();
    let b = md.view((0, k), (k, n - k)).into_owned();
    let c = md.view((k, k), (n - k, n - k)).into_owned();

    let c_eig = sym_eigen(&SymMatrix::from_symmetric_unchecked(c));
    if !c_eig.is_psd(tol) {
        return Ok(false);
    }

    let scale = m.max_abs().max(1.0);
    let rank_thresh = tol.rel() * c_eig.spectral_scale();
    for j in 0..(n - k) {
        if c_eig.eigenvalues()[j].abs() <= rank_thresh {
            let bv = &b * c_eig.eigenvectors().column(j);
            if bv.norm() > tol.rel() * scale {
                return Ok(false);
            }
        }
    }

    let c_pinv = c_eig.pinv(tol);
    let complement = &a - &b * c_pinv.as_dmatrix() * b.transpose();
    Ok(is_psd(&SymMatrix::symmetrized(complement), tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    /// Path-graph distance matrix |i - j|, used across the test suite.
    fn g(n: usize) -> SymMatrix {
        SymMatrix::from_fn(n, |i, j| (j - i) as f64).unwrap()
    }

    #[test]
    fn eigen_identity() {
        let eig = sym_eigen(&SymMatrix::identity(3));
        for k in 0..3 {
            assert!((eig.eigenvalues()[k] - 1.0).abs() < 1e-14);
        }
        // sign rule: the dominant entry of each eigenvector is nonnegative
        for k in 0..3 {
            let col = eig.eigenvectors().column(k);
            let pivot = (0..3).max_by(|&a, &b| col[a].abs().total_cmp(&col[b].abs())).unwrap();
            assert!(col[pivot] >= 0.0);
        }
    }

    #[test]
    fn eigen_all_ones_2() {
        let eig = sym_eigen(&SymMatrix::all_ones(2));
        assert!((eig.eigenvalues()[0] - 2.0).abs() < 1e-14);
        assert!(eig.eigenvalues()[1].abs() < 1e-14);
    }

    #[test]
    fn eigen_shifted_path_3() {
        // E3 - G3 has eigenvalues (2, 1, 0)
        let m = SymMatrix::from_fn(3, |i, j| 1.0 - (j - i) as f64).unwrap();
        let eig = sym_eigen(&m);
        for (k, want) in [2.0, 1.0, 0.0].into_iter().enumerate() {
            assert!(
                (eig.eigenvalues()[k] - want).abs() < 1e-12,
                "eigenvalue {k}: {}",
                eig.eigenvalues()[k]
            );
        }
    }

    #[test]
    fn eigen_reconstruction_and_orthonormality() {
        let m = g(6);
        let eig = sym_eigen(&m);
        let n = 6.0;
        let bound = RESIDUAL_KAPPA * n * f64::EPSILON * m.max_abs().max(1.0);
        let residual = (eig.reconstruct() - m.as_dmatrix()).amax();
        assert!(residual <= bound, "residual {residual:e} > {bound:e}");
        let qtq = eig.eigenvectors().transpose() * eig.eigenvectors();
        let ortho = (qtq - DMatrix::<f64>::identity(6, 6)).amax();
        assert!(ortho <= bound);
    }

    #[test]
    fn eigen_deterministic() {
        let m = SymMatrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0).unwrap();
        let a = sym_eigen(&m);
        let b = sym_eigen(&m);
        for k in 0..5 {
            assert_eq!(a.eigenvalues()[k].to_bits(), b.eigenvalues()[k].to_bits());
        }
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(
                    a.eigenvectors()[(i, j)].to_bits(),
                    b.eigenvectors()[(i, j)].to_bits()
                );
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&SymMatrix::zeros(3), &tol()), 0);
        assert_eq!(numerical_rank(&SymMatrix::all_ones(4), &tol()), 1);
        // det = 8, full rank
        let m = SymMatrix::new(3, vec![0.0, 1.0, 4.0, 1.0, 0.0, 1.0, 4.0, 1.0, 0.0]).unwrap();
        assert_eq!(numerical_rank(&m, &tol()), 3);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&SymMatrix::identity(2), &tol()));
        // E3 - G3 with eigenvalues (2, 1, 0)
        let m = SymMatrix::from_fn(3, |i, j| 1.0 - (j - i) as f64).unwrap();
        assert!(is_psd(&m, &tol()));
        // 0.9 E3 - G3 dips below zero
        let m = SymMatrix::from_fn(3, |i, j| 0.9 - (j - i) as f64).unwrap();
        assert!(!is_psd(&m, &tol()));
    }

    #[test]
    fn pinv_identity_and_ones() {
        let p = pinv(&SymMatrix::identity(3), &tol());
        assert!((p.as_dmatrix() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-14);

        // (e eᵀ)† = e eᵀ / n²
        let p = pinv(&SymMatrix::all_ones(3), &tol());
        for i in 0..3 {
            for j in 0..3 {
                assert!((p[(i, j)] - 1.0 / 9.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pinv_projector_is_self_inverse() {
        // J = I - E/3 is an orthogonal projector, so J† = J
        let j = SymMatrix::from_fn(3, |i, k| if i == k { 2.0 / 3.0 } else { -1.0 / 3.0 }).unwrap();
        let p = pinv(&j, &tol());
        assert!((p.as_dmatrix() - j.as_dmatrix()).amax() < 1e-13);
    }

    #[test]
    fn penrose_conditions_hold() {
        let m = g(5);
        let p = pinv(&m, &tol());
        let md = m.as_dmatrix();
        let pd = p.as_dmatrix();
        let bound = RESIDUAL_KAPPA * 5.0 * f64::EPSILON * m.max_abs().max(1.0);
        assert!((md * pd * md - md).amax() <= bound);
        assert!((pd * md * pd - pd).amax() <= bound);
        assert!(((md * pd).transpose() - md * pd).amax() <= bound);
        assert!(((pd * md).transpose() - pd * md).amax() <= bound);
    }

    #[test]
    fn kron_small_cases() {
        let i4 = kron(&SymMatrix::identity(2), &SymMatrix::identity(2), 16).unwrap();
        assert!((i4.as_dmatrix() - DMatrix::<f64>::identity(4, 4)).amax() == 0.0);

        // E2 ⊗ G2 tiles G2 in every block
        let e2 = SymMatrix::all_ones(2);
        let g2 = g(2);
        let k = kron(&e2, &g2, 16).unwrap();
        for bi in 0..2 {
            for bj in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(k[(bi * 2 + i, bj * 2 + j)], g2[(i, j)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_too_large() {
        let a = SymMatrix::identity(3);
        match kron(&a, &a, 8) {
            Err(Error::TooLarge { requested: 9, max: 8 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn schur_examples() {
        let m = SymMatrix::new(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(schur_psd_test(&m, 1, &tol()).unwrap());

        let m = SymMatrix::new(2, vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(!schur_psd_test(&m, 1, &tol()).unwrap());

        // C = 0 with B ≠ 0 violates the null-space condition
        let m = SymMatrix::new(2, vec![1.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(!schur_psd_test(&m, 1, &tol()).unwrap());
    }

    #[test]
    fn schur_invalid_partition() {
        let m = SymMatrix::identity(3);
        assert!(matches!(
            schur_psd_test(&m, 0, &tol()),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            schur_psd_test(&m, 3, &tol()),
            Err(Error::InvalidPartition { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(SymMatrix::new(0, vec![]).is_err());
        assert!(SymMatrix::new(2, vec![0.0; 3]).is_err());
        assert!(SymMatrix::new(1, vec![f64::NAN]).is_err());
        // asymmetry above the rejection threshold
        assert!(SymMatrix::new(2, vec![0.0, 1.0, 1.5, 0.0]).is_err());
        // last-bit asymmetry is repaired
        let m = SymMatrix::new(2, vec![0.0, 1.0, 1.0 + 1e-13, 0.0]).unwrap();
        assert_eq!(m[(0, 1)], m[(1, 0)]);
    }
}
