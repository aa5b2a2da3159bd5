//! Squared-distance matrices, the centered Gram form, EDM recognition and
//! configuration recovery.
//!
//! A hollow symmetric nonnegative matrix `D` is a Euclidean distance matrix
//! (EDM) of embedding dimension `r` exactly when its double-centered form
//! `B = -1/2 J D J` (with `J = I - eeᵀ/n`) is positive semidefinite of rank
//! `r`. `B` is then the Gram matrix of a generating configuration whose
//! centroid sits at the origin, and the maps between the hollow and centered
//! subspaces are mutually inverse: `d_ij = b_ii + b_jj - 2 b_ij` recovers `D`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, EigenDecomposition, SymMatrix, RESIDUAL_KAPPA};
use crate::tol::Tolerance;

/// The orthogonal projector `J = I - eeᵀ/n` onto `{x : eᵀx = 0}`.
pub fn centering_projector(n: usize) -> SymMatrix {
    assert!(n > 0, "order must be positive");
    let off = -1.0 / n as f64;
    let diag = 1.0 + off;
    SymMatrix::from_fn(n, |i, j| if i == j { diag } else { off }).unwrap()
}

/// The double-centering map `M ↦ -1/2 J M J`.
///
/// Computed entrywise as `-1/2 (m_ij - r_i - r_j + g)` with row means `r`
/// and grand mean `g`; the upper triangle is mirrored so the output is
/// exactly symmetric.
pub fn double_center(m: &SymMatrix) -> SymMatrix {
    let n = m.order();
    let nf = n as f64;
    let md = m.as_dmatrix();
    let mut row_mean = vec![0.0; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += md[(i, j)];
        }
        row_mean[i] = s / nf;
    }
    let grand: f64 = row_mean.iter().sum::<f64>() / nf;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = -0.5 * (md[(i, j)] - row_mean[i] - row_mean[j] + grand);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    SymMatrix::from_symmetric_unchecked(out)
}

/// The inverse map on the centered subspace:
/// `B ↦ diag(B) eᵀ + e diag(B)ᵀ - 2B`, i.e. `d_ij = b_ii + b_jj - 2 b_ij`.
///
/// The output diagonal is exactly zero.
pub fn gram_to_distances(m: &SymMatrix) -> SymMatrix {
    let n = m.order();
    let md = m.as_dmatrix();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = md[(i, i)] + md[(j, j)] - 2.0 * md[(i, j)];
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    SymMatrix::from_symmetric_unchecked(out)
}

/// Hollow symmetric nonnegative matrix of squared pairwise distances.
///
/// For the Manhattan-grid and Hamming-hypercube families the metric values
/// coincide with squared Euclidean distances, so those matrices are stored
/// as-is.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    m: SymMatrix,
}

impl DistanceMatrix {
    /// Build from row-major entries.
    ///
    /// The diagonal must be exactly zero as given (no tolerance: every
    /// structured family has an exact zero diagonal, and silently repairing
    /// a nonzero one would mask bad inputs). Entries must be nonnegative;
    /// asymmetry is handled as in [`SymMatrix`].
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order > 0 && Some(entries.len()) == order.checked_mul(order) {
            for i in 0..order {
                let d = entries[i * order + i];
                if d != 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "diagonal entry at row {} is {d}, must be exactly 0",
                        i + 1
                    )));
                }
            }
            if let Some(v) = entries.iter().find(|v| **v < 0.0) {
                return Err(Error::InvalidMatrix(format!("negative entry {v}")));
            }
        }
        Self::from_sym(SymMatrix::new(order, entries)?)
    }

    /// Validate an already symmetric matrix as a distance matrix.
    pub fn from_sym(m: SymMatrix) -> Result<Self> {
        let n = m.order();
        for i in 0..n {
            if m[(i, i)] != 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry at row {} is {}, must be exactly 0",
                    i + 1,
                    m[(i, i)]
                )));
            }
            for j in 0..n {
                if m[(i, j)] < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "negative entry {} at row {}, column {}",
                        m[(i, j)],
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { m })
    }

    /// Wrap a matrix that is hollow, symmetric and nonnegative by construction.
    pub(crate) fn from_sym_unchecked(m: SymMatrix) -> Self {
        debug_assert!((0..m.order()).all(|i| m[(i, i)] == 0.0));
        debug_assert!(m.row_major().iter().all(|v| *v >= 0.0));
        Self { m }
    }

    pub fn order(&self) -> usize {
        self.m.order()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.max_abs()
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.m
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        self.m.as_dmatrix()
    }

    pub fn is_zero(&self) -> bool {
        self.m.max_abs() == 0.0
    }

    /// The centered Gram form `-1/2 J D J`.
    pub fn gram(&self) -> GramMatrix {
        GramMatrix {
            m: double_center(&self.m),
        }
    }
}

impl std::ops::Index<(usize, usize)> for DistanceMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.m[idx]
    }
}

/// Centered symmetric matrix of inner products (`Be = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    m: SymMatrix,
}

impl GramMatrix {
    /// Validate centering: every row sum must satisfy
    /// `|Σ_j b_ij| <= 100 n ε max(1, ‖B‖_max)`.
    pub fn new(m: SymMatrix) -> Result<Self> {
        let n = m.order();
        let limit = RESIDUAL_KAPPA * n as f64 * f64::EPSILON * m.max_abs().max(1.0);
        let mut max_row_sum: f64 = 0.0;
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                s += m[(i, j)];
            }
            max_row_sum = max_row_sum.max(s.abs());
        }
        if max_row_sum > limit {
            return Err(Error::NotCentered { max_row_sum, limit });
        }
        Ok(Self { m })
    }

    pub fn order(&self) -> usize {
        self.m.order()
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.m
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        self.m.as_dmatrix()
    }

    /// Recover the squared-distance matrix `d_ij = b_ii + b_jj - 2 b_ij`.
    ///
    /// Roundoff-level negative values (within `100 ε max(1, scale)`) are
    /// clamped to zero; anything more negative means the input was not the
    /// Gram matrix of a point set and is rejected.
    pub fn distances(&self) -> Result<DistanceMatrix> {
        let h = gram_to_distances(&self.m);
        let n = h.order();
        let clamp = RESIDUAL_KAPPA * f64::EPSILON * h.max_abs().max(1.0);
        let mut out = h.as_dmatrix().clone();
        for i in 0..n {
            for j in 0..n {
                let v = out[(i, j)];
                if v < 0.0 {
                    if v < -clamp {
                        return Err(Error::InvalidMatrix(format!(
                            "recovered distance at row {}, column {} is {v:.3e}",
                            i + 1,
                            j + 1
                        )));
                    }
                    out[(i, j)] = 0.0;
                }
            }
        }
        Ok(DistanceMatrix::from_sym_unchecked(
            SymMatrix::from_symmetric_unchecked(out),
        ))
    }
}

impl std::ops::Index<(usize, usize)> for GramMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.m[idx]
    }
}

/// `n x r` matrix whose rows are the generating points, centroid at the
/// origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationMatrix {
    p: DMatrix<f64>,
}

impl ConfigurationMatrix {
    pub(crate) fn from_parts(p: DMatrix<f64>) -> Self {
        Self { p }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.p.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.p.nrows() == 0
    }

    /// Embedding dimension `r`.
    pub fn dim(&self) -> usize {
        self.p.ncols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Point `i` as a column vector.
    pub fn point(&self, i: usize) -> DVector<f64> {
        self.p.row(i).transpose()
    }

    /// `‖pⁱ - pʲ‖²`.
    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..self.dim() {
            let d = self.p[(i, k)] - self.p[(j, k)];
            s += d * d;
        }
        s
    }
}

/// Recognition record for a candidate EDM.
#[derive(Debug, Clone, PartialEq)]
pub struct EdmVerdict {
    /// Whether the double-centered form is PSD, i.e. whether `D` is an EDM.
    pub is_edm: bool,
    /// Numerical rank of the double-centered form (the embedding dimension
    /// when `is_edm`).
    pub embedding_dim: usize,
    /// Numerical rank of `D` itself (either `r+1` or `r+2` for a nonzero EDM).
    pub rank_d: usize,
    /// Most negative eigenvalue of the double-centered form, clamped to 0
    /// when the PSD test passes.
    pub psd_defect: f64,
}

pub(crate) fn verdict_from_eigen(
    d: &DistanceMatrix,
    gram_eig: &EigenDecomposition,
    tol: &Tolerance,
) -> EdmVerdict {
    let is_edm = gram_eig.is_psd(tol);
    let psd_defect = if is_edm {
        0.0
    } else {
        (-gram_eig.min_eigenvalue()).max(0.0)
    };
    EdmVerdict {
        is_edm,
        embedding_dim: gram_eig.rank(tol),
        rank_d: sym_eigen(d.as_sym()).rank(tol),
        psd_defect,
    }
}

/// Recognize an EDM: PSD test on the double-centered form, embedding
/// dimension, rank of `D` and the PSD defect.
pub fn check_edm(d: &DistanceMatrix, tol: &Tolerance) -> EdmVerdict {
    verdict_from_eigen(d, &sym_eigen(d.gram().as_sym()), tol)
}

pub(crate) fn configuration_from_eigen(
    gram_eig: &EigenDecomposition,
    tol: &Tolerance,
) -> ConfigurationMatrix {
    let n = gram_eig.order();
    let r = gram_eig.rank(tol);
    let mut p = DMatrix::zeros(n, r);
    for k in 0..r {
        let s = gram_eig.eigenvalues()[k].max(0.0).sqrt();
        for i in 0..n {
            p[(i, k)] = s * gram_eig.eigenvectors()[(i, k)];
        }
    }
    ConfigurationMatrix::from_parts(p)
}

/// Recover a centered configuration from the top-`r` eigenpairs of the Gram
/// form: `P = V_r diag(√λ_1, …, √λ_r)`, columns in descending eigenvalue
/// order under the deterministic sign rule.
///
/// Eigen-factorization (rather than Cholesky) keeps rank-deficient Gram
/// matrices pivot-free.
pub fn recover_configuration(d: &DistanceMatrix, tol: &Tolerance) -> Result<ConfigurationMatrix> {
    let eig = sym_eigen(d.gram().as_sym());
    if !eig.is_psd(tol) {
        return Err(Error::NotEdm {
            psd_defect: (-eig.min_eigenvalue()).max(0.0),
        });
    }
    Ok(configuration_from_eigen(&eig, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn path(n: usize) -> DistanceMatrix {
        DistanceMatrix::from_sym_unchecked(SymMatrix::from_fn(n, |i, j| (j - i) as f64).unwrap())
    }

    #[test]
    fn projector_small_orders() {
        let j1 = centering_projector(1);
        assert_eq!(j1[(0, 0)], 0.0);

        let j2 = centering_projector(2);
        assert_eq!(j2[(0, 0)], 0.5);
        assert_eq!(j2[(0, 1)], -0.5);

        // idempotent: J² = J
        let j3 = centering_projector(3);
        let sq = j3.as_dmatrix() * j3.as_dmatrix();
        assert!((sq - j3.as_dmatrix()).amax() < 4.0 * f64::EPSILON);
        // Je = 0
        let e = DVector::from_element(3, 1.0);
        assert!((j3.as_dmatrix() * e).amax() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn double_center_matches_projector_product() {
        let d = path(5);
        let j = centering_projector(5);
        let explicit = -0.5 * (j.as_dmatrix() * d.as_dmatrix() * j.as_dmatrix());
        let b = double_center(d.as_sym());
        assert!((b.as_dmatrix() - explicit).amax() < 1e-13);
    }

    #[test]
    fn gram_of_two_point_matrix() {
        let d = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let b = d.gram();
        assert!((b[(0, 0)] - 0.25).abs() < 1e-15);
        assert!((b[(0, 1)] + 0.25).abs() < 1e-15);
        assert!((b[(1, 1)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gram_of_zero_is_zero() {
        let d = DistanceMatrix::new(3, vec![0.0; 9]).unwrap();
        assert_eq!(d.gram().as_sym().max_abs(), 0.0);
    }

    #[test]
    fn gram_of_path_3_is_psd_rank_2() {
        let d = path(3);
        let eig = sym_eigen(d.gram().as_sym());
        assert!(eig.is_psd(&tol()));
        assert_eq!(eig.rank(&tol()), 2);
    }

    #[test]
    fn distances_round_trip() {
        let b = GramMatrix::new(
            SymMatrix::new(2, vec![0.25, -0.25, -0.25, 0.25]).unwrap(),
        )
        .unwrap();
        let d = b.distances().unwrap();
        assert_eq!(d[(0, 1)], 1.0);
        assert_eq!(d[(0, 0)], 0.0);
    }

    #[test]
    fn gram_rejects_uncentered() {
        let m = SymMatrix::identity(3);
        assert!(matches!(GramMatrix::new(m), Err(Error::NotCentered { .. })));
    }

    #[test]
    fn distance_matrix_validation() {
        // negative entry
        assert!(DistanceMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        // nonzero diagonal, even a tiny one
        assert!(DistanceMatrix::new(2, vec![1e-300, 1.0, 1.0, 0.0]).is_err());
        // fine
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn check_edm_collinear_squared() {
        // points 0, 1, 2 on a line: EDM with r = 1, rank 3
        let d = DistanceMatrix::new(3, vec![0.0, 1.0, 4.0, 1.0, 0.0, 1.0, 4.0, 1.0, 0.0]).unwrap();
        let v = check_edm(&d, &tol());
        assert!(v.is_edm);
        assert_eq!(v.embedding_dim, 1);
        assert_eq!(v.rank_d, 3);
        assert_eq!(v.psd_defect, 0.0);
    }

    #[test]
    fn check_edm_rejects_non_edm() {
        // squared distances 1, 1, 10 violate the triangle inequality on the
        // square roots, so no point set generates them
        let d =
            DistanceMatrix::new(3, vec![0.0, 1.0, 10.0, 1.0, 0.0, 1.0, 10.0, 1.0, 0.0]).unwrap();
        let v = check_edm(&d, &tol());
        assert!(!v.is_edm);
        assert!(v.psd_defect > 0.0);
    }

    #[test]
    fn recover_two_points() {
        let d = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let p = recover_configuration(&d, &tol()).unwrap();
        assert_eq!(p.dim(), 1);
        assert!((p.as_dmatrix()[(0, 0)] - 0.5).abs() < 1e-14);
        assert!((p.as_dmatrix()[(1, 0)] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn recover_zero_matrix_gives_empty_configuration() {
        let d = DistanceMatrix::new(2, vec![0.0; 4]).unwrap();
        let p = recover_configuration(&d, &tol()).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn recover_rejects_non_edm() {
        let d =
            DistanceMatrix::new(3, vec![0.0, 1.0, 10.0, 1.0, 0.0, 1.0, 10.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            recover_configuration(&d, &tol()),
            Err(Error::NotEdm { .. })
        ));
    }

    #[test]
    fn recovered_configuration_reproduces_distances() {
        let d = path(5);
        let p = recover_configuration(&d, &tol()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((p.squared_distance(i, j) - d[(i, j)]).abs() < 1e-10);
            }
        }
        // centroid at the origin
        let col_sums = p.as_dmatrix().row_sum();
        assert!(col_sums.amax() < 1e-10);
    }
}
