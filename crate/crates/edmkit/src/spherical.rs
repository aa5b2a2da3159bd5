//! Spherical and regular EDM classification.
//!
//! An EDM `D ≠ 0` of embedding dimension `r` is *spherical* when its
//! generating points lie on a common hypersphere; equivalently when
//! `rank(D) = r + 1`, or when `λE - D ⪰ 0` for some scalar `λ`. The minimal
//! such shift is `λ* = 2ρ²` where `ρ` is the circumscribing radius, and
//!
//! ```text
//! ρ² = eᵀDe/2n² + eᵀD B† De/4n²,        B = -1/2 J D J,
//! a  = (1/2n) (PᵀP)⁻¹ Pᵀ D e,           P the centered configuration,
//! ```
//!
//! with the center `a` also characterized by `Pa = 1/2 J diag(B)`. A
//! spherical EDM is *regular* when the sphere is centered at the centroid,
//! i.e. when `e` is an eigenvector of `D` (`De = 2nρ²e`).

use nalgebra::DVector;

use crate::edm::{
    check_edm, configuration_from_eigen, verdict_from_eigen, ConfigurationMatrix, DistanceMatrix,
    EdmVerdict,
};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, EigenDecomposition, SymMatrix};
use crate::tol::Tolerance;

/// Circumscribing hypersphere of a spherical EDM.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereInfo {
    /// Radius `ρ`.
    pub radius: f64,
    /// Squared radius `ρ²`.
    pub radius_sq: f64,
    /// Center in the recovered configuration frame (centroid at origin,
    /// eigenbasis columns). `None` when the frame is not available, e.g. for
    /// composed spheres.
    pub center: Option<DVector<f64>>,
    /// Minimal `λ` with `λE - D ⪰ 0`; equals `2ρ²`.
    pub min_shift: f64,
}

impl SphereInfo {
    pub(crate) fn from_radius_sq(radius_sq: f64, center: Option<DVector<f64>>) -> Self {
        let radius_sq = radius_sq.max(0.0);
        Self {
            radius: radius_sq.sqrt(),
            radius_sq,
            center,
            min_shift: 2.0 * radius_sq,
        }
    }
}

/// Outcomes of the three sphericality tests.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalDiagnostics {
    /// `rank(D) == r + 1`.
    pub rank_test: bool,
    /// `2ρ̂²E - D ⪰ 0` with `ρ̂²` from the closed-form radius. This is the
    /// primary verdict.
    pub psd_shift_test: bool,
    /// Euclidean residual of the least-squares solve of
    /// `Pa = 1/2 J diag(B)`. `None` when no configuration exists (not an
    /// EDM).
    pub center_residual: Option<f64>,
    /// The smallest eigenvalue of the shift test sits within a decade of the
    /// PSD decision threshold, so the verdict could flip under a small
    /// tolerance change. A clean spherical instance has that eigenvalue at
    /// roundoff level (the shift is minimal), a clean non-spherical one has
    /// it far below the threshold; neither is flagged.
    pub indeterminate: bool,
}

/// Full classification record.
#[derive(Debug, Clone, PartialEq)]
pub struct EdmClassification {
    pub verdict: EdmVerdict,
    pub spherical: bool,
    pub regular: bool,
    /// Present iff `spherical`.
    pub sphere: Option<SphereInfo>,
    pub diagnostics: SphericalDiagnostics,
}

/// `λ E - D`, built entrywise so it is exactly symmetric.
pub(crate) fn shifted_all_ones(d: &DistanceMatrix, lam: f64) -> SymMatrix {
    SymMatrix::from_fn(d.order(), |i, j| lam - d[(i, j)]).unwrap()
}

fn gram_eigen(d: &DistanceMatrix) -> EigenDecomposition {
    sym_eigen(d.gram().as_sym())
}

fn radius_sq_from_eigen(d: &DistanceMatrix, gram_eig: &EigenDecomposition, tol: &Tolerance) -> f64 {
    let n = d.order() as f64;
    let e = DVector::from_element(d.order(), 1.0);
    let de = d.as_dmatrix() * &e;
    let first = e.dot(&de) / (2.0 * n * n);
    let pinv = gram_eig.pinv(tol);
    let second = de.dot(&(pinv.as_dmatrix() * &de)) / (4.0 * n * n);
    first + second
}

/// Squared circumscribing radius `eᵀDe/2n² + eᵀD B† De/4n²`.
///
/// The formula is total over EDMs; it yields the true radius exactly when
/// `D` is spherical.
pub fn radius_sq(d: &DistanceMatrix, tol: &Tolerance) -> Result<f64> {
    let eig = gram_eigen(d);
    if !eig.is_psd(tol) {
        return Err(Error::NotEdm {
            psd_defect: (-eig.min_eigenvalue()).max(0.0),
        });
    }
    Ok(radius_sq_from_eigen(d, &eig, tol))
}

fn center_from_configuration(d: &DistanceMatrix, p: &ConfigurationMatrix) -> DVector<f64> {
    let r = p.dim();
    if r == 0 {
        return DVector::zeros(0);
    }
    let n = d.order();
    let e = DVector::from_element(n, 1.0);
    let de = d.as_dmatrix() * &e;
    let pm = p.as_dmatrix();
    let rhs = pm.transpose() * de;
    let gram = pm.transpose() * pm;
    let sol = gram
        .clone()
        .cholesky()
        .map(|c| c.solve(&rhs))
        .unwrap_or_else(|| gram.lu().solve(&rhs).expect("PᵀP has full rank"));
    sol / (2.0 * n as f64)
}

/// Residual of the least-squares solve of `Pa = 1/2 J diag(B)`.
fn center_solve_residual(d: &DistanceMatrix, p: &ConfigurationMatrix) -> f64 {
    let n = d.order();
    let b = d.gram();
    let diag = DVector::from_fn(n, |i, _| b[(i, i)]);
    let mean = diag.sum() / n as f64;
    // J diag(B) = diag(B) - mean * e
    let rhs = 0.5 * diag.add_scalar(-mean);
    let pm = p.as_dmatrix();
    let r = p.dim();
    if r == 0 {
        return rhs.norm();
    }
    let gram = pm.transpose() * pm;
    let sol = gram
        .clone()
        .cholesky()
        .map(|c| c.solve(&(pm.transpose() * &rhs)))
        .unwrap_or_else(|| {
            gram.lu()
                .solve(&(pm.transpose() * &rhs))
                .expect("PᵀP has full rank")
        });
    (pm * sol - rhs).norm()
}

struct SphericalAnalysis {
    spherical: bool,
    diagnostics: SphericalDiagnostics,
    radius_sq: f64,
    gram_eig: EigenDecomposition,
    verdict: EdmVerdict,
}

fn analyze(d: &DistanceMatrix, tol: &Tolerance) -> Result<SphericalAnalysis> {
    let gram_eig = gram_eigen(d);
    if !gram_eig.is_psd(tol) {
        return Err(Error::NotEdm {
            psd_defect: (-gram_eig.min_eigenvalue()).max(0.0),
        });
    }
    let verdict = verdict_from_eigen(d, &gram_eig, tol);
    let rho_sq = radius_sq_from_eigen(d, &gram_eig, tol).max(0.0);

    let shifted_eig = sym_eigen(&shifted_all_ones(d, 2.0 * rho_sq));
    let psd_shift_test = shifted_eig.is_psd(tol);
    let decision = -tol.rel() * shifted_eig.max_eigenvalue().abs().max(1.0);
    let lam_min = shifted_eig.min_eigenvalue();
    let indeterminate = lam_min > 10.0 * decision && lam_min < 0.1 * decision;

    let rank_test = verdict.rank_d == verdict.embedding_dim + 1;
    let p = configuration_from_eigen(&gram_eig, tol);
    let center_residual = Some(center_solve_residual(d, &p));

    Ok(SphericalAnalysis {
        spherical: psd_shift_test,
        diagnostics: SphericalDiagnostics {
            rank_test,
            psd_shift_test,
            center_residual,
            indeterminate,
        },
        radius_sq: rho_sq,
        gram_eig,
        verdict,
    })
}

/// Sphericality of an EDM.
///
/// The primary verdict is the PSD-shift test at `λ = 2ρ̂²`: the closed-form
/// radius is total, and for non-spherical EDMs no shift works, so the test
/// fails exactly where it should without the rank-tolerance cliffs of the
/// `rank(D) = r + 1` test. All three test outcomes are reported.
pub fn is_spherical(d: &DistanceMatrix, tol: &Tolerance) -> Result<(bool, SphericalDiagnostics)> {
    let a = analyze(d, tol)?;
    Ok((a.spherical, a.diagnostics))
}

/// Minimal shift `λ* = 2ρ²` such that `λ*E - D ⪰ 0`.
///
/// For non-spherical EDMs no finite shift exists and `NotSpherical` is
/// returned.
pub fn min_shift(d: &DistanceMatrix, tol: &Tolerance) -> Result<f64> {
    let a = analyze(d, tol)?;
    if !a.spherical {
        return Err(Error::NotSpherical);
    }
    Ok(2.0 * a.radius_sq)
}

/// Sphere center `a = (1/2n) (PᵀP)⁻¹ Pᵀ D e` in the frame of `p`.
pub fn sphere_center(
    d: &DistanceMatrix,
    p: &ConfigurationMatrix,
    tol: &Tolerance,
) -> Result<DVector<f64>> {
    let a = analyze(d, tol)?;
    if !a.spherical {
        return Err(Error::NotSpherical);
    }
    Ok(center_from_configuration(d, p))
}

/// Regularity test: `e` is an eigenvector of `D`, i.e.
/// `‖De - (eᵀDe/n) e‖_max ≤ rel * max(1, ‖De‖_max)`.
pub fn is_regular(d: &DistanceMatrix, tol: &Tolerance) -> Result<bool> {
    let verdict = check_edm(d, tol);
    if !verdict.is_edm {
        return Err(Error::NotEdm {
            psd_defect: verdict.psd_defect,
        });
    }
    Ok(regular_inner(d, tol))
}

fn regular_inner(d: &DistanceMatrix, tol: &Tolerance) -> bool {
    let n = d.order();
    let e = DVector::from_element(n, 1.0);
    let de = d.as_dmatrix() * &e;
    let mean = de.sum() / n as f64;
    let dev = de.add_scalar(-mean).amax();
    dev <= tol.rel() * de.amax().max(1.0)
}

/// Full classification: recognition verdict, sphericality with diagnostics,
/// regularity, and the circumscribing sphere when one exists.
///
/// `D = 0` is classified as a degenerate sphere: `r = 0`, `ρ = 0`,
/// regular.
pub fn classify(d: &DistanceMatrix, tol: &Tolerance) -> EdmClassification {
    match analyze(d, tol) {
        Err(_) => {
            let verdict = check_edm(d, tol);
            let rank_test = verdict.rank_d == verdict.embedding_dim + 1;
            EdmClassification {
                verdict,
                spherical: false,
                regular: false,
                sphere: None,
                diagnostics: SphericalDiagnostics {
                    rank_test,
                    psd_shift_test: false,
                    center_residual: None,
                    indeterminate: false,
                },
            }
        }
        Ok(a) => {
            let spherical = a.spherical;
            let regular = spherical && regular_inner(d, tol);
            let sphere = spherical.then(|| {
                let p = configuration_from_eigen(&a.gram_eig, tol);
                let center = center_from_configuration(d, &p);
                SphereInfo::from_radius_sq(a.radius_sq, Some(center))
            });
            EdmClassification {
                verdict: a.verdict,
                spherical,
                regular,
                sphere,
                diagnostics: a.diagnostics,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn path(n: usize) -> DistanceMatrix {
        DistanceMatrix::from_sym_unchecked(SymMatrix::from_fn(n, |i, j| (j - i) as f64).unwrap())
    }

    fn collinear(n: usize) -> DistanceMatrix {
        DistanceMatrix::from_sym_unchecked(
            SymMatrix::from_fn(n, |i, j| {
                let d = (j - i) as f64;
                d * d
            })
            .unwrap(),
        )
    }

    #[test]
    fn radius_of_two_points() {
        let d = path(2);
        assert!((radius_sq(&d, &tol()).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn radius_of_path_3() {
        // ρ = (n-1)^{1/2}/2 with n = 3
        let d = path(3);
        assert!((radius_sq(&d, &tol()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn min_shift_of_path_3() {
        let d = path(3);
        let lam = min_shift(&d, &tol()).unwrap();
        assert!((lam - 1.0).abs() < 1e-12);
        assert!(is_psd(&shifted_all_ones(&d, lam), &tol()));
        assert!(!is_psd(
            &shifted_all_ones(&d, (1.0 - 10.0 * tol().rel()) * lam),
            &tol()
        ));
    }

    #[test]
    fn paths_are_spherical_collinear_squares_are_not() {
        for n in 2..=8 {
            let (sph, diag) = is_spherical(&path(n), &tol()).unwrap();
            assert!(sph, "path {n} should be spherical");
            assert!(diag.rank_test);
            assert!(!diag.indeterminate);
        }
        let (sph, diag) = is_spherical(&collinear(3), &tol()).unwrap();
        assert!(!sph);
        assert!(!diag.rank_test);
        assert!(min_shift(&collinear(3), &tol()).is_err());
    }

    #[test]
    fn center_of_two_points_is_midpoint() {
        let d = path(2);
        let p = crate::edm::recover_configuration(&d, &tol()).unwrap();
        let a = sphere_center(&d, &p, &tol()).unwrap();
        assert!(a.amax() < 1e-14);
    }

    #[test]
    fn center_of_path_3_touches_all_points() {
        let d = path(3);
        let p = crate::edm::recover_configuration(&d, &tol()).unwrap();
        let a = sphere_center(&d, &p, &tol()).unwrap();
        let rho_sq = radius_sq(&d, &tol()).unwrap();
        for i in 0..3 {
            let diff = p.point(i) - &a;
            assert!((diff.norm_squared() - rho_sq).abs() < 1e-12);
        }
    }

    #[test]
    fn path_3_is_not_regular() {
        // row sums (3, 2, 3)
        assert!(!is_regular(&path(3), &tol()).unwrap());
        assert!(is_regular(&path(2), &tol()).unwrap());
    }

    #[test]
    fn classify_collinear_squared() {
        let c = classify(&collinear(3), &tol());
        assert!(c.verdict.is_edm);
        assert_eq!(c.verdict.embedding_dim, 1);
        assert_eq!(c.verdict.rank_d, 3);
        assert!(!c.spherical);
        assert!(c.sphere.is_none());
        assert!(!c.regular);
    }

    #[test]
    fn classify_zero_as_degenerate_sphere() {
        let d = DistanceMatrix::new(3, vec![0.0; 9]).unwrap();
        let c = classify(&d, &tol());
        assert!(c.verdict.is_edm);
        assert_eq!(c.verdict.embedding_dim, 0);
        assert_eq!(c.verdict.rank_d, 0);
        assert!(c.spherical);
        assert!(c.regular);
        let sphere = c.sphere.unwrap();
        assert_eq!(sphere.radius, 0.0);
        assert_eq!(sphere.min_shift, 0.0);
        assert_eq!(sphere.center.unwrap().len(), 0);
    }

    #[test]
    fn classify_non_edm() {
        let d =
            DistanceMatrix::new(3, vec![0.0, 1.0, 10.0, 1.0, 0.0, 1.0, 10.0, 1.0, 0.0]).unwrap();
        let c = classify(&d, &tol());
        assert!(!c.verdict.is_edm);
        assert!(!c.spherical);
        assert!(c.sphere.is_none());
        assert!(c.diagnostics.center_residual.is_none());
    }

    #[test]
    fn sphere_info_invariant() {
        let s = SphereInfo::from_radius_sq(0.75, None);
        assert!((s.min_shift - 1.5).abs() < 1e-15);
        assert!((s.radius * s.radius - s.radius_sq).abs() < 1e-15);
    }
}
