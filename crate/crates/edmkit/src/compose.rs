//! Kronecker-sum composition of EDMs.
//!
//! For EDMs `D1` (order `m`, dimension `r1`) and `D2` (order `n`, dimension
//! `r2`), the matrix `E_m ⊗ D2 + D1 ⊗ E_n` is again an EDM, of embedding
//! dimension `r1 + r2`; it is the distance matrix of the product
//! configuration. When both factors are spherical the composition is too,
//! with squared radii adding up.

use nalgebra::DMatrix;

use crate::edm::{check_edm, DistanceMatrix};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::spherical::SphereInfo;
use crate::tol::Tolerance;

/// `E_m ⊗ D2 + D1 ⊗ E_n`.
///
/// The second factor is the fast index: entry `(s, t)` with `s = i + n(j-1)`
/// (1-based) equals `D2[i, k] + D1[j, l]` for `t = k + n(l-1)`. This matches
/// the row-major traversal of an `m x n` grid, so composing two path matrices
/// reproduces the grid generator bit for bit.
pub fn kron_sum_edm(
    d1: &DistanceMatrix,
    d2: &DistanceMatrix,
    tol: &Tolerance,
    max_order: usize,
) -> Result<DistanceMatrix> {
    let v1 = check_edm(d1, tol);
    if !v1.is_edm {
        return Err(Error::NotEdm {
            psd_defect: v1.psd_defect,
        });
    }
    let v2 = check_edm(d2, tol);
    if !v2.is_edm {
        return Err(Error::NotEdm {
            psd_defect: v2.psd_defect,
        });
    }

    let m = d1.order();
    let n = d2.order();
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
    for j in 0..m {
        for k in 0..n {
            let s = j * n + k;
            for l in 0..m {
                for t in 0..n {
                    out[(s, l * n + t)] = d1[(j, l)] + d2[(k, t)];
                }
            }
        }
    }
    // diagonal: d1[(j,j)] + d2[(k,k)] = 0 exactly; symmetry and nonnegativity
    // are inherited entrywise
    Ok(DistanceMatrix::from_sym_unchecked(
        SymMatrix::from_symmetric_unchecked(out),
    ))
}

/// Sphere of the composed EDM: `ρ² = ρ1² + ρ2²`, `λ* = λ1* + λ2*`.
///
/// The center is left unset: the composed configuration frame is a recovery
/// artifact, so callers needing a center re-classify the composed matrix.
pub fn composed_sphere(s1: &SphereInfo, s2: &SphereInfo) -> SphereInfo {
    SphereInfo::from_radius_sq(s1.radius_sq + s2.radius_sq, None)
}
