//! Euclidean distance matrix (EDM) toolkit.
//!
//! An `n x n` hollow symmetric nonnegative matrix `D` is an EDM when its
//! entries are the squared pairwise distances of points `p¹, …, pⁿ` in some
//! `ℝʳ`; the smallest such `r` is the embedding dimension. Recognition runs
//! through the double-centered form `B = -1/2 J D J` with `J = I - eeᵀ/n`:
//! `D` is an EDM of dimension `r` iff `B` is positive semidefinite of rank
//! `r`, in which case `B = PPᵀ` for a configuration `P` with centroid at the
//! origin.
//!
//! On top of recognition and configuration recovery the crate provides:
//!
//! - spherical/regular classification, with the circumscribing radius,
//!   center, and the minimal shift `λ* = 2ρ²` making `λE - D` PSD
//!   ([`spherical`]);
//! - Kronecker-sum composition `E_m ⊗ D2 + D1 ⊗ E_n`, which adds embedding
//!   dimensions and squared radii ([`compose`]);
//! - exact generators for path, Manhattan-grid, Hamming-hypercube and
//!   collinear families, plus seeded random spherical instances
//!   ([`generators`]);
//! - quadratic-assignment evaluation, an exhaustive small-instance solver,
//!   and a spectral lower bound exploiting the spherical shift ([`qap`]);
//! - the deterministic dense symmetric kernel they all share ([`linalg`]).
//!
//! ```
//! use edmkit::{classify, generators::manhattan_grid, Tolerance};
//!
//! let d = manhattan_grid(3, 4, 4096).unwrap();
//! let c = classify(&d, &Tolerance::default());
//! assert!(c.spherical);
//! assert_eq!(c.verdict.embedding_dim, 5);
//! let sphere = c.sphere.unwrap();
//! assert!((sphere.radius_sq - 1.25).abs() < 1e-10);
//! ```

pub mod compose;
pub mod edm;
mod error;
pub mod generators;
pub mod linalg;
pub mod qap;
pub mod spherical;
mod tol;

pub use compose::{composed_sphere, kron_sum_edm};
pub use edm::{
    centering_projector, check_edm, double_center, gram_to_distances, recover_configuration,
    ConfigurationMatrix, DistanceMatrix, EdmVerdict, GramMatrix,
};
pub use error::{Error, Result};
pub use linalg::{
    is_psd, kron, numerical_rank, pinv, schur_psd_test, sym_eigen, EigenDecomposition, SymMatrix,
    DEFAULT_MAX_ORDER,
};
pub use spherical::{
    classify, is_regular, is_spherical, min_shift, radius_sq, sphere_center, EdmClassification,
    SphereInfo, SphericalDiagnostics,
};
pub use tol::Tolerance;
