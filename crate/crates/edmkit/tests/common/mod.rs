//! Seeded instance generators shared by the integration suites.
#![allow(dead_code)]

use edmkit::{double_center, DistanceMatrix, SymMatrix};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Random symmetric matrix with entries in `(-1, 1)`.
pub fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |_, _| uniform(rng, -1.0, 1.0)).unwrap()
}

/// Random hollow symmetric matrix with off-diagonal entries in `(-1, 1)`.
pub fn random_hollow(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { uniform(rng, -1.0, 1.0) }).unwrap()
}

/// Random centered symmetric matrix (the double-centered image of a random
/// symmetric matrix).
pub fn random_centered(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    double_center(&random_sym(rng, n))
}

/// Random hollow symmetric *nonnegative* matrix — a distance-matrix
/// candidate, usually not an EDM.
pub fn random_distance_candidate(rng: &mut ChaCha8Rng, n: usize) -> DistanceMatrix {
    DistanceMatrix::from_sym(
        SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { uniform(rng, 0.0, 2.0) }).unwrap(),
    )
    .unwrap()
}

/// Random PSD matrix `R Rᵀ`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    let r = DMatrix::from_fn(n, n, |_, _| uniform(rng, -1.0, 1.0));
    SymMatrix::from_dmatrix(&r * r.transpose()).unwrap()
}

/// Random orthogonal matrix (Q factor of a random square matrix).
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| uniform(rng, -1.0, 1.0));
    m.qr().q()
}

/// `Σ λ_k q_k q_kᵀ` over the given columns of `q`.
pub fn sym_with_spectrum(q: &DMatrix<f64>, pairs: &[(usize, f64)]) -> SymMatrix {
    let n = q.nrows();
    let mut acc = DMatrix::zeros(n, n);
    for &(col, lam) in pairs {
        let v = q.column(col);
        acc += lam * (v * v.transpose());
    }
    SymMatrix::from_dmatrix(acc).unwrap()
}

/// Random eigenvalue bounded away from zero, `|λ| ∈ (0.5, 2)`.
pub fn safe_eigenvalue(rng: &mut ChaCha8Rng) -> f64 {
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    sign * uniform(rng, 0.5, 2.0)
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
