//! Quadratic assignment: objective evaluation, an exhaustive small-instance
//! solver, and a spectral lower bound for spherical distance matrices.
//!
//! The problem is `min over permutation matrices X of trace(A X D Xᵀ)`.
//! When `D` is a spherical EDM with minimal shift `λ*`, the matrix
//! `S = λ*E - D` is PSD and `X E Xᵀ = E` for every permutation, so
//!
//! ```text
//! trace(A X D Xᵀ) = λ* eᵀAe - trace(A X S Xᵀ)
//!                 ≥ λ* eᵀAe - Σᵢ αᵢ βᵢ,
//! ```
//!
//! where `α`, `β` are the spectra of `A` and `S`, both sorted descending:
//! the trace maximum over the orthogonal group dominates the one over
//! permutations.

use itertools::Itertools;

use crate::edm::DistanceMatrix;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, SymMatrix};
use crate::spherical::{min_shift, shifted_all_ones};
use crate::tol::Tolerance;

/// Largest order accepted by [`brute_force`].
pub const BRUTE_FORCE_CAP: usize = 8;

/// A flow matrix paired with a distance matrix of equal order.
///
/// The flow diagonal is not assumed zero; self-loops contribute nothing to
/// the objective (distances are hollow) but do enter `eᵀAe`.
#[derive(Debug, Clone, PartialEq)]
pub struct QapInstance {
    flow: SymMatrix,
    dist: DistanceMatrix,
}

impl QapInstance {
    pub fn new(flow: SymMatrix, dist: DistanceMatrix) -> Result<Self> {
        if flow.order() != dist.order() {
            return Err(Error::InvalidMatrix(format!(
                "flow order {} does not match distance order {}",
                flow.order(),
                dist.order()
            )));
        }
        Ok(Self { flow, dist })
    }

    pub fn order(&self) -> usize {
        self.flow.order()
    }

    pub fn flow(&self) -> &SymMatrix {
        &self.flow
    }

    pub fn dist(&self) -> &DistanceMatrix {
        &self.dist
    }
}

fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match order {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "not a permutation of 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// `Σ_{i,j} A[i,j] · D[perm[i], perm[j]]`, the trace objective evaluated
/// without materializing the permutation matrix. `perm` is 0-based.
pub fn objective(inst: &QapInstance, perm: &[usize]) -> Result<f64> {
    validate_permutation(perm, inst.order())?;
    Ok(objective_unchecked(inst, perm))
}

fn objective_unchecked(inst: &QapInstance, perm: &[usize]) -> f64 {
    let n = inst.order();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += inst.flow[(i, j)] * inst.dist[(perm[i], perm[j])];
        }
    }
    total
}

/// Exact minimizer over all permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct QapOptimum {
    /// 0-based optimal assignment; the lexicographically smallest one on
    /// ties.
    pub permutation: Vec<usize>,
    pub value: f64,
}

/// Exhaustive scan of all `n!` permutations in lexicographic order.
///
/// Strict improvement keeps the first minimizer found, so ties break to the
/// lexicographically smallest permutation.
pub fn brute_force(inst: &QapInstance) -> Result<QapOptimum> {
    let n = inst.order();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            requested: n,
            max: BRUTE_FORCE_CAP,
        });
    }
    let mut best: Option<QapOptimum> = None;
    for perm in (0..n).permutations(n) {
        let value = objective_unchecked(inst, &perm);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(QapOptimum {
                permutation: perm,
                value,
            });
        }
    }
    Ok(best.expect("n >= 1"))
}

/// Spectral lower bound report.
#[derive(Debug, Clone, PartialEq)]
pub struct QapBoundReport {
    pub lower_bound: f64,
    /// The shift `λ*` of the distance matrix.
    pub shift: f64,
    /// Spectrum of the flow matrix, descending.
    pub spectrum_a: Vec<f64>,
    /// Spectrum of `S = λ*E - D`, descending.
    pub spectrum_s: Vec<f64>,
    pub method: &'static str,
}

/// Lower bound `λ* eᵀAe - Σᵢ αᵢ βᵢ` for instances whose distance matrix is a
/// spherical EDM.
pub fn shift_lower_bound(inst: &QapInstance, tol: &Tolerance) -> Result<QapBoundReport> {
    let shift = min_shift(inst.dist(), tol)?;
    let s = shifted_all_ones(inst.dist(), shift);

    let spectrum_a: Vec<f64> = sym_eigen(inst.flow()).eigenvalues().iter().copied().collect();
    let spectrum_s: Vec<f64> = sym_eigen(&s).eigenvalues().iter().copied().collect();

    let e_a_e: f64 = inst.flow().as_dmatrix().sum();
    let dot: f64 = spectrum_a
        .iter()
        .zip(spectrum_s.iter())
        .map(|(a, b)| a * b)
        .sum();

    Ok(QapBoundReport {
        lower_bound: shift * e_a_e - dot,
        shift,
        spectrum_a,
        spectrum_s,
        method: "spectral-shift",
    })
}
