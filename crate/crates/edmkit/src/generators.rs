//! Exact constructors for the structured EDM families: path matrices,
//! Manhattan grids, Hamming hypercubes, a collinear non-spherical witness,
//! and seeded random spherical instances.
//!
//! The integer-valued generators emit exactly representable entries, so
//! identities between them (grid = composition of two paths, hypercube at
//! `r = 2` = square grid up to vertex order) hold with zero error.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::edm::DistanceMatrix;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::spherical::classify;
use crate::tol::Tolerance;

/// Linearization of an `m`-row, `n`-column grid, 1-based on both sides:
/// point `(i, j)` with `i ∈ 1..=n`, `j ∈ 1..=m` maps to `s = i + n(j-1)`,
/// with inverse `j = ⌈s/n⌉`, `i = s - n(⌈s/n⌉ - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridIndexMap {
    rows: usize,
    cols: usize,
}

impl GridIndexMap {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "grid dimensions must be positive");
        Self { rows: m, cols: n }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(i, j) -> s = i + n(j-1)`.
    pub fn to_linear(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.cols).contains(&i) && (1..=self.rows).contains(&j),
            "grid coordinates ({i},{j}) out of range for {}x{}",
            self.rows,
            self.cols
        );
        i + self.cols * (j - 1)
    }

    /// `s -> (i, j)` with `j = ⌈s/n⌉`, `i = s - n(j-1)`.
    pub fn from_linear(&self, s: usize) -> (usize, usize) {
        assert!(
            (1..=self.len()).contains(&s),
            "linear index {s} out of range for {}x{}",
            self.rows,
            self.cols
        );
        let j = s.div_ceil(self.cols);
        (s - self.cols * (j - 1), j)
    }
}

/// Path family: the distance matrix `|i - j|` together with its staircase
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEdm {
    /// `G_n` with entries `|i - j|`.
    pub dist: DistanceMatrix,
    /// Staircase points `q¹, …, qⁿ` in `ℝ^{n-1}` as rows: the first `i-1`
    /// coordinates of `qⁱ` are ones, the rest zeros. Their centroid is NOT
    /// at the origin; recover a centered configuration from `dist` when one
    /// is needed.
    pub points: DMatrix<f64>,
    /// Center `(1/2, …, 1/2)ᵀ` of the sphere through the staircase points,
    /// in the same (non-centered) frame; the squared radius is `(n-1)/4`.
    pub sphere_center: DVector<f64>,
}

/// Distance matrix of a 1-row, `n`-column grid: `g_ij = |i - j|`.
pub fn path_edm(n: usize) -> PathEdm {
    assert!(n >= 1, "path length must be positive");
    let dist = DistanceMatrix::from_sym_unchecked(
        SymMatrix::from_fn(n, |i, j| (j - i) as f64).unwrap(),
    );
    let mut points = DMatrix::zeros(n, n - 1);
    for i in 0..n {
        for k in 0..i {
            points[(i, k)] = 1.0;
        }
    }
    PathEdm {
        dist,
        points,
        sphere_center: DVector::from_element(n - 1, 0.5),
    }
}

/// Manhattan distance matrix of an `m x n` rectangular grid:
/// entry `(s, t)` is `|i - k| + |j - l|` under [`GridIndexMap`].
///
/// Built directly from the metric; bit-identical to
/// `kron_sum_edm(path_edm(m), path_edm(n))`.
pub fn manhattan_grid(m: usize, n: usize, max_order: usize) -> Result<DistanceMatrix> {
    assert!(m >= 1 && n >= 1, "grid dimensions must be positive");
    let order = m.checked_mul(n).ok_or(Error::TooLarge {
        requested: usize::MAX,
        max: max_order,
    })?;
    if order > max_order {
        return Err(Error::TooLarge {
            requested: order,
            max: max_order,
        });
    }
    let map = GridIndexMap::new(m, n);
    let mut out = DMatrix::zeros(order, order);
    for s in 1..=order {
        let (i, j) = map.from_linear(s);
        for t in s..=order {
            let (k, l) = map.from_linear(t);
            let d = (i.abs_diff(k) + j.abs_diff(l)) as f64;
            out[(s - 1, t - 1)] = d;
            out[(t - 1, s - 1)] = d;
        }
    }
    Ok(DistanceMatrix::from_sym_unchecked(
        SymMatrix::from_symmetric_unchecked(out),
    ))
}

/// Hamming family: distances between all `2^r` binary vectors, plus the
/// vertex configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeEdm {
    /// `2^r x 2^r` matrix of Hamming distances. These equal the squared
    /// Euclidean distances between the 0/1 vertices.
    pub dist: DistanceMatrix,
    /// Vertices as rows, ordered by binary value with coordinate `k` as bit
    /// `k-1` (vertex 1 is all-zeros).
    pub vertices: DMatrix<f64>,
}

/// Hamming distance matrix of the `r`-dimensional hypercube.
pub fn hypercube_hamming(r: usize, max_order: usize) -> Result<HypercubeEdm> {
    assert!(r >= 1, "hypercube dimension must be positive");
    if r >= usize::BITS as usize {
        return Err(Error::TooLarge {
            requested: usize::MAX,
            max: max_order,
        });
    }
    let order = 1usize << r;
    if order > max_order {
        return Err(Error::TooLarge {
            requested: order,
            max: max_order,
        });
    }
    let mut out = DMatrix::zeros(order, order);
    for s in 0..order {
        for t in s..order {
            let d = (s ^ t).count_ones() as f64;
            out[(s, t)] = d;
            out[(t, s)] = d;
        }
    }
    let mut vertices = DMatrix::zeros(order, r);
    for s in 0..order {
        for k in 0..r {
            vertices[(s, k)] = ((s >> k) & 1) as f64;
        }
    }
    Ok(HypercubeEdm {
        dist: DistanceMatrix::from_sym_unchecked(SymMatrix::from_symmetric_unchecked(out)),
        vertices,
    })
}

/// Squared distances of the collinear points `0, 1, …, n-1`:
/// `d_ij = (i - j)²`.
///
/// An EDM of embedding dimension 1; non-spherical for every `n >= 3`, which
/// makes it the standard negative witness for the sphericality tests.
pub fn collinear_sq_edm(n: usize) -> DistanceMatrix {
    assert!(n >= 1, "order must be positive");
    DistanceMatrix::from_sym_unchecked(
        SymMatrix::from_fn(n, |i, j| {
            let d = (j - i) as f64;
            d * d
        })
        .unwrap(),
    )
}

const RANDOM_SPHERICAL_RETRIES: usize = 32;

/// Squared pairwise distances of `n` points sampled uniformly on a sphere of
/// random radius in `ℝʳ`, centered at their centroid.
///
/// Deterministic for a fixed seed (ChaCha8 keyed by `seed`; the generator is
/// part of the contract so test vectors reproduce across builds). Draws whose
/// classification is not spherical of dimension exactly `r` are regenerated,
/// up to a bounded number of retries.
pub fn random_spherical_edm(n: usize, r: usize, seed: u64) -> Result<DistanceMatrix> {
    assert!(r >= 1, "dimension must be positive");
    assert!(n > r, "need at least r + 1 points");
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..RANDOM_SPHERICAL_RETRIES {
        let radius = 0.5 + 1.5 * rng.random::<f64>();
        let mut points = DMatrix::zeros(n, r);
        for i in 0..n {
            loop {
                let v: Vec<f64> = (0..r).map(|_| rng.sample(StandardNormal)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-9 {
                    for k in 0..r {
                        points[(i, k)] = radius * v[k] / norm;
                    }
                    break;
                }
            }
        }
        // shift the centroid to the origin; pairwise distances are unchanged
        let centroid = points.row_mean();
        for i in 0..n {
            for k in 0..r {
                points[(i, k)] -= centroid[k];
            }
        }

        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let mut s = 0.0;
                for k in 0..r {
                    let d = points[(i, k)] - points[(j, k)];
                    s += d * d;
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        let dist = DistanceMatrix::from_sym_unchecked(SymMatrix::from_symmetric_unchecked(out));
        let c = classify(&dist, &tol);
        if c.spherical && c.verdict.embedding_dim == r {
            return Ok(dist);
        }
    }
    Err(Error::DegenerateSample {
        retries: RANDOM_SPHERICAL_RETRIES,
    })
}
