use thiserror::Error;

/// Errors produced by matrix construction and the EDM operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix failed validation (non-finite entries, asymmetry beyond the
    /// rejection threshold, nonzero diagonal or negative entries where the
    /// type forbids them).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// A requested order exceeds the configured maximum.
    #[error("order {requested} exceeds the maximum allowed order {max}")]
    TooLarge { requested: usize, max: usize },

    /// Block split point outside `1..order`.
    #[error("invalid partition: leading block size {k} out of range for order {n}")]
    InvalidPartition { k: usize, n: usize },

    /// Row sums of a would-be Gram matrix are too far from zero.
    #[error("matrix is not centered: max |row sum| {max_row_sum:.3e} exceeds {limit:.3e}")]
    NotCentered { max_row_sum: f64, limit: f64 },

    /// The matrix is not a Euclidean distance matrix.
    #[error("not a Euclidean distance matrix (psd defect {psd_defect:.3e})")]
    NotEdm { psd_defect: f64 },

    /// The matrix is an EDM but its points lie on no common hypersphere.
    #[error("not a spherical EDM")]
    NotSpherical,

    /// Randomized instance generation kept producing rank-deficient samples.
    #[error("degenerate sample: gave up after {retries} retries")]
    DegenerateSample { retries: usize },

    /// A slice that should be a permutation of `0..n` is not.
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
