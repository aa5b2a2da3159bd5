use crate::error::{Error, Result};

/// Relative tolerance governing rank decisions, PSD tests and residual checks.
///
/// Thresholds are formed as `rel * scale`, where the scale is
/// `max(1, largest absolute eigenvalue or entry)` of the matrix at hand.
/// The floor of 1 gives an absolute fallback for near-zero matrices, so
/// integer-valued structured instances and small random ones are treated
/// uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    rel: f64,
}

impl Tolerance {
    /// Default relative tolerance.
    pub const DEFAULT_REL: f64 = 1e-8;

    pub fn new(rel: f64) -> Result<Self> {
        if !(rel.is_finite() && rel > 0.0) {
            return Err(Error::InvalidMatrix(format!(
                "tolerance must be a positive finite number, got {rel}"
            )));
        }
        Ok(Self { rel })
    }

    pub fn rel(self) -> f64 {
        self.rel
    }

    /// Threshold at a given scale, with the floor of 1 applied.
    pub fn at_scale(self, scale: f64) -> f64 {
        self.rel * scale.max(1.0)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: Self::DEFAULT_REL,
        }
    }
}
