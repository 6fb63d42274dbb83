//! Axis-aligned parameter boxes.

use crate::error::{Error, Result};

/// Default distance from a face below which a point no longer counts as
/// interior.
pub const DEFAULT_INTERIOR_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    Boundary,
    Outside,
}

/// Compact box `Θ = Π [lower_i, upper_i]` with a computable interior test.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
    interior_margin: f64,
}

impl ParamDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::with_margin(lower, upper, DEFAULT_INTERIOR_MARGIN)
    }

    /// One-dimensional interval `[lower, upper]`.
    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower], vec![upper])
    }

    pub fn with_margin(lower: Vec<f64>, upper: Vec<f64>, interior_margin: f64) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidDomain("zero-dimensional box".into()));
        }
        let mut min_half_width = f64::INFINITY;
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {i}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
            min_half_width = min_half_width.min((hi - lo) / 2.0);
        }
        if !(interior_margin > 0.0 && interior_margin < min_half_width) {
            return Err(Error::InvalidDomain(format!(
                "interior margin {interior_margin} must lie in (0, {min_half_width})"
            )));
        }
        Ok(Self {
            lower,
            upper,
            interior_margin,
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn interior_margin(&self) -> f64 {
        self.interior_margin
    }

    pub fn check_dim(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: theta.len(),
            });
        }
        Ok(())
    }

    pub fn classify(&self, theta: &[f64]) -> Result<PointClass> {
        self.check_dim(theta)?;
        let mut interior = true;
        for ((&x, &lo), &hi) in theta.iter().zip(&self.lower).zip(&self.upper) {
            // NaN compares false everywhere and lands in Outside.
            if !(x >= lo && x <= hi) {
                return Ok(PointClass::Outside);
            }
            if !(x >= lo + self.interior_margin && x <= hi - self.interior_margin) {
                interior = false;
            }
        }
        Ok(if interior {
            PointClass::Interior
        } else {
            PointClass::Boundary
        })
    }

    pub fn is_interior(&self, theta: &[f64]) -> bool {
        matches!(self.classify(theta), Ok(PointClass::Interior))
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        matches!(
            self.classify(theta),
            Ok(PointClass::Interior | PointClass::Boundary)
        )
    }

    /// Euclidean distance from `theta` to the box boundary (zero outside).
    pub fn distance_to_boundary(&self, theta: &[f64]) -> f64 {
        theta
            .iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .map(|((&x, &lo), &hi)| (x - lo).min(hi - x))
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }

    /// Tensor grid with `points_per_axis` equispaced values per coordinate,
    /// endpoints included, in lexicographic order (first coordinate slowest).
    pub fn grid(&self, points_per_axis: usize) -> Vec<Vec<f64>> {
        let n = points_per_axis.max(2);
        let axes: Vec<Vec<f64>> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| {
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            hi
                        } else {
                            lo + (hi - lo) * i as f64 / (n - 1) as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![Vec::with_capacity(self.dim())];
        for axis in &axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for &x in axis {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// True when some coordinate of `theta` sits exactly on a face.
    pub fn on_face(&self, theta: &[f64]) -> bool {
        theta
            .iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .any(|((&x, &lo), &hi)| x == lo || x == hi)
    }
}
