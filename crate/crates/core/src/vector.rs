//! Dense vectors in R^d with finiteness enforced at construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of R^d, d >= 1, with all coordinates finite.
///
/// Serialized as a plain JSON array of numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("vector must have dimension >= 1"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("vector coordinates must be finite"));
        }
        Ok(Vector(coords))
    }

    /// The origin of R^d.
    pub fn zero(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d])
    }

    /// The i-th standard basis vector of R^d.
    pub fn unit(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::domain(format!(
                "basis index {i} out of range for dimension {d}"
            )));
        }
        let mut coords = vec![0.0; d];
        coords[i] = 1.0;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Euclidean inner product. Panics if dimensions differ; callers validate
    /// dimensions at API boundaries.
    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.0.len(), other.0.len(), "dot of mismatched dimensions");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}
