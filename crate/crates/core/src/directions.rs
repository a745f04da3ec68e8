//! Deterministic direction sets on the unit sphere for support-function scans.
//!
//! Dimension 1 uses the two signs. Dimensions 2 and 3 use golden-ratio
//! lattices (the circle analogue and the Fibonacci sphere), which are
//! deterministic and well spread. Higher dimensions fall back to seeded
//! normalized Gaussian draws, so the grid is reproducible from the seed.

use crate::error::{Error, Result};
use crate::rng::{NormalSampler, SeedSpec};
use crate::vector::Vector;

/// Builds `count` unit directions in R^d. The count must be >= 1; dimension 1
/// always returns the two signs regardless of `count`.
pub fn direction_grid(d: usize, count: usize, seed: &SeedSpec) -> Result<Vec<Vector>> {
    if d == 0 {
        return Err(Error::domain("directions live in dimension >= 1"));
    }
    if count == 0 {
        return Err(Error::domain("direction grid needs count >= 1"));
    }
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    match d {
        1 => Ok(vec![
            Vector::new(vec![1.0])?,
            Vector::new(vec![-1.0])?,
        ]),
        2 => (0..count)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * ((k as f64 / golden) % 1.0);
                Vector::new(vec![theta.cos(), theta.sin()])
            })
            .collect(),
        3 => (0..count)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let theta = 2.0 * std::f64::consts::PI * ((k as f64 / golden) % 1.0);
                Vector::new(vec![r * theta.cos(), r * theta.sin(), z])
            })
            .collect(),
        _ => {
            let mut rng = seed.rng();
            let mut normal = NormalSampler::new();
            let mut dirs = Vec::with_capacity(count);
            while dirs.len() < count {
                let coords: Vec<f64> = (0..d).map(|_| normal.next(&mut rng)).collect();
                let candidate = Vector::new(coords)?;
                let norm = candidate.norm();
                if norm > 1e-12 {
                    dirs.push(candidate.scaled(1.0 / norm));
                }
            }
            Ok(dirs)
        }
    }
}
