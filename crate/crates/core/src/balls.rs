//! Unit-ball volumes and intrinsic volumes of balls and rounded segments.
//!
//! The volume kappa_j of the unit ball in R^j is built from the recurrence
//! kappa_j = kappa_{j-2} * 2*pi / j with kappa_0 = 1 and kappa_1 = 2, which
//! avoids gamma-function evaluation in the library proper; the closed form
//! pi^(j/2) / Gamma(j/2 + 1) is cross-checked in the test suite against an
//! independent gamma implementation.

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Table of unit-ball volumes kappa_0, .., kappa_d.
#[derive(Clone, Debug)]
pub struct BallGeometry {
    volumes: Vec<f64>,
}

impl BallGeometry {
    /// Builds the table up to dimension `d` (inclusive), d >= 1.
    pub fn up_to(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("ball geometry needs dimension >= 1"));
        }
        let mut volumes = vec![0.0; d + 1];
        volumes[0] = 1.0;
        if d >= 1 {
            volumes[1] = 2.0;
        }
        for j in 2..=d {
            volumes[j] = volumes[j - 2] * 2.0 * std::f64::consts::PI / j as f64;
        }
        Ok(BallGeometry { volumes })
    }

    /// kappa_j, the volume of the unit ball in R^j (kappa_0 = 1).
    pub fn kappa(&self, j: usize) -> f64 {
        self.volumes[j]
    }

    pub fn max_dim(&self) -> usize {
        self.volumes.len() - 1
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }
}

/// Unit-ball volume table up to dimension d: [kappa_0, .., kappa_d].
pub fn unit_ball_volumes(d: usize) -> Result<Vec<f64>> {
    Ok(BallGeometry::up_to(d)?.volumes.clone())
}

/// Checks the shared preconditions of the ball formulas.
fn check_ball_args(d: usize, j: usize, radius: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("ball lives in dimension >= 1"));
    }
    if j > d {
        return Err(Error::domain(format!(
            "intrinsic volume degree {j} exceeds dimension {d}"
        )));
    }
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::domain("radius must be finite and >= 0"));
    }
    Ok(())
}

/// j-th intrinsic volume of a ball of the given radius in R^d:
/// C(d, j) * (kappa_d / kappa_{d-j}) * radius^j. Degree 0 returns 1.
pub fn ball_intrinsic_volume(d: usize, j: usize, radius: f64) -> Result<f64> {
    check_ball_args(d, j, radius)?;
    if j == 0 {
        return Ok(1.0);
    }
    let geom = BallGeometry::up_to(d)?;
    let binom = crate::combinatorics::binomial(d as u64, j as u64)? as f64;
    Ok(binom * geom.kappa(d) / geom.kappa(d - j) * radius.powi(j as i32))
}

/// j-th intrinsic volume of the Minkowski sum of the segment from the origin
/// to `x` and a centered ball of the given radius in R^d, for 1 <= j <= d:
///
///   C(d, j) * (kappa_d / kappa_{d-j}) * radius^j
///     + C(d-1, j-1) * (kappa_{d-1} / kappa_{d-j}) * |x| * radius^(j-1).
///
/// For d = 2, j = 2 this is the stadium area pi r^2 + 2 |x| r; for radius 0,
/// j = 1 it degenerates to the segment length |x|.
pub fn segment_plus_ball_intrinsic(x: &Vector, radius: f64, j: usize) -> Result<f64> {
    let d = x.dim();
    check_ball_args(d, j, radius)?;
    if j == 0 {
        return Ok(1.0);
    }
    let geom = BallGeometry::up_to(d)?;
    let ball_term = crate::combinatorics::binomial(d as u64, j as u64)? as f64
        * geom.kappa(d)
        / geom.kappa(d - j)
        * radius.powi(j as i32);
    let segment_term = crate::combinatorics::binomial((d - 1) as u64, (j - 1) as u64)? as f64
        * geom.kappa(d - 1)
        / geom.kappa(d - j)
        * x.norm()
        * radius.powi(j as i32 - 1);
    Ok(ball_term + segment_term)
}

/// A centered Euclidean ball, usable wherever a support function is expected.
#[derive(Clone, Debug)]
pub struct Ball {
    dim: usize,
    radius: f64,
}

impl Ball {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("ball lives in dimension >= 1"));
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::domain("radius must be finite and >= 0"));
        }
        Ok(Ball { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}
