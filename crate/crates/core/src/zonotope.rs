//! Zonotopes as scaled Minkowski sums of segments, and their valuations.
//!
//! A zonotope here is `scale * (seg(g_1) + .. + seg(g_n))` where `seg(g)` is
//! the segment from the origin to `g`. Intrinsic volumes expand over subsets:
//!
//!   V_j(Z) = scale^j * sum over j-subsets S of vol_j(parallelepiped of S),
//!
//! and the mixed valuation with d - j fixed segments y_{j+1}, .., y_d expands
//! the same way with vol_j replaced by (j!/d!) |det(S, y_{j+1}, .., y_d)|.
//! Both are exact finite enumerations; there is no sampling in this module.

use serde::{Deserialize, Serialize};

use crate::balls::Ball;
use crate::combinatorics::falling_factorial;
use crate::error::{Error, Result};
use crate::linalg::{abs_det_rows_indexed, parallelepiped_volume_indexed, VolumeScratch};
use crate::summation::{sum_over_combinations, NeumaierSum};
use crate::vector::Vector;

/// Default cap on the number of enumerated terms in one exact computation.
pub const DEFAULT_TERM_BUDGET: u128 = 100_000_000;

/// A zonotope `scale * (seg(g_1) + .. + seg(g_n))` in R^d.
///
/// `n = 0` is allowed and denotes the origin. The scale is kept symbolic
/// rather than folded into the generators so that degree-j homogeneity
/// (`valuation` picks up `scale^j`) is exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<Vector>,
    scale: f64,
}

impl Zonotope {
    pub fn new(dim: usize, generators: Vec<Vector>, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("zonotope lives in dimension >= 1"));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
        }
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Error::domain("zonotope scale must be finite and >= 0"));
        }
        Ok(Zonotope {
            dim,
            generators,
            scale,
        })
    }

    /// The unscaled Minkowski sum of the segments to the given points.
    pub fn segment_sum(dim: usize, points: Vec<Vector>) -> Result<Self> {
        Zonotope::new(dim, points, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Generators with the scale folded in, so the result represents the same
    /// body with scale 1. Useful for appending extra segments to a scaled
    /// zonotope.
    pub fn scaled_generators(&self) -> Vec<Vector> {
        self.generators
            .iter()
            .map(|g| g.scaled(self.scale))
            .collect()
    }

    /// Support function h(Z, u) = scale * sum_i max(<g_i, u>, 0).
    pub fn support(&self, u: &Vector) -> Result<f64> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.dim(),
            });
        }
        Ok(self.support_unchecked(u))
    }

    fn support_unchecked(&self, u: &Vector) -> f64 {
        let mut acc = NeumaierSum::new();
        for g in &self.generators {
            acc.add(g.dot(u).max(0.0));
        }
        self.scale * acc.total()
    }
}

/// Which valuation to evaluate on a zonotope.
///
/// `Intrinsic { degree }` is the intrinsic volume V_degree. `Mixed` fixes
/// d - degree segment arguments and evaluates the mixed volume
/// V(Z[degree], seg(y_{degree+1}), .., seg(y_d)).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValuationSpec {
    Intrinsic {
        #[serde(rename = "j")]
        degree: usize,
    },
    Mixed {
        #[serde(rename = "j")]
        degree: usize,
        fixed_segments: Vec<Vector>,
    },
}

impl ValuationSpec {
    pub fn intrinsic(degree: usize) -> Self {
        ValuationSpec::Intrinsic { degree }
    }

    pub fn mixed(degree: usize, fixed_segments: Vec<Vector>) -> Self {
        ValuationSpec::Mixed {
            degree,
            fixed_segments,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            ValuationSpec::Intrinsic { degree } => *degree,
            ValuationSpec::Mixed { degree, .. } => *degree,
        }
    }

    /// Validates the spec against an ambient dimension.
    pub fn validate_for_dim(&self, d: usize) -> Result<()> {
        let j = self.degree();
        if j == 0 || j > d {
            return Err(Error::domain(format!(
                "valuation degree must satisfy 1 <= j <= d; got j = {j}, d = {d}"
            )));
        }
        if let ValuationSpec::Mixed { fixed_segments, .. } = self {
            if fixed_segments.len() != d - j {
                return Err(Error::domain(format!(
                    "mixed valuation in dimension {d} with degree {j} needs {} fixed segments, got {}",
                    d - j,
                    fixed_segments.len()
                )));
            }
            for f in fixed_segments {
                if f.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: f.dim(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Sum over j-subsets of the per-subset volume terms for validated input,
/// without the scale^j factor but including the mixed-volume coefficient.
pub(crate) fn valuation_terms_sum(
    generators: &[Vector],
    spec: &ValuationSpec,
    dim: usize,
    budget: u128,
) -> Result<f64> {
    let j = spec.degree();
    let n = generators.len();
    if n < j {
        return Ok(0.0);
    }
    let sum = match spec {
        ValuationSpec::Intrinsic { .. } => sum_over_combinations(
            n,
            j,
            budget,
            VolumeScratch::default,
            |scratch, idx| parallelepiped_volume_indexed(generators, idx, scratch),
        )?,
        ValuationSpec::Mixed { fixed_segments, .. } => {
            // j!/d! = 1 / (d * (d-1) * .. * (j+1)).
            let coeff = 1.0 / falling_factorial(dim as u64, (dim - j) as u64)? as f64;
            coeff
                * sum_over_combinations(n, j, budget, VolumeScratch::default, |scratch, idx| {
                    abs_det_rows_indexed(generators, idx, fixed_segments, scratch)
                })?
        }
    };
    if !sum.is_finite() {
        return Err(Error::domain(
            "valuation terms produced a non-finite sum; input is numerically degenerate",
        ));
    }
    Ok(sum)
}

/// Evaluates the valuation exactly by subset enumeration, under the default
/// term budget.
pub fn valuation(z: &Zonotope, spec: &ValuationSpec) -> Result<f64> {
    valuation_with_budget(z, spec, DEFAULT_TERM_BUDGET)
}

/// As `valuation`, with an explicit cap on the number of enumerated subsets.
/// C(n, j) > budget fails with `BudgetExceeded` rather than starting an
/// enumeration that cannot finish.
pub fn valuation_with_budget(z: &Zonotope, spec: &ValuationSpec, budget: u128) -> Result<f64> {
    spec.validate_for_dim(z.dim())?;
    let j = spec.degree();
    if z.generators().len() < j {
        return Ok(0.0);
    }
    let sum = valuation_terms_sum(z.generators(), spec, z.dim(), budget)?;
    Ok(z.scale().powi(j as i32) * sum)
}

/// Support function h(Z, u); see `Zonotope::support`.
pub fn support_function(z: &Zonotope, u: &Vector) -> Result<f64> {
    z.support(u)
}

/// Anything with a sublinear support function, for Hausdorff comparisons.
pub trait SupportFunction {
    fn dim(&self) -> usize;
    /// h(K, u) for a direction already known to have the right dimension.
    fn support_at(&self, u: &Vector) -> f64;
}

impl SupportFunction for Zonotope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support_at(&self, u: &Vector) -> f64 {
        self.support_unchecked(u)
    }
}

impl SupportFunction for Ball {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn support_at(&self, u: &Vector) -> f64 {
        self.radius() * u.norm()
    }
}

/// Hausdorff distance estimated over a finite direction set:
/// max_u |h(A, u) - h(B, u)| over the given unit directions.
///
/// For convex bodies the exact Hausdorff distance is the supremum of this
/// quantity over the whole unit sphere, so a finite set yields a lower bound
/// that converges to the true distance as the directions are refined.
pub fn hausdorff_distance_estimate<A, B>(a: &A, b: &B, directions: &[Vector]) -> Result<f64>
where
    A: SupportFunction,
    B: SupportFunction,
{
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if directions.is_empty() {
        return Err(Error::domain(
            "hausdorff estimate needs at least one direction",
        ));
    }
    let mut best = 0.0f64;
    for u in directions {
        if u.dim() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: u.dim(),
            });
        }
        best = best.max((a.support_at(u) - b.support_at(u)).abs());
    }
    Ok(best)
}

/// Residual of the subset decomposition at order p: for generators
/// x_1, .., x_n and j <= p <= n,
///
///   phi(seg(x_1) + .. + seg(x_n))
///     = C(n-j, p-j)^-1 * sum over p-subsets S of phi(sum of segments in S),
///
/// returns |lhs - rhs|. Exactly zero when p = n.
pub fn subset_identity_residual(
    generators: &[Vector],
    spec: &ValuationSpec,
    p: usize,
) -> Result<f64> {
    if generators.is_empty() {
        return Err(Error::domain("subset identity needs at least one generator"));
    }
    let dim = generators[0].dim();
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.dim(),
            });
        }
    }
    spec.validate_for_dim(dim)?;
    let n = generators.len();
    let j = spec.degree();
    if p < j || p > n {
        return Err(Error::domain(format!(
            "subset order must satisfy j <= p <= n; got j = {j}, p = {p}, n = {n}"
        )));
    }
    let lhs = valuation_terms_sum(generators, spec, dim, DEFAULT_TERM_BUDGET)?;
    let weight = crate::combinatorics::binomial((n - j) as u64, (p - j) as u64)? as f64;
    let rhs_sum = sum_over_combinations(
        n,
        p,
        DEFAULT_TERM_BUDGET,
        || (Vec::<Vector>::new(), VolumeScratch::default()),
        |(selected, scratch), idx| {
            selected.clear();
            selected.extend(idx.iter().map(|&i| generators[i].clone()));
            phi_terms_sequential(selected, spec, dim, scratch)
        },
    )?;
    Ok((lhs - rhs_sum / weight).abs())
}

/// Sequential j-subset sum of valuation terms for a small generator list.
/// Used inside outer enumerations where nested chunking would be overkill;
/// lexicographic order plus compensated accumulation keeps it deterministic.
fn phi_terms_sequential(
    generators: &[Vector],
    spec: &ValuationSpec,
    dim: usize,
    scratch: &mut VolumeScratch,
) -> f64 {
    let j = spec.degree();
    let n = generators.len();
    if n < j {
        return 0.0;
    }
    let mut idx: Vec<usize> = (0..j).collect();
    let mut acc = NeumaierSum::new();
    loop {
        let term = match spec {
            ValuationSpec::Intrinsic { .. } => {
                parallelepiped_volume_indexed(generators, &idx, scratch)
            }
            ValuationSpec::Mixed { fixed_segments, .. } => {
                abs_det_rows_indexed(generators, &idx, fixed_segments, scratch)
            }
        };
        acc.add(term);
        if !crate::combinatorics::next_combination(&mut idx, n) {
            break;
        }
    }
    match spec {
        ValuationSpec::Intrinsic { .. } => acc.total(),
        ValuationSpec::Mixed { .. } => {
            acc.total() / falling_factorial(dim as u64, (dim - j) as u64).unwrap_or(1) as f64
        }
    }
}
