//! U-statistics for symmetric valuation kernels, exact and subsampled, and
//! the identity expressing a valuation of the empirical zonoid through them.

use rayon::prelude::*;

use super::KernelContext;
use crate::combinatorics::{binomial, falling_factorial};
use crate::error::{Error, Result};
use crate::linalg::VolumeScratch;
use crate::summation::{sum_over_combinations, NeumaierSum};
use crate::rng::SeedSpec;
use crate::vector::Vector;
use crate::zonotope::{ValuationSpec, DEFAULT_TERM_BUDGET};

/// How to average the kernel over p-subsets of the sample.
#[derive(Clone, Copy, Debug)]
pub enum UStatMode {
    /// Full average over all C(n, p) subsets, refused beyond the budget.
    Exact { budget: u128 },
    /// Average over `draws` subsets sampled uniformly with replacement
    /// across draws (each draw has p distinct indices). Unbiased for the
    /// exact U-statistic at any number of draws.
    Subsample { draws: u64, seed: SeedSpec },
}

impl UStatMode {
    pub fn exact() -> Self {
        UStatMode::Exact {
            budget: DEFAULT_TERM_BUDGET,
        }
    }
}

/// Kernel terms for one p-subset, sequential and deterministic. The sum as
/// defined by the valuation expansion, including the mixed coefficient.
fn kernel_on_selected(
    sample: &[Vector],
    subset: &[usize],
    spec: &ValuationSpec,
    mixed_coeff: f64,
    scratch: &mut VolumeScratch,
) -> f64 {
    let j = spec.degree();
    let p = subset.len();
    let mut inner: Vec<usize> = (0..j).collect();
    let mut acc = NeumaierSum::new();
    loop {
        // inner selects positions within the subset; map to sample indices.
        let term = match spec {
            ValuationSpec::Intrinsic { .. } => {
                let mut chosen = [0usize; 16];
                for (slot, &pos) in chosen.iter_mut().zip(inner.iter()) {
                    *slot = subset[pos];
                }
                crate::linalg::parallelepiped_volume_indexed(
                    sample,
                    &chosen[..inner.len()],
                    scratch,
                )
            }
            ValuationSpec::Mixed { fixed_segments, .. } => {
                let mut chosen = [0usize; 16];
                for (slot, &pos) in chosen.iter_mut().zip(inner.iter()) {
                    *slot = subset[pos];
                }
                crate::linalg::abs_det_rows_indexed(
                    sample,
                    &chosen[..inner.len()],
                    fixed_segments,
                    scratch,
                )
            }
        };
        acc.add(term);
        if !crate::combinatorics::next_combination(&mut inner, p) {
            break;
        }
    }
    mixed_coeff * acc.total()
}

fn mixed_coefficient(spec: &ValuationSpec, dim: usize) -> Result<f64> {
    match spec {
        ValuationSpec::Intrinsic { .. } => Ok(1.0),
        ValuationSpec::Mixed { .. } => Ok(1.0
            / falling_factorial(dim as u64, (dim - spec.degree()) as u64)? as f64),
    }
}

/// The U-statistic U_n^(p)(h) of the kernel over the sample.
///
/// Exact mode averages over every p-subset in lexicographic order through
/// the deterministic chunked reducer. Subsample mode averages the kernel
/// over independently drawn subsets; the draw sequence is fixed by the seed,
/// and evaluation order never affects the result.
pub fn u_statistic(ctx: &KernelContext, sample: &[Vector], mode: &UStatMode) -> Result<f64> {
    let n = sample.len();
    let p = ctx.order();
    let j = ctx.spec().degree();
    if n < p {
        return Err(Error::domain(format!(
            "U-statistic of order {p} needs a sample of size >= {p}, got {n}"
        )));
    }
    if j > 16 {
        return Err(Error::domain("valuation degree above 16 is unsupported"));
    }
    for x in sample {
        if x.dim() != ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                got: x.dim(),
            });
        }
    }
    let coeff = mixed_coefficient(ctx.spec(), ctx.dim())?;
    match mode {
        UStatMode::Exact { budget } => {
            let total = binomial(n as u64, p as u64).map_err(|_| Error::BudgetExceeded {
                terms: u128::MAX,
                budget: *budget,
            })?;
            if total > *budget {
                return Err(Error::BudgetExceeded {
                    terms: total,
                    budget: *budget,
                });
            }
            let sum = sum_over_combinations(
                n,
                p,
                *budget,
                VolumeScratch::default,
                |scratch, subset| {
                    kernel_on_selected(sample, subset, ctx.spec(), coeff, scratch)
                },
            )?;
            Ok(sum / total as f64)
        }
        UStatMode::Subsample { draws, seed } => {
            if *draws == 0 {
                return Err(Error::domain("subsampled U-statistic needs draws >= 1"));
            }
            // Draw all index sets sequentially (the rng is a single stream),
            // then evaluate in parallel and reduce in draw order.
            let mut rng = seed.rng();
            let subsets: Vec<Vec<usize>> = (0..*draws)
                .map(|_| rand::seq::index::sample(&mut rng, n, p).into_vec())
                .collect();
            let values: Vec<f64> = subsets
                .par_iter()
                .map_init(VolumeScratch::default, |scratch, subset| {
                    kernel_on_selected(sample, subset, ctx.spec(), coeff, scratch)
                })
                .collect();
            let mut acc = NeumaierSum::new();
            for v in &values {
                acc.add(*v);
            }
            Ok(acc.total() / *draws as f64)
        }
    }
}

/// The coefficient C(n, p) / (C(n-j, p-j) n^j) relating the U-statistic to
/// the valuation of the empirical zonoid Z_n. Tends to (p-j)!/p! as n grows.
pub fn zn_ustat_coefficient(n: usize, j: usize, p: usize) -> Result<f64> {
    if j == 0 || j > p || p > n {
        return Err(Error::domain(format!(
            "coefficient needs 1 <= j <= p <= n; got j = {j}, p = {p}, n = {n}"
        )));
    }
    let num = falling_factorial(n as u64, j as u64)? as f64;
    let den = falling_factorial(p as u64, j as u64)? as f64;
    Ok(num / den / (n as f64).powi(j as i32))
}

/// Evaluates the valuation of the empirical zonoid Z_n (generators X_i,
/// scale 1/n) through the exact U-statistic of order p:
///
///   phi(Z_n) = n^-j C(n-j, p-j)^-1 C(n, p) U_n^(p)(h).
///
/// Returns exactly 0 when n < j, where the valuation vanishes by degree.
pub fn valuation_of_zn_via_ustat(ctx: &KernelContext, sample: &[Vector]) -> Result<f64> {
    let n = sample.len();
    let j = ctx.spec().degree();
    if n < j {
        return Ok(0.0);
    }
    let u = u_statistic(ctx, sample, &UStatMode::exact())?;
    Ok(u * zn_ustat_coefficient(n, j, ctx.order())?)
}
