//! Compensated summation and deterministic parallel reduction.
//!
//! Every enumeration in this crate reduces through the same scheme: the term
//! index space is split into fixed-size chunks, each chunk is summed with a
//! Neumaier compensated accumulator, and the chunk totals are folded
//! sequentially in chunk order. Chunks may be *evaluated* on any number of
//! rayon workers, but because chunk boundaries and the final fold order are
//! functions of the term count alone, the result is bitwise identical for
//! every thread count, including fully sequential execution.

use rayon::prelude::*;

use crate::combinatorics::{binomial, next_combination, unrank_combination};
use crate::error::{Error, Result};

/// Number of consecutive terms summed by one chunk accumulator.
pub const CHUNK_TERMS: u128 = 4096;

/// Neumaier's improved Kahan-Babuska compensated accumulator.
///
/// Tracks a running compensation for low-order bits lost when terms of
/// mixed magnitude are folded in, which keeps long enumerations accurate to
/// within a few ulps of the exact sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of a slice in index order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.total()
}

/// Sums `term` over all k-subsets of `{0, .., n-1}` in lexicographic order,
/// deterministically with respect to thread count.
///
/// `scratch` is invoked once per chunk to build whatever reusable state the
/// term evaluation wants (work buffers, matrix scratch); `term` is then called
/// with that state and each combination's sorted index slice.
///
/// Fails with `BudgetExceeded` when C(n, k) > budget.
pub fn sum_over_combinations<S, F, G>(
    n: usize,
    k: usize,
    budget: u128,
    scratch: G,
    term: F,
) -> Result<f64>
where
    S: Send,
    G: Fn() -> S + Sync,
    F: Fn(&mut S, &[usize]) -> f64 + Sync,
{
    if k > n {
        return Ok(0.0);
    }
    if k == 0 {
        let mut state = scratch();
        return Ok(term(&mut state, &[]));
    }
    let total = match binomial(n as u64, k as u64) {
        Ok(t) => t,
        // A count that overflows u128 certainly exceeds any budget.
        Err(_) => u128::MAX,
    };
    if total > budget {
        return Err(Error::BudgetExceeded {
            terms: total,
            budget,
        });
    }
    let chunks = total.div_ceil(CHUNK_TERMS) as usize;
    let chunk_totals: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk as u128 * CHUNK_TERMS;
            let count = CHUNK_TERMS.min(total - start);
            let mut idx = vec![0usize; k];
            unrank_combination(start, n, k, &mut idx);
            let mut state = scratch();
            let mut acc = NeumaierSum::new();
            for step in 0..count {
                acc.add(term(&mut state, &idx));
                if step + 1 < count {
                    let more = next_combination(&mut idx, n);
                    debug_assert!(more);
                }
            }
            acc.total()
        })
        .collect();
    Ok(compensated_sum(&chunk_totals))
}
