//! Exact subset counting and lexicographic combination enumeration.
//!
//! Everything here is integer-exact: binomial coefficients and falling
//! factorials are computed in u128 with overflow detection, and combinations
//! of `{0, .., n-1}` are enumerated (or unranked) in lexicographic order of
//! the sorted index tuple. The unranking uses the combinatorial number
//! system, which is what lets the summation layer jump to an arbitrary chunk
//! boundary without walking the enumeration from the start.

use crate::error::{Error, Result};

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Binomial coefficient saturated at `cap`: returns min(C(n, k), cap).
///
/// Used for budget checks where any value at or above the cap is rejected
/// anyway, so the exact count past the cap does not need to be representable.
/// After step i of the multiply-then-divide loop the accumulator equals
/// C(n, i+1), and those prefixes are monotone nondecreasing for k <= n/2, so
/// the early exit below is sound.
pub fn binomial_capped(n: u64, k: u64, cap: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return cap,
        };
        if acc >= cap {
            return cap;
        }
    }
    acc
}

/// Exact factorial n!.
pub fn factorial(n: u64) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 2..=n as u128 {
        acc = acc.checked_mul(i).ok_or(Error::Overflow("factorial"))?;
    }
    Ok(acc)
}

/// Exact falling factorial n (n-1) ... (n-k+1), with k factors.
pub fn falling_factorial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("falling factorial"))?;
    }
    Ok(acc)
}

/// Writes the combination of lexicographic rank `rank` among the k-subsets of
/// `{0, .., n-1}` into `out`. `rank` must be < C(n, k).
pub fn unrank_combination(mut rank: u128, n: usize, k: usize, out: &mut [usize]) {
    debug_assert_eq!(out.len(), k);
    let mut x = 0usize;
    for i in 0..k {
        loop {
            let remaining = binomial((n - 1 - x) as u64, (k - 1 - i) as u64)
                .expect("unrank within a count that already fit in u128");
            if rank < remaining {
                break;
            }
            rank -= remaining;
            x += 1;
        }
        out[i] = x;
        x += 1;
    }
}

/// Advances `idx` to the lexicographic successor among k-subsets of
/// `{0, .., n-1}`. Returns false when `idx` was already the last combination.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
