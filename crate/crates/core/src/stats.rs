//! Summary statistics and the one-sample Kolmogorov-Smirnov statistic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeedSpec;
use crate::summation::NeumaierSum;

/// A Monte Carlo point estimate with its uncertainty and provenance.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EstimateResult {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: SeedSpec,
}

/// Sample mean and standard error (sd / sqrt(n)); needs n >= 2.
pub fn mean_and_stderr(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::domain(
            "mean and standard error need at least 2 samples",
        ));
    }
    let n = values.len() as f64;
    let mut sum = NeumaierSum::new();
    for &x in values {
        sum.add(x);
    }
    let mean = sum.total() / n;
    let mut sq = NeumaierSum::new();
    for &x in values {
        let dx = x - mean;
        sq.add(dx * dx);
    }
    let var = sq.total() / (n - 1.0);
    Ok((mean, (var.max(0.0) / n).sqrt()))
}

/// Unbiased sample variance (n - 1 denominator); needs n >= 2.
pub fn sample_variance(values: &[f64]) -> Result<f64> {
    let (mean, _) = mean_and_stderr(values)?;
    let n = values.len() as f64;
    let mut sq = NeumaierSum::new();
    for &x in values {
        let dx = x - mean;
        sq.add(dx * dx);
    }
    Ok((sq.total() / (n - 1.0)).max(0.0))
}

/// Standard normal CDF via the complementary error function.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against the
/// distribution with CDF `cdf`: sup_x |F_n(x) - F(x)|.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("KS statistic needs at least one sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let below = f - i as f64 / n;
        let above = (i + 1) as f64 / n - f;
        sup = sup.max(below).max(above);
    }
    Ok(sup)
}
