//! The central limit theorem for valuations of empirical zonoids.
//!
//! With phi of degree j and Z_n the empirical zonoid of an n-sample, the
//! published statement is
//!
//!   sqrt(n) (phi(Z_n) - phi(Z_X))  ->  N(0, (j! j)^2 zeta1),
//!
//! where zeta1 = E (h1(X) - theta)^2 is the variance of the first kernel
//! projection. This module estimates zeta1 (closed form in the Gaussian
//! intrinsic case, Monte Carlo otherwise), simulates the replicated
//! deviations, and reports the empirical variance, the measured ratio to the
//! predicted variance, and the Kolmogorov-Smirnov distance to the predicted
//! normal law. When simulation disagrees with the predicted constant the
//! ratio is reported as measured; nothing is rescaled to force agreement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::surrogate::{SurrogateConfig, SurrogateInfo, ZonoidSurrogate};
use super::ustat::{u_statistic, UStatMode};
use super::KernelContext;
use crate::balls::BallGeometry;
use crate::combinatorics::{binomial, binomial_capped, factorial};
use crate::distributions::{gaussian_norm_moments, sample, DistributionSpec,
    GAUSSIAN_ZONOID_RADIUS};
use crate::error::{Error, Result};
use crate::linalg::numerical_rank;
use crate::rng::SeedSpec;
use crate::stats::{ks_statistic, mean_and_stderr, sample_variance, standard_normal_cdf,
    EstimateResult};
use crate::zonotope::{valuation, ValuationSpec, Zonotope};

/// zeta1 is declared degenerate when its estimate is consistent with zero at
/// this many standard errors (closed forms use the absolute floor alone).
const DEGENERACY_SIGMA: f64 = 3.0;
const DEGENERACY_FLOOR: f64 = 1e-12;

/// Rank tolerance of the Lemma 4.1 support precheck.
const PRECHECK_RANK_TOL: f64 = 1e-10;
/// Atom-at-origin tolerance of the precheck.
const PRECHECK_ORIGIN_TOL: f64 = 1e-12;

/// Monte Carlo estimate of zeta1 together with the centering check
/// E h1(X) = theta that must hold for the estimate to mean anything.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Zeta1Estimate {
    /// Mean and standard error of (h1(X) - theta)^2.
    pub zeta1: EstimateResult,
    /// Mean and standard error of h1(X) - theta; should be 0 within noise.
    pub centering: EstimateResult,
    pub theta: f64,
}

/// Monte Carlo zeta1: draws `reps` points, evaluates the centered first
/// projection at each, and averages its square. The surrogate provides both
/// h1 and theta, so the estimate inherits the surrogate's fidelity.
pub fn zeta1_mc(
    dist: &DistributionSpec,
    surrogate: &ZonoidSurrogate,
    reps: u64,
    seed: &SeedSpec,
) -> Result<Zeta1Estimate> {
    if reps < 2 {
        return Err(Error::domain("zeta1 estimation needs reps >= 2"));
    }
    if dist.dim() != surrogate.dim() {
        return Err(Error::DimensionMismatch {
            expected: surrogate.dim(),
            got: dist.dim(),
        });
    }
    let theta = surrogate.theta()?;
    let points = sample(dist, reps as usize, &seed.child(0))?;
    let centered: Vec<f64> = points
        .par_iter()
        .map(|x| surrogate.h1(x).map(|h| h - theta))
        .collect::<Result<Vec<f64>>>()?;
    let squares: Vec<f64> = centered.iter().map(|c| c * c).collect();
    let (zeta_mean, zeta_stderr) = mean_and_stderr(&squares)?;
    let (center_mean, center_stderr) = mean_and_stderr(&centered)?;
    Ok(Zeta1Estimate {
        zeta1: EstimateResult {
            mean: zeta_mean,
            stderr: zeta_stderr,
            n_samples: reps,
            seed: *seed,
        },
        centering: EstimateResult {
            mean: center_mean,
            stderr: center_stderr,
            n_samples: reps,
            seed: *seed,
        },
        theta,
    })
}

/// Closed form pieces in the Gaussian intrinsic case.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Zeta1ClosedForm {
    /// h1(x) = a |x|.
    pub a: f64,
    /// theta = a b, with b = d (kappa_d / kappa_{d-1}) R = E|X| at the
    /// oracle radius.
    pub b: f64,
    /// zeta1 = a^2 (E|X|^2 - 2 b E|X| + b^2).
    pub zeta1: f64,
}

/// Exact zeta1 for the standard Gaussian law and an intrinsic valuation of
/// degree j in dimension d, at the oracle radius. For d = 2, j = 1 this is
/// 2 - pi/2.
pub fn zeta1_gaussian_closed_form(d: usize, j: usize) -> Result<Zeta1ClosedForm> {
    if d == 0 || j == 0 || j > d {
        return Err(Error::domain(format!(
            "closed form needs 1 <= j <= d; got j = {j}, d = {d}"
        )));
    }
    let geom = BallGeometry::up_to(d)?;
    let r = GAUSSIAN_ZONOID_RADIUS;
    let a = factorial((d - 1) as u64)? as f64 / factorial((d - j) as u64)? as f64
        * geom.kappa(d - 1)
        / geom.kappa(d - j)
        * r.powi(j as i32 - 1);
    let b = d as f64 * geom.kappa(d) / geom.kappa(d - 1) * r;
    let (m1, m2) = gaussian_norm_moments(d)?;
    let zeta1 = a * a * (m2 - 2.0 * b * m1 + b * b);
    Ok(Zeta1ClosedForm { a, b, zeta1 })
}

/// Support conditions of the nondegeneracy lemma: the origin lies in the
/// support of the law, and the support is not contained in a subspace of
/// dimension below j.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma41Diagnosis {
    pub pass: bool,
    pub origin_in_support: bool,
    pub support_rank: usize,
    pub required_rank: usize,
    pub reasons: Vec<String>,
}

/// Checks the lemma's support conditions for the laws this crate can build.
/// For continuous laws the answer is structural; for discrete laws the origin
/// must be an atom of positive probability and the positive-probability atoms
/// must span at least rank j.
pub fn lemma41_precheck(dist: &DistributionSpec, j: usize) -> Result<Lemma41Diagnosis> {
    dist.validate()?;
    let d = dist.dim();
    if j == 0 || j > d {
        return Err(Error::domain(format!(
            "precheck needs 1 <= j <= d; got j = {j}, d = {d}"
        )));
    }
    let (origin, rank) = match dist {
        DistributionSpec::GaussianStd { .. } | DistributionSpec::UniformCube { .. } => (true, d),
        // The sphere spans R^d but does not contain the origin.
        DistributionSpec::UniformSphere { .. } => (false, d),
        DistributionSpec::Discrete { atoms, probs, .. } => {
            let carried: Vec<_> = atoms
                .iter()
                .zip(probs)
                .filter(|(_, p)| **p > 0.0)
                .map(|(a, _)| a.clone())
                .collect();
            let origin = carried.iter().any(|a| a.norm() <= PRECHECK_ORIGIN_TOL);
            (origin, numerical_rank(&carried, PRECHECK_RANK_TOL))
        }
    };
    let mut reasons = Vec::new();
    if !origin {
        reasons.push("origin is not in the support".to_string());
    }
    if rank < j {
        reasons.push(format!(
            "support spans rank {rank}, below the required rank {j}"
        ));
    }
    Ok(Lemma41Diagnosis {
        pass: reasons.is_empty(),
        origin_in_support: origin,
        support_rank: rank,
        required_rank: j,
        reasons,
    })
}

/// Tuning of the CLT experiment.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct CltOptions {
    /// Replications of the zeta1 Monte Carlo (ignored when the closed form
    /// applies).
    pub zeta1_reps: u64,
    /// Subsample draws per replication when exact evaluation of phi(Z_n)
    /// exceeds the budget.
    pub subsample_draws: u64,
    /// Term budget for exact evaluation of phi(Z_n).
    pub budget: u64,
}

impl Default for CltOptions {
    fn default() -> Self {
        CltOptions {
            zeta1_reps: 200_000,
            subsample_draws: 50_000,
            budget: crate::zonotope::DEFAULT_TERM_BUDGET as u64,
        }
    }
}

/// Where the zeta1 in the predicted variance came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zeta1Source {
    GaussianClosedForm,
    MonteCarlo,
}

/// Everything one replicated CLT run produces.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CltReport {
    pub n: usize,
    pub reps: u64,
    /// sqrt(n) (phi(Z_n) - phi(Z_X)) per replication, in replication order.
    pub deviations: Vec<f64>,
    pub empirical_variance: f64,
    /// (j! j)^2 zeta1; the published limiting variance.
    pub predicted_variance: f64,
    /// empirical / predicted, when the prediction is positive.
    pub variance_ratio: Option<f64>,
    /// KS distance of the deviations to N(0, predicted_variance); absent for
    /// a degenerate prediction.
    pub ks_statistic: Option<f64>,
    pub zeta1: f64,
    pub zeta1_stderr: f64,
    pub zeta1_source: Zeta1Source,
    /// Centering diagnostic of the zeta1 Monte Carlo, if it ran.
    pub zeta1_centering: Option<EstimateResult>,
    pub theta: f64,
    pub phi_zx: f64,
    /// True when zeta1 is consistent with zero; deviations are still
    /// reported raw but no KS comparison is made.
    pub degenerate: bool,
    pub precheck: Lemma41Diagnosis,
    pub surrogate: SurrogateInfo,
    pub seed: SeedSpec,
}

/// Runs the replicated CLT experiment. Replication r draws its n-sample from
/// child stream 2 + r; the surrogate uses child 0 and the zeta1 Monte Carlo
/// child 1. phi(Z_n) is evaluated exactly when C(n, j) fits the budget and
/// through the subsampled U-statistic identity otherwise.
pub fn clt_experiment(
    dist: &DistributionSpec,
    spec: &ValuationSpec,
    n: usize,
    reps: u64,
    seed: &SeedSpec,
    options: &CltOptions,
    surrogate_config: &SurrogateConfig,
) -> Result<CltReport> {
    dist.validate()?;
    let d = dist.dim();
    spec.validate_for_dim(d)?;
    if n == 0 {
        return Err(Error::domain("CLT experiment needs n >= 1"));
    }
    if reps < 2 {
        return Err(Error::domain("CLT experiment needs reps >= 2"));
    }
    let j = spec.degree();
    let surrogate = ZonoidSurrogate::build(dist, spec, surrogate_config, &seed.child(0))?;
    let phi_zx = surrogate.phi();
    let theta = surrogate.theta()?;
    let precheck = lemma41_precheck(dist, j)?;

    let (zeta1, zeta1_stderr, zeta1_source, zeta1_centering) = if surrogate.is_gaussian_ball() {
        let cf = zeta1_gaussian_closed_form(d, j)?;
        (cf.zeta1, 0.0, Zeta1Source::GaussianClosedForm, None)
    } else {
        let est = zeta1_mc(dist, &surrogate, options.zeta1_reps, &seed.child(1))?;
        (
            est.zeta1.mean,
            est.zeta1.stderr,
            Zeta1Source::MonteCarlo,
            Some(est.centering),
        )
    };

    let j_factorial = factorial(j as u64)? as f64;
    let predicted_variance = (j_factorial * j as f64).powi(2) * zeta1;
    let degenerate = zeta1 <= DEGENERACY_FLOOR.max(DEGENERACY_SIGMA * zeta1_stderr);

    // Decide the phi(Z_n) evaluation route once; it depends only on (n, j).
    let exact_route =
        binomial_capped(n as u64, j as u64, options.budget as u128 + 1) <= options.budget as u128;
    let scale = 1.0 / n as f64;
    let sqrt_n = (n as f64).sqrt();
    let deviations: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let child = seed.child(2 + r);
            let pts = sample(dist, n, &child)?;
            let phi_zn = if exact_route {
                let z = Zonotope::new(d, pts, scale)?;
                valuation(&z, spec)?
            } else {
                let ctx = KernelContext::new(d, spec.clone(), j)?;
                let mode = UStatMode::Subsample {
                    draws: options.subsample_draws,
                    seed: child.child(u64::MAX - 2),
                };
                let u = u_statistic(&ctx, &pts, &mode)?;
                binomial(n as u64, j as u64)? as f64 * scale.powi(j as i32) * u
            };
            Ok(sqrt_n * (phi_zn - phi_zx))
        })
        .collect::<Result<Vec<f64>>>()?;

    let empirical_variance = sample_variance(&deviations)?;
    let variance_ratio = if predicted_variance > 0.0 {
        Some(empirical_variance / predicted_variance)
    } else {
        None
    };
    let ks = if degenerate || predicted_variance <= 0.0 {
        None
    } else {
        let sigma = predicted_variance.sqrt();
        Some(ks_statistic(&deviations, |x| {
            standard_normal_cdf(x / sigma)
        })?)
    };

    Ok(CltReport {
        n,
        reps,
        deviations,
        empirical_variance,
        predicted_variance,
        variance_ratio,
        ks_statistic: ks,
        zeta1,
        zeta1_stderr,
        zeta1_source,
        zeta1_centering,
        theta,
        phi_zx,
        degenerate,
        precheck,
        surrogate: surrogate.info(),
        seed: *seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vector;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn seed() -> SeedSpec {
        SeedSpec::new(31_337, 0)
    }

    #[test]
    fn closed_form_d2_j1() {
        let cf = zeta1_gaussian_closed_form(2, 1).unwrap();
        assert!((cf.a - 1.0).abs() < 1e-15);
        assert!((cf.b - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-14);
        assert!((cf.zeta1 - (2.0 - std::f64::consts::PI / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn closed_form_b_is_mean_norm() {
        // At the oracle radius, b coincides with E|X| in every dimension.
        for d in 1..=6 {
            let cf = zeta1_gaussian_closed_form(d, 1).unwrap();
            let (m1, _) = gaussian_norm_moments(d).unwrap();
            assert!((cf.b - m1).abs() < 1e-13, "d = {d}: {} vs {m1}", cf.b);
        }
    }

    #[test]
    fn zeta1_mc_agrees_with_closed_form() {
        let dist = DistributionSpec::gaussian_std(2);
        let spec = ValuationSpec::intrinsic(1);
        // The Monte Carlo averages h1 over fresh draws even when the
        // surrogate itself is the closed-form ball.
        let surrogate = ZonoidSurrogate::build(
            &dist,
            &spec,
            &SurrogateConfig::default(),
            &seed().child(0),
        )
        .unwrap();
        let est = zeta1_mc(&dist, &surrogate, 100_000, &seed().child(1)).unwrap();
        let cf = zeta1_gaussian_closed_form(2, 1).unwrap();
        assert!(
            (est.zeta1.mean - cf.zeta1).abs() < 4.0 * est.zeta1.stderr,
            "mc {} +- {} vs closed {}",
            est.zeta1.mean,
            est.zeta1.stderr,
            cf.zeta1
        );
        assert!(
            est.centering.mean.abs() < 4.0 * est.centering.stderr,
            "centering {} +- {}",
            est.centering.mean,
            est.centering.stderr
        );
    }

    #[test]
    fn precheck_verdicts() {
        assert!(lemma41_precheck(&DistributionSpec::gaussian_std(3), 2)
            .unwrap()
            .pass);
        assert!(lemma41_precheck(&DistributionSpec::uniform_cube(2, 1.0), 2)
            .unwrap()
            .pass);
        let sphere = lemma41_precheck(&DistributionSpec::uniform_sphere(2, 1.0), 1).unwrap();
        assert!(!sphere.pass);
        assert!(!sphere.origin_in_support);
        // Collinear atoms: rank failure mentioning "rank".
        let collinear = DistributionSpec::discrete(
            2,
            vec![v(&[1.0, 0.0]), v(&[2.0, 0.0])],
            vec![0.5, 0.5],
        );
        let diag = lemma41_precheck(&collinear, 2).unwrap();
        assert!(!diag.pass);
        assert_eq!(diag.support_rank, 1);
        assert!(diag.reasons.iter().any(|r| r.contains("rank")));
        // With the origin included and full-rank atoms the check passes.
        let good = DistributionSpec::discrete(
            2,
            vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])],
            vec![0.5, 0.25, 0.25],
        );
        assert!(lemma41_precheck(&good, 2).unwrap().pass);
    }

    #[test]
    fn single_atom_is_degenerate() {
        let dist = DistributionSpec::discrete(2, vec![v(&[0.3, 0.4])], vec![1.0]);
        let spec = ValuationSpec::intrinsic(1);
        let report = clt_experiment(
            &dist,
            &spec,
            50,
            64,
            &seed(),
            &CltOptions {
                zeta1_reps: 2_000,
                ..CltOptions::default()
            },
            &SurrogateConfig::default(),
        )
        .unwrap();
        assert!(report.degenerate);
        assert!(report.zeta1.abs() <= 1e-12);
        assert!(report.ks_statistic.is_none());
        assert!(report.deviations.iter().all(|d| d.abs() < 1e-10));
    }

    #[test]
    fn gaussian_clt_small_run_is_sane() {
        let dist = DistributionSpec::gaussian_std(2);
        let spec = ValuationSpec::intrinsic(1);
        let report = clt_experiment(
            &dist,
            &spec,
            200,
            400,
            &seed(),
            &CltOptions::default(),
            &SurrogateConfig::default(),
        )
        .unwrap();
        assert_eq!(report.zeta1_source, Zeta1Source::GaussianClosedForm);
        assert!(!report.degenerate);
        let ratio = report.variance_ratio.unwrap();
        assert!(ratio > 0.7 && ratio < 1.3, "variance ratio {ratio}");
        assert!(report.ks_statistic.unwrap() < 1.63 / (400.0f64).sqrt() * 1.5);
    }

    #[test]
    fn reproducibility_across_thread_counts() {
        let dist = DistributionSpec::gaussian_std(2);
        let spec = ValuationSpec::intrinsic(1);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    clt_experiment(
                        &dist,
                        &spec,
                        64,
                        32,
                        &seed(),
                        &CltOptions::default(),
                        &SurrogateConfig::default(),
                    )
                    .unwrap()
                })
        };
        let a = run(1);
        let b = run(5);
        assert_eq!(a.deviations, b.deviations);
        assert_eq!(a.empirical_variance.to_bits(), b.empirical_variance.to_bits());
    }
}
