//! Stand-ins for the zonoid Z_X of a law, ordered by fidelity.
//!
//! Discrete laws admit the exact zonoid (a zonotope with generators p_i x_i).
//! The standard Gaussian with an intrinsic valuation admits the closed ball
//! form. Everything else falls back to the empirical zonoid of a dedicated
//! sample; its valuation is exact enumeration when the subset count fits the
//! budget and a subsampled U-statistic otherwise, and the report always says
//! which stand-in produced the number and with what sampling error.

use serde::{Deserialize, Serialize};

use super::ustat::{u_statistic, UStatMode};
use super::KernelContext;
use crate::balls::{ball_intrinsic_volume, segment_plus_ball_intrinsic, Ball};
use crate::combinatorics::{binomial, factorial};
use crate::distributions::{zonoid_exact_discrete, zonoid_empirical, DistributionSpec,
    GAUSSIAN_ZONOID_RADIUS};
use crate::error::{Error, Result};
use crate::linalg::{abs_det_rows_indexed_plus, parallelepiped_volume_indexed_plus, VolumeScratch};
use crate::rng::SeedSpec;
use crate::summation::sum_over_combinations;
use crate::vector::Vector;
use crate::zonotope::{
    valuation_with_budget, SupportFunction, ValuationSpec, Zonotope, DEFAULT_TERM_BUDGET,
};

/// Tuning for the fallback levels of the surrogate hierarchy.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateConfig {
    /// Sample size of the empirical zonoid fallback.
    pub empirical_n: usize,
    /// Subsample draws used when exact enumeration over the empirical
    /// zonoid's generators exceeds the term budget.
    pub subsample_draws: u64,
    /// Term budget for exact enumeration.
    pub budget: u64,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        SurrogateConfig {
            empirical_n: 100_000,
            subsample_draws: 200_000,
            budget: DEFAULT_TERM_BUDGET as u64,
        }
    }
}

/// What stood in for Z_X, for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurrogateInfo {
    pub kind: String,
    /// Generator count for zonotope-backed surrogates.
    pub generators: Option<usize>,
    /// Ball radius for the Gaussian closed form.
    pub radius: Option<f64>,
    /// Sampling standard error on phi(Z_X) when it had to be estimated.
    pub phi_stderr: Option<f64>,
}

enum SurrogateBody {
    /// The exact zonoid of a finitely supported law.
    ExactDiscrete { zonotope: Zonotope },
    /// The Gaussian zonoid: a centered ball of the oracle radius.
    GaussianBall { ball: Ball },
    /// The empirical zonoid of a dedicated sample.
    Empirical { zonotope: Zonotope },
}

/// A chosen stand-in for Z_X together with its cached valuation.
pub struct ZonoidSurrogate {
    body: SurrogateBody,
    spec: ValuationSpec,
    dim: usize,
    phi: f64,
    phi_stderr: Option<f64>,
    /// Generators with the scale folded in, for marginal (h1) evaluations.
    unit_scale_generators: Vec<Vector>,
    budget: u128,
}

impl ZonoidSurrogate {
    /// Picks the highest-fidelity surrogate available for the law and
    /// valuation: exact discrete, then the Gaussian ball (intrinsic
    /// valuations only), then the empirical zonoid.
    pub fn build(
        dist: &DistributionSpec,
        spec: &ValuationSpec,
        config: &SurrogateConfig,
        seed: &SeedSpec,
    ) -> Result<Self> {
        dist.validate()?;
        let dim = dist.dim();
        spec.validate_for_dim(dim)?;
        match dist {
            DistributionSpec::Discrete { .. } => {
                let zonotope = zonoid_exact_discrete(dist)?;
                Self::from_zonotope(
                    SurrogateBody::ExactDiscrete { zonotope },
                    spec,
                    dim,
                    config,
                    seed,
                )
            }
            DistributionSpec::GaussianStd { .. }
                if matches!(spec, ValuationSpec::Intrinsic { .. }) =>
            {
                let radius = GAUSSIAN_ZONOID_RADIUS;
                let phi = ball_intrinsic_volume(dim, spec.degree(), radius)?;
                Ok(ZonoidSurrogate {
                    body: SurrogateBody::GaussianBall {
                        ball: Ball::new(dim, radius)?,
                    },
                    spec: spec.clone(),
                    dim,
                    phi,
                    phi_stderr: None,
                    unit_scale_generators: Vec::new(),
                    budget: config.budget as u128,
                })
            }
            _ => {
                let zonotope = zonoid_empirical(dist, config.empirical_n, seed)?;
                Self::from_zonotope(SurrogateBody::Empirical { zonotope }, spec, dim, config, seed)
            }
        }
    }

    fn from_zonotope(
        body: SurrogateBody,
        spec: &ValuationSpec,
        dim: usize,
        config: &SurrogateConfig,
        seed: &SeedSpec,
    ) -> Result<Self> {
        let zonotope = match &body {
            SurrogateBody::ExactDiscrete { zonotope } | SurrogateBody::Empirical { zonotope } => {
                zonotope.clone()
            }
            SurrogateBody::GaussianBall { .. } => unreachable!("ball handled in build"),
        };
        let (phi, phi_stderr) = match valuation_with_budget(&zonotope, spec, config.budget as u128)
        {
            Ok(value) => (value, None),
            Err(Error::BudgetExceeded { .. }) => {
                // Estimate through the subsampled U-statistic of the smallest
                // kernel order p = j: the subset expansion gives
                // phi(Z) = scale^j C(n, j) U_n^(j)(h).
                let j = spec.degree();
                let gens = zonotope.generators().to_vec();
                let n = gens.len();
                let ctx = KernelContext::new(dim, spec.clone(), j)?;
                let mode = UStatMode::Subsample {
                    draws: config.subsample_draws,
                    seed: seed.child(u64::MAX),
                };
                let u = u_statistic(&ctx, &gens, &mode)?;
                let coeff =
                    binomial(n as u64, j as u64)? as f64 * zonotope.scale().powi(j as i32);
                // stderr of the subsample mean, scaled the same way.
                let stderr = subsample_stderr(&ctx, &gens, config.subsample_draws, seed)? * coeff;
                (u * coeff, Some(stderr))
            }
            Err(e) => return Err(e),
        };
        let unit_scale_generators = zonotope.scaled_generators();
        Ok(ZonoidSurrogate {
            body,
            spec: spec.clone(),
            dim,
            phi,
            phi_stderr,
            unit_scale_generators,
            budget: config.budget as u128,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &ValuationSpec {
        &self.spec
    }

    /// phi(Z_X) under this surrogate.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// theta = j! phi(Z_X), the kernel mean at order p = j.
    pub fn theta(&self) -> Result<f64> {
        Ok(factorial(self.spec.degree() as u64)? as f64 * self.phi)
    }

    /// Support function of the surrogate body.
    pub fn support_at(&self, u: &Vector) -> Result<f64> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: u.dim(),
            });
        }
        Ok(match &self.body {
            SurrogateBody::ExactDiscrete { zonotope } | SurrogateBody::Empirical { zonotope } => {
                zonotope.support_at(u)
            }
            SurrogateBody::GaussianBall { ball } => ball.support_at(u),
        })
    }

    /// The first projection of the centered kernel at one point:
    ///
    ///   h1(x) = (j-1)! [phi(seg(x) + Z_X) - phi(Z_X)],
    ///
    /// whose mean over X is theta and whose centered second moment is zeta1.
    /// For zonotope surrogates the difference is evaluated directly as the
    /// sum over (j-1)-subsets extended by seg(x); for the Gaussian ball it
    /// goes through the rounded-segment formula.
    pub fn h1(&self, x: &Vector) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let j = self.spec.degree();
        let lead = factorial((j - 1) as u64)? as f64;
        match &self.body {
            SurrogateBody::GaussianBall { ball } => {
                let with_segment = segment_plus_ball_intrinsic(x, ball.radius(), j)?;
                let without = ball_intrinsic_volume(self.dim, j, ball.radius())?;
                Ok(lead * (with_segment - without))
            }
            SurrogateBody::ExactDiscrete { .. } | SurrogateBody::Empirical { .. } => {
                let gens = &self.unit_scale_generators;
                let diff = match &self.spec {
                    ValuationSpec::Intrinsic { .. } => sum_over_combinations(
                        gens.len(),
                        j - 1,
                        self.budget,
                        VolumeScratch::default,
                        |scratch, idx| {
                            parallelepiped_volume_indexed_plus(gens, idx, x, scratch)
                        },
                    )?,
                    ValuationSpec::Mixed { fixed_segments, .. } => {
                        let coeff = 1.0
                            / crate::combinatorics::falling_factorial(
                                self.dim as u64,
                                (self.dim - j) as u64,
                            )? as f64;
                        coeff
                            * sum_over_combinations(
                                gens.len(),
                                j - 1,
                                self.budget,
                                VolumeScratch::default,
                                |scratch, idx| {
                                    abs_det_rows_indexed_plus(gens, idx, x, fixed_segments, scratch)
                                },
                            )?
                    }
                };
                Ok(lead * diff)
            }
        }
    }

    pub fn info(&self) -> SurrogateInfo {
        match &self.body {
            SurrogateBody::ExactDiscrete { zonotope } => SurrogateInfo {
                kind: "exact_discrete".into(),
                generators: Some(zonotope.generators().len()),
                radius: None,
                phi_stderr: self.phi_stderr,
            },
            SurrogateBody::GaussianBall { ball } => SurrogateInfo {
                kind: "gaussian_ball".into(),
                generators: None,
                radius: Some(ball.radius()),
                phi_stderr: self.phi_stderr,
            },
            SurrogateBody::Empirical { zonotope } => SurrogateInfo {
                kind: "empirical".into(),
                generators: Some(zonotope.generators().len()),
                radius: None,
                phi_stderr: self.phi_stderr,
            },
        }
    }

    /// True when the surrogate is the Gaussian closed form.
    pub fn is_gaussian_ball(&self) -> bool {
        matches!(self.body, SurrogateBody::GaussianBall { .. })
    }
}

/// Standard error of the subsample-mean kernel estimate: the per-draw spread
/// measured on a probe of fresh draws, scaled to the full draw count.
fn subsample_stderr(
    ctx: &KernelContext,
    gens: &[Vector],
    draws: u64,
    seed: &SeedSpec,
) -> Result<f64> {
    let probe = 4096.min(draws).max(2);
    let mut rng = seed.child(u64::MAX - 1).rng();
    let n = gens.len();
    let p = ctx.order();
    let mut values = Vec::with_capacity(probe as usize);
    for _ in 0..probe {
        let subset = rand::seq::index::sample(&mut rng, n, p).into_vec();
        let selected: Vec<Vector> = subset.iter().map(|&i| gens[i].clone()).collect();
        values.push(super::kernel_h(ctx, &selected)?);
    }
    let (_, stderr_probe) = crate::stats::mean_and_stderr(&values)?;
    Ok(stderr_probe * (probe as f64 / draws as f64).sqrt())
}

/// Free-function form of the marginal kernel projection; see
/// `ZonoidSurrogate::h1`.
pub fn h1(surrogate: &ZonoidSurrogate, x: &Vector) -> Result<f64> {
    surrogate.h1(x)
}
