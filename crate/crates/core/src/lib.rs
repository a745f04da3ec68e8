//! Exact valuations of zonotopes, zonoids of probability laws, and the
//! limit theory that ties empirical zonoids to their population bodies.
//!
//! The library covers four layers:
//!
//! - exact intrinsic volumes and mixed-segment valuations of zonotopes,
//!   with combination enumeration that is compensated, budgeted, and
//!   bitwise independent of the thread count;
//! - zonoids of sampling laws, exact for discrete laws and the rotation
//!   invariant Gaussian case, empirical otherwise;
//! - the expectation identity linking E phi(Z_p) over p-samples to
//!   phi(Z_X), verified by Monte Carlo with seed-split child streams;
//! - the central limit theorem for sqrt(n)(phi(Z_n) - phi(Z_X)), with the
//!   first kernel projection h1, its variance zeta1 (closed form in the
//!   Gaussian intrinsic case), and replicated deviation experiments.
//!
//! The `experiment` module and the `zonoid` binary wrap the layers in
//! config-driven runs with versioned JSON and CSV outputs.

pub mod balls;
pub mod combinatorics;
pub mod directions;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod linalg;
pub mod rng;
pub mod stats;
pub mod summation;
pub mod vector;
pub mod zonotope;

pub use balls::{ball_intrinsic_volume, segment_plus_ball_intrinsic, unit_ball_volumes, Ball,
    BallGeometry};
pub use combinatorics::{binomial, factorial, falling_factorial};
pub use directions::direction_grid;
pub use distributions::{gaussian_norm_moments, gaussian_radius_oracle, sample,
    zonoid_empirical, zonoid_exact_discrete, zonoid_gaussian_ball, zonoid_gaussian_radius,
    DistributionSpec, DISPUTED_GAUSSIAN_ZONOID_RADIUS, GAUSSIAN_ZONOID_RADIUS};
pub use error::{Error, Result};
pub use estimators::{clt_experiment, estimate_expected_valuation_zp, h1, kernel_h,
    lemma41_precheck, theorem1_prediction, u_statistic, valuation_of_zn_via_ustat,
    verify_theorem1, zeta1_gaussian_closed_form, zeta1_mc, zn_ustat_coefficient, CltOptions,
    CltReport, KernelContext, Lemma41Diagnosis, RadiusDiagnostic, SurrogateConfig,
    SurrogateInfo, Theorem1Report, UStatMode, Zeta1ClosedForm, Zeta1Estimate, Zeta1Source,
    ZonoidSurrogate};
pub use linalg::{numerical_rank, parallelepiped_volume, VolumeScratch};
pub use rng::{splitmix64, NormalSampler, SeedSpec};
pub use stats::{ks_statistic, mean_and_stderr, sample_variance, standard_normal_cdf,
    EstimateResult};
pub use summation::{compensated_sum, sum_over_combinations, NeumaierSum};
pub use vector::Vector;
pub use zonotope::{hausdorff_distance_estimate, subset_identity_residual, support_function,
    valuation, valuation_with_budget, SupportFunction, ValuationSpec, Zonotope,
    DEFAULT_TERM_BUDGET};
