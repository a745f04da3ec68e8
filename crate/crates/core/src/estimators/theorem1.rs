//! The expectation identity for valuations of random segment sums:
//!
//!   E phi(Z_p) = (p! / (p^j (p-j)!)) phi(Z_X),
//!
//! where Z_p = (1/p)(seg(X_1) + .. + seg(X_p)) and phi has degree j. This
//! module carries the exact prediction factor, a replicated Monte Carlo
//! estimate of the left side, and the comparison report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::surrogate::{SurrogateConfig, SurrogateInfo, ZonoidSurrogate};
use crate::balls::ball_intrinsic_volume;
use crate::combinatorics::falling_factorial;
use crate::distributions::{sample, DistributionSpec, DISPUTED_GAUSSIAN_ZONOID_RADIUS,
    GAUSSIAN_ZONOID_RADIUS};
use crate::error::{Error, Result};
use crate::rng::SeedSpec;
use crate::stats::{mean_and_stderr, EstimateResult};
use crate::zonotope::{valuation, ValuationSpec, Zonotope};

/// The exact factor p!/(p^j (p-j)!) applied to phi(Z_X); j = 1 gives 1 for
/// every p, and j = p = 2 gives 1/2.
pub fn theorem1_prediction(phi_zx: f64, j: usize, p: usize) -> Result<f64> {
    if j == 0 || p < j {
        return Err(Error::domain(format!(
            "prediction factor needs 1 <= j <= p; got j = {j}, p = {p}"
        )));
    }
    let factor = falling_factorial(p as u64, j as u64)? as f64 / (p as f64).powi(j as i32);
    Ok(factor * phi_zx)
}

/// Replicated Monte Carlo estimate of E phi(Z_p): each replication draws p
/// points and evaluates the valuation of their scaled segment sum exactly.
/// Replication r uses the child stream of index r, so the estimate does not
/// depend on evaluation order or thread count.
pub fn estimate_expected_valuation_zp(
    dist: &DistributionSpec,
    spec: &ValuationSpec,
    p: usize,
    reps: u64,
    seed: &SeedSpec,
) -> Result<EstimateResult> {
    dist.validate()?;
    let d = dist.dim();
    spec.validate_for_dim(d)?;
    if p < spec.degree() {
        return Err(Error::domain(format!(
            "sum length p = {p} must be >= the valuation degree j = {}",
            spec.degree()
        )));
    }
    if reps < 2 {
        return Err(Error::domain("estimate needs reps >= 2"));
    }
    let scale = 1.0 / p as f64;
    let values: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let pts = sample(dist, p, &seed.child(r))?;
            let z = Zonotope::new(d, pts, scale)?;
            valuation(&z, spec)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_and_stderr(&values)?;
    Ok(EstimateResult {
        mean,
        stderr,
        n_samples: reps,
        seed: *seed,
    })
}

/// Predictions implied by the two candidate values of the Gaussian zonoid
/// radius, reported side by side whenever the Gaussian ball surrogate is in
/// play. `unscaled_expectation` is p^j times the prediction, the expectation
/// of the valuation of the *unscaled* segment sum; at p = j = d it is the
/// mean absolute determinant of a d x d standard normal matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadiusDiagnostic {
    pub radius_used: f64,
    pub radius_alternative: f64,
    pub phi_zx_used: f64,
    pub phi_zx_alternative: f64,
    pub prediction_used: f64,
    pub prediction_alternative: f64,
    pub unscaled_expectation_used: f64,
    pub unscaled_expectation_alternative: f64,
    pub note: String,
}

/// Outcome of one expectation-identity check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub estimate: EstimateResult,
    pub prediction: f64,
    /// (estimate - prediction) / stderr; 0 when the difference is exactly 0.
    pub z_score: f64,
    pub phi_zx: f64,
    pub j: usize,
    pub p: usize,
    pub surrogate: SurrogateInfo,
    pub radius_diagnostic: Option<RadiusDiagnostic>,
}

/// Runs the full identity check: builds the best surrogate for Z_X, forms
/// the prediction, estimates E phi(Z_p) by replication, and reports the
/// standardized deviation.
pub fn verify_theorem1(
    dist: &DistributionSpec,
    spec: &ValuationSpec,
    p: usize,
    reps: u64,
    seed: &SeedSpec,
    surrogate_config: &SurrogateConfig,
) -> Result<Theorem1Report> {
    let surrogate = ZonoidSurrogate::build(dist, spec, surrogate_config, &seed.child(0))?;
    let phi_zx = surrogate.phi();
    let j = spec.degree();
    let prediction = theorem1_prediction(phi_zx, j, p)?;
    let estimate = estimate_expected_valuation_zp(dist, spec, p, reps, &seed.child(1))?;
    let diff = estimate.mean - prediction;
    let z_score = if diff == 0.0 { 0.0 } else { diff / estimate.stderr };
    let radius_diagnostic = if surrogate.is_gaussian_ball() {
        Some(radius_diagnostic(dist.dim(), j, p)?)
    } else {
        None
    };
    Ok(Theorem1Report {
        estimate,
        prediction,
        z_score,
        phi_zx,
        j,
        p,
        surrogate: surrogate.info(),
        radius_diagnostic,
    })
}

fn radius_diagnostic(d: usize, j: usize, p: usize) -> Result<RadiusDiagnostic> {
    let phi_used = ball_intrinsic_volume(d, j, GAUSSIAN_ZONOID_RADIUS)?;
    let phi_alt = ball_intrinsic_volume(d, j, DISPUTED_GAUSSIAN_ZONOID_RADIUS)?;
    let pred_used = theorem1_prediction(phi_used, j, p)?;
    let pred_alt = theorem1_prediction(phi_alt, j, p)?;
    let unscale = (p as f64).powi(j as i32);
    Ok(RadiusDiagnostic {
        radius_used: GAUSSIAN_ZONOID_RADIUS,
        radius_alternative: DISPUTED_GAUSSIAN_ZONOID_RADIUS,
        phi_zx_used: phi_used,
        phi_zx_alternative: phi_alt,
        prediction_used: pred_used,
        prediction_alternative: pred_alt,
        unscaled_expectation_used: unscale * pred_used,
        unscaled_expectation_alternative: unscale * pred_alt,
        note: "radius_used is fixed by the sampling oracle for E max(N(0,1), 0); the \
               alternative closed form 1/(4 sqrt(2 pi)) disagrees with that oracle by a \
               factor of 4 and is shown only for comparison"
            .into(),
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
        SeedSpec::new(424_242, 0)
    }

    #[test]
    fn prediction_factor_examples() {
        assert_eq!(theorem1_prediction(3.0, 1, 1).unwrap(), 3.0);
        assert_eq!(theorem1_prediction(3.0, 1, 7).unwrap(), 3.0);
        assert_eq!(theorem1_prediction(1.0, 2, 2).unwrap(), 0.5);
        assert!((theorem1_prediction(1.0, 2, 3).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(theorem1_prediction(1.0, 2, 1).is_err());
        assert!(theorem1_prediction(1.0, 0, 1).is_err());
    }

    #[test]
    fn two_atom_expectation_is_an_eighth() {
        // Atoms e1, e2 each 1/2, j = p = 2: phi(Z_X) = V_2 = 1/4 and the
        // factor is 1/2, so E V_2(Z_2) = 1/8. The enumeration over the four
        // equally likely pairs gives (0 + 1/4 + 1/4 + 0) / 4 = 1/8 as well.
        let dist = DistributionSpec::discrete(
            2,
            vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])],
            vec![0.5, 0.5],
        );
        let spec = ValuationSpec::intrinsic(2);
        let report = verify_theorem1(
            &dist,
            &spec,
            2,
            20_000,
            &seed(),
            &SurrogateConfig::default(),
        )
        .unwrap();
        assert!((report.prediction - 0.125).abs() < 1e-14);
        assert!(report.z_score.abs() < 4.0, "z = {}", report.z_score);
        assert_eq!(report.surrogate.kind, "exact_discrete");
        assert!(report.radius_diagnostic.is_none());
    }

    #[test]
    fn deterministic_law_gives_zero_z() {
        // A single atom: Z_p is the same body every replication.
        let dist = DistributionSpec::discrete(2, vec![v(&[0.6, 0.8])], vec![1.0]);
        let spec = ValuationSpec::intrinsic(1);
        let report =
            verify_theorem1(&dist, &spec, 3, 100, &seed(), &SurrogateConfig::default()).unwrap();
        assert_eq!(report.estimate.stderr, 0.0);
        assert_eq!(report.z_score, 0.0);
        assert!((report.prediction - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_diagnostic_reports_both_radii() {
        let dist = DistributionSpec::gaussian_std(2);
        let spec = ValuationSpec::intrinsic(2);
        let report =
            verify_theorem1(&dist, &spec, 2, 5_000, &seed(), &SurrogateConfig::default())
                .unwrap();
        let diag = report.radius_diagnostic.expect("gaussian ball surrogate");
        assert_eq!(diag.radius_used, GAUSSIAN_ZONOID_RADIUS);
        // 2 pi R^2 = 1 with the oracle radius; the alternative implies 1/16.
        assert!((diag.unscaled_expectation_used - 1.0).abs() < 1e-12);
        assert!((diag.unscaled_expectation_alternative - 0.0625).abs() < 1e-12);
        assert!(report.z_score.abs() < 4.0, "z = {}", report.z_score);
    }

    #[test]
    fn estimate_rejects_undersized_inputs() {
        let dist = DistributionSpec::gaussian_std(2);
        let spec = ValuationSpec::intrinsic(2);
        assert!(estimate_expected_valuation_zp(&dist, &spec, 1, 100, &seed()).is_err());
        assert!(estimate_expected_valuation_zp(&dist, &spec, 2, 1, &seed()).is_err());
    }
}
