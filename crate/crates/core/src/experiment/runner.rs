//! The four experiment runners.
//!
//! Each runner validates its configuration, performs the computation through
//! the library layers, evaluates its configured checks, and packages the
//! result as `RunArtifacts`. Invalid configurations surface as errors (the
//! CLI maps those to exit code 2); checks that fail surface as statuses.

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{CltConfig, ExactConfig, Theorem1Config, ZonoidConfig};
use super::{Check, CsvArtifact, RunArtifacts, RunStatus};
use crate::directions::direction_grid;
use crate::distributions::{gaussian_radius_oracle, zonoid_empirical, zonoid_exact_discrete,
    zonoid_gaussian_ball, DistributionSpec, DISPUTED_GAUSSIAN_ZONOID_RADIUS,
    GAUSSIAN_ZONOID_RADIUS};
use crate::error::{Error, Result};
use crate::estimators::{clt_experiment, verify_theorem1};
use crate::vector::Vector;
use crate::zonotope::{hausdorff_distance_estimate, subset_identity_residual,
    valuation_with_budget, SupportFunction, Zonotope};

/// Maximum sigma distance accepted by the Gaussian radius oracle check.
const RADIUS_ORACLE_MAX_Z: f64 = 4.0;

const CLT_DEVIATIONS_CSV: &str = "clt_deviations.csv";
const ZONOID_SUPPORT_CSV: &str = "zonoid_support.csv";

fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::Config(e.to_string()))
}

fn compact<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Config(e.to_string()))
}

fn document(
    command: &'static str,
    config: Value,
    report: Value,
    checks: &[Check],
    status: RunStatus,
) -> Value {
    json!({
        "schema_version": "1",
        "command": command,
        "config": config,
        "report": report,
        "checks": checks,
        "status": status.as_str(),
    })
}

fn status_from_checks(checks: &[Check]) -> RunStatus {
    if checks.iter().all(|c| c.pass) {
        RunStatus::Pass
    } else {
        RunStatus::StatisticalFailure
    }
}

/// Evaluates the configured valuations of an explicit zonotope, optionally
/// checking the subset averaging identity for each of them.
pub fn run_exact(cfg: &ExactConfig) -> Result<RunArtifacts> {
    if cfg.valuations.is_empty() {
        return Err(Error::Config("exact run needs at least one valuation".into()));
    }
    let generators = cfg
        .zonotope
        .generators
        .iter()
        .map(|coords| Vector::new(coords.clone()))
        .collect::<Result<Vec<_>>>()?;
    let z = Zonotope::new(cfg.zonotope.dim, generators, cfg.zonotope.scale)?;

    let mut values = Vec::new();
    let mut max_residual: f64 = 0.0;
    for spec in &cfg.valuations {
        let value = valuation_with_budget(&z, spec, cfg.budget as u128)?;
        let mut entry = json!({ "valuation": to_value(spec)?, "value": value });
        if let Some(check) = &cfg.subset_identity {
            let residual = subset_identity_residual(z.generators(), spec, check.p)?;
            max_residual = max_residual.max(residual);
            entry
                .as_object_mut()
                .expect("entry is an object")
                .insert("subset_identity_residual".into(), json!(residual));
        }
        values.push(entry);
    }

    let mut checks = Vec::new();
    if let Some(check) = &cfg.subset_identity {
        checks.push(Check {
            name: "subset_identity_residual",
            pass: max_residual <= check.tolerance,
            observed: max_residual,
            threshold: check.tolerance,
        });
    }
    let status = status_from_checks(&checks);
    let report = json!({
        "dim": z.dim(),
        "generators": z.generators().len(),
        "scale": z.scale(),
        "values": values,
    });
    Ok(RunArtifacts {
        command: "exact",
        report: document("exact", to_value(cfg)?, report, &checks, status),
        csv: None,
        checks,
        status,
    })
}

/// Runs the expectation identity check and gates on the z-score.
pub fn run_theorem1(cfg: &Theorem1Config) -> Result<RunArtifacts> {
    let report = verify_theorem1(
        &cfg.distribution,
        &cfg.valuation,
        cfg.p,
        cfg.reps,
        &cfg.seed,
        &cfg.surrogate,
    )?;
    let checks = vec![Check {
        name: "abs_z_score",
        pass: report.z_score.abs() <= cfg.max_abs_z,
        observed: report.z_score.abs(),
        threshold: cfg.max_abs_z,
    }];
    let status = status_from_checks(&checks);
    Ok(RunArtifacts {
        command: "theorem1",
        report: document("theorem1", to_value(cfg)?, to_value(&report)?, &checks, status),
        csv: None,
        checks,
        status,
    })
}

/// Runs the replicated CLT experiment; deviations go to a CSV artifact and
/// everything else into the JSON document.
pub fn run_clt(cfg: &CltConfig) -> Result<RunArtifacts> {
    let report = clt_experiment(
        &cfg.distribution,
        &cfg.valuation,
        cfg.n,
        cfg.reps,
        &cfg.seed,
        &cfg.options,
        &cfg.surrogate,
    )?;
    let ks_threshold = cfg
        .ks_threshold
        .unwrap_or(1.63 / (cfg.reps as f64).sqrt());
    let mut resolved = cfg.clone();
    resolved.ks_threshold = Some(ks_threshold);

    let mut checks = Vec::new();
    let status = if report.degenerate {
        RunStatus::Degenerate
    } else {
        let ratio = report.variance_ratio.unwrap_or(f64::NAN);
        checks.push(Check {
            name: "variance_ratio_error",
            pass: (ratio - 1.0).abs() <= cfg.variance_rtol,
            observed: (ratio - 1.0).abs(),
            threshold: cfg.variance_rtol,
        });
        let ks = report.ks_statistic.unwrap_or(f64::NAN);
        checks.push(Check {
            name: "ks_statistic",
            pass: ks <= ks_threshold,
            observed: ks,
            threshold: ks_threshold,
        });
        status_from_checks(&checks)
    };

    let config_value = to_value(&resolved)?;
    let config_line = compact(&resolved)?;
    let rows = report
        .deviations
        .iter()
        .enumerate()
        .map(|(i, d)| format!("{i},{d}"))
        .collect();
    let mut report_value = to_value(&report)?;
    {
        let map = report_value.as_object_mut().expect("report is an object");
        map.remove("deviations");
        map.insert("deviations_file".into(), json!(CLT_DEVIATIONS_CSV));
    }
    Ok(RunArtifacts {
        command: "clt",
        report: document("clt", config_value, report_value, &checks, status),
        csv: Some(CsvArtifact {
            name: CLT_DEVIATIONS_CSV,
            config_line,
            header: "rep,deviation",
            rows,
        }),
        checks,
        status,
    })
}

/// Builds the zonoid of the configured law, compares an empirical zonoid
/// against the best available reference body in support distance, and (for
/// the Gaussian law) optionally re-derives the radius by Monte Carlo.
pub fn run_zonoid(cfg: &ZonoidConfig) -> Result<RunArtifacts> {
    cfg.distribution.validate()?;
    let d = cfg.distribution.dim();
    let dirs = direction_grid(d, cfg.directions, &cfg.seed.child(0))?;
    let empirical = zonoid_empirical(&cfg.distribution, cfg.empirical_n, &cfg.seed.child(1))?;
    let h_empirical: Vec<f64> = dirs.iter().map(|u| empirical.support_at(u)).collect();

    let (comparison, reference, hausdorff, h_reference): (&str, Value, f64, Vec<f64>) =
        match &cfg.distribution {
            DistributionSpec::Discrete { .. } => {
                let exact = zonoid_exact_discrete(&cfg.distribution)?;
                let h = hausdorff_distance_estimate(&empirical, &exact, &dirs)?;
                let hs = dirs.iter().map(|u| exact.support_at(u)).collect();
                let reference = json!({
                    "kind": "exact_discrete",
                    "generators": exact.generators().len(),
                });
                ("exact", reference, h, hs)
            }
            DistributionSpec::GaussianStd { .. } => {
                let ball = zonoid_gaussian_ball(d)?;
                let h = hausdorff_distance_estimate(&empirical, &ball, &dirs)?;
                let hs = dirs.iter().map(|u| ball.support_at(u)).collect();
                let reference = json!({
                    "kind": "gaussian_ball",
                    "radius": ball.radius(),
                });
                ("exact", reference, h, hs)
            }
            _ => {
                let refined =
                    zonoid_empirical(&cfg.distribution, 2 * cfg.empirical_n, &cfg.seed.child(2))?;
                let h = hausdorff_distance_estimate(&empirical, &refined, &dirs)?;
                let hs = dirs.iter().map(|u| refined.support_at(u)).collect();
                let reference = json!({
                    "kind": "empirical_refined",
                    "generators": refined.generators().len(),
                });
                ("refinement", reference, h, hs)
            }
        };

    let mut checks = Vec::new();
    if let Some(cap) = cfg.max_hausdorff {
        checks.push(Check {
            name: "hausdorff_estimate",
            pass: hausdorff <= cap,
            observed: hausdorff,
            threshold: cap,
        });
    }

    let mut radius = Value::Null;
    if matches!(cfg.distribution, DistributionSpec::GaussianStd { .. }) {
        radius = json!({
            "value": GAUSSIAN_ZONOID_RADIUS,
            "disputed_alternative": DISPUTED_GAUSSIAN_ZONOID_RADIUS,
        });
        if cfg.radius_samples > 0 {
            let (mean, stderr) = gaussian_radius_oracle(cfg.radius_samples, &cfg.seed.child(3));
            let z = (mean - GAUSSIAN_ZONOID_RADIUS).abs() / stderr;
            let map = radius.as_object_mut().expect("radius is an object");
            map.insert("oracle_mean".into(), json!(mean));
            map.insert("oracle_stderr".into(), json!(stderr));
            checks.push(Check {
                name: "radius_oracle_abs_z",
                pass: z <= RADIUS_ORACLE_MAX_Z,
                observed: z,
                threshold: RADIUS_ORACLE_MAX_Z,
            });
        }
    }

    let status = status_from_checks(&checks);
    let config_line = compact(cfg)?;
    let rows = h_empirical
        .iter()
        .zip(&h_reference)
        .enumerate()
        .map(|(i, (he, hr))| format!("{i},{he},{hr}"))
        .collect();
    let report = json!({
        "dim": d,
        "comparison": comparison,
        "reference": reference,
        "empirical_generators": cfg.empirical_n,
        "hausdorff_estimate": hausdorff,
        "radius": radius,
        "support_file": ZONOID_SUPPORT_CSV,
    });
    Ok(RunArtifacts {
        command: "zonoid",
        report: document("zonoid", to_value(cfg)?, report, &checks, status),
        csv: Some(CsvArtifact {
            name: ZONOID_SUPPORT_CSV,
            config_line,
            header: "index,h_empirical,h_reference",
            rows,
        }),
        checks,
        status,
    })
}
