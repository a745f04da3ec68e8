//! Python bindings over zonoid-core.
//!
//! Geometry and law types are thin wrappers; plain numbers cross as floats,
//! points as lists of floats, and experiment reports as JSON strings so the
//! Python side decodes them with the standard json module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zonoid_core as core;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vectors(points: Vec<Vec<f64>>) -> PyResult<Vec<core::Vector>> {
    points
        .into_iter()
        .map(|c| core::Vector::new(c).map_err(err))
        .collect()
}

/// A Minkowski sum of segments, scaled by a common factor.
#[pyclass(module = "pyzonoid")]
struct Zonotope {
    inner: core::Zonotope,
}

#[pymethods]
impl Zonotope {
    #[new]
    #[pyo3(signature = (dim, generators, scale = 1.0))]
    fn new(dim: usize, generators: Vec<Vec<f64>>, scale: f64) -> PyResult<Self> {
        Ok(Zonotope {
            inner: core::Zonotope::new(dim, vectors(generators)?, scale).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn scale(&self) -> f64 {
        self.inner.scale()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<f64>> {
        self.inner
            .generators()
            .iter()
            .map(|g| g.coords().to_vec())
            .collect()
    }

    /// phi(Z) for the given valuation.
    fn valuation(&self, spec: &ValuationSpec) -> PyResult<f64> {
        core::valuation(&self.inner, &spec.inner).map_err(err)
    }

    /// Support function h(Z, u).
    fn support(&self, direction: Vec<f64>) -> PyResult<f64> {
        let u = core::Vector::new(direction).map_err(err)?;
        core::support_function(&self.inner, &u).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Zonotope(dim={}, generators={}, scale={})",
            self.inner.dim(),
            self.inner.generators().len(),
            self.inner.scale()
        )
    }
}

/// Which valuation to evaluate: an intrinsic volume V_j or a mixed valuation
/// with fixed segments filling the remaining slots.
#[pyclass(module = "pyzonoid")]
struct ValuationSpec {
    inner: core::ValuationSpec,
}

#[pymethods]
impl ValuationSpec {
    #[staticmethod]
    fn intrinsic(j: usize) -> Self {
        ValuationSpec {
            inner: core::ValuationSpec::intrinsic(j),
        }
    }

    #[staticmethod]
    fn mixed(j: usize, fixed_segments: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(ValuationSpec {
            inner: core::ValuationSpec::mixed(j, vectors(fixed_segments)?),
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn __repr__(&self) -> String {
        format!("ValuationSpec({})", serde_json::to_string(&self.inner).unwrap_or_default())
    }
}

/// A sampleable law on R^d.
#[pyclass(module = "pyzonoid")]
struct DistributionSpec {
    inner: core::DistributionSpec,
}

#[pymethods]
impl DistributionSpec {
    #[staticmethod]
    fn gaussian_std(d: usize) -> Self {
        DistributionSpec {
            inner: core::DistributionSpec::gaussian_std(d),
        }
    }

    #[staticmethod]
    fn uniform_sphere(d: usize, radius: f64) -> Self {
        DistributionSpec {
            inner: core::DistributionSpec::uniform_sphere(d, radius),
        }
    }

    #[staticmethod]
    fn uniform_cube(d: usize, half_width: f64) -> Self {
        DistributionSpec {
            inner: core::DistributionSpec::uniform_cube(d, half_width),
        }
    }

    #[staticmethod]
    fn discrete(d: usize, atoms: Vec<Vec<f64>>, probs: Vec<f64>) -> PyResult<Self> {
        let spec = core::DistributionSpec::discrete(d, vectors(atoms)?, probs);
        spec.validate().map_err(err)?;
        Ok(DistributionSpec { inner: spec })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!(
            "DistributionSpec({})",
            serde_json::to_string(&self.inner).unwrap_or_default()
        )
    }
}

/// Names one random stream; child streams derive deterministically.
#[pyclass(module = "pyzonoid")]
struct SeedSpec {
    inner: core::SeedSpec,
}

#[pymethods]
impl SeedSpec {
    #[new]
    #[pyo3(signature = (master_seed, stream_id = 0))]
    fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec {
            inner: core::SeedSpec::new(master_seed, stream_id),
        }
    }

    fn child(&self, index: u64) -> Self {
        SeedSpec {
            inner: self.inner.child(index),
        }
    }

    #[getter]
    fn master_seed(&self) -> u64 {
        self.inner.master_seed
    }

    #[getter]
    fn stream_id(&self) -> u64 {
        self.inner.stream_id
    }

    fn __repr__(&self) -> String {
        format!(
            "SeedSpec(master_seed={}, stream_id={})",
            self.inner.master_seed, self.inner.stream_id
        )
    }
}

/// Volumes of the unit balls B^0 .. B^d.
#[pyfunction]
fn unit_ball_volumes(d: usize) -> PyResult<Vec<f64>> {
    core::unit_ball_volumes(d).map_err(err)
}

/// j-volume of the parallelepiped spanned by the given vectors.
#[pyfunction]
fn parallelepiped_volume(spanning: Vec<Vec<f64>>) -> PyResult<f64> {
    core::parallelepiped_volume(&vectors(spanning)?).map_err(err)
}

/// n points drawn from the law.
#[pyfunction]
fn sample(dist: &DistributionSpec, n: usize, seed: &SeedSpec) -> PyResult<Vec<Vec<f64>>> {
    Ok(core::sample(&dist.inner, n, &seed.inner)
        .map_err(err)?
        .into_iter()
        .map(|p| p.coords().to_vec())
        .collect())
}

/// The exact zonoid of a finitely supported law.
#[pyfunction]
fn zonoid_exact_discrete(dist: &DistributionSpec) -> PyResult<Zonotope> {
    Ok(Zonotope {
        inner: core::zonoid_exact_discrete(&dist.inner).map_err(err)?,
    })
}

/// The empirical zonoid of an n-sample.
#[pyfunction]
fn zonoid_empirical(dist: &DistributionSpec, n: usize, seed: &SeedSpec) -> PyResult<Zonotope> {
    Ok(Zonotope {
        inner: core::zonoid_empirical(&dist.inner, n, &seed.inner).map_err(err)?,
    })
}

/// Radius of the standard Gaussian zonoid (a centered ball in every
/// dimension).
#[pyfunction]
fn gaussian_zonoid_radius(d: usize) -> PyResult<f64> {
    core::zonoid_gaussian_radius(d).map_err(err)
}

/// (E|X|, E|X|^2) for the standard Gaussian on R^d.
#[pyfunction]
fn gaussian_norm_moments(d: usize) -> PyResult<(f64, f64)> {
    core::gaussian_norm_moments(d).map_err(err)
}

/// E phi(Z_p) predicted from phi(Z_X): falling(p, j) / p^j times phi.
#[pyfunction]
fn theorem1_prediction(phi_zx: f64, j: usize, p: usize) -> PyResult<f64> {
    core::theorem1_prediction(phi_zx, j, p).map_err(err)
}

/// (a, b, zeta1) of the Gaussian first-projection closed form.
#[pyfunction]
fn zeta1_gaussian_closed_form(d: usize, j: usize) -> PyResult<(f64, f64, f64)> {
    let cf = core::zeta1_gaussian_closed_form(d, j).map_err(err)?;
    Ok((cf.a, cf.b, cf.zeta1))
}

/// Support conditions for a nondegenerate limit: (pass, support_rank,
/// reasons).
#[pyfunction]
fn lemma41_precheck(dist: &DistributionSpec, j: usize) -> PyResult<(bool, usize, Vec<String>)> {
    let diag = core::lemma41_precheck(&dist.inner, j).map_err(err)?;
    Ok((diag.pass, diag.support_rank, diag.reasons))
}

/// Runs the expectation-identity check; returns the full report as JSON.
#[pyfunction]
fn verify_theorem1(
    dist: &DistributionSpec,
    spec: &ValuationSpec,
    p: usize,
    reps: u64,
    seed: &SeedSpec,
) -> PyResult<String> {
    let report = core::verify_theorem1(
        &dist.inner,
        &spec.inner,
        p,
        reps,
        &seed.inner,
        &core::SurrogateConfig::default(),
    )
    .map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs the replicated central limit experiment; returns the full report
/// (including per-replication deviations) as JSON.
#[pyfunction]
#[pyo3(signature = (dist, spec, n, reps, seed, zeta1_reps = 200_000))]
fn clt_experiment(
    dist: &DistributionSpec,
    spec: &ValuationSpec,
    n: usize,
    reps: u64,
    seed: &SeedSpec,
    zeta1_reps: u64,
) -> PyResult<String> {
    let options = core::CltOptions {
        zeta1_reps,
        ..core::CltOptions::default()
    };
    let report = core::clt_experiment(
        &dist.inner,
        &spec.inner,
        n,
        reps,
        &seed.inner,
        &options,
        &core::SurrogateConfig::default(),
    )
    .map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn pyzonoid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Zonotope>()?;
    m.add_class::<ValuationSpec>()?;
    m.add_class::<DistributionSpec>()?;
    m.add_class::<SeedSpec>()?;
    m.add_function(wrap_pyfunction!(unit_ball_volumes, m)?)?;
    m.add_function(wrap_pyfunction!(parallelepiped_volume, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(zonoid_exact_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(zonoid_empirical, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_zonoid_radius, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_norm_moments, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_prediction, m)?)?;
    m.add_function(wrap_pyfunction!(zeta1_gaussian_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(lemma41_precheck, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(clt_experiment, m)?)?;
    m.add("GAUSSIAN_ZONOID_RADIUS", core::GAUSSIAN_ZONOID_RADIUS)?;
    Ok(())
}
