//! Estimators connecting sampled laws to zonoid valuations: symmetric-kernel
//! U-statistics, the expectation identity for valuations of random segment
//! sums, and the CLT verification pipeline.

mod clt;
mod surrogate;
mod theorem1;
mod ustat;

pub use clt::{
    clt_experiment, lemma41_precheck, zeta1_gaussian_closed_form, zeta1_mc, CltOptions,
    CltReport, Lemma41Diagnosis, Zeta1ClosedForm, Zeta1Estimate, Zeta1Source,
};
pub use surrogate::{h1, SurrogateConfig, SurrogateInfo, ZonoidSurrogate};
pub use theorem1::{
    estimate_expected_valuation_zp, theorem1_prediction, verify_theorem1, RadiusDiagnostic,
    Theorem1Report,
};
pub use ustat::{u_statistic, valuation_of_zn_via_ustat, zn_ustat_coefficient, UStatMode};

use crate::error::{Error, Result};
use crate::vector::Vector;
use crate::zonotope::{valuation_terms_sum, ValuationSpec, DEFAULT_TERM_BUDGET};

/// A symmetric valuation kernel of order p: points x_1, .., x_p map to
/// phi(seg(x_1) + .. + seg(x_p)) for the valuation phi named by `spec`.
#[derive(Clone, Debug)]
pub struct KernelContext {
    dim: usize,
    spec: ValuationSpec,
    order: usize,
}

impl KernelContext {
    /// Requires 1 <= degree <= dim and order p >= degree.
    pub fn new(dim: usize, spec: ValuationSpec, order: usize) -> Result<Self> {
        spec.validate_for_dim(dim)?;
        if order < spec.degree() {
            return Err(Error::domain(format!(
                "kernel order p = {order} must be >= the valuation degree j = {}",
                spec.degree()
            )));
        }
        Ok(KernelContext { dim, spec, order })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &ValuationSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Evaluates the kernel on exactly `order` points: the valuation of the
/// unscaled segment sum over the points.
pub fn kernel_h(ctx: &KernelContext, points: &[Vector]) -> Result<f64> {
    if points.len() != ctx.order {
        return Err(Error::domain(format!(
            "kernel of order {} applied to {} points",
            ctx.order,
            points.len()
        )));
    }
    for x in points {
        if x.dim() != ctx.dim {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim,
                got: x.dim(),
            });
        }
    }
    valuation_terms_sum(points, &ctx.spec, ctx.dim, DEFAULT_TERM_BUDGET)
}
