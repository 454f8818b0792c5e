//! Normalized emission-rate results shared by the closed-form, quadrature
//! and interpolation-model routes.

use crate::quadrature::QuadratureResult;
use thiserror::Error;

/// How a rate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    ClosedForm,
    Quadrature,
    InterpolationModel,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::ClosedForm => "closed-form",
            MethodTag::Quadrature => "quadrature",
            MethodTag::InterpolationModel => "interpolation-model",
        }
    }
}

/// One branch's share of the total rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchShare {
    pub label: &'static str,
    pub gamma: f64,
}

/// A normalized spontaneous-emission rate Gamma = gamma / gamma_vac with its
/// per-branch breakdown and, for quadrature routes, convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub gamma_normalized: f64,
    pub branches: [BranchShare; 2],
    pub quadrature: Option<QuadratureResult>,
    pub method: MethodTag,
}

impl RateResult {
    /// Builds a result whose total is exactly the sum of the two shares.
    pub fn from_branches(
        branches: [BranchShare; 2],
        quadrature: Option<QuadratureResult>,
        method: MethodTag,
    ) -> Self {
        Self {
            gamma_normalized: branches[0].gamma + branches[1].gamma,
            branches,
            quadrature,
            method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error(
        "quadrature tolerance not reached: best gamma {} (est rel error {:e})",
        best.gamma_normalized,
        best.quadrature.map(|q| q.est_rel_error).unwrap_or(f64::NAN)
    )]
    ToleranceNotReached { best: RateResult },
    #[error(transparent)]
    Quadrature(#[from] crate::quadrature::QuadratureError),
}
