//! Closed-form interpolation approximation of the biaxial emission rate,
//! built from the two uniaxial limits, and its comparison against the
//! numeric rate.
//!
//! All expressions here fix the dipole along z; other axes are handled by
//! relabeling. With a = sqrt(eps_x), b = sqrt(eps_y), c = sqrt(eps_z):
//!
//! * endpoint a (eps_y = eps_x):  gamma_a = a
//! * endpoint b (eps_y = eps_z):  gamma_b = (eps_x + 3 eps_z) / (4 c)
//! * linear-in-eps_y interpolant: a - (eps_y - eps_x)/(4c) + (eps_y - eps_x)/(a + c)
//! * linear-in-eps_x interpolant: b + (eps_y - eps_x)/(4c) - (eps_y - eps_x)/(b + c)
//! * model: arithmetic mean of the two, equivalently
//!   n+ [ (n+ + n_par)^2 + 3 n-^2 ] / [ (n+ + n_par)^2 - n-^2 ]
//!   with n+- = (b +- a)/2 and n_par = c.

use crate::media::{Direction, PermittivityTensor, PrincipalAxis};
use crate::quadrature::QuadratureSpec;
use crate::rate::{BranchShare, MethodTag, RateError, RateResult};

/// All intermediate quantities of the model for a dipole along z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpBreakdown {
    /// Rate at the uniaxial endpoint eps_y = eps_x.
    pub gamma_a: f64,
    /// Rate at the uniaxial endpoint eps_y = eps_z.
    pub gamma_b: f64,
    /// Interpolant linear in eps_x.
    pub gamma_lin_x: f64,
    /// Interpolant linear in eps_y.
    pub gamma_lin_y: f64,
    /// Arithmetic mean of the two interpolants.
    pub gamma_model: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub n_par: f64,
}

/// Rates at the two uniaxial endpoints of the eps_y interpolation, for a
/// dipole along z.
pub fn endpoint_rates(eps: &PermittivityTensor) -> (f64, f64) {
    let gamma_a = eps.eps_x().sqrt();
    let gamma_b = (eps.eps_x() + 3.0 * eps.eps_z()) / (4.0 * eps.eps_z().sqrt());
    (gamma_a, gamma_b)
}

/// Interpolant linear in eps_y between the two endpoint rates.
pub fn interp_linear_in_y(eps: &PermittivityTensor) -> f64 {
    let (ex, ey, ez) = (eps.eps_x(), eps.eps_y(), eps.eps_z());
    ex.sqrt() - (ey - ex) / (4.0 * ez.sqrt()) + (ey - ex) / (ex.sqrt() + ez.sqrt())
}

/// The x <-> y partner of [`interp_linear_in_y`], linear in eps_x.
pub fn interp_linear_in_x(eps: &PermittivityTensor) -> f64 {
    let (ex, ey, ez) = (eps.eps_x(), eps.eps_y(), eps.eps_z());
    ey.sqrt() + (ey - ex) / (4.0 * ez.sqrt()) - (ey - ex) / (ey.sqrt() + ez.sqrt())
}

/// Full model evaluation for a dipole along z, cross-checked against the
/// equivalent index form.
pub fn interp_breakdown(eps: &PermittivityTensor) -> InterpBreakdown {
    let (gamma_a, gamma_b) = endpoint_rates(eps);
    let gamma_lin_x = interp_linear_in_x(eps);
    let gamma_lin_y = interp_linear_in_y(eps);
    let gamma_model = 0.5 * (gamma_lin_x + gamma_lin_y);

    let n_plus = 0.5 * (eps.eps_y().sqrt() + eps.eps_x().sqrt());
    let n_minus = 0.5 * (eps.eps_y().sqrt() - eps.eps_x().sqrt());
    let n_par = eps.eps_z().sqrt();
    let sum2 = (n_plus + n_par) * (n_plus + n_par);
    let index_form = n_plus * (sum2 + 3.0 * n_minus * n_minus) / (sum2 - n_minus * n_minus);
    assert!(
        (index_form - gamma_model).abs() <= 1e-12 * gamma_model.abs(),
        "mean form {gamma_model} and index form {index_form} diverged"
    );

    InterpBreakdown {
        gamma_a,
        gamma_b,
        gamma_lin_x,
        gamma_lin_y,
        gamma_model,
        n_plus,
        n_minus,
        n_par,
    }
}

// Tensor relabeled so the given dipole axis plays the z role.
fn relabeled_for_axis(eps: &PermittivityTensor, axis: PrincipalAxis) -> PermittivityTensor {
    match axis {
        PrincipalAxis::Z => *eps,
        PrincipalAxis::X => eps.permuted([1, 2, 0]),
        PrincipalAxis::Y => eps.permuted([2, 0, 1]),
    }
}

/// Model rate for an arbitrary dipole, decomposed over the crystal axes with
/// weights d_i^2 and the per-axis model value evaluated in relabeled axes.
///
/// The two branch shares are the halves of the two one-sided interpolants
/// (combined per axis), whose mean is the model value.
pub fn rate_model(eps: &PermittivityTensor, dipole: &Direction) -> RateResult {
    let weights = [
        dipole.x() * dipole.x(),
        dipole.y() * dipole.y(),
        dipole.z() * dipole.z(),
    ];
    let mut half_x = 0.0;
    let mut half_y = 0.0;
    for (w, axis) in weights
        .iter()
        .zip([PrincipalAxis::X, PrincipalAxis::Y, PrincipalAxis::Z])
    {
        if *w == 0.0 {
            continue;
        }
        let relabeled = relabeled_for_axis(eps, axis);
        let breakdown = interp_breakdown(&relabeled);
        half_x += w * 0.5 * breakdown.gamma_lin_x;
        half_y += w * 0.5 * breakdown.gamma_lin_y;
    }
    RateResult::from_branches(
        [
            BranchShare { label: "interp-x-half", gamma: half_x },
            BranchShare { label: "interp-y-half", gamma: half_y },
        ],
        None,
        MethodTag::InterpolationModel,
    )
}

/// One grid point of a model-versus-quadrature comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelErrorRow {
    pub eps: PermittivityTensor,
    pub gamma_numeric: f64,
    pub gamma_model: f64,
    /// |model - numeric| / numeric.
    pub rel_error: f64,
    pub quadrature: crate::quadrature::QuadratureResult,
    /// Set when, along the dominant dipole axis, neither transverse
    /// permittivity lies between the other one and the parallel one, i.e.
    /// the model is extrapolating beyond its uniaxial anchor points.
    pub extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelErrorReport {
    pub rows: Vec<ModelErrorRow>,
    pub max_rel_error: f64,
    pub mean_rel_error: f64,
}

fn is_extrapolated(eps: &PermittivityTensor, dipole: &Direction) -> bool {
    let weights = [
        dipole.x() * dipole.x(),
        dipole.y() * dipole.y(),
        dipole.z() * dipole.z(),
    ];
    let dominant = (0..3).max_by(|&a, &b| weights[a].total_cmp(&weights[b])).unwrap();
    let axis = [PrincipalAxis::X, PrincipalAxis::Y, PrincipalAxis::Z][dominant];
    let relabeled = relabeled_for_axis(eps, axis);
    let (ex, ey, ez) = (relabeled.eps_x(), relabeled.eps_y(), relabeled.eps_z());
    ey < ex.min(ez) || ey > ex.max(ez)
}

/// Evaluates model and quadrature rates over a grid of media and reports the
/// per-row and aggregate relative errors.
pub fn model_error_report(
    eps_grid: &[PermittivityTensor],
    dipole: &Direction,
    spec: &QuadratureSpec,
) -> Result<ModelErrorReport, RateError> {
    let mut rows = Vec::with_capacity(eps_grid.len());
    let mut max_rel_error = 0.0f64;
    let mut err_sum = crate::quadrature::KahanSum::new();
    for eps in eps_grid {
        let numeric = crate::biaxial::rate_numeric(eps, dipole, spec)?;
        let model = rate_model(eps, dipole);
        let rel_error = (model.gamma_normalized - numeric.gamma_normalized).abs()
            / numeric.gamma_normalized;
        max_rel_error = max_rel_error.max(rel_error);
        err_sum.add(rel_error);
        rows.push(ModelErrorRow {
            eps: *eps,
            gamma_numeric: numeric.gamma_normalized,
            gamma_model: model.gamma_normalized,
            rel_error,
            quadrature: numeric.quadrature.expect("quadrature route"),
            extrapolated: is_extrapolated(eps, dipole),
        });
    }
    let mean_rel_error = if rows.is_empty() { 0.0 } else { err_sum.value() / rows.len() as f64 };
    Ok(ModelErrorReport { rows, max_rel_error, mean_rel_error })
}
