//! Tensor local-field corrections via the adjusted-dipole substitution.
//!
//! A linear local-field map L (diagonal in the crystal axes) enters the rate
//! only through the adjusted dipole L^T d, so any corrected rate is the rate
//! of the unit adjusted direction scaled by |L^T d|^2.

use crate::media::{Direction, PermittivityTensor, PrincipalAxis};
use crate::quadrature::{QuadratureResult, QuadratureSpec};
use crate::rate::{BranchShare, MethodTag, RateError, RateResult};
use crate::uniaxial::{DipoleSplit, UniaxialMedium};
use nalgebra::Vector3;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocalFieldError {
    #[error("local-field entries must be finite, got ({0}, {1}, {2})")]
    NonFinite(f64, f64, f64),
    #[error("adjusted dipole has vanishing magnitude; dipole is fully suppressed")]
    DegenerateAdjustedDipole,
}

/// Diagonal local-field correction factors in crystal axes. Entries may be
/// negative or zero (model-dependent); rates depend on their squares only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFieldTensor {
    l1: f64,
    l2: f64,
    l3: f64,
}

impl LocalFieldTensor {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self, LocalFieldError> {
        if l1.is_finite() && l2.is_finite() && l3.is_finite() {
            Ok(Self { l1, l2, l3 })
        } else {
            Err(LocalFieldError::NonFinite(l1, l2, l3))
        }
    }

    pub fn identity() -> Self {
        Self { l1: 1.0, l2: 1.0, l3: 1.0 }
    }

    pub fn scalar(c: f64) -> Result<Self, LocalFieldError> {
        Self::new(c, c, c)
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn l3(&self) -> f64 {
        self.l3
    }

    pub fn entry(&self, axis: PrincipalAxis) -> f64 {
        match axis {
            PrincipalAxis::X => self.l1,
            PrincipalAxis::Y => self.l2,
            PrincipalAxis::Z => self.l3,
        }
    }

    /// Zero entries fully suppress a dipole component; worth a warning in
    /// user-facing tools.
    pub fn has_zero_entry(&self) -> bool {
        self.l1 == 0.0 || self.l2 == 0.0 || self.l3 == 0.0
    }

    /// Negative entries are accepted (rates see only squares) but may signal
    /// an unphysical model.
    pub fn has_negative_entry(&self) -> bool {
        self.l1 < 0.0 || self.l2 < 0.0 || self.l3 < 0.0
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(self.l1 * v.x, self.l2 * v.y, self.l3 * v.z)
    }
}

/// Splits the adjusted dipole L^T d into a unit direction and its magnitude.
/// The corrected rate is magnitude^2 times the rate at the unit direction.
pub fn adjust_dipole(
    l: &LocalFieldTensor,
    dipole: &Direction,
) -> Result<(Direction, f64), LocalFieldError> {
    let adjusted = l.apply(dipole.as_vector());
    let magnitude = adjusted.norm();
    if magnitude < 1e-14 {
        return Err(LocalFieldError::DegenerateAdjustedDipole);
    }
    let unit = Direction::new(adjusted.x, adjusted.y, adjusted.z)
        .expect("magnitude checked above");
    Ok((unit, magnitude))
}

/// Corrected uniaxial rate
/// Gamma = (eps1 + 3 eps2)/(4 sqrt(eps2)) L_plane^2 d_perp^2
///       + sqrt(eps2) L_axis^2 d_par^2,
/// where L_axis acts along the distinguished axis and L_plane in the
/// transverse plane. The in-plane entries of `l` must agree for the closed
/// form to apply.
pub fn rate_uniaxial_local(
    m: &UniaxialMedium,
    d: &DipoleSplit,
    l: &LocalFieldTensor,
) -> RateResult {
    let axis = m.axis();
    let l_axis = l.entry(axis);
    let plane = [
        match axis {
            PrincipalAxis::X => l.l2,
            PrincipalAxis::Y => l.l3,
            PrincipalAxis::Z => l.l1,
        },
        match axis {
            PrincipalAxis::X => l.l3,
            PrincipalAxis::Y => l.l1,
            PrincipalAxis::Z => l.l2,
        },
    ];
    assert!(
        (plane[0] - plane[1]).abs() <= 1e-9 * plane[0].abs().max(plane[1].abs()).max(1.0),
        "in-plane local-field entries differ; use the adjusted-dipole route instead"
    );
    let l_plane = plane[0];

    let ordinary = m.rate_ordinary(d) * l_plane * l_plane;
    let extraordinary = {
        let dperp2 = d.d_perp() * d.d_perp() * l_plane * l_plane;
        let dpar2 = d.d_par() * d.d_par() * l_axis * l_axis;
        m.eps1() * dperp2 / (4.0 * m.eps2().sqrt()) + m.eps2().sqrt() * dpar2
    };
    RateResult::from_branches(
        [
            BranchShare { label: "ordinary", gamma: ordinary },
            BranchShare { label: "extraordinary", gamma: extraordinary },
        ],
        None,
        MethodTag::ClosedForm,
    )
}

/// Corrected biaxial rate
/// Gamma = dx^2 L1^2 G_x + dy^2 L2^2 G_y + dz^2 L3^2 G_z
/// with G_i the quadrature rate for a dipole along axis i. Equal to the
/// adjusted-dipole evaluation |L^T d|^2 * Gamma(L^T d / |L^T d|).
pub fn rate_biaxial_local(
    eps: &PermittivityTensor,
    dipole: &Direction,
    l: &LocalFieldTensor,
    spec: &QuadratureSpec,
) -> Result<RateResult, RateError> {
    let d = dipole.as_vector();
    let weights = [
        d.x * d.x * l.l1 * l.l1,
        d.y * d.y * l.l2 * l.l2,
        d.z * d.z * l.l3 * l.l3,
    ];

    let mut shares = [0.0f64; 2];
    let mut labels = ["", ""];
    let mut worst_err = 0.0f64;
    let mut max_theta = spec.theta_rule;
    let mut max_phi = spec.phi_points;
    let mut all_converged = true;
    for (w, axis) in weights
        .iter()
        .zip([PrincipalAxis::X, PrincipalAxis::Y, PrincipalAxis::Z])
    {
        if *w == 0.0 {
            continue;
        }
        let outcome = crate::biaxial::rate_numeric(eps, &axis.unit(), spec);
        let (axis_rate, converged) = match outcome {
            Ok(r) => (r, true),
            Err(RateError::ToleranceNotReached { best }) => (best, false),
            Err(other) => return Err(other),
        };
        all_converged &= converged;
        labels = [axis_rate.branches[0].label, axis_rate.branches[1].label];
        shares[0] += w * axis_rate.branches[0].gamma;
        shares[1] += w * axis_rate.branches[1].gamma;
        let diag = axis_rate.quadrature.expect("quadrature route");
        worst_err = worst_err.max(diag.est_rel_error);
        max_theta = max_theta.max(diag.theta_order);
        max_phi = max_phi.max(diag.phi_points);
    }

    let branches = [
        BranchShare { label: labels[0], gamma: shares[0] },
        BranchShare { label: labels[1], gamma: shares[1] },
    ];
    let diag = QuadratureResult {
        value: shares[0] + shares[1],
        est_rel_error: worst_err,
        theta_order: max_theta,
        phi_points: max_phi,
    };
    let result = RateResult::from_branches(branches, Some(diag), MethodTag::Quadrature);
    if all_converged {
        Ok(result)
    } else {
        Err(RateError::ToleranceNotReached { best: result })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biaxial::{rate_arbitrary_dipole, rate_numeric};
    use approx::assert_relative_eq;

    fn eps(x: f64, y: f64, z: f64) -> PermittivityTensor {
        PermittivityTensor::new(x, y, z).unwrap()
    }

    #[test]
    fn adjust_dipole_cases() {
        let d = Direction::x_axis();
        let (unit, mag) = adjust_dipole(&LocalFieldTensor::identity(), &d).unwrap();
        assert_relative_eq!(unit.dot(&d), 1.0);
        assert_relative_eq!(mag, 1.0);

        let l = LocalFieldTensor::new(1.2, 1.0, 1.0).unwrap();
        let (unit, mag) = adjust_dipole(&l, &d).unwrap();
        assert_relative_eq!(unit.x(), 1.0);
        assert_relative_eq!(mag * mag, 1.44, max_relative = 1e-15);

        let suppressing = LocalFieldTensor::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(
            adjust_dipole(&suppressing, &d).unwrap_err(),
            LocalFieldError::DegenerateAdjustedDipole
        );
    }

    #[test]
    fn warnings() {
        assert!(LocalFieldTensor::new(0.0, 1.0, 1.0).unwrap().has_zero_entry());
        assert!(LocalFieldTensor::new(1.0, -1.0, 1.0).unwrap().has_negative_entry());
        assert!(!LocalFieldTensor::identity().has_zero_entry());
        assert!(LocalFieldTensor::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn uniaxial_identity_recovers_uncorrected_rate() {
        let m = UniaxialMedium::new(7.0, 1.0).unwrap();
        let d = DipoleSplit::in_plane();
        let plain = m.rate_uniaxial_total(&d);
        let corrected = rate_uniaxial_local(&m, &d, &LocalFieldTensor::identity());
        assert_relative_eq!(
            plain.gamma_normalized,
            corrected.gamma_normalized,
            max_relative = 1e-15
        );
    }

    #[test]
    fn uniaxial_axis_factor() {
        // eps1 = 7, eps2 = 1, axis-parallel dipole, L along the axis 1.2:
        // 1.44 times the vacuum-like rate 1.0.
        let m = UniaxialMedium::new(7.0, 1.0).unwrap();
        let l = LocalFieldTensor::new(1.2, 1.0, 1.0).unwrap();
        let r = rate_uniaxial_local(&m, &DipoleSplit::parallel(), &l);
        assert_relative_eq!(r.gamma_normalized, 1.44, max_relative = 1e-14);

        // Cross-check through the adjusted-dipole route.
        let (unit, mag) = adjust_dipole(&l, &Direction::x_axis()).unwrap();
        let split = DipoleSplit::from_direction(&unit, PrincipalAxis::X);
        let adjusted = m.rate_uniaxial_total(&split).gamma_normalized * mag * mag;
        assert_relative_eq!(r.gamma_normalized, adjusted, max_relative = 1e-13);
    }

    #[test]
    fn uniaxial_scalar_correction() {
        let m = UniaxialMedium::new(4.0, 4.0).unwrap();
        let l = LocalFieldTensor::scalar(1.3).unwrap();
        for d in [DipoleSplit::parallel(), DipoleSplit::in_plane()] {
            let r = rate_uniaxial_local(&m, &d, &l);
            assert_relative_eq!(r.gamma_normalized, 1.69 * 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn biaxial_identity_matches_arbitrary_dipole() {
        let spec = QuadratureSpec::default();
        let medium = eps(2.0, 3.0, 4.0);
        let d = Direction::new(1.0, -1.0, 0.5).unwrap();
        let plain = rate_arbitrary_dipole(&medium, &d, &spec).unwrap();
        let corrected =
            rate_biaxial_local(&medium, &d, &LocalFieldTensor::identity(), &spec).unwrap();
        assert_relative_eq!(
            plain.gamma_normalized,
            corrected.gamma_normalized,
            max_relative = 1e-13
        );
    }

    #[test]
    fn biaxial_single_axis_scaling() {
        let spec = QuadratureSpec::default();
        let medium = eps(2.0, 3.0, 4.0);
        let l = LocalFieldTensor::new(2.0, 0.0, 0.0).unwrap();
        let r = rate_biaxial_local(&medium, &Direction::x_axis(), &l, &spec).unwrap();
        let base = rate_numeric(&medium, &Direction::x_axis(), &spec).unwrap();
        assert_relative_eq!(
            r.gamma_normalized,
            4.0 * base.gamma_normalized,
            max_relative = 1e-12
        );
    }

    #[test]
    fn biaxial_formula_equals_adjusted_dipole_route() {
        let spec = QuadratureSpec::default();
        let medium = eps(2.0, 3.0, 4.0);
        let d = Direction::new(1.0, 1.0, 1.0).unwrap();
        let l = LocalFieldTensor::new(1.0, 2.0, 3.0).unwrap();

        let per_axis = rate_biaxial_local(&medium, &d, &l, &spec).unwrap();

        let (unit, mag) = adjust_dipole(&l, &d).unwrap();
        let adjusted = rate_arbitrary_dipole(&medium, &unit, &spec).unwrap();
        assert_relative_eq!(
            per_axis.gamma_normalized,
            adjusted.gamma_normalized * mag * mag,
            max_relative = 1e-10
        );
    }
}
