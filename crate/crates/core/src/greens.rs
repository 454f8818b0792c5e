//! Independent decay-rate route through the dyadic Green's function of the
//! curl-curl operator, plus executable checks of its mode decomposition.
//!
//! The imaginary part of the Green's function at coincident points reduces,
//! for real permittivity, to an angular integral over the transverse-mode
//! spectral density. This module assembles that density from outer products
//! of the mode eigenvectors, deliberately not sharing the golden-rule
//! integrand, so the two routes cross-check each other.

use crate::media::{Direction, PermittivityTensor};
use crate::modes::solve_modes;
use crate::quadrature::{integrate_sphere_components, QuadratureResult, QuadratureSpec};
use crate::rate::RateError;
use nalgebra::Matrix3;
use num_complex::Complex64;

/// Mode-sum representation of the Green's function for one medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensModeSum {
    pub eps: PermittivityTensor,
    /// Diagnostic only: whether the longitudinal (soft-photon) channel is
    /// carried along. Its imaginary part vanishes identically for the real
    /// permittivities admitted here.
    pub includes_longitudinal: bool,
}

impl GreensModeSum {
    pub fn new(eps: PermittivityTensor) -> Self {
        Self { eps, includes_longitudinal: false }
    }

    pub fn with_longitudinal(eps: PermittivityTensor) -> Self {
        Self { eps, includes_longitudinal: true }
    }

    /// Angular spectral density of the imaginary part at coincident points:
    /// sum over transverse branches of n^3 (e x e) / (e . eps e).
    pub fn spectral_density(&self, kappa: &Direction) -> Matrix3<f64> {
        let pair = solve_modes(&self.eps, kappa);
        let mut density = Matrix3::zeros();
        for mode in &pair.modes {
            let e = mode.polarization.as_vector();
            let weight = mode.n_eff.powi(3) / self.eps.quadratic_form(e);
            density += weight * (e * e.transpose());
        }
        density
    }
}

/// Normalized rate and its quadrature diagnostics from the Green's route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensRate {
    pub gamma_normalized: f64,
    pub quadrature: QuadratureResult,
}

/// Decay rate from d . Im[G] . d, reduced to the transverse angular
/// integral and normalized so the result is Gamma = gamma / gamma_vac.
pub fn imag_greens_trace(
    eps: &PermittivityTensor,
    dipole: &Direction,
    spec: &QuadratureSpec,
) -> Result<GreensRate, RateError> {
    let sum = GreensModeSum::new(*eps);
    let d = dipole.as_vector();
    let f = |theta: f64, phi: f64| {
        let kappa = Direction::from_polar(theta, phi);
        let density = sum.spectral_density(&kappa);
        [(density * d).dot(d)]
    };
    let out = integrate_sphere_components::<1, _>(&f, spec)?;
    let scale = 3.0 / (8.0 * std::f64::consts::PI);
    let mut gamma = scale * out.components[0];
    if sum.includes_longitudinal {
        gamma += longitudinal_contribution(eps);
    }
    let quadrature = QuadratureResult {
        value: gamma,
        ..out.diagnostics
    };
    let result = GreensRate { gamma_normalized: gamma, quadrature };
    if out.converged {
        Ok(result)
    } else {
        Err(RateError::ToleranceNotReached {
            best: crate::rate::RateResult {
                gamma_normalized: result.gamma_normalized,
                branches: [
                    crate::rate::BranchShare { label: "greens", gamma: result.gamma_normalized },
                    crate::rate::BranchShare { label: "longitudinal", gamma: 0.0 },
                ],
                quadrature: Some(quadrature),
                method: crate::rate::MethodTag::Quadrature,
            },
        })
    }
}

/// Residual of the completeness relation
/// sum_{lambda in {0,1,2}} e x e / (e . eps e) - eps^{-1}
/// with the longitudinal member e_0 = kappa. The maximum absolute entry is
/// the defect.
pub fn completeness_defect(eps: &PermittivityTensor, kappa: &Direction) -> Matrix3<f64> {
    let pair = solve_modes(eps, kappa);
    let mut sum = Matrix3::zeros();
    let k = kappa.as_vector();
    sum += (k * k.transpose()) / eps.quadratic_form(k);
    for mode in &pair.modes {
        let e = mode.polarization.as_vector();
        sum += (e * e.transpose()) / eps.quadratic_form(e);
    }
    sum - eps.inverse_matrix()
}

/// Imaginary part of the longitudinal (soft-photon) channel.
///
/// The channel's angular kernel kappa x kappa / (kappa . eps kappa) is a
/// real quantity for the (real, positive) permittivities this crate admits,
/// so its imaginary part is identically zero. The evaluation below runs the
/// kernel through complex arithmetic at a set of probe directions to make
/// that statement executable rather than assumed.
pub fn longitudinal_contribution(eps: &PermittivityTensor) -> f64 {
    let mut total = Complex64::new(0.0, 0.0);
    for &(x, y, z) in &[
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
        (1.0, 1.0, 1.0),
        (1.0, -2.0, 0.5),
    ] {
        let kappa = Direction::new(x, y, z).expect("probe directions are nonzero");
        let k = kappa.as_vector();
        let denom = Complex64::new(eps.quadratic_form(k), 0.0);
        // Trace of kappa x kappa / (kappa . eps kappa) = 1 / (kappa . eps kappa).
        total += Complex64::new(1.0, 0.0) / denom;
    }
    debug_assert!(total.im == 0.0, "real permittivity produced a complex kernel");
    total.im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biaxial::rate_numeric;
    use approx::assert_relative_eq;

    fn eps(x: f64, y: f64, z: f64) -> PermittivityTensor {
        PermittivityTensor::new(x, y, z).unwrap()
    }

    #[test]
    fn isotropic_rate() {
        let spec = QuadratureSpec::default();
        let r = imag_greens_trace(&eps(4.0, 4.0, 4.0), &Direction::z_axis(), &spec).unwrap();
        assert_relative_eq!(r.gamma_normalized, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn uniaxial_in_plane_dipole() {
        // eps = (1.5, 5, 5), dipole z lies in the transverse plane of the
        // distinguished x axis: (eps_x + 3 eps_z) / (4 sqrt(eps_z)).
        let spec = QuadratureSpec::default();
        let r = imag_greens_trace(&eps(1.5, 5.0, 5.0), &Direction::z_axis(), &spec).unwrap();
        assert_relative_eq!(
            r.gamma_normalized,
            16.5 / (4.0 * 5.0_f64.sqrt()),
            max_relative = 1e-9
        );
    }

    #[test]
    fn matches_golden_rule_route() {
        let spec = QuadratureSpec::default();
        let medium = eps(2.0, 3.0, 4.0);
        let d = Direction::x_axis();
        let greens = imag_greens_trace(&medium, &d, &spec).unwrap();
        let fermi = rate_numeric(&medium, &d, &spec).unwrap();
        assert_relative_eq!(
            greens.gamma_normalized,
            fermi.gamma_normalized,
            max_relative = 1e-9
        );
    }

    #[test]
    fn completeness_holds_everywhere() {
        let media = [eps(4.0, 4.0, 4.0), eps(2.0, 3.0, 4.0), eps(7.0, 1.0, 1.0)];
        let dirs = [
            Direction::new(1.0, 1.0, 1.0).unwrap(),
            Direction::z_axis(),
            Direction::x_axis(),
            Direction::new(0.3, -0.8, 0.5).unwrap(),
        ];
        for m in &media {
            for d in &dirs {
                let defect = completeness_defect(m, d).abs().max();
                assert!(defect <= 1e-12, "defect {defect} for {m:?} at {d:?}");
            }
        }
    }

    #[test]
    fn longitudinal_channel_is_null() {
        for m in [eps(1.0, 1.0, 1.0), eps(7.0, 1.0, 1.0), eps(2.0, 3.0, 4.0)] {
            assert_eq!(longitudinal_contribution(&m), 0.0);
        }
        let with = GreensModeSum::with_longitudinal(eps(2.0, 3.0, 4.0));
        assert!(with.includes_longitudinal);
    }
}
