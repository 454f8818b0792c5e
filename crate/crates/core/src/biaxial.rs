//! General (biaxial) emission rates by spherical quadrature of the
//! golden-rule integrand, plus the dipole-orientation decomposition.

use crate::media::{Anisotropy, Direction, PermittivityTensor, PrincipalAxis};
use crate::modes::{mode_normalization, solve_modes};
use crate::quadrature::{integrate_sphere_components, QuadratureResult, QuadratureSpec};
use crate::rate::{BranchShare, MethodTag, RateError, RateResult};
use crate::uniaxial::UniaxialMedium;

const GAMMA_PREFACTOR: f64 = 3.0 / (8.0 * std::f64::consts::PI);

/// Per-direction summand of the rate integral:
/// sum over branches of eps_eff^{3/2} |d . e|^2 / (e . eps e),
/// normalized so that Gamma = 3/(8 pi) * integral over the sphere.
///
/// (theta, phi) parametrize kappa with theta measured from the x axis. At
/// degenerate directions the summed value is basis-independent within the
/// transverse eigenspace, so the arbitrary returned pair is harmless.
pub fn rate_integrand(
    eps: &PermittivityTensor,
    dipole: &Direction,
    theta: f64,
    phi: f64,
) -> f64 {
    let [hi, lo] = branch_contributions(eps, dipole, theta, phi);
    hi + lo
}

/// The two branch contributions at one direction, ordered by descending
/// eps_eff.
fn branch_contributions(
    eps: &PermittivityTensor,
    dipole: &Direction,
    theta: f64,
    phi: f64,
) -> [f64; 2] {
    let kappa = Direction::from_polar(theta, phi);
    let pair = solve_modes(eps, &kappa);
    let mut out = [0.0; 2];
    for (slot, mode) in pair.modes.iter().enumerate() {
        let projection = dipole.dot(&mode.polarization);
        out[slot] = mode.eps_eff * mode.n_eff * projection * projection
            / mode_normalization(eps, mode);
    }
    out
}

// Slot labels for quadrature breakdowns: slot 0 is the branch with larger
// eps_eff, which has a consistent identity across the sphere for each class.
fn slot_labels(eps: &PermittivityTensor) -> [&'static str; 2] {
    match eps.classification() {
        Anisotropy::Biaxial => ["minus", "plus"],
        Anisotropy::Uniaxial { .. } => {
            let m = UniaxialMedium::from_tensor(eps).expect("classified uniaxial");
            if m.eps1() >= m.eps2() {
                ["extraordinary", "ordinary"]
            } else {
                ["ordinary", "extraordinary"]
            }
        }
        Anisotropy::Isotropic => ["degenerate-1", "degenerate-2"],
    }
}

fn assemble(
    components: [f64; 2],
    labels: [&'static str; 2],
    diag: QuadratureResult,
    converged: bool,
) -> Result<RateResult, RateError> {
    let branches = [
        BranchShare { label: labels[0], gamma: GAMMA_PREFACTOR * components[0] },
        BranchShare { label: labels[1], gamma: GAMMA_PREFACTOR * components[1] },
    ];
    let scaled_diag = QuadratureResult { value: GAMMA_PREFACTOR * diag.value, ..diag };
    let result = RateResult::from_branches(branches, Some(scaled_diag), MethodTag::Quadrature);
    if converged {
        Ok(result)
    } else {
        Err(RateError::ToleranceNotReached { best: result })
    }
}

/// Rate for an arbitrary medium by adaptive spherical quadrature.
pub fn rate_numeric(
    eps: &PermittivityTensor,
    dipole: &Direction,
    spec: &QuadratureSpec,
) -> Result<RateResult, RateError> {
    let f = |theta: f64, phi: f64| branch_contributions(eps, dipole, theta, phi);
    let out = integrate_sphere_components::<2, _>(&f, spec)?;
    assemble(out.components, slot_labels(eps), out.diagnostics, out.converged)
}

/// Rate of a tilted dipole assembled from the three axis-aligned rates:
/// Gamma = dx^2 G_x + dy^2 G_y + dz^2 G_z. Cross terms vanish identically
/// in the angular integration, so this equals [`rate_numeric`] at the tilted
/// dipole up to quadrature error.
pub fn rate_arbitrary_dipole(
    eps: &PermittivityTensor,
    dipole: &Direction,
    spec: &QuadratureSpec,
) -> Result<RateResult, RateError> {
    let weights = [
        dipole.x() * dipole.x(),
        dipole.y() * dipole.y(),
        dipole.z() * dipole.z(),
    ];
    let axes = [PrincipalAxis::X, PrincipalAxis::Y, PrincipalAxis::Z];
    let labels = slot_labels(eps);

    let mut shares = [0.0f64; 2];
    let mut worst_err = 0.0f64;
    let mut max_theta = spec.theta_rule;
    let mut max_phi = spec.phi_points;
    let mut all_converged = true;
    for (w, axis) in weights.iter().zip(axes) {
        if *w == 0.0 {
            continue;
        }
        let axis_dipole = axis.unit();
        let f = |theta: f64, phi: f64| branch_contributions(eps, &axis_dipole, theta, phi);
        let out = integrate_sphere_components::<2, _>(&f, spec)?;
        shares[0] += w * GAMMA_PREFACTOR * out.components[0];
        shares[1] += w * GAMMA_PREFACTOR * out.components[1];
        worst_err = worst_err.max(out.diagnostics.est_rel_error);
        max_theta = max_theta.max(out.diagnostics.theta_order);
        max_phi = max_phi.max(out.diagnostics.phi_points);
        all_converged &= out.converged;
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
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn eps(x: f64, y: f64, z: f64) -> PermittivityTensor {
        PermittivityTensor::new(x, y, z).unwrap()
    }

    #[test]
    fn integrand_isotropic_transverse_projector() {
        // In an isotropic medium the summand collapses to
        // sqrt(eps) (1 - (d . kappa)^2).
        let medium = eps(2.25, 2.25, 2.25);
        let d = Direction::new(0.3, -0.4, 0.86).unwrap();
        for (theta, phi) in [(0.3, 1.1), (1.2, 4.0), (2.6, 0.1)] {
            let kappa = Direction::from_polar(theta, phi);
            let cosine = d.dot(&kappa);
            let expected = 1.5 * (1.0 - cosine * cosine);
            assert_relative_eq!(
                rate_integrand(&medium, &d, theta, phi),
                expected,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn integrand_extraordinary_only_at_equator() {
        // eps = (7,1,1), dipole x, theta = pi/2: only the extraordinary
        // branch couples; value sqrt(7).
        let medium = eps(7.0, 1.0, 1.0);
        let d = Direction::x_axis();
        let v = rate_integrand(&medium, &d, FRAC_PI_2, 0.4);
        assert_relative_eq!(v, 7.0_f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn integrand_is_basis_independent_at_the_optic_axis() {
        // For eps = (2,3,4) the optic axes sit in the x-z plane at
        // kappa_x^2 = 2/3, where both branches degenerate to eps_eff = 3.
        // With equal eps_eff the summand collapses to
        // eps_eff^{3/2} d.(eps^{-1} - kk^T/(k.eps k)).d by completeness,
        // which is independent of the arbitrary eigenpair basis.
        let medium = eps(2.0, 3.0, 4.0);
        let kx = (2.0_f64 / 3.0).sqrt();
        let kz = (1.0_f64 / 3.0).sqrt();
        let theta = kx.acos();
        // kappa = (cos t, sin t cos p, sin t sin p) with phi = pi/2 puts the
        // direction in the x-z plane.
        let phi = std::f64::consts::FRAC_PI_2;
        let kappa = Direction::from_polar(theta, phi);
        assert_relative_eq!(kappa.x(), kx, max_relative = 1e-14);
        assert_relative_eq!(kappa.z(), kz, max_relative = 1e-14);
        let pair = crate::modes::solve_modes(&medium, &kappa);
        assert!(pair.degenerate);
        assert_relative_eq!(pair.high().eps_eff, 3.0, max_relative = 1e-9);

        for d in [
            Direction::x_axis(),
            Direction::z_axis(),
            Direction::new(0.4, -0.8, 0.45).unwrap(),
        ] {
            let dv = d.as_vector();
            let q = medium.quadratic_form(kappa.as_vector());
            let inv_quad = dv.dot(&(medium.inverse_matrix() * *dv));
            let long_quad = dv.dot(kappa.as_vector()).powi(2) / q;
            let expected = 3.0_f64.powf(1.5) * (inv_quad - long_quad);
            assert_relative_eq!(
                rate_integrand(&medium, &d, theta, phi),
                expected,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn integrand_is_non_negative() {
        let medium = eps(1.3, 4.2, 2.7);
        let d = Direction::new(0.5, -0.7, 0.3).unwrap();
        let mut theta = 0.05;
        while theta < std::f64::consts::PI {
            let mut phi = 0.0;
            while phi < 2.0 * std::f64::consts::PI {
                assert!(rate_integrand(&medium, &d, theta, phi) >= 0.0);
                phi += 0.37;
            }
            theta += 0.23;
        }
    }

    #[test]
    fn numeric_rate_isotropic() {
        let spec = QuadratureSpec::default();
        let r = rate_numeric(&eps(4.0, 4.0, 4.0), &Direction::z_axis(), &spec).unwrap();
        assert_relative_eq!(r.gamma_normalized, 2.0, max_relative = 1e-10);
        assert_eq!(r.method, MethodTag::Quadrature);
        assert!(r.quadrature.unwrap().est_rel_error < 1e-10);
    }

    #[test]
    fn numeric_rate_uniaxial_closed_forms() {
        let spec = QuadratureSpec::default();
        // Dipole along the distinguished z axis: sqrt(eps2).
        let r = rate_numeric(&eps(1.5, 1.5, 5.0), &Direction::z_axis(), &spec).unwrap();
        assert_relative_eq!(r.gamma_normalized, 1.5_f64.sqrt(), max_relative = 1e-9);
        // Dipole in-plane relative to the distinguished x axis:
        // (eps_x + 3 eps_z) / (4 sqrt(eps_z)).
        let r = rate_numeric(&eps(1.5, 5.0, 5.0), &Direction::z_axis(), &spec).unwrap();
        assert_relative_eq!(
            r.gamma_normalized,
            16.5 / (4.0 * 5.0_f64.sqrt()),
            max_relative = 1e-9
        );
    }

    #[test]
    fn numeric_rate_biaxial_reference() {
        // Frozen from a converged run of the dense-solver route; the
        // interpolation model sits within 2% of this value.
        let spec = QuadratureSpec::default();
        let r = rate_numeric(&eps(1.5, 3.0, 5.0), &Direction::z_axis(), &spec).unwrap();
        assert_relative_eq!(r.gamma_normalized, 1.5073728868154, max_relative = 1e-9);
        assert_relative_eq!(
            (r.gamma_normalized - 1.50610).abs() / r.gamma_normalized,
            0.000842,
            max_relative = 0.2
        );
    }

    #[test]
    fn branch_shares_sum_to_total() {
        let spec = QuadratureSpec::default();
        let r = rate_numeric(&eps(2.0, 3.0, 4.0), &Direction::new(1.0, 2.0, -1.0).unwrap(), &spec)
            .unwrap();
        assert_abs_diff_eq!(
            r.branches[0].gamma + r.branches[1].gamma,
            r.gamma_normalized,
            epsilon = 1e-12 * r.gamma_normalized
        );
        assert_eq!(r.branches[0].label, "minus");
        assert_eq!(r.branches[1].label, "plus");
    }

    #[test]
    fn axis_aligned_decomposition_is_single_term() {
        let spec = QuadratureSpec::default();
        let direct = rate_numeric(&eps(2.0, 3.0, 4.0), &Direction::y_axis(), &spec).unwrap();
        let decomposed =
            rate_arbitrary_dipole(&eps(2.0, 3.0, 4.0), &Direction::y_axis(), &spec).unwrap();
        assert_relative_eq!(
            direct.gamma_normalized,
            decomposed.gamma_normalized,
            max_relative = 1e-12
        );
    }

    #[test]
    fn tilted_dipole_decomposition_matches_direct_quadrature() {
        let spec = QuadratureSpec::default();
        let medium = eps(2.0, 3.0, 4.0);
        let d = Direction::new(1.0, 1.0, 1.0).unwrap();
        let direct = rate_numeric(&medium, &d, &spec).unwrap();
        let decomposed = rate_arbitrary_dipole(&medium, &d, &spec).unwrap();
        assert_relative_eq!(
            direct.gamma_normalized,
            decomposed.gamma_normalized,
            max_relative = 1e-8
        );
    }

    #[test]
    fn isotropic_rate_is_orientation_independent() {
        let spec = QuadratureSpec::default();
        let medium = eps(2.25, 2.25, 2.25);
        let dirs = [
            Direction::x_axis(),
            Direction::new(1.0, 1.0, 0.0).unwrap(),
            Direction::new(-0.2, 0.5, 0.9).unwrap(),
        ];
        for d in dirs {
            let r = rate_numeric(&medium, &d, &spec).unwrap();
            assert_relative_eq!(r.gamma_normalized, 1.5, max_relative = 1e-10);
        }
    }

    #[test]
    fn tolerance_not_reached_carries_best_rate() {
        let spec = QuadratureSpec::new(4, 8, 1e-300, 8).unwrap();
        let err = rate_numeric(&eps(2.0, 3.0, 4.0), &Direction::z_axis(), &spec).unwrap_err();
        match err {
            RateError::ToleranceNotReached { best } => {
                assert!(best.gamma_normalized > 0.0);
                assert!(best.quadrature.unwrap().est_rel_error > 0.0);
            }
            other => panic!("unexpected error {other}"),
        }
    }
}
