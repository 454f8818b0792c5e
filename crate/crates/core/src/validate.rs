//! Seeded, deterministic executable suite of every library invariant, used
//! by the `validate` CLI command. Each check samples its inputs from a seed
//! derived from the run seed, measures the worst defect it finds and
//! compares it against a fixed tolerance.

use crate::biaxial::{rate_arbitrary_dipole, rate_numeric};
use crate::greens::{completeness_defect, imag_greens_trace, longitudinal_contribution};
use crate::interp::{interp_breakdown, interp_linear_in_x, interp_linear_in_y, rate_model};
use crate::localfield::{adjust_dipole, rate_biaxial_local, rate_uniaxial_local, LocalFieldTensor};
use crate::media::{Direction, PermittivityTensor, PrincipalAxis};
use crate::modes::{solve_modes, solve_modes_numeric, symmetrized_wave_matrix};
use crate::quadrature::{integrate_sphere, integrate_sphere_fixed, QuadratureSpec};
use crate::rate::RateError;
use crate::uniaxial::{DipoleSplit, UniaxialMedium};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of a single named invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub samples: usize,
    pub worst_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, samples: usize, worst_defect: f64, tolerance: f64) -> Self {
        Self { name, samples, worst_defect, tolerance, passed: worst_defect <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E3779B97F4A7C15))
}

fn random_eps(rng: &mut ChaCha8Rng) -> PermittivityTensor {
    let draw = |rng: &mut ChaCha8Rng| 0.5 + 7.5 * rng.random::<f64>();
    PermittivityTensor::new(draw(rng), draw(rng), draw(rng)).expect("entries in (0.5, 8)")
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    let z = 2.0 * rng.random::<f64>() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    Direction::new(r * phi.cos(), r * phi.sin(), z).expect("unit sphere sample")
}

fn gamma_of(outcome: Result<crate::rate::RateResult, RateError>) -> f64 {
    match outcome {
        Ok(r) => r.gamma_normalized,
        Err(RateError::ToleranceNotReached { best }) => best.gamma_normalized,
        Err(e) => panic!("quadrature setup failed: {e}"),
    }
}

/// Runs the full invariant suite. `inject_fault` appends a synthetic failing
/// check so harnesses can verify that failures propagate.
pub fn run_validation(seed: u64, inject_fault: bool) -> ValidationReport {
    let mut checks = vec![
        check_wave_matrix_rank(seed),
        check_reciprocity(seed),
        check_gauss_transversality(seed),
        check_eps_orthogonality(seed),
        check_magnetic_identity(seed),
        check_closed_vs_dense_eps_eff(seed),
        check_quadrature_determinism(),
        check_quadrature_harmonic_exactness(),
        check_quadrature_monotone_refinement(),
        check_uniaxial_decomposition(seed),
        check_isotropic_limit(),
        check_angular_shape_invariance(),
        check_angular_equator_value(),
        check_peak_angle_formula(),
        check_uniaxial_quadrature_equivalence(),
        check_cross_term_cancellation(seed),
        check_axis_relabeling(seed),
        check_scaling_law(seed),
        check_uniaxial_reduction(),
        check_interp_xy_symmetry(seed),
        check_interp_endpoint_exactness(seed),
        check_interp_form_equivalence(seed),
        check_interp_mean_construction(seed),
        check_greens_route_equivalence(seed),
        check_completeness(seed),
        check_longitudinal_nullity(seed),
        check_localfield_scalar_limit(seed),
        check_localfield_route_equivalence(seed),
    ];

    if inject_fault {
        checks.push(CheckResult::new("injected-fault", 1, 1.0, 0.0));
    }

    ValidationReport { seed, checks }
}

fn check_wave_matrix_rank(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 1);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let kappa = random_direction(&mut rng);
        let eig = symmetrized_wave_matrix(&eps, &kappa).symmetric_eigen();
        let mut mags: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
        mags.sort_by(f64::total_cmp);
        worst = worst.max(mags[0] / mags[2]);
    }
    CheckResult::new("wave-matrix-rank", n, worst, 1e-12)
}

fn check_reciprocity(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 2);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let kappa = random_direction(&mut rng);
        let fwd = solve_modes(&eps, &kappa);
        let bwd = solve_modes(&eps, &kappa.negated());
        for (a, b) in fwd.modes.iter().zip(&bwd.modes) {
            worst = worst.max((a.eps_eff - b.eps_eff).abs() / a.eps_eff);
            worst = worst.max(1.0 - a.polarization.dot(&b.polarization).abs());
        }
    }
    CheckResult::new("reciprocity", n, worst, 1e-12)
}

fn check_gauss_transversality(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 3);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let kappa = random_direction(&mut rng);
        for mode in &solve_modes(&eps, &kappa).modes {
            let d_field = eps.apply(mode.polarization.as_vector());
            worst = worst.max(kappa.as_vector().dot(&d_field).abs());
        }
    }
    CheckResult::new("gauss-transversality", n, worst, 1e-12)
}

fn check_eps_orthogonality(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 4);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let kappa = random_direction(&mut rng);
        let pair = solve_modes(&eps, &kappa);
        let (hi, lo) = (pair.high(), pair.low());
        if (hi.eps_eff - lo.eps_eff).abs() > 1e-9 * hi.eps_eff {
            let cross = hi.polarization.as_vector().dot(&eps.apply(lo.polarization.as_vector()));
            worst = worst.max(cross.abs());
        }
    }
    CheckResult::new("eps-orthogonality", n, worst, 1e-12)
}

fn check_magnetic_identity(seed: u64) -> CheckResult {
    // For the distinct branch pair at unit k:
    // (kappa x e1).(kappa x e2) = -(omega1 omega2) e1.(eps e2)
    // with omega = 1/sqrt(eps_eff); both sides vanish, so the identity holds
    // at the stated sign.
    let mut rng = rng_for(seed, 5);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let kappa = random_direction(&mut rng);
        let pair = solve_modes(&eps, &kappa);
        let e1 = pair.high().polarization.as_vector();
        let e2 = pair.low().polarization.as_vector();
        let lhs = kappa.as_vector().cross(e1).dot(&kappa.as_vector().cross(e2));
        let omega1 = 1.0 / pair.high().eps_eff.sqrt();
        let omega2 = 1.0 / pair.low().eps_eff.sqrt();
        let rhs = -(omega1 * omega2) * e1.dot(&eps.apply(e2));
        worst = worst.max((lhs - rhs).abs());
    }
    CheckResult::new("magnetic-identity", n, worst, 1e-12)
}

fn check_closed_vs_dense_eps_eff(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 6);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let kappa = random_direction(&mut rng);
        let closed = solve_modes(&eps, &kappa);
        let dense = solve_modes_numeric(&eps, &kappa);
        for (a, b) in closed.modes.iter().zip(&dense.modes) {
            worst = worst.max((a.eps_eff - b.eps_eff).abs() / a.eps_eff);
        }
    }
    CheckResult::new("closed-vs-dense-eps-eff", n, worst, 1e-10)
}

fn check_quadrature_determinism() -> CheckResult {
    let spec = QuadratureSpec::default();
    let f = |theta: f64, phi: f64| (2.0 + theta.sin() * (2.0 * phi).cos()).powf(1.5);
    let a = integrate_sphere(f, &spec).expect("smooth integrand");
    let b = integrate_sphere(f, &spec).expect("smooth integrand");
    let defect = if a.value.to_bits() == b.value.to_bits() { 0.0 } else { 1.0 };
    CheckResult::new("quadrature-determinism", 2, defect, 0.0)
}

// Associated Legendre values for the exactness check.
fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    let mut pmm = 1.0;
    if m > 0 {
        let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
        let mut fact = 1.0;
        for _ in 0..m {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2.0 * m as f64 + 1.0) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        let mf = m as f64;
        pll = (x * (2.0 * llf - 1.0) * pmmp1 - (llf + mf - 1.0) * pmm) / (llf - mf);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

fn check_quadrature_harmonic_exactness() -> CheckResult {
    let n_theta = 16;
    let n_phi = 32;
    let mut worst = 0.0f64;
    let mut samples = 0;
    for l in 0..=(n_theta - 1) {
        for m in -(l as i64)..=(l as i64) {
            let ma = m.unsigned_abs() as usize;
            if ma > n_phi / 2 - 1 {
                continue;
            }
            let mut norm = (2.0 * l as f64 + 1.0) / (4.0 * std::f64::consts::PI);
            for k in (l - ma + 1)..=(l + ma) {
                norm /= k as f64;
            }
            let value = integrate_sphere_fixed(
                |theta, phi| {
                    let base = norm.sqrt() * assoc_legendre(l, ma, theta.cos());
                    match m.cmp(&0) {
                        std::cmp::Ordering::Greater => {
                            std::f64::consts::SQRT_2 * base * (ma as f64 * phi).cos()
                        }
                        std::cmp::Ordering::Less => {
                            std::f64::consts::SQRT_2 * base * (ma as f64 * phi).sin()
                        }
                        std::cmp::Ordering::Equal => base,
                    }
                },
                n_theta,
                n_phi,
            );
            let exact = if l == 0 { (4.0 * std::f64::consts::PI).sqrt() } else { 0.0 };
            worst = worst.max((value - exact).abs());
            samples += 1;
        }
    }
    CheckResult::new("quadrature-harmonic-exactness", samples, worst, 1e-13)
}

fn check_quadrature_monotone_refinement() -> CheckResult {
    let media = [
        PermittivityTensor::new(1.5, 3.0, 5.0).unwrap(),
        PermittivityTensor::new(6.0, 1.2, 2.4).unwrap(),
    ];
    let dipole = Direction::z_axis();
    let mut worst = 0.0f64;
    for eps in &media {
        let f = |theta: f64, phi: f64| crate::biaxial::rate_integrand(eps, &dipole, theta, phi);
        let orders = [8usize, 16, 32, 64];
        let values: Vec<f64> = orders
            .iter()
            .map(|&n| integrate_sphere_fixed(f, n, 2 * n))
            .collect();
        let est: Vec<f64> = values
            .windows(2)
            .map(|w| (w[0] - w[1]).abs() / w[1].abs())
            .collect();
        for pair in est.windows(2) {
            // Ratio above 1 means the estimate grew across a doubling.
            worst = worst.max((pair[1] / pair[0] - 1.0).max(0.0));
        }
    }
    CheckResult::new("quadrature-monotone-refinement", media.len(), worst, 0.0)
}

fn check_uniaxial_decomposition(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 10);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let m = UniaxialMedium::new(
            0.5 + 7.5 * rng.random::<f64>(),
            0.5 + 7.5 * rng.random::<f64>(),
        )
        .unwrap();
        let d = DipoleSplit::from_direction(&random_direction(&mut rng), PrincipalAxis::X);
        let total = m.rate_uniaxial_total(&d).gamma_normalized;
        let parts = m.rate_ordinary(&d) + m.rate_extraordinary(&d);
        worst = worst.max((total - parts).abs() / total);
    }
    CheckResult::new("uniaxial-decomposition", n, worst, 1e-14)
}

fn check_isotropic_limit() -> CheckResult {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for eps in [0.5, 1.0, 2.25, 4.0, 9.0] {
        let m = UniaxialMedium::new(eps, eps).unwrap();
        for d in [
            DipoleSplit::parallel(),
            DipoleSplit::in_plane(),
            DipoleSplit::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
                .unwrap(),
        ] {
            let gamma = m.rate_uniaxial_total(&d).gamma_normalized;
            worst = worst.max((gamma - eps.sqrt()).abs() / eps.sqrt());
            samples += 1;
        }
    }
    CheckResult::new("isotropic-limit", samples, worst, 1e-12)
}

fn check_angular_shape_invariance() -> CheckResult {
    // The normalized angular curve depends only on eps2/eps1.
    let (nodes, weights) = crate::quadrature::gauss_legendre(128);
    let normalized_curve = |m: &UniaxialMedium, theta: f64| {
        let integral: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(u, w)| w * m.angular_distribution(u.acos()))
            .sum();
        m.angular_distribution(theta) / integral
    };
    let mut worst = 0.0f64;
    let mut samples = 0;
    for (e1, e2) in [(1.0, 7.0), (2.0, 1.3), (1.5, 2.5)] {
        let base = UniaxialMedium::new(e1, e2).unwrap();
        for c in [0.5, 2.0, 3.0] {
            let scaled = UniaxialMedium::new(c * e1, c * e2).unwrap();
            let mut theta = 0.05;
            while theta < std::f64::consts::PI {
                let a = normalized_curve(&base, theta);
                let b = normalized_curve(&scaled, theta);
                worst = worst.max((a - b).abs() / a.abs().max(1e-300));
                samples += 1;
                theta += 0.1;
            }
        }
    }
    CheckResult::new("angular-shape-invariance", samples, worst, 1e-12)
}

fn check_angular_equator_value() -> CheckResult {
    // f(pi/2) = sqrt(eps1), independent of eps2.
    let mut worst = 0.0f64;
    let mut samples = 0;
    for e1 in [0.5, 1.0, 3.0, 7.0] {
        for e2 in [0.7, 1.0, 2.0, 5.0, 7.0] {
            let m = UniaxialMedium::new(e1, e2).unwrap();
            let f = m.angular_distribution(std::f64::consts::FRAC_PI_2);
            worst = worst.max((f - e1.sqrt()).abs() / e1.sqrt());
            samples += 1;
        }
    }
    CheckResult::new("angular-equator-value", samples, worst, 1e-12)
}

fn check_peak_angle_formula() -> CheckResult {
    // peak_emission_angles verifies its own closed form against a numeric
    // argmax; exercise it across the single- and double-lobe regimes.
    let mut worst = 0.0f64;
    let mut samples = 0;
    for r in [1.0, 1.5, 5.0 / 3.0, 2.0, 3.0, 5.0, 7.0] {
        let m = UniaxialMedium::new(1.0, r).unwrap();
        let peaks = m.peak_emission_angles();
        let expected = if r > 5.0 / 3.0 { 2 } else { 1 };
        worst = worst.max((peaks.len() as f64 - expected as f64).abs());
        samples += 1;
    }
    CheckResult::new("peak-angle-formula", samples, worst, 0.0)
}

fn check_uniaxial_quadrature_equivalence() -> CheckResult {
    let spec = QuadratureSpec::default();
    let values = [0.5, 1.0, 1.5, 2.0, 5.0, 7.0];
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &e1 in &values {
        for &e2 in &values {
            let m = UniaxialMedium::new(e1, e2).unwrap();
            let eps = m.to_tensor();
            for (d_par, d_perp) in [
                (1.0, 0.0),
                (0.0, 1.0),
                (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
            ] {
                let split = DipoleSplit::new(d_par, d_perp).unwrap();
                let closed = m.rate_uniaxial_total(&split).gamma_normalized;
                // In-plane component along y (phi = 0 convention).
                let dipole = Direction::new(d_par, d_perp, 0.0).unwrap();
                let numeric = gamma_of(rate_numeric(&eps, &dipole, &spec));
                worst = worst.max((numeric - closed).abs() / closed);
                samples += 1;
            }
        }
    }
    CheckResult::new("uniaxial-quadrature-equivalence", samples, worst, 1e-8)
}

fn check_cross_term_cancellation(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 15);
    let spec = QuadratureSpec::default();
    let n = 200;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let dipole = random_direction(&mut rng);
        let direct = gamma_of(rate_numeric(&eps, &dipole, &spec));
        let decomposed = gamma_of(rate_arbitrary_dipole(&eps, &dipole, &spec));
        worst = worst.max((direct - decomposed).abs() / direct);
    }
    CheckResult::new("cross-term-cancellation", n, worst, 1e-8)
}

fn check_axis_relabeling(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 16);
    let spec = QuadratureSpec::default();
    let perms: [[usize; 3]; 5] = [
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let n = 10;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let dipole = random_direction(&mut rng);
        let base = gamma_of(rate_numeric(&eps, &dipole, &spec));
        for perm in perms {
            let eps_p = eps.permuted(perm);
            let dv = dipole.as_vector();
            let dipole_p = Direction::new(dv[perm[0]], dv[perm[1]], dv[perm[2]]).unwrap();
            let permuted = gamma_of(rate_numeric(&eps_p, &dipole_p, &spec));
            worst = worst.max((base - permuted).abs() / base);
        }
    }
    CheckResult::new("axis-relabeling", n * perms.len(), worst, 1e-12)
}

fn check_scaling_law(seed: u64) -> CheckResult {
    // eps -> c eps rescales every branch permittivity by c and leaves the
    // polarizations unchanged, so Gamma scales exactly as sqrt(c).
    let mut rng = rng_for(seed, 17);
    let spec = QuadratureSpec::default();
    let n = 5;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let dipole = random_direction(&mut rng);
        let base = gamma_of(rate_numeric(&eps, &dipole, &spec));
        for c in [0.25, 2.0, 3.5] {
            let ev = eps.as_vector() * c;
            let scaled_eps = PermittivityTensor::new(ev.x, ev.y, ev.z).unwrap();
            let scaled = gamma_of(rate_numeric(&scaled_eps, &dipole, &spec));
            worst = worst.max((scaled - c.sqrt() * base).abs() / scaled);
        }
    }
    CheckResult::new("scaling-sqrt-c", n * 3, worst, 1e-10)
}

fn check_uniaxial_reduction() -> CheckResult {
    // A uniaxial tensor fed through the generic quadrature reproduces the
    // closed forms for every placement of the distinguished axis.
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut samples = 0;
    for axis in [PrincipalAxis::X, PrincipalAxis::Y, PrincipalAxis::Z] {
        let m = UniaxialMedium::with_axis(5.0, 1.5, axis).unwrap();
        let eps = m.to_tensor();
        // Dipole along the distinguished axis and along one in-plane axis.
        let axis_dir = axis.unit();
        let plane_dir = match axis {
            PrincipalAxis::X => Direction::y_axis(),
            PrincipalAxis::Y => Direction::z_axis(),
            PrincipalAxis::Z => Direction::x_axis(),
        };
        for (dir, split) in [
            (axis_dir, DipoleSplit::parallel()),
            (plane_dir, DipoleSplit::in_plane()),
        ] {
            let closed = m.rate_uniaxial_total(&split).gamma_normalized;
            let numeric = gamma_of(rate_numeric(&eps, &dir, &spec));
            worst = worst.max((numeric - closed).abs() / closed);
            samples += 1;
        }
    }
    CheckResult::new("uniaxial-reduction", samples, worst, 1e-8)
}

fn check_interp_xy_symmetry(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 19);
    let n = 1000;
    let mut worst = 0.0f64;
    let z = Direction::z_axis();
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let swapped = eps.permuted([1, 0, 2]);
        let a = rate_model(&eps, &z).gamma_normalized;
        let b = rate_model(&swapped, &z).gamma_normalized;
        worst = worst.max((a - b).abs() / a);
    }
    CheckResult::new("interp-xy-symmetry", n, worst, 1e-14)
}

fn check_interp_endpoint_exactness(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 20);
    let n = 200;
    let mut worst = 0.0f64;
    let z = Direction::z_axis();
    for _ in 0..n {
        let ex = 0.5 + 7.5 * rng.random::<f64>();
        let ez = 0.5 + 7.5 * rng.random::<f64>();
        for ey in [ex, ez] {
            let eps = PermittivityTensor::new(ex, ey, ez).unwrap();
            let model = rate_model(&eps, &z).gamma_normalized;
            // Closed uniaxial rate for the same configuration.
            let m = UniaxialMedium::from_tensor(&eps).unwrap();
            let split = DipoleSplit::from_direction(&z, m.axis());
            let closed = m.rate_uniaxial_total(&split).gamma_normalized;
            worst = worst.max((model - closed).abs() / closed);
        }
    }
    CheckResult::new("interp-endpoint-exactness", 2 * n, worst, 1e-12)
}

fn check_interp_form_equivalence(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 21);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let b = interp_breakdown(&eps);
        let sum2 = (b.n_plus + b.n_par) * (b.n_plus + b.n_par);
        let index_form =
            b.n_plus * (sum2 + 3.0 * b.n_minus * b.n_minus) / (sum2 - b.n_minus * b.n_minus);
        worst = worst.max((index_form - b.gamma_model).abs() / b.gamma_model);
    }
    CheckResult::new("interp-form-equivalence", n, worst, 1e-12)
}

fn check_interp_mean_construction(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 22);
    let n = 1000;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let b = interp_breakdown(&eps);
        let mean = 0.5 * (interp_linear_in_x(&eps) + interp_linear_in_y(&eps));
        worst = worst.max((b.gamma_model - mean).abs());
    }
    CheckResult::new("interp-mean-construction", n, worst, 0.0)
}

fn check_greens_route_equivalence(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 23);
    let spec = QuadratureSpec::default();
    let n = 50;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let dipole = random_direction(&mut rng);
        let fermi = gamma_of(rate_numeric(&eps, &dipole, &spec));
        let greens = match imag_greens_trace(&eps, &dipole, &spec) {
            Ok(r) => r.gamma_normalized,
            Err(RateError::ToleranceNotReached { best }) => best.gamma_normalized,
            Err(e) => panic!("greens quadrature failed: {e}"),
        };
        worst = worst.max((greens - fermi).abs() / fermi);
    }
    CheckResult::new("greens-route-equivalence", n, worst, 1e-8)
}

fn check_completeness(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 24);
    let mut worst = 0.0f64;
    let mut samples = 0;
    let principal = [
        Direction::x_axis(),
        Direction::y_axis(),
        Direction::z_axis(),
        Direction::x_axis().negated(),
        Direction::y_axis().negated(),
        Direction::z_axis().negated(),
    ];
    for _ in 0..20 {
        let eps = random_eps(&mut rng);
        for d in &principal {
            worst = worst.max(completeness_defect(&eps, d).abs().max());
            samples += 1;
        }
        for _ in 0..50 {
            let d = random_direction(&mut rng);
            worst = worst.max(completeness_defect(&eps, &d).abs().max());
            samples += 1;
        }
    }
    CheckResult::new("completeness", samples, worst, 1e-12)
}

fn check_longitudinal_nullity(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 25);
    let n = 50;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        worst = worst.max(longitudinal_contribution(&eps).abs());
    }
    CheckResult::new("longitudinal-nullity", n, worst, 0.0)
}

fn check_localfield_scalar_limit(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 26);
    let n = 100;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let e1 = 0.5 + 7.5 * rng.random::<f64>();
        let e2 = 0.5 + 7.5 * rng.random::<f64>();
        let c = 0.2 + 2.0 * rng.random::<f64>();
        let m = UniaxialMedium::new(e1, e2).unwrap();
        let d = DipoleSplit::from_direction(&random_direction(&mut rng), PrincipalAxis::X);
        let l = LocalFieldTensor::scalar(c).unwrap();
        let corrected = rate_uniaxial_local(&m, &d, &l).gamma_normalized;
        let plain = m.rate_uniaxial_total(&d).gamma_normalized;
        worst = worst.max((corrected - c * c * plain).abs() / corrected);
    }
    CheckResult::new("localfield-scalar-limit", n, worst, 1e-12)
}

fn check_localfield_route_equivalence(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed, 27);
    let spec = QuadratureSpec::default();
    let n = 200;
    let mut worst = 0.0f64;
    for _ in 0..n {
        let eps = random_eps(&mut rng);
        let dipole = random_direction(&mut rng);
        let l = LocalFieldTensor::new(
            0.2 + 2.0 * rng.random::<f64>(),
            0.2 + 2.0 * rng.random::<f64>(),
            0.2 + 2.0 * rng.random::<f64>(),
        )
        .unwrap();
        let per_axis = match rate_biaxial_local(&eps, &dipole, &l, &spec) {
            Ok(r) => r.gamma_normalized,
            Err(RateError::ToleranceNotReached { best }) => best.gamma_normalized,
            Err(e) => panic!("local-field quadrature failed: {e}"),
        };
        let (unit, mag) = adjust_dipole(&l, &dipole).expect("positive entries");
        let adjusted = gamma_of(rate_arbitrary_dipole(&eps, &unit, &spec)) * mag * mag;
        worst = worst.max((per_axis - adjusted).abs() / per_axis);
    }
    CheckResult::new("localfield-route-equivalence", n, worst, 1e-10)
}
