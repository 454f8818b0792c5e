//! Deterministic adaptive quadrature over the unit sphere.
//!
//! The grid is a product rule: Gauss-Legendre in cos(theta) times a uniform
//! trapezoid in phi (exact for the periodic azimuth). Node sums run in a
//! fixed traversal order through a compensated accumulator, so a given spec
//! always produces bit-identical values. Refinement doubles both orders and
//! estimates the relative error from the last doubling.

use thiserror::Error;

/// Parameters of the adaptive spherical rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre order in cos(theta). At least 4.
    pub theta_rule: usize,
    /// Number of uniform azimuthal points. At least 8 and even.
    pub phi_points: usize,
    /// Target relative error for the doubling estimate.
    pub target_rel_tol: f64,
    /// Cap on the theta order during refinement.
    pub max_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            theta_rule: 64,
            phi_points: 128,
            target_rel_tol: 1e-10,
            max_order: 2048,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        theta_rule: usize,
        phi_points: usize,
        target_rel_tol: f64,
        max_order: usize,
    ) -> Result<Self, QuadratureError> {
        let spec = Self { theta_rule, phi_points, target_rel_tol, max_order };
        spec.validate()?;
        Ok(spec)
    }

    /// Default orders with a caller-chosen tolerance.
    pub fn with_tolerance(target_rel_tol: f64) -> Result<Self, QuadratureError> {
        Self::new(64, 128, target_rel_tol, 2048)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok = self.theta_rule >= 4
            && self.phi_points >= 8
            && self.phi_points.is_multiple_of(2)
            && self.target_rel_tol > 0.0
            && self.max_order >= self.theta_rule;
        if ok {
            Ok(())
        } else {
            Err(QuadratureError::InvalidSpec(*self))
        }
    }
}

/// Outcome of a spherical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// |value_N - value_2N| / |value_2N| from the last doubling.
    pub est_rel_error: f64,
    /// Gauss-Legendre order used for the reported value.
    pub theta_order: usize,
    /// Azimuthal point count used for the reported value.
    pub phi_points: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature spec {0:?}")]
    InvalidSpec(QuadratureSpec),
    #[error(
        "tolerance not reached at max order: best value {}, est rel error {:e}",
        best.value, best.est_rel_error
    )]
    ToleranceNotReached { best: QuadratureResult },
}

/// Neumaier-compensated accumulator. The running compensation recovers the
/// low-order bits lost by each addition, keeping long sums exact to the
/// final rounding.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n == 1 {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
    (nodes, weights)
}

/// Single fixed-order pass over the product grid. Components are summed
/// independently, each in (theta, phi) lexicographic order.
pub(crate) fn sphere_grid_sum<const N: usize, F>(f: &F, n_theta: usize, n_phi: usize) -> [f64; N]
where
    F: Fn(f64, f64) -> [f64; N],
{
    let (u_nodes, u_weights) = gauss_legendre(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut acc = [KahanSum::new(); N];
    for (u, wu) in u_nodes.iter().zip(&u_weights) {
        let theta = u.acos();
        for j in 0..n_phi {
            let phi = j as f64 * dphi;
            let vals = f(theta, phi);
            let w = wu * dphi;
            for (a, v) in acc.iter_mut().zip(&vals) {
                a.add(w * v);
            }
        }
    }
    let mut out = [0.0; N];
    for (o, a) in out.iter_mut().zip(&acc) {
        *o = a.value();
    }
    out
}

/// Componentwise adaptive integral; the refinement criterion applies to the
/// sum of components.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ComponentIntegral<const N: usize> {
    pub components: [f64; N],
    pub diagnostics: QuadratureResult,
    pub converged: bool,
}

pub(crate) fn integrate_sphere_components<const N: usize, F>(
    f: &F,
    spec: &QuadratureSpec,
) -> Result<ComponentIntegral<N>, QuadratureError>
where
    F: Fn(f64, f64) -> [f64; N],
{
    spec.validate()?;
    let mut n_theta = spec.theta_rule;
    let mut n_phi = spec.phi_points;
    let mut coarse = sphere_grid_sum::<N, F>(f, n_theta, n_phi);
    loop {
        let next_theta = n_theta * 2;
        let next_phi = n_phi * 2;
        if next_theta > spec.max_order {
            // Out of budget: report the current value with the last estimate
            // (or an infinite estimate if no doubling ever ran).
            let total: f64 = coarse.iter().sum();
            return Ok(ComponentIntegral {
                components: coarse,
                diagnostics: QuadratureResult {
                    value: total,
                    est_rel_error: f64::INFINITY,
                    theta_order: n_theta,
                    phi_points: n_phi,
                },
                converged: false,
            });
        }
        let fine = sphere_grid_sum::<N, F>(f, next_theta, next_phi);
        let coarse_total: f64 = coarse.iter().sum();
        let fine_total: f64 = fine.iter().sum();
        let est = (coarse_total - fine_total).abs() / fine_total.abs().max(1e-300);
        let diagnostics = QuadratureResult {
            value: fine_total,
            est_rel_error: est,
            theta_order: next_theta,
            phi_points: next_phi,
        };
        if est < spec.target_rel_tol {
            return Ok(ComponentIntegral { components: fine, diagnostics, converged: true });
        }
        if next_theta * 2 > spec.max_order {
            return Ok(ComponentIntegral { components: fine, diagnostics, converged: false });
        }
        n_theta = next_theta;
        n_phi = next_phi;
        coarse = fine;
    }
}

/// Integral of `f(theta, phi)` against the spherical measure
/// sin(theta) dtheta dphi over the full sphere, refined until the doubling
/// estimate drops below `spec.target_rel_tol`.
///
/// `f` must be a pure function of its arguments; evaluation order and the
/// reduction order are fixed, so identical specs give bit-identical results.
pub fn integrate_sphere<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64, f64) -> f64,
{
    let wrapped = |theta: f64, phi: f64| [f(theta, phi)];
    let out = integrate_sphere_components::<1, _>(&wrapped, spec)?;
    if out.converged {
        Ok(out.diagnostics)
    } else {
        Err(QuadratureError::ToleranceNotReached { best: out.diagnostics })
    }
}

/// Single-pass spherical sum at a fixed order, without refinement.
pub fn integrate_sphere_fixed<F>(f: F, n_theta: usize, n_phi: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let wrapped = |theta: f64, phi: f64| [f(theta, phi)];
    sphere_grid_sum::<1, _>(&wrapped, n_theta, n_phi)[0]
}
