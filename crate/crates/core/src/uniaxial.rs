//! Closed-form emission rates in uniaxial media, the angular distribution of
//! the parallel-dipole rate, peak-emission analysis, orientation averaging
//! and conversion to absolute SI rates.
//!
//! Rates are normalized to the vacuum rate gamma_vac; permittivities are
//! relative. The distinguished axis carries eps1, the transverse plane eps2.

use crate::media::{MediaError, PermittivityTensor, PrincipalAxis};
use crate::rate::{BranchShare, MethodTag, RateResult};

/// Uniaxial medium: eps1 along the distinguished axis, eps2 in the
/// transverse plane. The axis defaults to x so the tensor reads
/// diag(eps1, eps2, eps2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialMedium {
    eps1: f64,
    eps2: f64,
    axis: PrincipalAxis,
}

impl UniaxialMedium {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self, MediaError> {
        Self::with_axis(eps1, eps2, PrincipalAxis::X)
    }

    pub fn with_axis(eps1: f64, eps2: f64, axis: PrincipalAxis) -> Result<Self, MediaError> {
        let ok = |e: f64| e.is_finite() && e > 0.0;
        if ok(eps1) && ok(eps2) {
            Ok(Self { eps1, eps2, axis })
        } else {
            Err(MediaError::InvalidPermittivity(eps1, eps2, eps2))
        }
    }

    /// Reads a uniaxial (or isotropic, with x as the nominal axis) tensor.
    pub fn from_tensor(eps: &PermittivityTensor) -> Result<Self, MediaError> {
        use crate::media::Anisotropy;
        match eps.classification() {
            Anisotropy::Isotropic => Self::with_axis(eps.eps_x(), eps.eps_x(), PrincipalAxis::X),
            Anisotropy::Uniaxial { axis } => {
                let eps1 = eps.entry(axis);
                let other = match axis {
                    PrincipalAxis::X => eps.eps_y(),
                    PrincipalAxis::Y => eps.eps_z(),
                    PrincipalAxis::Z => eps.eps_x(),
                };
                Self::with_axis(eps1, other, axis)
            }
            Anisotropy::Biaxial => {
                Err(MediaError::NotUniaxial(eps.eps_x(), eps.eps_y(), eps.eps_z()))
            }
        }
    }

    pub fn to_tensor(&self) -> PermittivityTensor {
        let (x, y, z) = match self.axis {
            PrincipalAxis::X => (self.eps1, self.eps2, self.eps2),
            PrincipalAxis::Y => (self.eps2, self.eps1, self.eps2),
            PrincipalAxis::Z => (self.eps2, self.eps2, self.eps1),
        };
        PermittivityTensor::new(x, y, z).expect("validated entries")
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn axis(&self) -> PrincipalAxis {
        self.axis
    }

    /// Ordinary-wave rate. Only the in-plane dipole component couples to
    /// ordinary waves, whose index is direction-independent:
    /// Gamma_o = (3/4) sqrt(eps2) d_perp^2.
    ///
    /// The 3/4 is the ratio of the ordinary branch's 1/(4 pi) solid-angle
    /// prefactor to the 1/(3 pi) prefactor inside gamma_vac.
    pub fn rate_ordinary(&self, d: &DipoleSplit) -> f64 {
        0.75 * self.eps2.sqrt() * d.d_perp() * d.d_perp()
    }

    /// Extraordinary-wave rate:
    /// Gamma_e = eps1 d_perp^2 / (4 sqrt(eps2)) + sqrt(eps2) d_par^2.
    /// Not expressible through the extraordinary index alone.
    pub fn rate_extraordinary(&self, d: &DipoleSplit) -> f64 {
        let dperp2 = d.d_perp() * d.d_perp();
        let dpar2 = d.d_par() * d.d_par();
        self.eps1 * dperp2 / (4.0 * self.eps2.sqrt()) + self.eps2.sqrt() * dpar2
    }

    /// Total rate with the ordinary/extraordinary breakdown. An axis-parallel
    /// dipole radiates at the rate of an isotropic eps2 medium.
    ///
    /// The total is evaluated from the combined closed form
    /// Gamma = (eps1 + 3 eps2)/(4 sqrt(eps2)) d_perp^2 + sqrt(eps2) d_par^2
    /// rather than by summing the branch rates, so the decomposition
    /// identity stays an independent cross-check.
    pub fn rate_uniaxial_total(&self, d: &DipoleSplit) -> RateResult {
        let dperp2 = d.d_perp() * d.d_perp();
        let dpar2 = d.d_par() * d.d_par();
        let gamma = (self.eps1 + 3.0 * self.eps2) / (4.0 * self.eps2.sqrt()) * dperp2
            + self.eps2.sqrt() * dpar2;
        RateResult {
            gamma_normalized: gamma,
            branches: [
                BranchShare { label: "ordinary", gamma: self.rate_ordinary(d) },
                BranchShare { label: "extraordinary", gamma: self.rate_extraordinary(d) },
            ],
            quadrature: None,
            method: MethodTag::ClosedForm,
        }
    }

    /// Extraordinary refractive index of light propagating at angle `theta`
    /// from the distinguished axis:
    /// n_e = (cos^2 t / eps2 + sin^2 t / eps1)^{-1/2}.
    pub fn extraordinary_index(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        (c * c / self.eps2 + s * s / self.eps1).powf(-0.5)
    }

    /// Angular distribution f(theta) = n_e(theta)^5 sin^2(theta) / eps1^2 of
    /// the emission from an axis-parallel dipole, normalized so that
    /// Gamma_par = (3/4) * integral of f(theta) sin(theta) dtheta.
    pub fn angular_distribution(&self, theta: f64) -> f64 {
        let ne = self.extraordinary_index(theta);
        let s = theta.sin();
        ne.powi(5) * s * s / (self.eps1 * self.eps1)
    }

    /// Angles of maximal emission for an axis-parallel dipole.
    ///
    /// For r = eps2/eps1 > 5/3 emission splits into two lobes at
    /// pi/2 -+ dtheta with dtheta = arccos sqrt(2 / (3 (r - 1))); otherwise
    /// the single maximum sits at pi/2. Each returned angle is verified
    /// against a numeric argmax of f before being returned.
    pub fn peak_emission_angles(&self) -> Vec<f64> {
        use std::f64::consts::FRAC_PI_2;
        let r = self.eps2 / self.eps1;
        let angles = if r > 5.0 / 3.0 {
            let dtheta = (2.0 / (3.0 * (r - 1.0))).sqrt().acos();
            vec![FRAC_PI_2 - dtheta, FRAC_PI_2 + dtheta]
        } else {
            vec![FRAC_PI_2]
        };
        for &angle in &angles {
            let lo = (angle - 0.2).max(0.0);
            let hi = (angle + 0.2).min(std::f64::consts::PI);
            let numeric = golden_section_argmax(|t| self.angular_distribution(t), lo, hi);
            assert!(
                (numeric - angle).abs() < 1e-3,
                "peak angle {angle} disagrees with numeric argmax {numeric}"
            );
        }
        angles
    }

    /// Rate averaged over uniformly random dipole orientations:
    /// Gamma_avg = eps1 / (6 sqrt(eps2)) + (5/6) sqrt(eps2), i.e. the total
    /// rate at the isotropic moments <d_par^2> = 1/3, <d_perp^2> = 2/3.
    pub fn rate_random_orientation(&self) -> f64 {
        self.eps1 / (6.0 * self.eps2.sqrt()) + 5.0 / 6.0 * self.eps2.sqrt()
    }
}

fn golden_section_argmax<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..120 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Dipole orientation split against the distinguished axis: magnitude along
/// the axis and in the transverse plane, with squares summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSplit {
    d_par: f64,
    d_perp: f64,
}

impl DipoleSplit {
    pub fn new(d_par: f64, d_perp: f64) -> Result<Self, MediaError> {
        let sum = d_par * d_par + d_perp * d_perp;
        if d_par >= 0.0 && d_perp >= 0.0 && (sum - 1.0).abs() <= 1e-12 {
            Ok(Self { d_par, d_perp })
        } else {
            Err(MediaError::InvalidDipoleSplit(d_par, d_perp))
        }
    }

    /// Fully axis-parallel dipole.
    pub fn parallel() -> Self {
        Self { d_par: 1.0, d_perp: 0.0 }
    }

    /// Fully in-plane dipole.
    pub fn in_plane() -> Self {
        Self { d_par: 0.0, d_perp: 1.0 }
    }

    /// Splits a unit dipole direction against `axis`.
    pub fn from_direction(d: &crate::media::Direction, axis: PrincipalAxis) -> Self {
        let v = d.as_vector();
        let i = axis.index();
        let d_par = v[i].abs();
        let d_perp = (v[(i + 1) % 3].powi(2) + v[(i + 2) % 3].powi(2)).sqrt();
        Self { d_par, d_perp }
    }

    pub fn d_par(&self) -> f64 {
        self.d_par
    }

    pub fn d_perp(&self) -> f64 {
        self.d_perp
    }
}

// CODATA 2018 values.
const HBAR: f64 = 1.054571817e-34;
const SPEED_OF_LIGHT: f64 = 299792458.0;
const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

/// Transition frequency and dipole moment of a physical emitter; the only
/// place where absolute SI constants enter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalContext {
    omega: f64,
    dipole_moment: f64,
}

impl PhysicalContext {
    /// `omega` in rad/s, `dipole_moment` in C m; both must be positive.
    pub fn new(omega: f64, dipole_moment: f64) -> Result<Self, MediaError> {
        if omega.is_finite() && omega > 0.0 && dipole_moment.is_finite() && dipole_moment > 0.0 {
            Ok(Self { omega, dipole_moment })
        } else {
            Err(MediaError::InvalidPhysicalContext(omega, dipole_moment))
        }
    }

    /// Free-space rate gamma_vac = omega^3 d^2 / (3 pi eps0 hbar c^3) in 1/s.
    pub fn gamma_vac(&self) -> f64 {
        let d2 = self.dipole_moment * self.dipole_moment;
        self.omega.powi(3) * d2
            / (3.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * HBAR * SPEED_OF_LIGHT.powi(3))
    }
}

/// Converts a normalized rate into an absolute rate in 1/s.
pub fn to_absolute_rate(ctx: &PhysicalContext, gamma_normalized: f64) -> f64 {
    gamma_normalized * ctx.gamma_vac()
}
