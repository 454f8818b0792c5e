//! Spontaneous emission rates of electric dipoles embedded in lossless
//! anisotropic dielectrics.
//!
//! The crate computes the normalized rate Gamma = gamma / gamma_vac for a
//! dipole in a homogeneous medium with a diagonal relative permittivity
//! tensor:
//!
//! * exact closed forms for uniaxial media ([`uniaxial`]), including the
//!   angular emission distribution, peak-angle analysis and the
//!   random-orientation average;
//! * spherical-quadrature evaluation of the general (biaxial) rate integral
//!   ([`biaxial`]) on top of the plane-wave eigenmodes of the anisotropic
//!   wave equation ([`modes`]);
//! * the closed-form interpolation model for biaxial media and its error
//!   report against the numeric rate ([`interp`]);
//! * an independent Green's-function route used as a cross-check
//!   ([`greens`]);
//! * tensor local-field corrections through the adjusted-dipole
//!   substitution ([`localfield`]);
//! * a seeded validation suite covering every invariant ([`validate`]).
//!
//! Everything is deterministic: quadrature uses fixed-order product grids
//! with compensated reduction, so identical inputs give bit-identical
//! outputs.

pub mod biaxial;
pub mod greens;
pub mod interp;
pub mod localfield;
pub mod media;
pub mod modes;
pub mod quadrature;
pub mod rate;
pub mod uniaxial;
pub mod validate;

pub use biaxial::{rate_arbitrary_dipole, rate_integrand, rate_numeric};
pub use greens::{completeness_defect, imag_greens_trace, longitudinal_contribution, GreensRate};
pub use interp::{
    endpoint_rates, interp_breakdown, interp_linear_in_x, interp_linear_in_y, model_error_report,
    rate_model, InterpBreakdown, ModelErrorReport, ModelErrorRow,
};
pub use localfield::{adjust_dipole, rate_biaxial_local, rate_uniaxial_local, LocalFieldTensor};
pub use media::{
    Anisotropy, Direction, MaterialFrame, MediaError, PermittivityTensor, PrincipalAxis,
};
pub use modes::{
    build_wave_matrix, mode_normalization, solve_modes, solve_modes_numeric,
    symmetrized_wave_matrix, BranchLabel, ModePair, ModeSolution,
};
pub use quadrature::{
    integrate_sphere, integrate_sphere_fixed, QuadratureError, QuadratureResult, QuadratureSpec,
};
pub use rate::{BranchShare, MethodTag, RateError, RateResult};
pub use uniaxial::{to_absolute_rate, DipoleSplit, PhysicalContext, UniaxialMedium};
pub use validate::{run_validation, CheckResult, ValidationReport};
