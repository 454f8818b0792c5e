//! Python extension module `_aniso_emit`: the library's main types and
//! operations for scripting and plotting workflows.

use aniso_emit as core;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Diagonal relative permittivity tensor in crystal axes.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct PermittivityTensor {
    inner: core::PermittivityTensor,
}

#[pymethods]
impl PermittivityTensor {
    #[new]
    fn new(eps_x: f64, eps_y: f64, eps_z: f64) -> PyResult<Self> {
        Ok(Self { inner: core::PermittivityTensor::new(eps_x, eps_y, eps_z).map_err(value_err)? })
    }

    #[getter]
    fn eps_x(&self) -> f64 {
        self.inner.eps_x()
    }

    #[getter]
    fn eps_y(&self) -> f64 {
        self.inner.eps_y()
    }

    #[getter]
    fn eps_z(&self) -> f64 {
        self.inner.eps_z()
    }

    /// "isotropic", "uniaxial" or "biaxial".
    fn classification(&self) -> &'static str {
        match self.inner.classification() {
            core::Anisotropy::Isotropic => "isotropic",
            core::Anisotropy::Uniaxial { .. } => "uniaxial",
            core::Anisotropy::Biaxial => "biaxial",
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "PermittivityTensor({}, {}, {})",
            self.inner.eps_x(),
            self.inner.eps_y(),
            self.inner.eps_z()
        )
    }
}

/// Unit direction (wave vector or dipole orientation); auto-normalized.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Direction {
    inner: core::Direction,
}

#[pymethods]
impl Direction {
    #[new]
    fn new(x: f64, y: f64, z: f64) -> PyResult<Self> {
        Ok(Self { inner: core::Direction::new(x, y, z).map_err(value_err)? })
    }

    #[getter]
    fn x(&self) -> f64 {
        self.inner.x()
    }

    #[getter]
    fn y(&self) -> f64 {
        self.inner.y()
    }

    #[getter]
    fn z(&self) -> f64 {
        self.inner.z()
    }

    fn as_tuple(&self) -> (f64, f64, f64) {
        (self.inner.x(), self.inner.y(), self.inner.z())
    }

    fn __repr__(&self) -> String {
        format!("Direction({}, {}, {})", self.inner.x(), self.inner.y(), self.inner.z())
    }
}

/// One polarization branch at a wave direction.
#[pyclass(frozen, get_all)]
struct ModeSolution {
    polarization: (f64, f64, f64),
    eps_eff: f64,
    n_eff: f64,
    branch: String,
}

fn mode_to_py(m: &core::ModeSolution) -> ModeSolution {
    ModeSolution {
        polarization: (m.polarization.x(), m.polarization.y(), m.polarization.z()),
        eps_eff: m.eps_eff,
        n_eff: m.n_eff,
        branch: m.branch.as_str().to_string(),
    }
}

/// Normalized emission rate with branch breakdown and diagnostics.
#[pyclass(frozen, get_all)]
struct RateResult {
    gamma: f64,
    method: String,
    branches: Vec<(String, f64)>,
    quad_order: Option<usize>,
    quad_error: Option<f64>,
    converged: bool,
}

fn rate_to_py(r: &core::RateResult, converged: bool) -> RateResult {
    RateResult {
        gamma: r.gamma_normalized,
        method: r.method.as_str().to_string(),
        branches: r
            .branches
            .iter()
            .map(|b| (b.label.to_string(), b.gamma))
            .collect(),
        quad_order: r.quadrature.map(|q| q.theta_order),
        quad_error: r.quadrature.map(|q| q.est_rel_error),
        converged,
    }
}

fn unwrap_rate(outcome: Result<core::RateResult, core::RateError>) -> PyResult<RateResult> {
    match outcome {
        Ok(r) => Ok(rate_to_py(&r, true)),
        Err(core::RateError::ToleranceNotReached { best }) => Ok(rate_to_py(&best, false)),
        Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
    }
}

fn spec_for(tol: f64) -> PyResult<core::QuadratureSpec> {
    core::QuadratureSpec::with_tolerance(tol).map_err(value_err)
}

/// The two transverse modes at `kappa`, sorted by eps_eff descending.
#[pyfunction]
fn solve_modes(eps: &PermittivityTensor, kappa: &Direction) -> (ModeSolution, ModeSolution) {
    let pair = core::solve_modes(&eps.inner, &kappa.inner);
    (mode_to_py(pair.high()), mode_to_py(pair.low()))
}

/// Closed-form uniaxial rate; eps1 along the distinguished axis.
#[pyfunction]
fn rate_uniaxial(eps1: f64, eps2: f64, d_par: f64, d_perp: f64) -> PyResult<RateResult> {
    let medium = core::UniaxialMedium::new(eps1, eps2).map_err(value_err)?;
    let split = core::DipoleSplit::new(d_par, d_perp).map_err(value_err)?;
    Ok(rate_to_py(&medium.rate_uniaxial_total(&split), true))
}

/// Quadrature rate for an arbitrary diagonal permittivity tensor.
#[pyfunction]
#[pyo3(signature = (eps, dipole, tol = 1e-10))]
fn rate_numeric(eps: &PermittivityTensor, dipole: &Direction, tol: f64) -> PyResult<RateResult> {
    unwrap_rate(core::rate_numeric(&eps.inner, &dipole.inner, &spec_for(tol)?))
}

/// Closed-form interpolation-model rate.
#[pyfunction]
fn rate_model(eps: &PermittivityTensor, dipole: &Direction) -> RateResult {
    rate_to_py(&core::rate_model(&eps.inner, &dipole.inner), true)
}

/// Rate through the Green's-function route (cross-check of rate_numeric).
#[pyfunction]
#[pyo3(signature = (eps, dipole, tol = 1e-10))]
fn rate_greens(eps: &PermittivityTensor, dipole: &Direction, tol: f64) -> PyResult<f64> {
    match core::imag_greens_trace(&eps.inner, &dipole.inner, &spec_for(tol)?) {
        Ok(r) => Ok(r.gamma_normalized),
        Err(core::RateError::ToleranceNotReached { best }) => Ok(best.gamma_normalized),
        Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
    }
}

/// Local-field corrected rate with a diagonal correction (l1, l2, l3).
#[pyfunction]
#[pyo3(signature = (eps, dipole, local_field, tol = 1e-10))]
fn rate_local(
    eps: &PermittivityTensor,
    dipole: &Direction,
    local_field: (f64, f64, f64),
    tol: f64,
) -> PyResult<RateResult> {
    let l = core::LocalFieldTensor::new(local_field.0, local_field.1, local_field.2)
        .map_err(value_err)?;
    unwrap_rate(core::rate_biaxial_local(&eps.inner, &dipole.inner, &l, &spec_for(tol)?))
}

/// Adjusted dipole L^T d as (unit_direction, magnitude).
#[pyfunction]
fn adjust_dipole(local_field: (f64, f64, f64), dipole: &Direction) -> PyResult<(Direction, f64)> {
    let l = core::LocalFieldTensor::new(local_field.0, local_field.1, local_field.2)
        .map_err(value_err)?;
    let (unit, magnitude) = core::adjust_dipole(&l, &dipole.inner).map_err(value_err)?;
    Ok((Direction { inner: unit }, magnitude))
}

/// Angular distribution f(theta) of an axis-parallel dipole.
#[pyfunction]
fn angular_distribution(eps1: f64, eps2: f64, theta: f64) -> PyResult<f64> {
    let medium = core::UniaxialMedium::new(eps1, eps2).map_err(value_err)?;
    Ok(medium.angular_distribution(theta))
}

/// Angles of maximal emission for an axis-parallel dipole.
#[pyfunction]
fn peak_emission_angles(eps1: f64, eps2: f64) -> PyResult<Vec<f64>> {
    let medium = core::UniaxialMedium::new(eps1, eps2).map_err(value_err)?;
    Ok(medium.peak_emission_angles())
}

/// Rate averaged over random dipole orientations.
#[pyfunction]
fn random_orientation_rate(eps1: f64, eps2: f64) -> PyResult<f64> {
    let medium = core::UniaxialMedium::new(eps1, eps2).map_err(value_err)?;
    Ok(medium.rate_random_orientation())
}

/// Interpolation-model intermediates for a dipole along z.
#[pyfunction]
fn interp_values<'py>(
    py: Python<'py>,
    eps: &PermittivityTensor,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    use pyo3::types::PyDict;
    let b = core::interp_breakdown(&eps.inner);
    let dict = PyDict::new(py);
    dict.set_item("gamma_a", b.gamma_a)?;
    dict.set_item("gamma_b", b.gamma_b)?;
    dict.set_item("gamma_lin_x", b.gamma_lin_x)?;
    dict.set_item("gamma_lin_y", b.gamma_lin_y)?;
    dict.set_item("gamma_model", b.gamma_model)?;
    dict.set_item("n_plus", b.n_plus)?;
    dict.set_item("n_minus", b.n_minus)?;
    dict.set_item("n_par", b.n_par)?;
    Ok(dict)
}

/// Free-space rate gamma_vac in 1/s for omega (rad/s) and dipole (C m).
#[pyfunction]
fn gamma_vac(omega: f64, dipole_si: f64) -> PyResult<f64> {
    let ctx = core::PhysicalContext::new(omega, dipole_si).map_err(value_err)?;
    Ok(ctx.gamma_vac())
}

/// Full invariant suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (seed = 42))]
fn run_validation<'py>(py: Python<'py>, seed: u64) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    use pyo3::types::PyDict;
    let report = core::run_validation(seed, false);
    report
        .checks
        .iter()
        .map(|c| {
            let dict = PyDict::new(py);
            dict.set_item("name", c.name)?;
            dict.set_item("samples", c.samples)?;
            dict.set_item("worst_defect", c.worst_defect)?;
            dict.set_item("tolerance", c.tolerance)?;
            dict.set_item("passed", c.passed)?;
            Ok(dict)
        })
        .collect()
}

#[pymodule]
fn _aniso_emit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PermittivityTensor>()?;
    m.add_class::<Direction>()?;
    m.add_class::<ModeSolution>()?;
    m.add_class::<RateResult>()?;
    m.add_function(wrap_pyfunction!(solve_modes, m)?)?;
    m.add_function(wrap_pyfunction!(rate_uniaxial, m)?)?;
    m.add_function(wrap_pyfunction!(rate_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(rate_model, m)?)?;
    m.add_function(wrap_pyfunction!(rate_greens, m)?)?;
    m.add_function(wrap_pyfunction!(rate_local, m)?)?;
    m.add_function(wrap_pyfunction!(adjust_dipole, m)?)?;
    m.add_function(wrap_pyfunction!(angular_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(peak_emission_angles, m)?)?;
    m.add_function(wrap_pyfunction!(random_orientation_rate, m)?)?;
    m.add_function(wrap_pyfunction!(interp_values, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_vac, m)?)?;
    m.add_function(wrap_pyfunction!(run_validation, m)?)?;
    Ok(())
}
