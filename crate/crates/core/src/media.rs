//! Permittivity tensors, unit directions and crystal frames.
//!
//! All permittivities are relative (dimensionless, actual permittivity divided
//! by the vacuum permittivity) and the tensor is always expressed in the
//! coordinate system of its principal axes, where it is diagonal.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

/// Relative tolerance below which two principal permittivities are treated as
/// equal when classifying a medium.
pub const CLASSIFICATION_REL_TOL: f64 = 1e-12;

/// Unit-norm tolerance for [`Direction`] and orthogonality tolerance for
/// [`MaterialFrame`].
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MediaError {
    #[error("permittivity entries must be strictly positive and finite, got ({0}, {1}, {2})")]
    InvalidPermittivity(f64, f64, f64),
    #[error("direction must have finite, nonzero components, got ({0}, {1}, {2})")]
    InvalidDirection(f64, f64, f64),
    #[error("frame matrix is not a proper rotation (orthogonal, det = +1) within {UNIT_TOL:e}")]
    InvalidRotation,
    #[error("dipole split components must be non-negative with squares summing to 1, got ({0}, {1})")]
    InvalidDipoleSplit(f64, f64),
    #[error("physical context requires positive frequency and dipole moment, got ({0}, {1})")]
    InvalidPhysicalContext(f64, f64),
    #[error("medium is not uniaxial: permittivities ({0}, {1}, {2})")]
    NotUniaxial(f64, f64, f64),
}

/// One of the three crystal principal axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrincipalAxis {
    X,
    Y,
    Z,
}

impl PrincipalAxis {
    pub fn index(self) -> usize {
        match self {
            PrincipalAxis::X => 0,
            PrincipalAxis::Y => 1,
            PrincipalAxis::Z => 2,
        }
    }

    pub fn unit(self) -> Direction {
        let mut v = Vector3::zeros();
        v[self.index()] = 1.0;
        Direction(v)
    }
}

/// Symmetry class of a permittivity tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anisotropy {
    Isotropic,
    /// Exactly two principal permittivities coincide; `axis` is the
    /// distinguished (odd-one-out) axis.
    Uniaxial { axis: PrincipalAxis },
    Biaxial,
}

/// Diagonal relative permittivity tensor of a lossless dielectric, in its
/// principal-axis frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermittivityTensor {
    eps_x: f64,
    eps_y: f64,
    eps_z: f64,
}

impl PermittivityTensor {
    /// Builds a tensor from the three principal relative permittivities.
    /// Entries must be strictly positive and finite.
    pub fn new(eps_x: f64, eps_y: f64, eps_z: f64) -> Result<Self, MediaError> {
        let ok = |e: f64| e.is_finite() && e > 0.0;
        if ok(eps_x) && ok(eps_y) && ok(eps_z) {
            Ok(Self { eps_x, eps_y, eps_z })
        } else {
            Err(MediaError::InvalidPermittivity(eps_x, eps_y, eps_z))
        }
    }

    pub fn isotropic(eps: f64) -> Result<Self, MediaError> {
        Self::new(eps, eps, eps)
    }

    pub fn eps_x(&self) -> f64 {
        self.eps_x
    }

    pub fn eps_y(&self) -> f64 {
        self.eps_y
    }

    pub fn eps_z(&self) -> f64 {
        self.eps_z
    }

    pub fn entry(&self, axis: PrincipalAxis) -> f64 {
        self.as_vector()[axis.index()]
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.eps_x, self.eps_y, self.eps_z)
    }

    pub fn as_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&self.as_vector())
    }

    /// Applies the tensor to a vector (component-wise scaling).
    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.as_vector().component_mul(v)
    }

    /// Quadratic form v . (eps v).
    pub fn quadratic_form(&self, v: &Vector3<f64>) -> f64 {
        self.eps_x * v.x * v.x + self.eps_y * v.y * v.y + self.eps_z * v.z * v.z
    }

    pub fn inverse_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(
            1.0 / self.eps_x,
            1.0 / self.eps_y,
            1.0 / self.eps_z,
        ))
    }

    pub fn determinant(&self) -> f64 {
        self.eps_x * self.eps_y * self.eps_z
    }

    /// Component-wise relabeling: `permuted([i, j, k])` returns the tensor
    /// whose x, y, z entries are the i-th, j-th, k-th entries of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let v = self.as_vector();
        Self {
            eps_x: v[perm[0]],
            eps_y: v[perm[1]],
            eps_z: v[perm[2]],
        }
    }

    /// Classifies the tensor as isotropic, uniaxial or biaxial using
    /// [`CLASSIFICATION_REL_TOL`].
    pub fn classification(&self) -> Anisotropy {
        let close = |a: f64, b: f64| (a - b).abs() <= CLASSIFICATION_REL_TOL * a.max(b);
        let xy = close(self.eps_x, self.eps_y);
        let yz = close(self.eps_y, self.eps_z);
        let xz = close(self.eps_x, self.eps_z);
        if xy && yz && xz {
            Anisotropy::Isotropic
        } else if xy {
            Anisotropy::Uniaxial { axis: PrincipalAxis::Z }
        } else if yz {
            Anisotropy::Uniaxial { axis: PrincipalAxis::X }
        } else if xz {
            Anisotropy::Uniaxial { axis: PrincipalAxis::Y }
        } else {
            Anisotropy::Biaxial
        }
    }
}

/// A unit 3-vector: either a wave-propagation direction or a dipole
/// orientation. Always normalized on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Vector3<f64>);

impl Direction {
    /// Normalizes the given components. Errors on non-finite input or a
    /// vector too short to normalize reliably.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, MediaError> {
        let v = Vector3::new(x, y, z);
        let n = v.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(MediaError::InvalidDirection(x, y, z));
        }
        Ok(Self(v / n))
    }

    /// Direction at polar angle `theta` from the x-axis and azimuth `phi`
    /// in the y-z plane: (cos t, sin t cos p, sin t sin p).
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self(Vector3::new(ct, st * cp, st * sp))
    }

    pub fn x_axis() -> Self {
        Self(Vector3::x())
    }

    pub fn y_axis() -> Self {
        Self(Vector3::y())
    }

    pub fn z_axis() -> Self {
        Self(Vector3::z())
    }

    /// Wraps a vector that is already unit-norm (within [`UNIT_TOL`]).
    pub(crate) fn from_unit_vector(v: Vector3<f64>) -> Self {
        debug_assert!((v.norm() - 1.0).abs() < UNIT_TOL);
        Self(v)
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn negated(&self) -> Self {
        Self(-self.0)
    }
}

/// Proper rotation mapping lab-frame vectors into the crystal principal-axis
/// frame, for callers whose dipoles are not specified in crystal axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialFrame {
    rotation: Matrix3<f64>,
}

impl MaterialFrame {
    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity() }
    }

    /// Validates that `rotation` is orthogonal with determinant +1 within
    /// [`UNIT_TOL`].
    pub fn new(rotation: Matrix3<f64>) -> Result<Self, MediaError> {
        let gram = rotation.transpose() * rotation;
        let ortho_defect = (gram - Matrix3::identity()).abs().max();
        let det_defect = (rotation.determinant() - 1.0).abs();
        if ortho_defect <= UNIT_TOL && det_defect <= UNIT_TOL {
            Ok(Self { rotation })
        } else {
            Err(MediaError::InvalidRotation)
        }
    }

    /// Builds the frame from nine row-major matrix entries.
    pub fn from_row_major(vals: [f64; 9]) -> Result<Self, MediaError> {
        Self::new(Matrix3::new(
            vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8],
        ))
    }

    /// Rotation by `angle` (radians) about `axis`.
    pub fn from_axis_angle(axis: &Direction, angle: f64) -> Self {
        let rot = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_normalize(*axis.as_vector()),
            angle,
        );
        Self { rotation: *rot.matrix() }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    /// Rotates a lab-frame direction into the crystal frame. The result is
    /// re-normalized so rounding cannot degrade the unit invariant.
    pub fn to_crystal_frame(&self, v: &Direction) -> Direction {
        let rotated = self.rotation * v.as_vector();
        Direction::new(rotated.x, rotated.y, rotated.z)
            .expect("rotation of a unit vector stays normalizable")
    }
}
