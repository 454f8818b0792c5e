//! Plane-wave eigenmodes of the anisotropic wave equation.
//!
//! For a unit wave direction kappa the transverse modes are eigenpairs of
//! M = eps^{-1} (I - kappa kappa^T) in relative units: an eigenvalue lambda
//! corresponds to an effective relative permittivity 1/lambda. The generic
//! path uses closed-form branch solutions; directions where the closed-form
//! eigenvectors become 0/0 fall back to a dense symmetric eigensolve.

use crate::media::{Anisotropy, Direction, PermittivityTensor, PrincipalAxis};
use nalgebra::{Matrix3, Vector3};

/// Relative eps_eff separation below which the two branches are treated as
/// degenerate (optic axis or isotropic medium).
pub const DEGENERACY_REL_TOL: f64 = 1e-9;

/// Relative proximity of a branch permittivity to a principal permittivity
/// below which the closed-form eigenvector is considered singular and the
/// dense fallback is used instead. The component formulas lose roughly
/// eps_machine / distance digits near their poles, so the guard must stay
/// wide enough that the closed form keeps ~13 significant digits.
pub const SINGULAR_FORMULA_REL_TOL: f64 = 1e-3;

/// Which solution branch a mode belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchLabel {
    Ordinary,
    Extraordinary,
    Plus,
    Minus,
    Degenerate1,
    Degenerate2,
}

impl BranchLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchLabel::Ordinary => "ordinary",
            BranchLabel::Extraordinary => "extraordinary",
            BranchLabel::Plus => "plus",
            BranchLabel::Minus => "minus",
            BranchLabel::Degenerate1 => "degenerate-1",
            BranchLabel::Degenerate2 => "degenerate-2",
        }
    }
}

/// One polarization branch at a fixed wave direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSolution {
    /// Unit electric-field eigenvector.
    pub polarization: Direction,
    /// Effective relative permittivity of the branch.
    pub eps_eff: f64,
    /// Effective refractive index, sqrt(eps_eff).
    pub n_eff: f64,
    pub branch: BranchLabel,
}

/// The two transverse branches at one direction, sorted by eps_eff
/// descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair {
    pub modes: [ModeSolution; 2],
    /// Set when the two branch permittivities coincide within
    /// [`DEGENERACY_REL_TOL`]; the returned vectors are then an arbitrary
    /// eps-orthogonal pair spanning the transverse eigenspace.
    pub degenerate: bool,
}

impl ModePair {
    pub fn high(&self) -> &ModeSolution {
        &self.modes[0]
    }

    pub fn low(&self) -> &ModeSolution {
        &self.modes[1]
    }
}

/// Wave-equation matrix M_ij = (1/eps_i)(delta_ij - kappa_i kappa_j) in
/// relative units. Its nonzero eigenvalues are the reciprocals of the branch
/// permittivities; kappa itself spans the kernel.
pub fn build_wave_matrix(eps: &PermittivityTensor, kappa: &Direction) -> Matrix3<f64> {
    let k = kappa.as_vector();
    let proj = Matrix3::identity() - k * k.transpose();
    let inv = eps.as_vector().map(|e| 1.0 / e);
    let mut m = proj;
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] *= inv[i];
        }
    }
    m
}

/// The symmetric similarity transform S = eps^{-1/2} (I - kk^T) eps^{-1/2},
/// sharing the eigenvalues of the wave matrix.
pub fn symmetrized_wave_matrix(eps: &PermittivityTensor, kappa: &Direction) -> Matrix3<f64> {
    let k = kappa.as_vector();
    let proj = Matrix3::identity() - k * k.transpose();
    let si = eps.as_vector().map(|e| 1.0 / e.sqrt());
    let mut s = proj;
    for i in 0..3 {
        for j in 0..3 {
            s[(i, j)] *= si[i] * si[j];
        }
    }
    s
}

/// Quantization prefactor denominator e . (eps e) for a unit polarization.
pub fn mode_normalization(eps: &PermittivityTensor, mode: &ModeSolution) -> f64 {
    eps.quadratic_form(mode.polarization.as_vector())
}

// Deterministic sign convention: first component above threshold is positive.
fn canonical_sign(v: Vector3<f64>) -> Vector3<f64> {
    for i in 0..3 {
        if v[i].abs() > 1e-12 {
            return if v[i] < 0.0 { -v } else { v };
        }
    }
    v
}

fn make_mode(e: Vector3<f64>, eps_eff: f64, branch: BranchLabel) -> ModeSolution {
    let unit = canonical_sign(e.normalize());
    ModeSolution {
        polarization: Direction::from_unit_vector(unit),
        eps_eff,
        n_eff: eps_eff.sqrt(),
        branch,
    }
}

/// Branch permittivities from the closed forms, sorted descending. Valid for
/// any classification (the biaxial expressions reduce to the uniaxial and
/// isotropic ones).
fn branch_permittivities(eps: &PermittivityTensor, kappa: &Direction) -> (f64, f64) {
    match eps.classification() {
        Anisotropy::Isotropic => (eps.eps_x(), eps.eps_x()),
        Anisotropy::Uniaxial { axis } => {
            let (eps1, eps2) = uniaxial_pair(eps, axis);
            let eps_o = eps2;
            let eps_e = eps1 * eps2 / eps.quadratic_form(kappa.as_vector());
            if eps_e >= eps_o {
                (eps_e, eps_o)
            } else {
                (eps_o, eps_e)
            }
        }
        Anisotropy::Biaxial => {
            let ev = eps.as_vector();
            let k = kappa.as_vector();
            let trace = ev.x + ev.y + ev.z;
            let t: f64 = (0..3).map(|i| ev[i] * (trace - ev[i]) * k[i] * k[i]).sum();
            let det = eps.determinant();
            let q = eps.quadratic_form(k);
            let s = (t * t - 4.0 * det * q).max(0.0).sqrt();
            // eps_minus = 2 det / (t - s) >= eps_plus = 2 det / (t + s)
            (2.0 * det / (t - s), 2.0 * det / (t + s))
        }
    }
}

fn uniaxial_pair(eps: &PermittivityTensor, axis: PrincipalAxis) -> (f64, f64) {
    let ev = eps.as_vector();
    let i = axis.index();
    let eps1 = ev[i];
    let eps2 = ev[(i + 1) % 3];
    (eps1, eps2)
}

// Cyclic index map putting the distinguished axis first, so the closed-form
// eigenvectors can be written in the frame where eps = diag(eps1, eps2, eps2).
fn axis_permutation(axis: PrincipalAxis) -> [usize; 3] {
    match axis {
        PrincipalAxis::X => [0, 1, 2],
        PrincipalAxis::Y => [1, 2, 0],
        PrincipalAxis::Z => [2, 0, 1],
    }
}

fn solve_uniaxial_closed(
    eps: &PermittivityTensor,
    kappa: &Direction,
    axis: PrincipalAxis,
) -> ModePair {
    let (eps1, eps2) = uniaxial_pair(eps, axis);
    let perm = axis_permutation(axis);
    let kv = kappa.as_vector();
    let k = Vector3::new(kv[perm[0]], kv[perm[1]], kv[perm[2]]);

    // Ordinary: polarization in the eps2-plane, index independent of
    // direction. Extraordinary: the branch that sees the anisotropy.
    let e_o = Vector3::new(0.0, -k.z, k.y);
    let e_e = Vector3::new(
        -eps2 * (k.y * k.y + k.z * k.z),
        eps1 * k.x * k.y,
        eps1 * k.x * k.z,
    );

    let unpermute = |v: Vector3<f64>| {
        let mut out = Vector3::zeros();
        for (local_idx, &actual_idx) in perm.iter().enumerate() {
            out[actual_idx] = v[local_idx];
        }
        out
    };

    let eps_o = eps2;
    let eps_e = eps1 * eps2 / eps.quadratic_form(kv);
    let ordinary = make_mode(unpermute(e_o), eps_o, BranchLabel::Ordinary);
    let extraordinary = make_mode(unpermute(e_e), eps_e, BranchLabel::Extraordinary);
    let modes = if eps_e >= eps_o {
        [extraordinary, ordinary]
    } else {
        [ordinary, extraordinary]
    };
    ModePair { modes, degenerate: false }
}

fn solve_biaxial_closed(
    eps: &PermittivityTensor,
    kappa: &Direction,
    eps_minus: f64,
    eps_plus: f64,
) -> Option<ModePair> {
    let ev = eps.as_vector();
    let k = kappa.as_vector();
    for &branch_eps in &[eps_minus, eps_plus] {
        for i in 0..3 {
            if (ev[i] - branch_eps).abs() < SINGULAR_FORMULA_REL_TOL * ev[i] {
                return None;
            }
        }
    }
    let vector_for = |branch_eps: f64| {
        Vector3::new(
            k.x / (ev.x - branch_eps),
            k.y / (ev.y - branch_eps),
            k.z / (ev.z - branch_eps),
        )
    };

    // The component formulas lose up to half their digits when a branch
    // permittivity sits just outside the singularity guard. One pass of
    // Gram-Schmidt in eps^{1/2} coordinates (where transversality and
    // eps-orthogonality are plain orthogonality against eps^{1/2} kappa)
    // restores both constraints to rounding level.
    let sq = ev.map(f64::sqrt);
    let isq = ev.map(|e| 1.0 / e.sqrt());
    let y0 = sq.component_mul(k).normalize();
    let mut y_minus = sq.component_mul(&vector_for(eps_minus));
    y_minus -= y0 * y_minus.dot(&y0);
    y_minus.normalize_mut();
    let mut y_plus = sq.component_mul(&vector_for(eps_plus));
    y_plus -= y0 * y_plus.dot(&y0);
    y_plus -= y_minus * y_plus.dot(&y_minus);
    y_plus.normalize_mut();

    let minus = make_mode(isq.component_mul(&y_minus), eps_minus, BranchLabel::Minus);
    let plus = make_mode(isq.component_mul(&y_plus), eps_plus, BranchLabel::Plus);
    Some(ModePair { modes: [minus, plus], degenerate: false })
}

/// Dense route: symmetric eigensolve of S = eps^{-1/2}(I - kk^T)eps^{-1/2}.
/// Eigenvectors y map back to field polarizations e = eps^{-1/2} y, which
/// preserves eps-orthogonality exactly.
pub fn solve_modes_numeric(eps: &PermittivityTensor, kappa: &Direction) -> ModePair {
    let s = symmetrized_wave_matrix(eps, kappa);
    let eig = s.symmetric_eigen();
    let si = eps.as_vector().map(|e| 1.0 / e.sqrt());

    // The kernel (lambda ~ 0) belongs to the longitudinal direction; the two
    // transverse branches carry the largest eigenvalues.
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    // eps_eff = 1/lambda, so descending eps_eff = ascending lambda.
    let transverse = [idx[1], idx[0]];

    let mut eps_effs = [0.0f64; 2];
    let mut vectors = [Vector3::zeros(); 2];
    for (slot, &col) in transverse.iter().enumerate() {
        eps_effs[slot] = 1.0 / eig.eigenvalues[col];
        vectors[slot] = si.component_mul(&eig.eigenvectors.column(col).into_owned());
    }

    let degenerate = (eps_effs[0] - eps_effs[1]).abs() < DEGENERACY_REL_TOL * eps_effs[0];
    let labels = if degenerate {
        [BranchLabel::Degenerate1, BranchLabel::Degenerate2]
    } else {
        match eps.classification() {
            Anisotropy::Biaxial => [BranchLabel::Minus, BranchLabel::Plus],
            Anisotropy::Uniaxial { axis } => {
                let (_, eps2) = uniaxial_pair(eps, axis);
                if (eps_effs[0] - eps2).abs() <= (eps_effs[1] - eps2).abs() {
                    [BranchLabel::Ordinary, BranchLabel::Extraordinary]
                } else {
                    [BranchLabel::Extraordinary, BranchLabel::Ordinary]
                }
            }
            // Isotropic media are always degenerate; unreachable here.
            Anisotropy::Isotropic => [BranchLabel::Degenerate1, BranchLabel::Degenerate2],
        }
    };

    ModePair {
        modes: [
            make_mode(vectors[0], eps_effs[0], labels[0]),
            make_mode(vectors[1], eps_effs[1], labels[1]),
        ],
        degenerate,
    }
}

/// Solves the two transverse branches at `kappa`, sorted by eps_eff
/// descending.
///
/// Closed-form branch solutions are used wherever they are regular; the
/// dense eigensolve takes over at degenerate directions and wherever a
/// closed-form eigenvector hits its 0/0 singularity.
pub fn solve_modes(eps: &PermittivityTensor, kappa: &Direction) -> ModePair {
    let (hi, lo) = branch_permittivities(eps, kappa);
    if hi - lo < DEGENERACY_REL_TOL * hi {
        let mut pair = solve_modes_numeric(eps, kappa);
        pair.degenerate = true;
        pair.modes[0].branch = BranchLabel::Degenerate1;
        pair.modes[1].branch = BranchLabel::Degenerate2;
        return pair;
    }
    match eps.classification() {
        Anisotropy::Isotropic => unreachable!("isotropic media are always degenerate"),
        Anisotropy::Uniaxial { axis } => solve_uniaxial_closed(eps, kappa, axis),
        Anisotropy::Biaxial => {
            solve_biaxial_closed(eps, kappa, hi, lo).unwrap_or_else(|| solve_modes_numeric(eps, kappa))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn eps(x: f64, y: f64, z: f64) -> PermittivityTensor {
        PermittivityTensor::new(x, y, z).unwrap()
    }

    #[test]
    fn wave_matrix_isotropic_projector() {
        let m = build_wave_matrix(&eps(1.0, 1.0, 1.0), &Direction::z_axis());
        let expected = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0));
        assert_abs_diff_eq!(m, expected, epsilon = 1e-15);
    }

    #[test]
    fn wave_matrix_hand_expansion() {
        // rows (1/2, 0, 0), (0, 1/3, 0), (0, 0, 0) for kappa = z
        let m = build_wave_matrix(&eps(2.0, 3.0, 4.0), &Direction::z_axis());
        let expected = Matrix3::from_diagonal(&Vector3::new(0.5, 1.0 / 3.0, 0.0));
        assert_abs_diff_eq!(m, expected, epsilon = 1e-15);
    }

    #[test]
    fn wave_matrix_scaled_transverse_projector() {
        let m = build_wave_matrix(&eps(2.0, 2.0, 2.0), &Direction::x_axis());
        let expected = Matrix3::from_diagonal(&Vector3::new(0.0, 0.5, 0.5));
        assert_abs_diff_eq!(m, expected, epsilon = 1e-15);
    }

    #[test]
    fn uniaxial_modes_along_z() {
        // eps = (7, 1, 1), kappa = z: ordinary along y with eps_eff 1,
        // extraordinary along x with eps_eff 7.
        let pair = solve_modes(&eps(7.0, 1.0, 1.0), &Direction::z_axis());
        assert!(!pair.degenerate);
        let hi = pair.high();
        let lo = pair.low();
        assert_eq!(hi.branch, BranchLabel::Extraordinary);
        assert_relative_eq!(hi.eps_eff, 7.0, max_relative = 1e-14);
        assert_relative_eq!(hi.polarization.x().abs(), 1.0, epsilon = 1e-14);
        assert_eq!(lo.branch, BranchLabel::Ordinary);
        assert_relative_eq!(lo.eps_eff, 1.0, max_relative = 1e-14);
        assert_relative_eq!(lo.polarization.y().abs(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn biaxial_principal_direction_takes_fallback() {
        // kappa = z for (2, 3, 4): the closed-form eigenvector is 0/0 here,
        // so the dense path must produce x / y polarizations with eps 2, 3.
        let pair = solve_modes(&eps(2.0, 3.0, 4.0), &Direction::z_axis());
        assert!(!pair.degenerate);
        assert_relative_eq!(pair.high().eps_eff, 3.0, max_relative = 1e-12);
        assert_relative_eq!(pair.low().eps_eff, 2.0, max_relative = 1e-12);
        assert_relative_eq!(pair.high().polarization.y().abs(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(pair.low().polarization.x().abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn biaxial_diagonal_direction_closed_form() {
        // eps_eff = 36 / (13 -+ sqrt 7) at kappa = (1,1,1)/sqrt(3).
        let kappa = Direction::new(1.0, 1.0, 1.0).unwrap();
        let pair = solve_modes(&eps(2.0, 3.0, 4.0), &kappa);
        let s7 = 7.0_f64.sqrt();
        assert_relative_eq!(pair.high().eps_eff, 36.0 / (13.0 - s7), max_relative = 1e-10);
        assert_relative_eq!(pair.low().eps_eff, 36.0 / (13.0 + s7), max_relative = 1e-10);
        assert_eq!(pair.high().branch, BranchLabel::Minus);
        assert_eq!(pair.low().branch, BranchLabel::Plus);

        // Cross-check against the dense route.
        let dense = solve_modes_numeric(&eps(2.0, 3.0, 4.0), &kappa);
        assert_relative_eq!(pair.high().eps_eff, dense.high().eps_eff, max_relative = 1e-10);
        assert_relative_eq!(pair.low().eps_eff, dense.low().eps_eff, max_relative = 1e-10);
        assert_relative_eq!(
            pair.high().polarization.dot(&dense.high().polarization).abs(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn isotropic_direction_is_degenerate() {
        let pair = solve_modes(&eps(4.0, 4.0, 4.0), &Direction::new(0.3, -0.2, 0.9).unwrap());
        assert!(pair.degenerate);
        assert_eq!(pair.high().branch, BranchLabel::Degenerate1);
        assert_relative_eq!(pair.high().eps_eff, 4.0, max_relative = 1e-12);
        assert_relative_eq!(pair.low().eps_eff, 4.0, max_relative = 1e-12);
        // eps-orthogonal pair spanning the transverse plane.
        let e1 = pair.high().polarization.as_vector();
        let e2 = pair.low().polarization.as_vector();
        assert_abs_diff_eq!(e1.dot(e2) * 4.0, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uniaxial_optic_axis_is_degenerate() {
        let pair = solve_modes(&eps(7.0, 1.0, 1.0), &Direction::x_axis());
        assert!(pair.degenerate);
        assert_relative_eq!(pair.high().eps_eff, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn mode_normalization_examples() {
        let iso = eps(4.0, 4.0, 4.0);
        let pair = solve_modes(&iso, &Direction::z_axis());
        assert_relative_eq!(mode_normalization(&iso, pair.high()), 4.0, max_relative = 1e-12);

        let uni = eps(7.0, 1.0, 1.0);
        let pair = solve_modes(&uni, &Direction::z_axis());
        assert_relative_eq!(mode_normalization(&uni, pair.low()), 1.0, max_relative = 1e-12);

        let bi = eps(2.0, 3.0, 4.0);
        let d = Direction::new(1.0, 1.0, 1.0).unwrap();
        let mode = ModeSolution {
            polarization: d,
            eps_eff: 1.0,
            n_eff: 1.0,
            branch: BranchLabel::Plus,
        };
        assert_relative_eq!(mode_normalization(&bi, &mode), 3.0, max_relative = 1e-14);
    }

    #[test]
    fn reciprocity_and_transversality_spot_checks() {
        let media = [eps(2.0, 3.0, 4.0), eps(7.0, 1.0, 1.0), eps(1.5, 5.0, 2.5)];
        let dirs = [
            Direction::new(0.3, 0.5, -0.8).unwrap(),
            Direction::new(-1.0, 2.0, 0.4).unwrap(),
        ];
        for m in &media {
            for d in &dirs {
                let fwd = solve_modes(m, d);
                let bwd = solve_modes(m, &d.negated());
                for (a, b) in fwd.modes.iter().zip(&bwd.modes) {
                    assert_relative_eq!(a.eps_eff, b.eps_eff, max_relative = 1e-12);
                    assert_relative_eq!(
                        a.polarization.dot(&b.polarization).abs(),
                        1.0,
                        epsilon = 1e-12
                    );
                }
                for mode in &fwd.modes {
                    let d_field = m.apply(mode.polarization.as_vector());
                    assert_abs_diff_eq!(d.as_vector().dot(&d_field), 0.0, epsilon = 1e-12);
                }
                // eps-orthogonality of distinct branches.
                let cross = fwd.modes[0]
                    .polarization
                    .as_vector()
                    .dot(&m.apply(fwd.modes[1].polarization.as_vector()));
                assert_abs_diff_eq!(cross, 0.0, epsilon = 1e-12);
            }
        }
    }
}
