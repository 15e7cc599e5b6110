use crate::error::{Error, Result};
use crate::phcore::DescriptorPH;
use crate::relations::numeric::{null_space, orth, pseudo_inverse_with};
use crate::relations::{Mat, Vector};
use crate::transforms::{constraint_basis, pencil_regular_with, PENCIL_SEED};

use super::InputSpec;

/// Derivative array of depth `nu`: unknowns `(z₀, …, z_{ν+1})` with
/// `E z_{j+1} − A z_j = (B − P) u^{(j)}` for `j = 0..=ν`.
fn derivative_array(sys: &DescriptorPH, u: &[Vector], nu: usize) -> (Mat, Vector) {
    let n = sys.state_dim();
    let a = sys.a();
    let bp = sys.b() - sys.p();
    let mut m = Mat::zeros((nu + 1) * n, (nu + 2) * n);
    let mut rhs = Vector::zeros((nu + 1) * n);
    for j in 0..=nu {
        m.view_mut((j * n, j * n), (n, n)).copy_from(&-&a);
        m.view_mut((j * n, (j + 1) * n), (n, n)).copy_from(sys.e());
        if let Some(uj) = u.get(j) {
            rhs.rows_mut(j * n, n).copy_from(&(&bp * uj));
        }
    }
    (m, rhs)
}

/// Affine set `z_p + ran basis` of initial states admitted by the
/// derivative array of depth `nu`, with the feasibility residual.
fn admissible(sys: &DescriptorPH, u: &[Vector], nu: usize) -> Result<(Vector, Mat, f64)> {
    let n = sys.state_dim();
    let tol = sys.tol();
    let (m, rhs) = derivative_array(sys, u, nu);
    let xp = pseudo_inverse_with(&m, tol)? * &rhs;
    let residual = (&m * &xp - &rhs).norm() / rhs.norm().max(1.0);
    let free = null_space(&m, tol);
    let basis = orth(&free.rows(0, n).into_owned(), tol);
    Ok((xp.rows(0, n).into_owned(), basis, residual))
}

/// Consistent initial state closest to `z_guess`.
///
/// `u` holds `u(t₀), u̇(t₀), …`; missing derivatives count as zero. The
/// admissible set comes from derivative arrays of increasing depth until
/// its dimension stops shrinking, so hidden constraints of higher-index
/// systems are respected as well as the explicit algebraic rows.
pub fn consistent_init(sys: &DescriptorPH, u: &[Vector], z_guess: &Vector) -> Result<Vector> {
    let n = sys.state_dim();
    if z_guess.len() != n {
        return Err(Error::Shape(format!("guess has length {}, expected {n}", z_guess.len())));
    }
    if let Some(v) = u.iter().find(|v| v.len() != sys.input_dim()) {
        return Err(Error::Shape(format!(
            "input has length {}, expected {}",
            v.len(),
            sys.input_dim()
        )));
    }
    let tol = sys.tol().structural();
    let (_, _, residual) = admissible(sys, u, 0)?;
    if residual > tol {
        return Err(Error::InconsistentConstraints(residual));
    }
    let pencil = pencil_regular_with(sys.e(), &sys.a(), sys.tol(), PENCIL_SEED)?;
    if !pencil.regular {
        return Err(Error::IrregularPencil(format!(
            "λE − (J − R)Q is singular at {} random shifts and has a polynomial kernel",
            pencil.shifts_tested
        )));
    }
    let (mut zp, mut basis, _) = admissible(sys, u, 0)?;
    for nu in 1..=n + 1 {
        let (zp_next, basis_next, residual) = admissible(sys, u, nu)?;
        if residual > tol {
            return Err(Error::InconsistentConstraints(residual));
        }
        let stable = basis_next.ncols() == basis.ncols();
        zp = zp_next;
        basis = basis_next;
        if stable {
            break;
        }
    }
    let offset = z_guess - &zp;
    Ok(&zp + &basis * (basis.adjoint() * offset))
}

/// [`consistent_init`] with `u` and its derivatives taken from `input` at
/// time `t0`.
pub fn consistent_init_at(
    sys: &DescriptorPH,
    input: &InputSpec,
    t0: f64,
    z_guess: &Vector,
) -> Result<Vector> {
    let m = sys.input_dim();
    let u: Vec<Vector> = (0..=sys.state_dim() + 2)
        .map(|k| input.derivative(t0, k, m))
        .collect();
    consistent_init(sys, &u, z_guess)
}

/// `‖N_E* ((J − R)Qz + (B − P)u)‖` with `N_E` spanning the left null space
/// of `E`.
pub fn constraint_residual(sys: &DescriptorPH, z: &Vector, u: &Vector) -> f64 {
    (constraint_basis(sys).adjoint() * sys.rhs(z, u)).norm()
}
