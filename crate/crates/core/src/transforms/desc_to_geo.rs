//! Descriptor → geometric.
//!
//! `L = ran [E; Q]`, `R = ran [I; −W₀]` on `K^{n+m}` with the unconjugated
//! `W₀ = [[R, P], [P*, S]]`, and `D = ran [U D̃ U*; I]` where
//! `Γ = [[J, B], [−B*, −N]]`, `D̃ = [[−Γ, −I], [I, 0]]` and `U` reorders
//! `(n, m, r)` blocks into `(n, r, m)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phcore::{validate_descriptor, Channel, DescriptorPH, GeometricPH, Trajectory};
use crate::relations::numeric::{
    hermitian_part, hstack, min_eig, null_space, pseudo_inverse_with, rank_factor, vconcat, vstack,
};
use crate::relations::{LinearRelation, Mat, Vector};

/// Matrices of the descriptor → geometric construction.
#[derive(Clone, Debug)]
pub struct GeoMaps {
    pub n: usize,
    pub m: usize,
    /// resistive dimension `n + m`
    pub r: usize,
    /// `[[J, B], [−B*, −N]]`
    pub gamma: Mat,
    /// permutation `(n, m, r) → (n, r, m)`
    pub u: Mat,
    /// `[[−Γ, −I], [I, 0]]`
    pub d_tilde: Mat,
    /// `[[R, P], [P*, S]]`
    pub w0: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeoDims {
    pub n: usize,
    pub r: usize,
    pub m: usize,
}

impl GeoMaps {
    pub fn dims(&self) -> GeoDims {
        GeoDims {
            n: self.n,
            r: self.r,
            m: self.m,
        }
    }
}

/// Dimension of `ker E ∩ ker Q`.
pub fn kernel_overlap(sys: &DescriptorPH) -> usize {
    let stacked = vstack(&[sys.e(), sys.q()]);
    let rank = rank_factor(&stacked, sys.tol()).map(|f| f.rank).unwrap_or(0);
    sys.state_dim() - rank
}

fn permutation(n: usize, m: usize, r: usize) -> Mat {
    let size = n + m + r;
    let mut u = Mat::zeros(size, size);
    for i in 0..n {
        u[(i, i)] = 1.0.into();
    }
    // source r-block at n + m.., target at n..
    for i in 0..r {
        u[(n + i, n + m + i)] = 1.0.into();
    }
    // source m-block at n.., target at n + r..
    for i in 0..m {
        u[(n + r + i, n + i)] = 1.0.into();
    }
    u
}

pub fn descriptor_to_geometric(sys: &DescriptorPH) -> Result<(GeometricPH, GeoMaps)> {
    let overlap = kernel_overlap(sys);
    if overlap > 0 {
        return Err(Error::KernelOverlap(overlap));
    }
    let report = validate_descriptor(sys);
    if !report.passed {
        return Err(Error::NotDescriptor(format!("{report:?}")));
    }
    let tol = *sys.tol();
    let (n, m) = (sys.state_dim(), sys.input_dim());
    let r = n + m;
    let w0 = hermitian_part(&sys.dissipation_block());
    let w0_min = min_eig(&w0);
    if w0_min < -report.tol {
        return Err(Error::IndefiniteDissipation(w0_min));
    }
    let l = LinearRelation::from_image_with(&vstack(&[sys.e(), sys.q()]), n, n, tol)?;
    let res = LinearRelation::from_image_with(&vstack(&[&Mat::identity(r, r), &-&w0]), r, r, tol)?;
    let gamma = vstack(&[
        &hstack(&[sys.j(), sys.b()]),
        &hstack(&[&-sys.b().adjoint(), &-sys.n()]),
    ]);
    let id = Mat::identity(r, r);
    let d_tilde = vstack(&[
        &hstack(&[&-&gamma, &-&id]),
        &hstack(&[&id, &Mat::zeros(r, r)]),
    ]);
    let u = permutation(n, m, r);
    let size = n + r + m;
    let flows = &u * &d_tilde * u.adjoint();
    let d = LinearRelation::from_image_with(&vstack(&[&flows, &Mat::identity(size, size)]), size, size, tol)?;
    let maps = GeoMaps {
        n,
        m,
        r,
        gamma,
        u,
        d_tilde,
        w0,
    };
    Ok((GeometricPH::new(d, l, res)?, maps))
}

/// Left null space basis of `E`.
pub(crate) fn constraint_basis(sys: &DescriptorPH) -> Mat {
    null_space(&sys.e().adjoint(), sys.tol())
}

/// Pointwise residuals of the algebraic rows and the output equation.
fn algebraic_defect(sys: &DescriptorPH, ne: &Mat, z: &Vector, u: &Vector, y: &Vector) -> f64 {
    let rhs = sys.rhs(z, u);
    let out = sys.output(z, u);
    let scale = 1.0 + z.norm() + u.norm();
    ((ne.adjoint() * rhs).norm() + (y - out).norm()) / scale
}

/// Descriptor solution → geometric solution:
/// `x = Ez`, `e_L = Qz`, `f_R = (Qz, u)`, `e_R = −W₀ f_R`, and the exact
/// derivative `ẋ = (J − R)Qz + (B − P)u`.
pub fn desc_solution_to_geo(
    sys: &DescriptorPH,
    maps: &GeoMaps,
    traj: &Trajectory,
    tol: f64,
) -> Result<Trajectory> {
    let z = traj.require(Channel::Z)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    let ne = constraint_basis(sys);
    let mut x = Vec::with_capacity(traj.len());
    let mut x_dot = Vec::with_capacity(traj.len());
    let mut el = Vec::with_capacity(traj.len());
    let mut fr = Vec::with_capacity(traj.len());
    let mut er = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        if z[k].len() != maps.n || u[k].len() != maps.m || y[k].len() != maps.m {
            return Err(Error::Shape("trajectory does not match the system dimensions".into()));
        }
        let residual = algebraic_defect(sys, &ne, &z[k], &u[k], &y[k]);
        if residual > tol {
            return Err(Error::ResidualTooLarge {
                residual,
                tol,
                sample: k,
            });
        }
        let qz = sys.q() * &z[k];
        let f = vconcat(&[&qz, &u[k]]);
        er.push(-&maps.w0 * &f);
        fr.push(f);
        el.push(qz);
        x.push(sys.e() * &z[k]);
        x_dot.push(sys.rhs(&z[k], &u[k]));
    }
    Trajectory::new(traj.grid().to_vec())?
        .with(Channel::X, x)?
        .with(Channel::XDot, x_dot)?
        .with(Channel::EL, el)?
        .with(Channel::FR, fr)?
        .with(Channel::ER, er)?
        .with(Channel::U, u.to_vec())?
        .with(Channel::Y, y.to_vec())
}

/// Geometric solution → descriptor solution: the unique `z` with `Ez = x`
/// and `Qz = e_L`.
pub fn geo_solution_to_desc(
    sys: &DescriptorPH,
    traj: &Trajectory,
    tol: f64,
) -> Result<Trajectory> {
    let x = traj.require(Channel::X)?;
    let el = traj.require(Channel::EL)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    let stacked = vstack(&[sys.e(), sys.q()]);
    let pinv = pseudo_inverse_with(&stacked, sys.tol())?;
    let mut z = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        if x[k].len() != sys.state_dim() || el[k].len() != sys.state_dim() {
            return Err(Error::Shape("trajectory does not match the system dimensions".into()));
        }
        let target = vconcat(&[&x[k], &el[k]]);
        let zk = &pinv * &target;
        let residual = (&stacked * &zk - &target).norm() / target.norm().max(1.0);
        if residual > tol {
            return Err(Error::NoConsistentZ { residual, sample: k });
        }
        z.push(zk);
    }
    let mut out = Trajectory::new(traj.grid().to_vec())?
        .with(Channel::Z, z)?
        .with(Channel::U, u.to_vec())?
        .with(Channel::Y, y.to_vec())?;
    if let Some(d) = traj.get(Channel::XDot) {
        out.set(Channel::XDot, d.to_vec())?;
    }
    Ok(out)
}
