//! Geometric → descriptor.
//!
//! With `D = {(J̃e − Gλ, e) : G*e = 0}`, `R = {(−R̃e + G_Rλ_R, e) : G_R*e = 0}`
//! and `L = {(L e − G_Lλ_L, e) : G_L*e = 0}`, a geometric solution gives a
//! descriptor solution in the state `z = (e_L, e_R, λ, λ_R, λ̇_L)` of
//!
//! ```text
//! E = diag(L, 0, 0, 0, 0)        R = diag(0, R̃, 0, 0, 0)        Q = I
//! J = [[−J₁₁, −J₁₂,  G₁,    0,  G_L],
//!      [ J₁₂*, −J₂₂,  G₂,  G_R,    0],
//!      [−G₁*, −G₂*,    0,    0,    0],
//!      [    0, −G_R*,   0,    0,    0],
//!      [−G_L*,    0,    0,    0,    0]]
//! B = (−J₁₃, −J₂₃, −G₃*, 0, 0)       N = J₃₃       P = 0       S = 0
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{extended_graph_rep, ExtendedGraphRep, Flavor};
use crate::phcore::{
    differentiate, validate_geometric, Channel, DescriptorPH, GeometricPH, Trajectory,
};
use crate::relations::numeric::vconcat;
use crate::relations::{Mat, Vector, C64};

/// Block data of the geometric → descriptor construction.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// number of Dirac multipliers
    pub d: usize,
    /// number of resistive multipliers
    pub k: usize,
    /// number of Lagrange multipliers
    pub l: usize,
    /// `J̃`, skew, of size `n + r + m`
    pub j_tilde: Mat,
    /// `G = [G₁; G₂; G₃]`
    pub g: Mat,
    /// `R̃ ⪰ 0`
    pub r_tilde: Mat,
    pub g_r: Mat,
    /// the Hermitian matrix `L` of the Lagrange representation
    pub l_mat: Mat,
    pub g_l: Mat,
    dirac: ExtendedGraphRep,
    resistive: ExtendedGraphRep,
    lagrange: ExtendedGraphRep,
}

/// Dimensions of a [`LiftData`], for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDims {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub d: usize,
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub state_dim: usize,
}

impl LiftData {
    /// `p = d + k + l`.
    pub fn p(&self) -> usize {
        self.d + self.k + self.l
    }

    /// `n + r + p`.
    pub fn state_dim(&self) -> usize {
        self.n + self.r + self.p()
    }

    pub fn dims(&self) -> LiftDims {
        LiftDims {
            n: self.n,
            r: self.r,
            m: self.m,
            d: self.d,
            k: self.k,
            l: self.l,
            p: self.p(),
            state_dim: self.state_dim(),
        }
    }

    fn jb(&self, i: usize, j: usize) -> Mat {
        let off = [0, self.n, self.n + self.r];
        let len = [self.n, self.r, self.m];
        self.j_tilde.view((off[i], off[j]), (len[i], len[j])).into_owned()
    }

    fn gb(&self, i: usize) -> Mat {
        let off = [0, self.n, self.n + self.r];
        let len = [self.n, self.r, self.m];
        self.g.view((off[i], 0), (len[i], self.d)).into_owned()
    }

    /// Splits `z` into `(e_L, e_R, λ, λ_R, μ_L)`.
    pub fn split_state(&self, z: &Vector) -> [Vector; 5] {
        let sizes = [self.n, self.r, self.d, self.k, self.l];
        let mut at = 0;
        sizes.map(|len| {
            let v = z.rows(at, len).into_owned();
            at += len;
            v
        })
    }
}

fn place(target: &mut Mat, row: usize, col: usize, block: &Mat) {
    if block.nrows() > 0 && block.ncols() > 0 {
        target.view_mut((row, col), block.shape()).copy_from(block);
    }
}

/// Builds the descriptor system of a geometric pH system.
pub fn geometric_to_descriptor(gph: &GeometricPH) -> Result<(DescriptorPH, LiftData)> {
    let report = validate_geometric(gph);
    if !report.passed {
        return Err(Error::NotGeometric(format!(
            "Dirac: {}, Lagrange: {}, maximal resistive: {}",
            report.d_is_dirac, report.l_is_lagrange, report.r_is_max_resistive
        )));
    }
    let dirac = extended_graph_rep(gph.d(), Flavor::Dirac)?;
    let resistive = extended_graph_rep(gph.r(), Flavor::MaxResistive)?;
    let lagrange = extended_graph_rep(gph.l(), Flavor::Lagrange)?;
    let lift = LiftData {
        n: gph.n(),
        r: gph.r_dim(),
        m: gph.m(),
        d: dirac.l(),
        k: resistive.l(),
        l: lagrange.l(),
        j_tilde: dirac.matrix().clone(),
        g: dirac.multipliers().clone(),
        r_tilde: -resistive.matrix(),
        g_r: resistive.multipliers().clone(),
        l_mat: lagrange.matrix().clone(),
        g_l: lagrange.multipliers().clone(),
        dirac,
        resistive,
        lagrange,
    };
    let (n, r, m, d, k) = (lift.n, lift.r, lift.m, lift.d, lift.k);
    let size = lift.state_dim();
    let (o_r, o_d, o_k, o_l) = (n, n + r, n + r + d, n + r + d + k);

    let mut j = Mat::zeros(size, size);
    place(&mut j, 0, 0, &-lift.jb(0, 0));
    place(&mut j, 0, o_r, &-lift.jb(0, 1));
    place(&mut j, 0, o_d, &lift.gb(0));
    place(&mut j, 0, o_l, &lift.g_l);
    place(&mut j, o_r, 0, &lift.jb(0, 1).adjoint());
    place(&mut j, o_r, o_r, &-lift.jb(1, 1));
    place(&mut j, o_r, o_d, &lift.gb(1));
    place(&mut j, o_r, o_k, &lift.g_r);
    place(&mut j, o_d, 0, &-lift.gb(0).adjoint());
    place(&mut j, o_d, o_r, &-lift.gb(1).adjoint());
    place(&mut j, o_k, o_r, &-lift.g_r.adjoint());
    place(&mut j, o_l, 0, &-lift.g_l.adjoint());

    let mut rm = Mat::zeros(size, size);
    place(&mut rm, o_r, o_r, &lift.r_tilde);
    let mut e = Mat::zeros(size, size);
    place(&mut e, 0, 0, &lift.l_mat);
    let mut b = Mat::zeros(size, m);
    place(&mut b, 0, 0, &-lift.jb(0, 2));
    place(&mut b, o_r, 0, &-lift.jb(1, 2));
    place(&mut b, o_d, 0, &-lift.gb(2).adjoint());
    let nn = lift.jb(2, 2);

    let sys = DescriptorPH::new(
        e,
        j,
        rm,
        Mat::identity(size, size),
        b,
        Mat::zeros(size, m),
        Mat::zeros(m, m),
        nn,
    )?
    .with_tol(*gph.d().tol());
    Ok((sys, lift))
}

fn derivative_channel(traj: &Trajectory) -> Result<Vec<Vector>> {
    match traj.get(Channel::XDot) {
        Some(d) => Ok(d.to_vec()),
        None => Ok(differentiate(traj.require(Channel::X)?, traj.h())),
    }
}

/// Geometric solution → descriptor solution. The multipliers come from the
/// extended graph representations sample by sample; `μ_L = λ̇_L` by
/// differencing. `tol` bounds the relative membership residual of each
/// sample.
pub fn lift_solution(lift: &LiftData, traj: &Trajectory, tol: f64) -> Result<Trajectory> {
    let x = traj.require(Channel::X)?;
    let fr = traj.require(Channel::FR)?;
    let er = traj.require(Channel::ER)?;
    let el = traj.require(Channel::EL)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    let xdot = derivative_channel(traj)?;
    let mut lambda = Vec::with_capacity(traj.len());
    let mut lambda_r = Vec::with_capacity(traj.len());
    let mut lambda_l = Vec::with_capacity(traj.len());
    for i in 0..traj.len() {
        let flow = vconcat(&[&-&xdot[i], &fr[i], &y[i]]);
        let effort = vconcat(&[&el[i], &er[i], &u[i]]);
        let (_, lam) = lift.dirac.recover_components(&flow, &effort, tol)?;
        let (_, lam_r) = lift.resistive.recover_components(&fr[i], &er[i], tol)?;
        let (_, lam_l) = lift.lagrange.recover_components(&x[i], &el[i], tol)?;
        lambda.push(lam);
        lambda_r.push(-lam_r);
        lambda_l.push(lam_l);
    }
    let mu_l = differentiate(&lambda_l, traj.h());
    let z: Vec<Vector> = (0..traj.len())
        .map(|i| vconcat(&[&el[i], &er[i], &lambda[i], &lambda_r[i], &mu_l[i]]))
        .collect();
    Trajectory::new(traj.grid().to_vec())?
        .with(Channel::Z, z)?
        .with(Channel::U, u.to_vec())?
        .with(Channel::Y, y.to_vec())?
        .with(Channel::Lambda, lambda)?
        .with(Channel::LambdaR, lambda_r)?
        .with(Channel::LambdaL, lambda_l)?
        .with(Channel::MuL, mu_l)
}

/// Descriptor solution → geometric solution for the initial state `x0`,
/// which must satisfy `(x0, e_L(0)) ∈ L`.
///
/// `λ_L = λ_L⁰ + ∫ μ_L` with `λ_L⁰ = G_L*(L e_L(0) − x0)`,
/// `x = L e_L − G_L λ_L` and `f_R = −R̃ e_R + G_R λ_R`. The exact derivative
/// `ẋ = d/dt(L e_L) − G_L μ_L` is recorded in the `x_dot` channel.
///
/// The integral uses the right-endpoint rule, the quadrature implied by
/// implicit Euler, so the projected samples obey the same discrete
/// dynamics as the descriptor samples they come from.
pub fn project_solution(
    gph: &GeometricPH,
    lift: &LiftData,
    traj: &Trajectory,
    x0: &Vector,
    tol: f64,
) -> Result<Trajectory> {
    let z = traj.require(Channel::Z)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    if x0.len() != lift.n {
        return Err(Error::Shape(format!("x0 has length {}, expected {}", x0.len(), lift.n)));
    }
    let parts: Vec<[Vector; 5]> = z.iter().map(|zk| lift.split_state(zk)).collect();
    let el0 = &parts[0][0];
    let resid = gph.l().contains_pair(x0, el0)?;
    if resid > tol {
        return Err(Error::InconsistentInitial(resid));
    }
    let h = C64::new(traj.h(), 0.0);
    let mut lambda_l = Vec::with_capacity(traj.len());
    lambda_l.push(lift.g_l.adjoint() * (&lift.l_mat * el0 - x0));
    for i in 1..traj.len() {
        let next = &lambda_l[i - 1] + &parts[i][4] * h;
        lambda_l.push(next);
    }
    let mut x = Vec::with_capacity(traj.len());
    let mut x_dot = Vec::with_capacity(traj.len());
    let mut f_r = Vec::with_capacity(traj.len());
    for (i, [el, er, lam, lam_r, _]) in parts.iter().enumerate() {
        x.push(&lift.l_mat * el - &lift.g_l * &lambda_l[i]);
        f_r.push(-&lift.r_tilde * er + &lift.g_r * lam_r);
        // first block row of the descriptor system without the G_L μ_L term
        x_dot.push(
            -lift.jb(0, 0) * el - lift.jb(0, 1) * er + lift.gb(0) * lam - lift.jb(0, 2) * &u[i],
        );
    }
    Trajectory::new(traj.grid().to_vec())?
        .with(Channel::X, x)?
        .with(Channel::XDot, x_dot)?
        .with(Channel::FR, f_r)?
        .with(Channel::ER, parts.iter().map(|p| p[1].clone()).collect())?
        .with(Channel::EL, parts.iter().map(|p| p[0].clone()).collect())?
        .with(Channel::U, u.to_vec())?
        .with(Channel::Y, y.to_vec())?
        .with(Channel::Lambda, parts.iter().map(|p| p[2].clone()).collect())?
        .with(Channel::LambdaR, parts.iter().map(|p| p[3].clone()).collect())?
        .with(Channel::LambdaL, lambda_l)?
        .with(Channel::MuL, parts.iter().map(|p| p[4].clone()).collect())
}
