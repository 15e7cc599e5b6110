use crate::error::{Error, Result};
use crate::phcore::{Channel, DescriptorPH, Trajectory};
use crate::relations::numeric::rank_factor;
use crate::relations::{Vector, C64};

use super::SimConfig;

/// Implicit Euler:
/// `(E − h(J − R)Q) z_{k+1} = E z_k + h(B − P) u_{k+1}`.
///
/// The iteration matrix is factored once. If it is singular at the given
/// step the step is halved once before giving up. The trajectory carries
/// `z`, `u`, `y` and the exact right-hand side `x_dot = (J − R)Qz + (B − P)u`.
pub fn integrate_implicit_euler(sys: &DescriptorPH, cfg: &SimConfig, z0: &Vector) -> Result<Trajectory> {
    let n = sys.state_dim();
    let m = sys.input_dim();
    if z0.len() != n {
        return Err(Error::Shape(format!("z0 has length {}, expected {n}", z0.len())));
    }
    cfg.input.check(m, cfg.t_end)?;
    let a = sys.a();
    let mut steps = cfg.steps();
    let mut h = cfg.h;
    let mut factored = None;
    for _ in 0..2 {
        let it = sys.e() - &a * C64::new(h, 0.0);
        let f = rank_factor(&it, sys.tol())?;
        if f.rank == n {
            factored = Some(it.lu());
            break;
        }
        h /= 2.0;
        steps *= 2;
    }
    let lu = factored.ok_or_else(|| {
        Error::IrregularPencil(format!("E − h(J − R)Q is singular for h = {} and h = {}", 2.0 * h, h))
    })?;
    let traj = Trajectory::uniform(0.0, h, steps)?;
    let bp = sys.b() - sys.p();
    let hc = C64::new(h, 0.0);
    let mut z = Vec::with_capacity(steps + 1);
    let mut u = Vec::with_capacity(steps + 1);
    z.push(z0.clone());
    u.push(cfg.input.eval(0.0, m));
    for k in 0..steps {
        let uk = cfg.input.eval(traj.grid()[k + 1], m);
        let rhs = sys.e() * &z[k] + &bp * &uk * hc;
        let next = lu
            .solve(&rhs)
            .ok_or_else(|| Error::IrregularPencil("iteration matrix became singular".into()))?;
        z.push(next);
        u.push(uk);
    }
    let y: Vec<Vector> = z.iter().zip(&u).map(|(zk, uk)| sys.output(zk, uk)).collect();
    let x_dot: Vec<Vector> = z.iter().zip(&u).map(|(zk, uk)| sys.rhs(zk, uk)).collect();
    traj.with(Channel::Z, z)?
        .with(Channel::U, u)?
        .with(Channel::Y, y)?
        .with(Channel::XDot, x_dot)
}
