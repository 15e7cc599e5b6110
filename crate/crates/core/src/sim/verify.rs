use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phcore::{
    descriptor_power_residual, differentiate, geometric_power_residual, Channel, DescriptorPH,
    GeometricPH, Trajectory,
};
use crate::relations::numeric::vconcat;
use crate::relations::Vector;
use crate::transforms::constraint_basis;

/// Pointwise residuals should vanish up to roundoff; discretization
/// residuals are expected to be `O(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    Membership,
    Discretization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSeries {
    pub name: String,
    pub kind: ResidualKind,
    pub values: Vec<f64>,
    pub max: f64,
    pub argmax: usize,
    pub tol: f64,
}

impl ResidualSeries {
    fn new(name: &str, kind: ResidualKind, values: Vec<f64>, tol: &VerifyTolerance, disc_tol: f64) -> Self {
        let (argmax, max) = values
            .iter()
            .cloned()
            .enumerate()
            .fold((0, 0.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        let tol = match kind {
            ResidualKind::Membership => tol.membership,
            ResidualKind::Discretization => disc_tol,
        };
        ResidualSeries {
            name: name.to_string(),
            kind,
            values,
            max,
            argmax,
            tol,
        }
    }
}

/// Thresholds: relative membership residuals must stay below `membership`;
/// discretization residuals below `discretization · h · (1 + s)²` where `s`
/// is the largest sample norm of the trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerance {
    pub membership: f64,
    pub discretization: f64,
}

impl Default for VerifyTolerance {
    fn default() -> Self {
        VerifyTolerance {
            membership: 1e-8,
            discretization: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub formulation: String,
    pub h: f64,
    pub samples: usize,
    pub series: Vec<ResidualSeries>,
    pub max_membership: f64,
    pub max_discretization: f64,
    pub membership_tol: f64,
    pub discretization_tol: f64,
    /// sample indices where some residual exceeds its tolerance
    pub flagged: Vec<usize>,
    pub passed: bool,
}

impl VerificationReport {
    fn build(formulation: &str, traj: &Trajectory, series: Vec<ResidualSeries>, tol: &VerifyTolerance, disc_tol: f64) -> Self {
        let max_of = |kind| {
            series
                .iter()
                .filter(|s| s.kind == kind)
                .map(|s| s.max)
                .fold(0.0, f64::max)
        };
        let mut flagged: Vec<usize> = series
            .iter()
            .flat_map(|s| {
                s.values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !(**v <= s.tol))
                    .map(|(i, _)| i)
                    .collect::<Vec<_>>()
            })
            .collect();
        flagged.sort_unstable();
        flagged.dedup();
        VerificationReport {
            formulation: formulation.to_string(),
            h: traj.h(),
            samples: traj.len(),
            max_membership: max_of(ResidualKind::Membership),
            max_discretization: max_of(ResidualKind::Discretization),
            membership_tol: tol.membership,
            discretization_tol: disc_tol,
            passed: flagged.is_empty(),
            flagged,
            series,
        }
    }

    pub fn get(&self, name: &str) -> Option<&ResidualSeries> {
        self.series.iter().find(|s| s.name == name)
    }
}

fn check_dims(samples: &[Vector], len: usize, name: &str) -> Result<()> {
    match samples.iter().find(|v| v.len() != len) {
        Some(v) => Err(Error::Shape(format!(
            "channel `{name}` has length {}, expected {len}",
            v.len()
        ))),
        None => Ok(()),
    }
}

fn sample_scale(traj: &Trajectory, channels: &[Channel]) -> f64 {
    (0..traj.len())
        .map(|k| {
            channels
                .iter()
                .filter_map(|c| traj.get(*c))
                .map(|s| s[k].norm())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

pub fn verify_geometric(sys: &GeometricPH, traj: &Trajectory, tol: &VerifyTolerance) -> Result<VerificationReport> {
    let x = traj.require(Channel::X)?;
    let fr = traj.require(Channel::FR)?;
    let er = traj.require(Channel::ER)?;
    let el = traj.require(Channel::EL)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    check_dims(x, sys.n(), "x")?;
    check_dims(el, sys.n(), "e_L")?;
    check_dims(fr, sys.r_dim(), "f_R")?;
    check_dims(er, sys.r_dim(), "e_R")?;
    check_dims(u, sys.m(), "u")?;
    check_dims(y, sys.m(), "y")?;
    let scale = sample_scale(traj, &[Channel::X, Channel::XDot, Channel::U]);
    let disc_tol = tol.discretization * traj.h() * (1.0 + scale).powi(2);
    let exact = traj.get(Channel::XDot);
    let diff = differentiate(x, traj.h());
    let xdot = exact.map(|d| d.to_vec()).unwrap_or_else(|| diff.clone());
    let d_kind = if exact.is_some() {
        ResidualKind::Membership
    } else {
        ResidualKind::Discretization
    };

    let mut d_res = Vec::with_capacity(traj.len());
    let mut l_res = Vec::with_capacity(traj.len());
    let mut r_res = Vec::with_capacity(traj.len());
    let mut diss = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        let pair = vconcat(&[&-&xdot[k], &fr[k], &y[k], &el[k], &er[k], &u[k]]);
        d_res.push(sys.d().contains(&pair)?);
        l_res.push(sys.l().contains_pair(&x[k], &el[k])?);
        r_res.push(sys.r().contains_pair(&fr[k], &er[k])?);
        let p = fr[k].dotc(&er[k]).re;
        diss.push(p.max(0.0) / (fr[k].norm() * er[k].norm()).max(1.0));
    }
    let power = geometric_power_residual(sys, traj)?;
    let power_rel: Vec<f64> = (0..traj.len())
        .map(|k| {
            let s = xdot[k].norm() * el[k].norm() + fr[k].norm() * er[k].norm() + y[k].norm() * u[k].norm();
            power.residuals[k] / s.max(1.0)
        })
        .collect();
    let mut series = vec![
        ResidualSeries::new("D", d_kind, d_res, tol, disc_tol),
        ResidualSeries::new("L", ResidualKind::Membership, l_res, tol, disc_tol),
        ResidualSeries::new("R", ResidualKind::Membership, r_res, tol, disc_tol),
        ResidualSeries::new("dissipation", ResidualKind::Membership, diss, tol, disc_tol),
    ];
    if exact.is_some() {
        series.push(ResidualSeries::new("power", ResidualKind::Membership, power_rel, tol, disc_tol));
        let consistency = diff.iter().zip(&xdot).map(|(a, b)| (a - b).norm()).collect();
        series.push(ResidualSeries::new("x_dot", ResidualKind::Discretization, consistency, tol, disc_tol));
    } else {
        series.push(ResidualSeries::new("power", ResidualKind::Discretization, power.residuals, tol, disc_tol));
    }
    Ok(VerificationReport::build("geometric", traj, series, tol, disc_tol))
}

pub fn verify_descriptor(sys: &DescriptorPH, traj: &Trajectory, tol: &VerifyTolerance) -> Result<VerificationReport> {
    let z = traj.require(Channel::Z)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    check_dims(z, sys.state_dim(), "z")?;
    check_dims(u, sys.input_dim(), "u")?;
    check_dims(y, sys.input_dim(), "y")?;
    let scale = sample_scale(traj, &[Channel::Z, Channel::XDot, Channel::U]);
    let disc_tol = tol.discretization * traj.h() * (1.0 + scale).powi(2);
    let ne = constraint_basis(sys);
    let ez: Vec<Vector> = z.iter().map(|zk| sys.e() * zk).collect();
    let diff = differentiate(&ez, traj.h());
    let rhs: Vec<Vector> = z.iter().zip(u).map(|(zk, uk)| sys.rhs(zk, uk)).collect();

    let mut series = Vec::new();
    let constraints = (0..traj.len())
        .map(|k| (ne.adjoint() * &rhs[k]).norm() / (1.0 + z[k].norm() + u[k].norm()))
        .collect();
    series.push(ResidualSeries::new("constraints", ResidualKind::Membership, constraints, tol, disc_tol));
    let output = (0..traj.len())
        .map(|k| (&y[k] - sys.output(&z[k], &u[k])).norm() / (1.0 + y[k].norm()))
        .collect();
    series.push(ResidualSeries::new("output", ResidualKind::Membership, output, tol, disc_tol));
    match traj.get(Channel::XDot) {
        Some(xdot) => {
            check_dims(xdot, sys.state_dim(), "x_dot")?;
            let dae = (0..traj.len())
                .map(|k| (&xdot[k] - &rhs[k]).norm() / (1.0 + rhs[k].norm()))
                .collect();
            series.push(ResidualSeries::new("dae", ResidualKind::Membership, dae, tol, disc_tol));
            let consistency = (0..traj.len()).map(|k| (&diff[k] - &xdot[k]).norm()).collect();
            series.push(ResidualSeries::new("x_dot", ResidualKind::Discretization, consistency, tol, disc_tol));
        }
        None => {
            let dae = (0..traj.len()).map(|k| (&diff[k] - &rhs[k]).norm()).collect();
            series.push(ResidualSeries::new("dae", ResidualKind::Discretization, dae, tol, disc_tol));
        }
    }
    let power = descriptor_power_residual(sys, traj)?;
    series.push(ResidualSeries::new("power", ResidualKind::Discretization, power.residuals, tol, disc_tol));
    Ok(VerificationReport::build("descriptor", traj, series, tol, disc_tol))
}
