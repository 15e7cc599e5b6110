use serde::{Deserialize, Serialize};

use super::trajectory::{differentiate, Channel, Trajectory};
use super::{compute_w, hamiltonian, DescriptorPH, GeometricPH};
use crate::error::{Error, Result};
use crate::relations::numeric::{psd_sqrt, vconcat};
use crate::relations::Vector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricPowerReport {
    /// `|−Re⟨ẋ, e_L⟩ + Re⟨f_R, e_R⟩ + Re⟨y, u⟩|` per sample
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// `Re⟨f_R, e_R⟩` per sample, nonpositive on resistive trajectories
    pub dissipation: Vec<f64>,
    pub max_dissipation: f64,
    /// whether `ẋ` came from an exact channel rather than differencing
    pub exact_derivative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorPowerReport {
    /// `|(H_{k+1} − H_k)/h − ½(s_k + s_{k+1})|` per step, with supply minus
    /// dissipation `s = Re(u*y) − ‖W^{½}(z, u)‖²`
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub hamiltonian: Vec<f64>,
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

fn re_dot(a: &Vector, b: &Vector) -> f64 {
    a.dotc(b).re
}

pub fn geometric_power_residual(sys: &GeometricPH, traj: &Trajectory) -> Result<GeometricPowerReport> {
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
    let (xdot, exact_derivative) = match traj.get(Channel::XDot) {
        Some(d) => {
            check_dims(d, sys.n(), "x_dot")?;
            (d.to_vec(), true)
        }
        None => (differentiate(x, traj.h()), false),
    };
    let mut residuals = Vec::with_capacity(traj.len());
    let mut dissipation = Vec::with_capacity(traj.len());
    for k in 0..traj.len() {
        let diss = re_dot(&fr[k], &er[k]);
        residuals.push((-re_dot(&xdot[k], &el[k]) + diss + re_dot(&y[k], &u[k])).abs());
        dissipation.push(diss);
    }
    Ok(GeometricPowerReport {
        max_residual: residuals.iter().cloned().fold(0.0, f64::max),
        max_dissipation: dissipation.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        residuals,
        dissipation,
        exact_derivative,
    })
}

pub fn descriptor_power_residual(sys: &DescriptorPH, traj: &Trajectory) -> Result<DescriptorPowerReport> {
    let z = traj.require(Channel::Z)?;
    let u = traj.require(Channel::U)?;
    let y = traj.require(Channel::Y)?;
    check_dims(z, sys.state_dim(), "z")?;
    check_dims(u, sys.input_dim(), "u")?;
    check_dims(y, sys.input_dim(), "y")?;
    let w_half = psd_sqrt(&compute_w(sys));
    let h = traj.h();
    let ham = z
        .iter()
        .map(|zk| hamiltonian(sys, zk))
        .collect::<Result<Vec<_>>>()?;
    let supply: Vec<f64> = (0..traj.len())
        .map(|k| re_dot(&u[k], &y[k]) - (&w_half * vconcat(&[&z[k], &u[k]])).norm_squared())
        .collect();
    let residuals: Vec<f64> = (0..traj.len() - 1)
        .map(|k| ((ham[k + 1] - ham[k]) / h - 0.5 * (supply[k] + supply[k + 1])).abs())
        .collect();
    Ok(DescriptorPowerReport {
        max_residual: residuals.iter().cloned().fold(0.0, f64::max),
        residuals,
        hamiltonian: ham,
    })
}
