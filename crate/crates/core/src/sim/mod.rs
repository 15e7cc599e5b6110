//! Implicit Euler simulation of descriptor systems and verification of
//! trajectories against either formulation.

mod euler;
mod experiment;
mod init;
mod verify;

pub use euler::integrate_implicit_euler;
pub use experiment::{
    correspondence_experiment, descriptor_experiment, roundtrip_experiment, CorrespondenceReport,
    DescriptorExperimentReport, RoundtripReport,
};
pub use init::{consistent_init, consistent_init_at, constraint_residual};
pub use verify::{
    verify_descriptor, verify_geometric, ResidualKind, ResidualSeries, VerificationReport,
    VerifyTolerance,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{Vector, C64};

/// Parametric input signal `u(t)`.
///
/// Per-channel parameters of length one are broadcast to every channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    Zero,
    /// `u_i(t) = a_i sin(ω_i t)`
    Sinusoid {
        amplitude: Vec<f64>,
        frequency: Vec<f64>,
    },
    /// `u_i(t) = Σ_j c_ij t^j`
    Polynomial { coefficients: Vec<Vec<f64>> },
    /// piecewise linear interpolation of `values[k]` at `times[k]`
    Sampled {
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

fn pick<T: Clone>(v: &[T], i: usize) -> Option<T> {
    if v.len() == 1 {
        v.first().cloned()
    } else {
        v.get(i).cloned()
    }
}

fn channel_count_error(m: usize) -> Error {
    Error::Shape(format!("input specification does not cover {m} channels"))
}

impl InputSpec {
    /// `a sin(t)` on every channel.
    pub fn sin(amplitude: f64) -> Self {
        InputSpec::Sinusoid {
            amplitude: vec![amplitude],
            frequency: vec![1.0],
        }
    }

    pub fn check(&self, m: usize, t_end: f64) -> Result<()> {
        match self {
            InputSpec::Zero => Ok(()),
            InputSpec::Sinusoid { amplitude, frequency } => {
                for i in 0..m {
                    if pick(amplitude, i).is_none() || pick(frequency, i).is_none() {
                        return Err(channel_count_error(m));
                    }
                }
                Ok(())
            }
            InputSpec::Polynomial { coefficients } => {
                if (0..m).any(|i| pick(coefficients, i).is_none()) {
                    return Err(channel_count_error(m));
                }
                Ok(())
            }
            InputSpec::Sampled { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::Format("sampled input needs matching times and values".into()));
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Format("sampled input times must increase".into()));
                }
                if times[0] > 0.0 || times[times.len() - 1] < t_end {
                    return Err(Error::Format(format!(
                        "sampled input covers [{}, {}], needs [0, {t_end}]",
                        times[0],
                        times[times.len() - 1]
                    )));
                }
                if values.iter().any(|v| v.len() != m) {
                    return Err(channel_count_error(m));
                }
                Ok(())
            }
        }
    }

    /// `u(t)` for `m` channels.
    pub fn eval(&self, t: f64, m: usize) -> Vector {
        self.derivative(t, 0, m)
    }

    /// `d^k/dt^k u(t)`; piecewise linear samples have zero second and
    /// higher derivatives.
    pub fn derivative(&self, t: f64, order: usize, m: usize) -> Vector {
        let value = |i: usize| -> f64 {
            match self {
                InputSpec::Zero => 0.0,
                InputSpec::Sinusoid { amplitude, frequency } => {
                    let a = pick(amplitude, i).unwrap_or(0.0);
                    let w = pick(frequency, i).unwrap_or(0.0);
                    a * w.powi(order as i32)
                        * (w * t + order as f64 * std::f64::consts::FRAC_PI_2).sin()
                }
                InputSpec::Polynomial { coefficients } => {
                    let c = pick(coefficients, i).unwrap_or_default();
                    c.iter()
                        .enumerate()
                        .skip(order)
                        .map(|(j, cj)| {
                            let falling: f64 = (j - order + 1..=j).map(|x| x as f64).product();
                            cj * falling * t.powi((j - order) as i32)
                        })
                        .sum()
                }
                InputSpec::Sampled { times, values } => {
                    if order >= 2 || times.is_empty() {
                        return 0.0;
                    }
                    let k = times.partition_point(|&s| s <= t).clamp(1, times.len().max(2) - 1);
                    if times.len() == 1 {
                        return if order == 0 { values[0][i] } else { 0.0 };
                    }
                    let (t0, t1) = (times[k - 1], times[k]);
                    let (v0, v1) = (values[k - 1][i], values[k][i]);
                    let slope = (v1 - v0) / (t1 - t0);
                    if order == 1 {
                        slope
                    } else {
                        v0 + slope * (t - t0)
                    }
                }
            }
        };
        Vector::from_fn(m, |i, _| C64::new(value(i), 0.0))
    }
}

/// Simulation settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub t_end: f64,
    pub h: f64,
    pub input: InputSpec,
    /// seeds the initial guess and the pencil shifts
    pub seed: u64,
}

impl SimConfig {
    pub fn new(t_end: f64, h: f64, input: InputSpec, seed: u64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Format(format!("step size must be positive, got {h}")));
        }
        if !(t_end >= h) || !t_end.is_finite() {
            return Err(Error::Format(format!("t_end = {t_end} must be at least h = {h}")));
        }
        Ok(SimConfig {
            t_end,
            h,
            input,
            seed,
        })
    }

    /// Number of steps, `round(t_end / h)`.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.h).round() as usize).max(1)
    }
}
