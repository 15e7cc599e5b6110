use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{Vector, C64};

/// Named signal carried by a [`Trajectory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "u")]
    U,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "x")]
    X,
    /// Exact `d/dt x` (equivalently `d/dt Ez`) when known.
    #[serde(rename = "x_dot")]
    XDot,
    #[serde(rename = "f_R")]
    FR,
    #[serde(rename = "e_R")]
    ER,
    #[serde(rename = "e_L")]
    EL,
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "lambda_R")]
    LambdaR,
    #[serde(rename = "lambda_L")]
    LambdaL,
    #[serde(rename = "mu_L")]
    MuL,
}

impl Channel {
    pub const ALL: [Channel; 12] = [
        Channel::U,
        Channel::Y,
        Channel::Z,
        Channel::X,
        Channel::XDot,
        Channel::FR,
        Channel::ER,
        Channel::EL,
        Channel::Lambda,
        Channel::LambdaR,
        Channel::LambdaL,
        Channel::MuL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::U => "u",
            Channel::Y => "y",
            Channel::Z => "z",
            Channel::X => "x",
            Channel::XDot => "x_dot",
            Channel::FR => "f_R",
            Channel::ER => "e_R",
            Channel::EL => "e_L",
            Channel::Lambda => "lambda",
            Channel::LambdaR => "lambda_R",
            Channel::LambdaL => "lambda_L",
            Channel::MuL => "mu_L",
        }
    }

    pub fn from_name(name: &str) -> Option<Channel> {
        Channel::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Sampled signals on a uniform time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    grid: Vec<f64>,
    channels: BTreeMap<Channel, Vec<Vector>>,
}

impl Trajectory {
    /// Grid must have at least two strictly increasing, uniformly spaced
    /// points.
    pub fn new(grid: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::Shape(format!(
                "trajectory grid needs at least 2 samples, got {}",
                grid.len()
            )));
        }
        if grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidMatrix("trajectory grid has non-finite times".into()));
        }
        let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::Shape("trajectory grid is not increasing".into()));
        }
        let scale = grid[0].abs().max(grid[grid.len() - 1].abs()).max(h);
        for w in grid.windows(2) {
            if !(w[1] > w[0]) || ((w[1] - w[0]) - h).abs() > 1e-9 * scale {
                return Err(Error::Shape("trajectory grid is not uniform".into()));
            }
        }
        Ok(Trajectory {
            grid,
            channels: BTreeMap::new(),
        })
    }

    /// `t_k = t0 + k h`, `k = 0..=steps`.
    pub fn uniform(t0: f64, h: f64, steps: usize) -> Result<Self> {
        Trajectory::new((0..=steps).map(|k| t0 + k as f64 * h).collect())
    }

    pub fn set(&mut self, channel: Channel, samples: Vec<Vector>) -> Result<()> {
        if samples.len() != self.grid.len() {
            return Err(Error::Shape(format!(
                "channel `{}` has {} samples, grid has {}",
                channel.name(),
                samples.len(),
                self.grid.len()
            )));
        }
        if let Some(first) = samples.first() {
            if samples.iter().any(|v| v.len() != first.len()) {
                return Err(Error::Shape(format!(
                    "channel `{}` has samples of different lengths",
                    channel.name()
                )));
            }
        }
        if samples
            .iter()
            .flat_map(|v| v.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidMatrix(format!(
                "channel `{}` has non-finite samples",
                channel.name()
            )));
        }
        self.channels.insert(channel, samples);
        Ok(())
    }

    pub fn with(mut self, channel: Channel, samples: Vec<Vector>) -> Result<Self> {
        self.set(channel, samples)?;
        Ok(self)
    }

    pub fn get(&self, channel: Channel) -> Option<&[Vector]> {
        self.channels.get(&channel).map(|v| v.as_slice())
    }

    /// Like [`get`](Self::get) but a missing channel is an error.
    pub fn require(&self, channel: Channel) -> Result<&[Vector]> {
        self.get(channel)
            .ok_or_else(|| Error::MissingChannel(channel.name().to_string()))
    }

    pub fn remove(&mut self, channel: Channel) -> Option<Vec<Vector>> {
        self.channels.remove(&channel)
    }

    pub fn channels(&self) -> impl Iterator<Item = (Channel, &[Vector])> {
        self.channels.iter().map(|(c, v)| (*c, v.as_slice()))
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    pub fn t_end(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }
}

/// Derivative of uniformly sampled data: central differences inside,
/// second-order one-sided stencils at the ends (forward/backward
/// differences when only two samples exist).
pub fn differentiate(samples: &[Vector], h: f64) -> Vec<Vector> {
    let k = samples.len();
    if k < 2 {
        return samples.iter().map(|v| v * C64::new(0.0, 0.0)).collect();
    }
    if k == 2 {
        let d = (&samples[1] - &samples[0]) / C64::new(h, 0.0);
        return vec![d.clone(), d];
    }
    let c = |x: f64| C64::new(x / (2.0 * h), 0.0);
    let mut out = Vec::with_capacity(k);
    out.push(&samples[0] * c(-3.0) + &samples[1] * c(4.0) - &samples[2] * c(1.0));
    for i in 1..k - 1 {
        out.push((&samples[i + 1] - &samples[i - 1]) * c(1.0));
    }
    out.push(&samples[k - 1] * c(3.0) - &samples[k - 2] * c(4.0) + &samples[k - 3] * c(1.0));
    out
}
