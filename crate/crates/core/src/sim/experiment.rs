use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generate::Generator;
use crate::phcore::{hamiltonian, Channel, DescriptorPH, GeometricPH, Trajectory};
use crate::relations::{Field, Vector};
use crate::transforms::{
    desc_solution_to_geo, descriptor_to_geometric, geo_solution_to_desc, geometric_to_descriptor,
    lift_solution, project_solution, roundtrip, GeoDims, LiftDims,
};

use super::{consistent_init_at, integrate_implicit_euler, verify_descriptor, verify_geometric};
use super::{SimConfig, VerificationReport, VerifyTolerance};

/// Relative tolerance for the pointwise checks inside the solution maps.
const MAP_TOL: f64 = 1e-7;

fn generator(field: Field, seed: u64) -> Generator {
    match field {
        Field::Real => Generator::real(seed),
        Field::Complex => Generator::complex(seed),
    }
}

fn max_difference(a: &[Vector], b: &[Vector]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / (1.0 + x.norm()))
        .fold(0.0, f64::max)
}

/// Simulates from a random consistent initial state.
fn simulate(sys: &DescriptorPH, cfg: &SimConfig, field: Field) -> Result<Trajectory> {
    let guess = generator(field, cfg.seed).vector(sys.state_dim());
    let z0 = consistent_init_at(sys, &cfg.input, 0.0, &guess)?;
    integrate_implicit_euler(sys, cfg, &z0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub dims: LiftDims,
    pub h: f64,
    pub steps: usize,
    pub descriptor: VerificationReport,
    pub geometric: VerificationReport,
    /// `max_k ‖lift(project(z))_k − z_k‖ / (1 + ‖z_k‖)`
    pub lift_error: f64,
    pub max_dissipation: f64,
    pub hamiltonian_start: f64,
    pub hamiltonian_end: f64,
    pub passed: bool,
}

/// Geometric system → descriptor system → simulation → geometric
/// trajectory, verified in both formulations.
pub fn correspondence_experiment(gph: &GeometricPH, cfg: &SimConfig) -> Result<CorrespondenceReport> {
    let (sys, lift) = geometric_to_descriptor(gph)?;
    let field = gph.field();
    let traj = simulate(&sys, cfg, field)?;
    let z = traj.require(Channel::Z)?;
    let el0 = lift.split_state(&z[0])[0].clone();
    let c = generator(field, cfg.seed.wrapping_add(1)).vector(lift.l);
    let x0 = &lift.l_mat * &el0 - &lift.g_l * c;
    let geo = project_solution(gph, &lift, &traj, &x0, MAP_TOL)?;
    let tol = VerifyTolerance::default();
    let descriptor = verify_descriptor(&sys, &traj, &tol)?;
    let geometric = verify_geometric(gph, &geo, &tol)?;
    let lifted = lift_solution(&lift, &geo, MAP_TOL)?;
    let lift_error = max_difference(z, lifted.require(Channel::Z)?);
    let max_dissipation = geo
        .require(Channel::FR)?
        .iter()
        .zip(geo.require(Channel::ER)?)
        .map(|(f, e)| f.dotc(e).re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CorrespondenceReport {
        dims: lift.dims(),
        h: traj.h(),
        steps: traj.len() - 1,
        passed: descriptor.passed && geometric.passed,
        descriptor,
        geometric,
        lift_error,
        max_dissipation,
        hamiltonian_start: hamiltonian(&sys, &z[0])?,
        hamiltonian_end: hamiltonian(&sys, &z[z.len() - 1])?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescriptorExperimentReport {
    pub dims: GeoDims,
    pub h: f64,
    pub steps: usize,
    pub descriptor: VerificationReport,
    pub geometric: VerificationReport,
    /// `max_k ‖z'_k − z_k‖ / (1 + ‖z_k‖)` after mapping to the geometric
    /// trajectory and back
    pub back_map_error: f64,
    pub passed: bool,
}

/// Descriptor system → simulation → geometric trajectory → descriptor
/// trajectory, verified in both formulations.
pub fn descriptor_experiment(sys: &DescriptorPH, cfg: &SimConfig) -> Result<DescriptorExperimentReport> {
    let (gph, maps) = descriptor_to_geometric(sys)?;
    let traj = simulate(sys, cfg, sys.field())?;
    let geo = desc_solution_to_geo(sys, &maps, &traj, MAP_TOL)?;
    let back = geo_solution_to_desc(sys, &geo, MAP_TOL)?;
    let tol = VerifyTolerance::default();
    let descriptor = verify_descriptor(sys, &traj, &tol)?;
    let geometric = verify_geometric(&gph, &geo, &tol)?;
    let back_map_error = max_difference(traj.require(Channel::Z)?, back.require(Channel::Z)?);
    Ok(DescriptorExperimentReport {
        dims: maps.dims(),
        h: traj.h(),
        steps: traj.len() - 1,
        passed: descriptor.passed && geometric.passed,
        descriptor,
        geometric,
        back_map_error,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub original_state_dim: usize,
    pub roundtrip_state_dim: usize,
    pub q_is_identity: bool,
    pub h: f64,
    /// `max_k ‖y_k − y'_k‖`
    pub max_output_difference: f64,
    /// `max_k ‖y_k‖` of the original system
    pub max_output_norm: f64,
    /// distance between the mapped initial state and the consistent one
    /// actually used
    pub initial_adjustment: f64,
}

/// Simulates a descriptor system and its `Q = I` roundtrip from matching
/// initial data and compares the outputs.
pub fn roundtrip_experiment(sys: &DescriptorPH, cfg: &SimConfig) -> Result<RoundtripReport> {
    let rt = roundtrip(sys)?;
    let traj = simulate(sys, cfg, sys.field())?;
    let geo = desc_solution_to_geo(sys, &rt.maps, &traj, MAP_TOL)?;
    let lifted = lift_solution(&rt.lift, &geo, MAP_TOL)?;
    let guess = lifted.require(Channel::Z)?[0].clone();
    let z0 = consistent_init_at(&rt.descriptor, &cfg.input, 0.0, &guess)?;
    let traj2 = integrate_implicit_euler(&rt.descriptor, cfg, &z0)?;
    let y1 = traj.require(Channel::Y)?;
    let y2 = traj2.require(Channel::Y)?;
    let size = rt.descriptor.state_dim();
    Ok(RoundtripReport {
        original_state_dim: sys.state_dim(),
        roundtrip_state_dim: size,
        q_is_identity: rt.descriptor.is_standard_form(),
        h: traj.h(),
        max_output_difference: y1
            .iter()
            .zip(y2)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max),
        max_output_norm: y1.iter().map(|v| v.norm()).fold(0.0, f64::max),
        initial_adjustment: (z0 - guess).norm(),
    })
}
