//! Consistent initialization, implicit Euler and the energy balance.

use phbridge::generate::Generator;
use phbridge::phcore::{descriptor_power_residual, hamiltonian, Channel};
use phbridge::sim::{consistent_init_at, integrate_implicit_euler, InputSpec, SimConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::real(4);
    let sys = g.descriptor_standard(4, 1);
    let cfg = SimConfig::new(2.0, 1e-3, InputSpec::sin(1.0), 4)?;
    let guess = g.vector(sys.state_dim());
    let z0 = consistent_init_at(&sys, &cfg.input, 0.0, &guess)?;
    let traj = integrate_implicit_euler(&sys, &cfg, &z0)?;
    let z = traj.require(Channel::Z)?;
    println!("H(0) = {:.4}, H(T) = {:.4}", hamiltonian(&sys, &z[0])?, hamiltonian(&sys, &z[z.len() - 1])?);
    let power = descriptor_power_residual(&sys, &traj)?;
    println!("largest power balance residual {:.2e} over {} steps", power.max_residual, traj.len() - 1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
