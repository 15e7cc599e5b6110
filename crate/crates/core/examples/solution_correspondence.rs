//! Simulated descriptor solutions mapped back onto the geometric system,
//! with residuals shrinking linearly in the step size.

use phbridge::generate::Generator;
use phbridge::sim::{correspondence_experiment, InputSpec, SimConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::real(0);
    let sys = g.geometric_nonnegative(2, 2, 2);
    for h in [1e-2, 5e-3, 2.5e-3] {
        let cfg = SimConfig::new(1.0, h, InputSpec::sin(1.0), 1)?;
        let r = correspondence_experiment(&sys, &cfg)?;
        println!(
            "h = {h:.4}: membership {:.1e}, discretization {:.2e}, passed {}",
            r.geometric.max_membership.max(r.descriptor.max_membership),
            r.descriptor.max_discretization,
            r.passed
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
