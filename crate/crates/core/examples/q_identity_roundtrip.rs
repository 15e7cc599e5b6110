//! Any descriptor system has an equivalent one with `Q = I`.

use phbridge::generate::Generator;
use phbridge::sim::{roundtrip_experiment, InputSpec, SimConfig};
use phbridge::transforms::roundtrip_q_identity;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::real(2);
    let sys = g.descriptor(2, 1);
    let standard = roundtrip_q_identity(&sys)?;
    println!("state {} -> {}, Q = I: {}", sys.state_dim(), standard.state_dim(), standard.is_standard_form());
    let cfg = SimConfig::new(1.0, 1e-2, InputSpec::sin(1.0), 2)?;
    let r = roundtrip_experiment(&sys, &cfg)?;
    println!("outputs differ by at most {:.2e}", r.max_output_difference);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
