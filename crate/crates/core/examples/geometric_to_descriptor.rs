//! A capacitor with a resistor, written geometrically and converted.

use phbridge::phcore::{validate_descriptor, GeometricPH};
use phbridge::relations::numeric::real_matrix;
use phbridge::relations::LinearRelation;
use phbridge::transforms::geometric_to_descriptor;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let r0 = 0.5;
    // D couples storage, resistor and port; L is the identity Hessian
    let j = real_matrix(3, 3, &[0.0, 1.0, 1.0, -1.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
    let sys = GeometricPH::new(
        LinearRelation::inverse_graph(&j)?,
        LinearRelation::graph(&real_matrix(1, 1, &[1.0]))?,
        LinearRelation::inverse_graph(&real_matrix(1, 1, &[-r0]))?,
    )?;
    let (desc, lift) = geometric_to_descriptor(&sys)?;
    println!("state dimension {} (n + r + p = {} + {} + {})", desc.state_dim(), lift.n, lift.r, lift.p());
    println!("E = {:?}", desc.e().map(|z| z.re).as_slice());
    println!("R = {:?}", desc.r().map(|z| z.re).as_slice());
    println!("Q = I: {}, valid: {}", desc.is_standard_form(), validate_descriptor(&desc).passed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
