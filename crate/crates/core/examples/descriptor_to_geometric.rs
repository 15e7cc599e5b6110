//! From `E ż = (J − R)Q z + B u` to a Dirac, Lagrange and resistive triple.

use phbridge::generate::Generator;
use phbridge::phcore::validate_geometric;
use phbridge::transforms::{descriptor_to_geometric, kernel_overlap};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::real(21);
    let sys = g.descriptor(3, 2);
    println!("ker E ∩ ker Q has dimension {}", kernel_overlap(&sys));
    let (geo, maps) = descriptor_to_geometric(&sys)?;
    let report = validate_geometric(&geo);
    println!("dims n={} r={} m={}", maps.n, maps.r, maps.m);
    println!("D Dirac {}, L Lagrange {}, R max resistive {}", report.d_is_dirac, report.l_is_lagrange, report.r_is_max_resistive);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
