//! Passivity seen through the transfer function.

use phbridge::generate::Generator;
use phbridge::transforms::{geometric_to_descriptor, transfer_positive_real};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::complex(9);
    let (sys, _) = geometric_to_descriptor(&g.geometric_nonnegative(2, 1, 2))?;
    let points: Vec<_> = (0..50).map(|_| g.right_half_plane_point()).collect();
    let report = transfer_positive_real(&sys, &points)?;
    println!("min eig of G(s) + G(s)* over {} points: {:.3e}", points.len(), report.min_eig);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
