//! Cayley transforms and maximal monotone or resistive extensions.

use phbridge::extension::{cayley, extend_maximal_monotone, extend_maximal_resistive, inverse_cayley};
use phbridge::generate::Generator;
use phbridge::relations::numeric::real_matrix;
use phbridge::relations::LinearRelation;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::complex(5);
    let m = g.max_monotone(3);
    let v = cayley(&m)?;
    println!("cayley of a maximal monotone relation: norm {:.6}", v.operator_norm());
    println!("round trip gap {:.1e}", inverse_cayley(&v)?.gap(&m)?);

    // a monotone line in K^2 x K^2 is extended to a maximal one
    let line = LinearRelation::from_image(&real_matrix(4, 1, &[1.0, 0.0, 1.0, 0.0]), 2, 2)?;
    let ext = extend_maximal_monotone(&line)?;
    println!("monotone extension: dim {} -> {}, contains input: {:.1e}", line.dim(), ext.dim(), ext.contains_relation(&line)?);

    let resistive = LinearRelation::from_image(&real_matrix(4, 1, &[1.0, 0.0, -2.0, 0.0]), 2, 2)?;
    let ext = extend_maximal_resistive(&resistive)?;
    println!("resistive extension maximal: {}", ext.classify()?.is_max_resistive);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
