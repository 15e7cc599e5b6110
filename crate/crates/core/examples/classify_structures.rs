//! Dirac, Lagrange, resistive and monotone verdicts with their witnesses.

use phbridge::generate::Generator;
use phbridge::relations::numeric::real_matrix;
use phbridge::relations::LinearRelation;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let skew = real_matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let rotation = LinearRelation::graph(&skew)?;
    let report = rotation.classify()?;
    println!("graph of a skew matrix: dirac={} lagrange={}", report.is_dirac, report.is_lagrange);

    // ran [1; 0] lies in every class at once
    let trivial = LinearRelation::from_image(&real_matrix(2, 1, &[1.0, 0.0]), 1, 1)?;
    let r = trivial.classify()?;
    println!(
        "ran [1; 0]: dirac={} lagrange={} max_resistive={} max_monotone={}",
        r.is_dirac, r.is_lagrange, r.is_max_resistive, r.is_max_monotone
    );

    let mut g = Generator::real(3);
    let res = g.max_resistive(4);
    let w = res.classify()?.witness;
    println!("random max resistive: largest eig of the form {:.2e}, hermitian defect {:.1e}", w.resistive_max_eig, w.hermitian_defect);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
