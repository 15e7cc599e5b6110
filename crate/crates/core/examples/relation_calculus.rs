//! Adjoints, the four attached subspaces and subspace gaps.

use phbridge::generate::Generator;
use phbridge::relations::numeric::real_matrix;
use phbridge::relations::LinearRelation;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // a multi-valued relation: f = 0 is paired with every e on the second axis
    let a = LinearRelation::from_image(&real_matrix(4, 2, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0]), 2, 2)?;
    let parts = a.parts();
    println!("dim A = {}, dim ker = {}, dim mul = {}", a.dim(), parts.ker.ncols(), parts.mul.ncols());

    let adj = a.adjoint();
    println!("dim A + dim A* = {} (ambient {})", a.dim() + adj.dim(), a.ambient());
    println!("gap(A**, A) = {:.1e}", adj.adjoint().gap(&a)?);

    let mut g = Generator::complex(7);
    let b = g.any_relation(3, 4, 3);
    println!("random relation in C^3 x C^4: dim {}, dim adjoint {}", b.dim(), b.adjoint().dim());
    assert!(b.adjoint().adjoint().gap(&b)? < 1e-10);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
