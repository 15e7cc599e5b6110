//! Regularity of `λE − (J − R)Q` by random shifts.

use phbridge::relations::numeric::real_matrix;
use phbridge::transforms::pencil_regular;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let a = real_matrix(2, 2, &[0.0, -1.0, 1.0, -1.0]);
    let r = pencil_regular(&e, &a)?;
    println!("regular {} after {} shifts", r.regular, r.shifts_tested);
    let singular = pencil_regular(&e, &real_matrix(2, 2, &[0.0; 4]))?;
    println!("zero A: regular {}", singular.regular);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
