//! Writing maximal structures as constrained graphs `{(Me − Gλ, e) : G*e = 0}`.

use phbridge::extension::{extended_graph_rep, Flavor};
use phbridge::generate::Generator;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = Generator::complex(11);
    let cases = [
        (Flavor::Dirac, g.dirac(4)),
        (Flavor::Lagrange, g.lagrange(4)),
        (Flavor::MaxResistive, g.max_resistive(4)),
        (Flavor::MaxMonotone, g.max_monotone(4)),
    ];
    for (flavor, rel) in cases {
        let rep = extended_graph_rep(&rel, flavor)?;
        let gap = rep.reconstruct()?.gap(&rel)?;
        println!(
            "{flavor:?}: multipliers {}, reconstruction gap {gap:.1e}, invariance {:.1e}",
            rep.l(),
            rep.invariance_defect()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
