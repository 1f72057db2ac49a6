//! Classical cohomology presentations over Z, Q and F_p.
//!
//! cargo run --example classical_cohomology

use toricqh::corpus;
use toricqh::presentation::{classical_presentation, Ring};

pub fn main() -> toricqh::Result<()> {
    for name in ["cp2", "hirzebruch_f1", "o_minus_one"] {
        let p = corpus::load(name)?;
        for ring in [Ring::Integers, "fp:3".parse()?] {
            let c = classical_presentation(&p, ring)?;
            let r = c.to_report();
            println!("{name} over {}: ranks {:?} (degrees {:?})", r.ring, r.ranks, r.cohomological_degrees);
            println!("  linear relations {:?}, monomial relations {:?}", r.linear_relations, r.monomial_relations);
            for e in r.structure_constants.iter().filter(|e| e.a > 0) {
                println!("  {}", e.text);
            }
        }
    }
    Ok(())
}
