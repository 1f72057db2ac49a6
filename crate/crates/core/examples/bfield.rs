//! B-field rescaling of the generators.
//!
//! cargo run --example bfield

use toricqh::corpus;
use toricqh::exactmath::rat;
use toricqh::presentation::{apply_bfield, Ring};
use toricqh::Field;

pub fn main() -> toricqh::Result<()> {
    let p = corpus::load("o_minus_one")?;
    for rho in [vec![rat(1, 1); 3], vec![rat(2, 1), rat(1, 1), rat(1, 1)], vec![rat(-1, 1), rat(1, 3), rat(2, 1)]] {
        let b = apply_bfield(&p, &rho, Ring::Field(Field::Rationals))?;
        let shown: Vec<String> = rho.iter().map(|r| r.to_string()).collect();
        println!("rho = ({}): ranks {:?}", shown.join(", "), b.classical.ranks);
        for r in &b.sr_relations {
            println!("  SR: {}", r.text);
        }
        if let Some(q) = &b.quantum {
            for product in q.to_report().nontrivial_products() {
                println!("  {product}");
            }
        }
    }
    Ok(())
}
