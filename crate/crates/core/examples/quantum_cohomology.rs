//! Monotone quantum cohomology: structure constants, quantum
//! Stanley-Reisner relations and the generator table.
//!
//! cargo run --example quantum_cohomology

use toricqh::conemonoid::FilteredElement;
use toricqh::corpus;
use toricqh::presentation::{kodaira_spencer_table, quantum_presentation, reduce_to_basis, render_combination};

pub fn main() -> toricqh::Result<()> {
    for name in ["o_minus_one", "cp2", "cp1xcp1", "hirzebruch_f1"] {
        let p = corpus::load(name)?;
        let q = quantum_presentation(&p)?;
        let report = q.to_report();
        let basis: Vec<&str> = report.basis.iter().map(|b| b.label.as_str()).collect();
        println!("{name}: basis {}, ranks by degree {:?}", basis.join(", "), report.ranks);
        for r in &report.sr_relations {
            println!("  SR: {}", r.text);
        }
        for product in report.nontrivial_products() {
            println!("  {product}");
        }
        for row in kodaira_spencer_table(&q)?.generators {
            println!("  {} -> {}", row.source, row.text);
        }
        println!("  associative: {}", q.is_associative()?);
    }

    // reduce an arbitrary element: (v1 + v3)^2 on O(-1)
    let p = corpus::load("o_minus_one")?;
    let q = quantum_presentation(&p)?;
    let cone = q.cone();
    let s = FilteredElement::generator(cone, 0).add(&FilteredElement::generator(cone, 2));
    let square = s.multiply(&s, cone);
    println!("(v1 + v3)^2 = {} = {}", square.render(), render_combination(&reduce_to_basis(&square, &q)?, &q.labels()));
    Ok(())
}
