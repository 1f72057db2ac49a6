//! Independence of the presentations from the choice of lattice basis,
//! and the same checks on random Delzant polyhedra.
//!
//! cargo run --example basis_audit

use rand::rngs::StdRng;
use rand::SeedableRng;

use toricqh::corpus::{self, random_delzant};
use toricqh::presentation::{basis_independence_audit_seeded, classical_presentation, Ring};

pub fn main() -> toricqh::Result<()> {
    for (name, p) in corpus::valid_examples() {
        let a = basis_independence_audit_seeded(&p, 11)?;
        println!("{name}: transform {:?}, passed {}", a.transform, a.passed);
    }

    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..5 {
        let p = random_delzant(&mut rng, 3, 7);
        let c = classical_presentation(&p, Ring::Integers)?;
        let a = basis_independence_audit_seeded(&p, 5)?;
        println!(
            "random n = {}, N = {}, vertices {}: ranks {:?}, audit {}",
            p.dim(),
            p.num_facets(),
            p.vertices().len(),
            c.ranks,
            a.passed
        );
    }
    Ok(())
}
