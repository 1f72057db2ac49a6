//! Heights, intersecting sums and arithmetic in the truncated monoid ring.
//!
//! cargo run --example cone_monoid

use toricqh::conemonoid::{build_height_monoid, Cone, ConeElement, FilteredElement};
use toricqh::corpus;
use toricqh::exactmath::rat;

pub fn main() -> toricqh::Result<()> {
    let p = corpus::load("o_minus_one")?;
    let cone = Cone::new(&p)?;

    // v1 * v3 does not sit on a common face, so it picks up a T power
    let c = &ConeElement::generator(&p, 0) + &ConeElement::generator(&p, 2);
    let d = cone.intersecting_sum(&c)?;
    println!("(lambda, nu) = ({}, {:?})", c.lambda, c.nu);
    println!("  theta values {:?}", cone.theta_values(&c).iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("  height {}, decomposition t = {:?}", d.height, d.t);
    println!("  as a monomial: {}", cone.monomial(c)?.render());

    // (1 + v1)(1 + v3) truncated at increasing cutoffs
    let one = FilteredElement::one(&cone);
    let x = one.add(&FilteredElement::generator(&cone, 0));
    let y = one.add(&FilteredElement::generator(&cone, 2));
    let xy = x.multiply(&y, &cone);
    println!("(1 + v1)(1 + v3) = {}", xy.render());
    for g in [rat(1, 2), rat(1, 1), rat(2, 1)] {
        println!("  mod T^{g}: {}", xy.truncate(&g).render());
    }
    println!("  JSON: {}", xy.to_json());

    let g = build_height_monoid(&cone, &[rat(1, 2)], rat(3, 1))?;
    let heights: Vec<String> = g.elements().iter().map(|h| h.to_string()).collect();
    println!("height monoid below 3 with an extra generator 1/2: {}", heights.join(", "));
    Ok(())
}
