//! Certificates that each toric divisor becomes invertible once T is.
//!
//! cargo run --example divisor_inverses

use toricqh::corpus;
use toricqh::presentation::divisor_inverse_certificate;

pub fn main() -> toricqh::Result<()> {
    for name in ["cp1", "cp2", "cp1xcp1", "hirzebruch_f1", "c2"] {
        let p = corpus::load(name)?;
        println!("{name}:");
        for j in 0..p.num_facets() {
            match divisor_inverse_certificate(&p, j) {
                Ok(c) => println!("  {}  m = {:?}, verified {}", c.identity, c.multiplicities, c.verified),
                Err(e) => {
                    println!("  {e}");
                    break;
                }
            }
        }
    }
    Ok(())
}
