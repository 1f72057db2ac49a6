//! Freeness of generalised Jacobian rings at a finite height cutoff, with
//! and without perturbations.
//!
//! cargo run --example jacobian_freeness

use rand::rngs::StdRng;
use rand::SeedableRng;

use toricqh::conemonoid::{Cone, ConeElement, FilteredElement};
use toricqh::corpus::{self, random_perturbations};
use toricqh::exactmath::rat;
use toricqh::presentation::{jacobian_freeness, JacobianInput, JacobianReport};
use toricqh::Field;

fn show(label: &str, r: &JacobianReport) {
    println!(
        "{label}: G below {} = {{{}}}, dim A/J = {} (expected {}), free {}",
        r.cutoff,
        r.heights.join(", "),
        r.dim_quotient,
        r.expected_dim,
        r.free
    );
}

pub fn main() -> toricqh::Result<()> {
    let p = corpus::load("o_minus_one")?;
    for g in 1..=3 {
        show(&format!("O(-1), g = {g}"), &jacobian_freeness(&p, &JacobianInput::unperturbed(rat(g, 1), Field::Rationals))?);
    }

    // add T^(1/2) v2^2 / 3 to the second generator
    let cone = Cone::new(&p)?;
    let term = cone.monomial(ConeElement::new(rat(5, 2), vec![2, 2]))?;
    let mut perturbations = vec![FilteredElement::zero(); 3];
    perturbations[1] = FilteredElement::monomial(term, rat(1, 3));
    let input = JacobianInput { perturbations, rho: None, cutoff: rat(2, 1), field: Field::Rationals };
    show("O(-1) perturbed", &jacobian_freeness(&p, &input)?);

    let mut rng = StdRng::seed_from_u64(1);
    for name in ["cp2", "hirzebruch_f1"] {
        let p = corpus::load(name)?;
        let cone = Cone::new(&p)?;
        let perturbations = random_perturbations(&cone, &mut rng, &rat(3, 1));
        for (j, w) in perturbations.iter().enumerate() {
            println!("  {name} perturbation of v{}: {}", j + 1, w.render());
        }
        let input = JacobianInput { perturbations, rho: Some(vec![rat(2, 1); p.num_facets()]), cutoff: rat(3, 1), field: Field::Prime(101) };
        show(name, &jacobian_freeness(&p, &input)?);
    }
    Ok(())
}
