//! Nerve complexes, their homology and the Cohen-Macaulay checks.
//!
//! cargo run --example nerve_topology

use toricqh::corpus;
use toricqh::polyhedron::FacetSet;
use toricqh::srtop::{
    build_nerve, reduced_homology, regular_sequence_check, reisner_cm_check, sphere_or_ball_profile,
    sr_hilbert_function, SimplicialComplex,
};
use toricqh::Field;

pub fn main() -> toricqh::Result<()> {
    for name in ["cp2", "cp1xcp1", "c3", "o_minus_one"] {
        let p = corpus::load(name)?;
        let k = build_nerve(&p)?;
        let profile = sphere_or_ball_profile(&p)?;
        let cm = reisner_cm_check(&k, Field::Rationals)?;
        let reg = regular_sequence_check(&p, Field::Prime(2), p.dim() + 2)?;
        println!("{name}: faces {:?}, looks like {} ({}), CM {}", k.face_counts(), profile.expected, profile.matches, cm.passed);
        println!("  H_SR up to degree 4: {:?}", sr_hilbert_function(&p, 4)?);
        println!("  SR/(c_1..c_n) over F2: {:?} (total {})", reg.quotient_dims, reg.total);
    }

    // the six-vertex projective plane: acyclic over Q, not over F2
    let rp2: Vec<FacetSet> = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]]
        .iter()
        .map(|f| FacetSet::from_labels(f))
        .collect();
    let k = SimplicialComplex::from_maximal_faces(6, &rp2)?;
    for field in [Field::Rationals, Field::Prime(2)] {
        let h = reduced_homology(&k, field)?;
        let cm = reisner_cm_check(&k, field)?;
        println!("RP2 over {field}: reduced betti {:?}, CM {}, witness {:?}", h.betti, cm.passed, cm.witness);
    }
    Ok(())
}
