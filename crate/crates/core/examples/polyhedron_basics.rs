//! Parse a polyhedron, list its vertices and run the structural checks.
//!
//! cargo run --example polyhedron_basics

use toricqh::corpus;
use toricqh::exactmath::format_rational;
use toricqh::DelzantPolyhedron;

fn describe(p: &DelzantPolyhedron) {
    println!("{} (n = {}, N = {})", p.name().unwrap_or("?"), p.dim(), p.num_facets());
    for v in p.vertices() {
        let coords: Vec<String> = v.point.iter().map(format_rational).collect();
        println!("  vertex ({}) on facets {:?}", coords.join(", "), v.incident.labels());
    }
    let delzant = p.check_delzant();
    println!("  delzant: {}, compact: {}, monotone: {}", delzant.passed, p.is_compact(), p.is_monotone());
    for bad in &delzant.violations {
        println!("  violation at ({}): {}", bad.vertex.join(", "), bad.reason);
    }
    if let Some(norm) = p.monotone_normalization() {
        let shift: Vec<String> = norm.shift.iter().map(format_rational).collect();
        println!("  monotone after shifting by ({}), level {}", shift.join(", "), norm.level);
    }
    println!("  minimal nonfaces: {:?}", p.minimal_nonfaces().iter().map(|s| s.labels()).collect::<Vec<_>>());
}

pub fn main() -> toricqh::Result<()> {
    for name in ["cp2", "hirzebruch_f1", "o_minus_one", "non_delzant"] {
        describe(&corpus::load(name)?);
    }

    // inline JSON works the same way; offsets are exact fractions
    let wedge = DelzantPolyhedron::from_json(
        r#"{"name": "shifted wedge", "dim": 2, "facets": [
            {"normal": [1, 0], "offset": "1"},
            {"normal": [1, 1], "offset": "3/2"},
            {"normal": [0, 1], "offset": "1"}]}"#,
    )?;
    describe(&wedge);

    match corpus::load("strip")?.require_vertex() {
        Ok(()) => println!("strip has a vertex?"),
        Err(e) => println!("strip: {e}"),
    }
    Ok(())
}
