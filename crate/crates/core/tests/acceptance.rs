//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the test
//! fails if any criterion fails. Every tolerance is a named constant.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toricqh::conemonoid::{Cone, ConeElement};
use toricqh::corpus::{self, random_delzant, random_gamma_element, random_perturbations, ExampleKind, EXAMPLES};
use toricqh::exactmath::{binomial, rat};
use toricqh::polyhedron::FacetSet;
use toricqh::presentation::{
    classical_presentation, divisor_inverse_certificate, jacobian_freeness, quantum_presentation, JacobianInput,
    QuantumPresentation, Ring, TPoly,
};
use toricqh::srtop::{build_nerve, regular_sequence_check, reisner_cm_check, sphere_or_ball_profile, sr_hilbert_function};
use toricqh::{DelzantPolyhedron, Error, Field};

/// Wall-clock limits, in debug builds.
const END_TO_END_LIMIT: Duration = Duration::from_secs(1);
const RANK_SUITE_LIMIT: Duration = Duration::from_secs(5);
const FREENESS_SUITE_LIMIT: Duration = Duration::from_secs(30);

/// Structure constants, ranks and certificates are compared exactly.
const EXACT_TOLERANCE: usize = 0;

const RANDOM_DELZANT_COUNT: usize = 50;
const RANDOM_MAX_DIM: usize = 3;
const RANDOM_MAX_FACETS: usize = 8;
const PERTURBATIONS_PER_EXAMPLE: usize = 25;
const PERTURBED_CUTOFF: i64 = 3;
const GAMMA_SAMPLES_PER_EXAMPLE: usize = 100;
const SUPERADDITIVITY_PAIRS: usize = 1000;
const HILBERT_BRUTE_DEGREE: usize = 4;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{took:.2?} < {limit:?}"))
}

fn q(a: i64, b: i64) -> BigRational {
    rat(a, b)
}

/// `coeffs[k]` is the coefficient of `T^k`.
fn tpoly(coeffs: &[i64]) -> TPoly {
    TPoly::from_coeffs(coeffs.iter().map(|&c| q(c, 1)).collect())
}

fn basis_exponents(qp: &QuantumPresentation) -> Vec<Vec<u32>> {
    qp.basis().iter().map(|b| b.exponents.clone()).collect()
}

/// Compares the full product table against `oracle(a, b) -> coefficient list`.
fn compare_table(qp: &QuantumPresentation, oracle: impl Fn(usize, usize) -> Vec<TPoly>) -> Result<(), String> {
    let m = qp.basis().len();
    let mut mismatches = 0;
    for a in 0..m {
        for b in 0..m {
            if qp.structure[a][b] != oracle(a, b) {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches <= EXACT_TOLERANCE, || format!("{mismatches} table entries differ from the oracle"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let p = corpus::load("o_minus_one").map_err(|e| e.to_string())?;
    let qp = quantum_presentation(&p).map_err(|e| e.to_string())?;
    let report = qp.to_report();
    ensure(qp.basis().len() == 2, || format!("basis size {}", qp.basis().len()))?;
    // Z[T,E]/(E^2 - TE) with E -> v2, basis (1, E)
    ensure(basis_exponents(&qp) == vec![vec![0, 0, 0], vec![0, 1, 0]], || "basis is not (1, v2)".into())?;
    compare_table(&qp, |a, b| match (a, b) {
        (0, 0) => vec![tpoly(&[1]), tpoly(&[])],
        (0, 1) | (1, 0) => vec![tpoly(&[]), tpoly(&[1])],
        _ => vec![tpoly(&[]), tpoly(&[0, 1])],
    })?;
    ensure(report.nontrivial_products() == vec!["v2^2 = T*v2".to_string()], || {
        format!("products {:?}", report.nontrivial_products())
    })?;
    let sr: Vec<&str> = report.sr_relations.iter().map(|r| r.text.as_str()).collect();
    ensure(sr == ["v1*v3 = T*v2"], || format!("SR relations {sr:?}"))?;
    ensure(report.linear_relations == vec![vec![1, 1, 0], vec![0, 1, 1]], || {
        format!("linear relations {:?}", report.linear_relations)
    })?;
    within(start, END_TO_END_LIMIT)
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut names = Vec::new();
    for (name, p) in corpus::valid_examples() {
        let c = classical_presentation(&p, Ring::Integers).map_err(|e| format!("{name}: {e}"))?;
        ensure(c.total_rank() == p.vertices().len(), || format!("{name}: total rank {}", c.total_rank()))?;
        ensure(c.ranks[1] == p.num_facets() - p.dim(), || format!("{name}: degree-1 rank {}", c.ranks[1]))?;
        names.push(name);
    }
    let t = within(start, RANK_SUITE_LIMIT)?;
    Ok(format!("{} examples, {t}", names.len()))
}

/// `CP^n` with basis `1, v, ..., v^n`: `v^a v^b = T^{n+1} v^{a+b-n-1}` past the top.
fn projective_oracle(n: usize, a: usize, b: usize) -> Vec<TPoly> {
    let mut out = vec![TPoly::zero(); n + 1];
    if a + b <= n {
        out[a + b] = tpoly(&[1]);
    } else {
        let mut c = vec![0; n + 2];
        c[n + 1] = 1;
        out[a + b - n - 1] = tpoly(&c);
    }
    out
}

fn criterion_3() -> Check {
    for (name, n, generator) in [("cp1", 1usize, 0usize), ("cp2", 2, 2), ("cp3", 3, 3)] {
        let p = corpus::load(name).map_err(|e| e.to_string())?;
        let qp = quantum_presentation(&p).map_err(|e| e.to_string())?;
        let expected: Vec<Vec<u32>> = (0..=n as u32)
            .map(|k| {
                let mut e = vec![0; p.num_facets()];
                e[generator] = k;
                e
            })
            .collect();
        ensure(basis_exponents(&qp) == expected, || format!("{name}: basis {:?}", basis_exponents(&qp)))?;
        compare_table(&qp, |a, b| projective_oracle(n, a, b)).map_err(|e| format!("{name}: {e}"))?;
    }

    // CP1 x CP1 as the tensor square of CP1, basis 1, x, y, xy
    let p = corpus::load("cp1xcp1").map_err(|e| e.to_string())?;
    let qp = quantum_presentation(&p).map_err(|e| e.to_string())?;
    let basis = basis_exponents(&qp);
    let bidegree = |e: &Vec<u32>| (e[0] + e[2], e[1] + e[3]);
    let found: Vec<(u32, u32)> = basis.iter().map(bidegree).collect();
    ensure(found == vec![(0, 0), (1, 0), (0, 1), (1, 1)], || format!("cp1xcp1 basis {basis:?}"))?;
    ensure(basis[3] == vec![1, 1, 0, 0], || "v1*v2 is not a basis element".into())?;
    compare_table(&qp, |a, b| {
        let (ax, ay) = found[a];
        let (bx, by) = found[b];
        let x = projective_oracle(1, ax as usize, bx as usize);
        let y = projective_oracle(1, ay as usize, by as usize);
        let mut out = vec![TPoly::zero(); 4];
        for (i, px) in x.iter().enumerate() {
            for (j, py) in y.iter().enumerate() {
                let k = found.iter().position(|&d| d == (i as u32, j as u32)).unwrap();
                out[k] = out[k].add(&px.mul(py));
            }
        }
        out
    })?;

    for name in ["c1", "c2", "c3"] {
        let p = corpus::load(name).map_err(|e| e.to_string())?;
        let qp = quantum_presentation(&p).map_err(|e| e.to_string())?;
        ensure(qp.basis().len() == 1 && qp.structure[0][0] == vec![tpoly(&[1])], || format!("{name}: not rank one"))?;
    }
    Ok("CP1, CP2, CP3, CP1xCP1, C1..C3 match hand tables".into())
}

fn cm_and_profile(p: &DelzantPolyhedron) -> Result<(), String> {
    let k = build_nerve(p).map_err(|e| e.to_string())?;
    for field in [Field::Rationals, Field::Prime(2)] {
        let v = reisner_cm_check(&k, field).map_err(|e| e.to_string())?;
        ensure(v.passed, || format!("Reisner fails over {field}: {:?}", v.witness))?;
    }
    let profile = sphere_or_ball_profile(p).map_err(|e| e.to_string())?;
    ensure(profile.matches && profile.compact == p.is_compact(), || format!("profile {profile:?}"))
}

fn criterion_4() -> Check {
    let corpus = corpus::valid_examples();
    for (name, p) in &corpus {
        cm_and_profile(p).map_err(|e| format!("{name}: {e}"))?;
    }
    let mut rng = StdRng::seed_from_u64(4);
    for i in 0..RANDOM_DELZANT_COUNT {
        let p = random_delzant(&mut rng, RANDOM_MAX_DIM, RANDOM_MAX_FACETS);
        cm_and_profile(&p).map_err(|e| format!("random #{i} {}: {e}", p.to_json()))?;
    }
    Ok(format!("{} corpus + {RANDOM_DELZANT_COUNT} random", corpus.len()))
}

fn criterion_5() -> Check {
    for (name, p) in corpus::valid_examples() {
        let h = sr_hilbert_function(&p, p.dim() + 2).map_err(|e| e.to_string())?;
        // (1 - t)^n H_SR(t), computed here from the face-count Hilbert function
        let n = p.dim();
        let expected: Vec<i64> = (0..=n + 2)
            .map(|d| {
                (0..=d.min(n))
                    .map(|i| {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        sign * binomial(n as i64, i as i64).to_i64().unwrap() * h[d - i] as i64
                    })
                    .sum()
            })
            .collect();
        for field in [Field::Rationals, Field::Prime(2)] {
            let r = regular_sequence_check(&p, field, n + 2).map_err(|e| e.to_string())?;
            ensure(r.passed && r.quotient_dims == expected, || {
                format!("{name} over {field}: {:?} vs {expected:?}", r.quotient_dims)
            })?;
        }
    }
    Ok("Q and F2, degrees 0..=n+2".into())
}

fn free_with(p: &DelzantPolyhedron, input: &JacobianInput, what: &str) -> Result<(), String> {
    let r = jacobian_freeness(p, input).map_err(|e| format!("{what}: {e}"))?;
    ensure(r.free && r.m == p.vertices().len(), || format!("{what}: not free ({:?})", r.witness))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(6);
    let units = [q(1, 1), q(-1, 1), q(2, 1), q(1, 3)];
    let mut runs = 0;
    for (name, p) in corpus::valid_examples() {
        for g in 1..=3 {
            free_with(&p, &JacobianInput::unperturbed(q(g, 1), Field::Rationals), &format!("{name} g={g}"))?;
            runs += 1;
        }
        let cone = Cone::new(&p).map_err(|e| e.to_string())?;
        let cutoff = q(PERTURBED_CUTOFF, 1);
        for i in 0..PERTURBATIONS_PER_EXAMPLE {
            let input = JacobianInput {
                perturbations: random_perturbations(&cone, &mut rng, &cutoff),
                rho: None,
                cutoff: cutoff.clone(),
                field: Field::Rationals,
            };
            free_with(&p, &input, &format!("{name} perturbation #{i}"))?;
            runs += 1;
        }
        for unit in &units {
            let mut rho: Vec<BigRational> = (0..p.num_facets()).map(|_| units[rng.gen_range(0..units.len())].clone()).collect();
            rho[0] = unit.clone();
            let input = JacobianInput { rho: Some(rho.clone()), ..JacobianInput::unperturbed(q(2, 1), Field::Rationals) };
            free_with(&p, &input, &format!("{name} rho={rho:?}"))?;
            runs += 1;
        }
    }
    let t = within(start, FREENESS_SUITE_LIMIT)?;
    Ok(format!("{runs} runs free, {t}"))
}

/// Every decomposition `c = h (1,0) + sum t_j (lambda_j, nu_j)` with
/// `h >= 0` and intersecting support, by exhaustive search.
fn brute_decompositions(p: &DelzantPolyhedron, faces: &BTreeSet<FacetSet>, c: &ConeElement) -> Vec<(BigRational, Vec<i64>)> {
    let big_n = p.num_facets();
    let bounds: Vec<i64> = (0..big_n).map(|j| (&c.lambda / p.offset(j)).floor().to_integer().try_into().unwrap()).collect();
    let mut out = Vec::new();
    let mut t = vec![0i64; big_n];
    loop {
        let support = FacetSet::from_indices((0..big_n).filter(|&j| t[j] > 0));
        if faces.contains(&support) {
            let mut lambda = c.lambda.clone();
            let mut nu = c.nu.clone();
            for j in 0..big_n {
                lambda -= p.offset(j) * q(t[j], 1);
                for (x, v) in nu.iter_mut().zip(p.normal(j)) {
                    *x -= t[j] * v;
                }
            }
            if lambda >= BigRational::zero() && nu.iter().all(|&x| x == 0) {
                out.push((lambda, t.clone()));
            }
        }
        let mut j = 0;
        while j < big_n && t[j] == bounds[j] {
            t[j] = 0;
            j += 1;
        }
        if j == big_n {
            return out;
        }
        t[j] += 1;
    }
}

fn criterion_7() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut pairs = 0;
    for (name, p) in corpus::valid_examples() {
        let cone = Cone::new(&p).map_err(|e| e.to_string())?;
        let faces = nonempty_intersections(&p);
        for _ in 0..GAMMA_SAMPLES_PER_EXAMPLE {
            let c = random_gamma_element(&cone, &mut rng, 2);
            let d = cone.intersecting_sum(&c).map_err(|e| format!("{name}: {e}"))?;
            let brute = brute_decompositions(&p, &faces, &c);
            ensure(brute == vec![(d.height.clone(), d.t.clone())], || {
                format!("{name}: {c:?} has decompositions {brute:?}, computed {d:?}")
            })?;
        }
        for _ in 0..SUPERADDITIVITY_PAIRS / 9 + 1 {
            let a = random_gamma_element(&cone, &mut rng, 3);
            let b = random_gamma_element(&cone, &mut rng, 3);
            let (ha, hb, hab) = (cone.height(&a), cone.height(&b), cone.height(&(&a + &b)));
            let (ha, hb, hab) = (ha.map_err(|e| e.to_string())?, hb.map_err(|e| e.to_string())?, hab.map_err(|e| e.to_string())?);
            ensure(hab >= ha + hb, || format!("{name}: superadditivity fails for {a:?}, {b:?}"))?;
            pairs += 1;
        }
        let h = sr_hilbert_function(&p, HILBERT_BRUTE_DEGREE).map_err(|e| e.to_string())?;
        for (d, &count) in h.iter().enumerate() {
            let brute = brute_hilbert(&p, &faces, d);
            ensure(count == brute, || format!("{name}: H({d}) = {count}, enumeration gives {brute}"))?;
        }
    }
    ensure(pairs >= SUPERADDITIVITY_PAIRS, || format!("only {pairs} pairs"))?;
    Ok(format!("{GAMMA_SAMPLES_PER_EXAMPLE} elements per example, {pairs} pairs, Hilbert d <= {HILBERT_BRUTE_DEGREE}"))
}

/// Monomials of degree `d` whose support is a face of the nerve.
fn brute_hilbert(p: &DelzantPolyhedron, faces: &BTreeSet<FacetSet>, d: usize) -> usize {
    fn rec(p: &DelzantPolyhedron, j: usize, left: usize, support: FacetSet, faces: &BTreeSet<FacetSet>) -> usize {
        if j == p.num_facets() {
            return usize::from(left == 0 && faces.contains(&support));
        }
        (0..=left).map(|e| rec(p, j + 1, left - e, if e > 0 { support.with(j) } else { support }, faces)).sum()
    }
    rec(p, 0, d, FacetSet(0), faces)
}

/// Facet subsets with non-empty common intersection, by direct LP test.
fn nonempty_intersections(p: &DelzantPolyhedron) -> BTreeSet<FacetSet> {
    (0u64..1 << p.num_facets()).map(FacetSet).filter(|&s| p.facet_intersection_nonempty(s)).collect()
}

fn criterion_8() -> Check {
    let mut certificates = 0;
    for e in EXAMPLES.iter().filter(|e| e.is_valid()) {
        let p = e.load().map_err(|e| e.to_string())?;
        for j in 0..p.num_facets() {
            let r = divisor_inverse_certificate(&p, j);
            match e.kind {
                ExampleKind::Compact => {
                    let c = r.map_err(|err| format!("{}: {err}", e.name))?;
                    let sum: BigRational =
                        c.multiplicities.iter().enumerate().map(|(k, &m)| p.offset(k) * q(m as i64, 1)).sum();
                    ensure(c.verified && c.exponent == sum.to_string() && c.multiplicities[j] >= 1, || {
                        format!("{}: bad certificate {c:?}", e.name)
                    })?;
                    certificates += 1;
                }
                _ => ensure(r == Err(Error::NonCompact), || format!("{}: expected the non-compact error", e.name))?,
            }
        }
    }
    Ok(format!("{certificates} verified certificates"))
}

fn criterion_9() -> Check {
    let mut triples = 0;
    for (name, p) in corpus::valid_examples() {
        let qp = quantum_presentation(&p).map_err(|e| e.to_string())?;
        let m = qp.basis().len();
        for a in 0..m {
            for b in 0..m {
                ensure(qp.structure[a][b] == qp.structure[b][a], || format!("{name}: e{a} e{b} not commutative"))?;
                let at_zero: Vec<BigRational> = qp.structure[a][b].iter().map(|t| t.at_zero()).collect();
                ensure(at_zero == qp.classical.structure[a][b], || format!("{name}: T=0 differs at ({a},{b})"))?;
                for c in 0..m {
                    let left = qp.triple_product_left(a, b, c).map_err(|e| e.to_string())?;
                    let right = qp.triple_product_left(b, c, a).map_err(|e| e.to_string())?;
                    ensure(left == right, || format!("{name}: associativity fails at ({a},{b},{c})"))?;
                    triples += 1;
                }
            }
        }
        ensure(qp.is_associative().map_err(|e| e.to_string())?, || format!("{name}: associativity check"))?;
    }
    Ok(format!("{triples} triples"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("O(-1) end to end", criterion_1),
        ("rank formulas", criterion_2),
        ("known quantum rings", criterion_3),
        ("Cohen-Macaulay suite", criterion_4),
        ("regular-sequence Hilbert check", criterion_5),
        ("freeness at finite cutoff", criterion_6),
        ("brute-force oracles", criterion_7),
        ("invertibility certificates", criterion_8),
        ("structure-constant laws", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (label, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {label} ({detail})", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {label}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
