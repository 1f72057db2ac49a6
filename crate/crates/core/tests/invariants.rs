//! Property tests for the structural invariants of every module.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use toricqh::conemonoid::{Cone, ConeElement, FilteredElement};
use toricqh::corpus::{self, random_delzant, random_gamma_element};
use toricqh::exactmath::{hermite_normal_form, rat, smith_normal_form, solve_rational, IntMatrix};
use toricqh::polyhedron::FacetSet;
use toricqh::presentation::{
    apply_bfield, classical_presentation, divisor_inverse_certificate, quantum_presentation, random_unimodular, Ring,
};
use toricqh::srtop::{build_nerve, reduced_homology, regular_sequence_check, reisner_cm_check, sr_hilbert_function};
use toricqh::{DelzantPolyhedron, Field};

fn delzant(seed: u64) -> DelzantPolyhedron {
    random_delzant(&mut StdRng::seed_from_u64(seed), 3, 8)
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

fn faces_by_lp(p: &DelzantPolyhedron) -> BTreeSet<FacetSet> {
    (0u64..1 << p.num_facets()).map(FacetSet).filter(|&s| p.facet_intersection_nonempty(s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms_recompose(m in matrix()) {
        let (h, u) = hermite_normal_form(&m);
        prop_assert_eq!(u.mul(&m), h);
        prop_assert!(u.determinant().abs().is_one());

        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s.clone());
        prop_assert!(snf.u.determinant().abs().is_one() && snf.v.determinant().abs().is_one());
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        if m.rows() == m.cols() {
            let prod = d.iter().fold(BigInt::one(), |a, x| a * x);
            prop_assert_eq!(m.determinant().abs(), prod);
        }
    }

    #[test]
    fn solve_substitutes_back(m in matrix(), x in prop::collection::vec(-5i64..=5, 4)) {
        let x: Vec<BigRational> = x[..m.cols()].iter().map(|&v| rat(v, 1)).collect();
        let rows = m.to_rational_rows();
        let b: Vec<BigRational> = rows.iter().map(|r| r.iter().zip(&x).map(|(a, c)| a * c).sum()).collect();
        let y = solve_rational(&m, &b).expect("consistent system");
        let back: Vec<BigRational> = rows.iter().map(|r| r.iter().zip(&y).map(|(a, c)| a * c).sum()).collect();
        prop_assert_eq!(back, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vertex_data_is_invariant(seed in any::<u64>()) {
        let p = delzant(seed);
        let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
        let a = random_unimodular(p.dim(), &mut rng);
        let moved = p.transform_normals(&a).unwrap();
        prop_assert_eq!(moved.vertices().len(), p.vertices().len());
        let perm: Vec<usize> = (0..p.num_facets()).rev().collect();
        let relabelled = p.permute_facets(&perm).unwrap();
        prop_assert_eq!(relabelled.vertices().len(), p.vertices().len());
        // translating by an integer vector keeps the combinatorics when offsets stay positive
        let b = vec![1i64; p.dim()];
        let shifted: Vec<BigRational> =
            (0..p.num_facets()).map(|j| p.offset(j) + rat(p.normal(j).iter().zip(&b).map(|(x, y)| x * y).sum(), 1)).collect();
        if shifted.iter().all(|l| l.is_positive()) {
            prop_assert_eq!(p.with_offsets(&shifted).unwrap().vertices().len(), p.vertices().len());
        }
        for v in p.vertices() {
            prop_assert_eq!(v.incident.len(), p.dim());
            let rows: Vec<Vec<i64>> = v.incident.iter().map(|j| p.normal(j).to_vec()).collect();
            prop_assert!(IntMatrix::from_rows(p.dim(), &rows).determinant().abs().is_one());
        }
    }

    #[test]
    fn nerve_and_minimal_nonfaces(seed in any::<u64>()) {
        let p = delzant(seed);
        let faces = faces_by_lp(&p);
        let (nerve, minimal) = p.nerve_faces();
        prop_assert_eq!(&nerve, &faces);
        for &s in &faces {
            for j in s.iter() {
                prop_assert!(faces.contains(&s.without(j)));
            }
        }
        for s in (0u64..1 << p.num_facets()).map(FacetSet) {
            let blocked = minimal.iter().any(|m| m.is_subset(s));
            prop_assert_eq!(blocked, !faces.contains(&s));
        }
    }

    #[test]
    fn heights_are_superadditive(seed in any::<u64>()) {
        let p = delzant(seed);
        let cone = Cone::new(&p).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..20 {
            let a = random_gamma_element(&cone, &mut rng, 3);
            let b = random_gamma_element(&cone, &mut rng, 3);
            let sum = &a + &b;
            for ((ta, tb), tab) in cone.theta_values(&a).iter().zip(cone.theta_values(&b)).zip(cone.theta_values(&sum)) {
                prop_assert_eq!(ta + tb, tab);
            }
            prop_assert!(cone.height(&sum).unwrap() >= cone.height(&a).unwrap() + cone.height(&b).unwrap());
            let d = cone.intersecting_sum(&a).unwrap();
            let mut back = ConeElement::new(d.height.clone(), vec![0; p.dim()]);
            for (j, &t) in d.t.iter().enumerate() {
                back = &back + &ConeElement::generator(&p, j).scaled(t);
            }
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn height_zero_products_are_faces(seed in any::<u64>()) {
        let p = delzant(seed);
        let cone = Cone::new(&p).unwrap();
        let faces = faces_by_lp(&p);
        for s in (0u64..1 << p.num_facets()).map(FacetSet) {
            let mut c = ConeElement::zero(p.dim());
            for j in s.iter() {
                c = &c + &ConeElement::generator(&p, j);
            }
            prop_assert_eq!(cone.height(&c).unwrap().is_zero(), faces.contains(&s));
        }
    }

    #[test]
    fn truncation_is_a_congruence(seed in any::<u64>(), g in 1i64..=6) {
        let p = delzant(seed);
        let cone = Cone::new(&p).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let element = |rng: &mut StdRng| {
            let mut x = FilteredElement::zero();
            for k in 1..=3 {
                x.add_term(cone.monomial(random_gamma_element(&cone, rng, 2)).unwrap(), rat(k, 2));
            }
            x
        };
        let (x, y) = (element(&mut rng), element(&mut rng));
        let g = rat(g, 2);
        let direct = x.multiply(&y, &cone).truncate(&g);
        let staged = x.truncate(&g).multiply(&y.truncate(&g), &cone).truncate(&g);
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn log_derivative_matches_components(seed in any::<u64>()) {
        let p = delzant(seed);
        let cone = Cone::new(&p).unwrap();
        let big_n = p.num_facets();
        // W = sum_k c_k T^{h_k} prod v_j^{m_kj}; W_j collects m_kj c_k (...)
        let mut w = FilteredElement::zero();
        let mut parts = vec![FilteredElement::zero(); big_n];
        for k in 0..4i64 {
            let m: Vec<i64> = (0..big_n).map(|j| (seed as i64 + 3 * k + j as i64).rem_euclid(3)).collect();
            let mut c = ConeElement::new(rat(k, 2), vec![0; p.dim()]);
            for (j, &e) in m.iter().enumerate() {
                c = &c + &ConeElement::generator(&p, j).scaled(e);
            }
            let mono = cone.monomial(c).unwrap();
            let coeff = rat(k + 1, 1);
            w.add_term(mono.clone(), coeff.clone());
            for (j, part) in parts.iter_mut().enumerate() {
                part.add_term(mono.clone(), &coeff * rat(m[j], 1));
            }
        }
        let derived = w.log_derivative_generators(p.dim());
        for (i, d) in derived.iter().enumerate() {
            let mut expected = FilteredElement::zero();
            for (j, part) in parts.iter().enumerate() {
                expected = expected.add(&part.scale(&rat(p.normal(j)[i], 1)));
            }
            prop_assert_eq!(d, &expected);
        }
    }

    #[test]
    fn homology_and_cohen_macaulay(seed in any::<u64>()) {
        let p = delzant(seed);
        let k = build_nerve(&p).unwrap();
        for field in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
            let h = reduced_homology(&k, field).unwrap();
            prop_assert_eq!(h.euler_characteristic(), k.reduced_euler_characteristic());
            prop_assert!(reisner_cm_check(&k, field).unwrap().passed);
        }
        let r = regular_sequence_check(&p, Field::Rationals, p.dim() + 2).unwrap();
        prop_assert!(r.passed);
        prop_assert_eq!(r.total, p.vertices().len() as i64);
        prop_assert_eq!(r.quotient_dims[1], (p.num_facets() - p.dim()) as i64);
    }

    #[test]
    fn hilbert_function_counts_face_monomials(seed in any::<u64>()) {
        let p = delzant(seed);
        let faces = faces_by_lp(&p);
        let h = sr_hilbert_function(&p, 4).unwrap();
        let big_n = p.num_facets();
        let mut counts = [0usize; 5];
        // every exponent vector with entries <= 4
        let mut e = vec![0usize; big_n];
        loop {
            let d: usize = e.iter().sum();
            let support = FacetSet::from_indices((0..big_n).filter(|&j| e[j] > 0));
            if d <= 4 && faces.contains(&support) {
                counts[d] += 1;
            }
            let mut j = 0;
            while j < big_n && e[j] == 4 {
                e[j] = 0;
                j += 1;
            }
            if j == big_n {
                break;
            }
            e[j] += 1;
        }
        prop_assert_eq!(h, counts.to_vec());
    }

    #[test]
    fn classical_ranks_and_bfield(seed in any::<u64>(), units in prop::collection::vec(prop::sample::select(vec![(1i64, 1i64), (-1, 1), (2, 1), (1, 3)]), 8)) {
        let p = delzant(seed);
        let c = classical_presentation(&p, Ring::Integers).unwrap();
        prop_assert_eq!(c.total_rank(), p.vertices().len());
        prop_assert_eq!(c.ranks[1], p.num_facets() - p.dim());
        let rho: Vec<BigRational> = units[..p.num_facets()].iter().map(|&(a, b)| rat(a, b)).collect();
        let b = apply_bfield(&p, &rho, Ring::Field(Field::Rationals)).unwrap();
        prop_assert_eq!(&b.classical.ranks, &c.ranks);
        prop_assert_eq!(b.classical.basis.len(), c.basis.len());
    }

    #[test]
    fn inverse_certificates_verify(seed in any::<u64>()) {
        let p = delzant(seed);
        for j in 0..p.num_facets() {
            match divisor_inverse_certificate(&p, j) {
                Ok(c) => {
                    prop_assert!(p.is_compact());
                    let sum: BigRational = c.multiplicities.iter().enumerate().map(|(k, &m)| p.offset(k) * rat(m as i64, 1)).sum();
                    prop_assert!(c.verified);
                    prop_assert_eq!(c.exponent, sum.to_string());
                }
                Err(e) => prop_assert_eq!(e, toricqh::Error::NonCompact),
            }
        }
    }

    #[test]
    fn quantum_presentation_is_lattice_invariant(index in 0usize..9, seed in any::<u64>()) {
        let (_, p) = corpus::valid_examples().swap_remove(index);
        let mut rng = StdRng::seed_from_u64(seed);
        let moved = p.transform_normals(&random_unimodular(p.dim(), &mut rng)).unwrap();
        let q0 = quantum_presentation(&p).unwrap();
        let q1 = quantum_presentation(&moved).unwrap();
        prop_assert_eq!(&q0.ranks, &q1.ranks);
        prop_assert_eq!(q0.basis().len(), q1.basis().len());
        prop_assert!(q1.is_associative().unwrap());
    }
}
