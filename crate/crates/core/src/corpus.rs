//! Bundled example polyhedra and a random generator of Delzant polyhedra.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::conemonoid::{Cone, ConeElement, FilteredElement};
use crate::error::{Error, Result};
use crate::exactmath::rat;
use crate::polyhedron::DelzantPolyhedron;
use crate::presentation::random_unimodular;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    Compact,
    NonCompact,
    /// parses, but fails the Delzant check
    NotDelzant,
    /// normals do not span, so there is no vertex
    Vertexless,
}

#[derive(Clone, Copy, Debug)]
pub struct Example {
    /// file stem under `data/`
    pub name: &'static str,
    pub json: &'static str,
    pub kind: ExampleKind,
}

impl Example {
    pub fn load(&self) -> Result<DelzantPolyhedron> {
        DelzantPolyhedron::from_json(self.json)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.kind, ExampleKind::Compact | ExampleKind::NonCompact)
    }
}

macro_rules! example {
    ($name:literal, $kind:ident) => {
        Example { name: $name, json: include_str!(concat!("../data/", $name, ".json")), kind: ExampleKind::$kind }
    };
}

pub const EXAMPLES: &[Example] = &[
    example!("cp1", Compact),
    example!("cp2", Compact),
    example!("cp3", Compact),
    example!("cp1xcp1", Compact),
    example!("hirzebruch_f1", Compact),
    example!("c1", NonCompact),
    example!("c2", NonCompact),
    example!("c3", NonCompact),
    example!("o_minus_one", NonCompact),
    example!("non_delzant", NotDelzant),
    example!("strip", Vertexless),
];

pub fn example(name: &str) -> Result<&'static Example> {
    EXAMPLES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Precondition(format!("no bundled example named {name:?}")))
}

pub fn load(name: &str) -> Result<DelzantPolyhedron> {
    example(name)?.load()
}

/// Every bundled Delzant polyhedron, in corpus order.
pub fn valid_examples() -> Vec<(&'static str, DelzantPolyhedron)> {
    EXAMPLES
        .iter()
        .filter(|e| e.is_valid())
        .map(|e| (e.name, e.load().expect("bundled example parses")))
        .collect()
}

fn simplex(n: usize, offsets: &[BigRational]) -> Vec<(Vec<i64>, BigRational)> {
    let mut facets: Vec<_> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            (e, offsets[i].clone())
        })
        .collect();
    facets.push((vec![-1; n], offsets[n].clone()));
    facets
}

/// Concatenates facet lists living on complementary coordinates.
fn product(a: (usize, Vec<(Vec<i64>, BigRational)>), b: (usize, Vec<(Vec<i64>, BigRational)>)) -> (usize, Vec<(Vec<i64>, BigRational)>) {
    let n = a.0 + b.0;
    let mut out = Vec::new();
    for (nu, l) in a.1 {
        let mut v = nu;
        v.resize(n, 0);
        out.push((v, l));
    }
    for (nu, l) in b.1 {
        let mut v = vec![0; a.0];
        v.extend(nu);
        out.push((v, l));
    }
    (n, out)
}

fn random_offset(rng: &mut impl Rng) -> BigRational {
    rat(rng.gen_range(1..=6), rng.gen_range(1..=2))
}

fn random_base(n: usize, rng: &mut impl Rng) -> (usize, Vec<(Vec<i64>, BigRational)>) {
    let offsets: Vec<BigRational> = (0..=n).map(|_| random_offset(rng)).collect();
    match rng.gen_range(0..4) {
        0 => (n, simplex(n, &offsets)),
        // orthant
        1 => (n, simplex(n, &offsets).into_iter().take(n).collect()),
        2 if n >= 2 => {
            let k = rng.gen_range(1..n);
            product(random_base(k, rng), random_base(n - k, rng))
        }
        _ => {
            let mut facets = simplex(1, &offsets);
            let mut dim = 1;
            while dim < n {
                let o: Vec<BigRational> = (0..2).map(|_| random_offset(rng)).collect();
                let (d, f) = product((dim, facets), (1, simplex(1, &o)));
                dim = d;
                facets = f;
            }
            (dim, facets)
        }
    }
}

/// Cuts off the vertex at `index`: the new normal is the sum of the
/// incident normals and the cut has depth `eps`.
fn blow_up(p: &DelzantPolyhedron, index: usize, eps: &BigRational) -> Option<DelzantPolyhedron> {
    let v = &p.vertices()[index];
    let mut normal = vec![0i64; p.dim()];
    let mut offset = BigRational::zero();
    for j in v.incident.iter() {
        for (a, b) in normal.iter_mut().zip(p.normal(j)) {
            *a += b;
        }
        offset += p.offset(j);
    }
    offset -= eps;
    if !offset.is_positive() {
        return None;
    }
    let q = p.with_extra_facet(normal, offset).ok()?;
    (q.check_delzant().passed && q.vertices().len() == p.vertices().len() + p.dim() - 1).then_some(q)
}

/// A random Delzant polyhedron with `dim <= max_dim` and at most
/// `max_facets` facets: a simplex, orthant or product, some corner
/// blow-ups, then a random unimodular change of coordinates.
pub fn random_delzant(rng: &mut impl Rng, max_dim: usize, max_facets: usize) -> DelzantPolyhedron {
    assert!(max_dim >= 1 && max_facets > max_dim);
    loop {
        let n = rng.gen_range(1..=max_dim);
        let (dim, facets) = random_base(n, rng);
        if facets.len() > max_facets {
            continue;
        }
        let Ok(mut p) = DelzantPolyhedron::new(dim, facets) else { continue };
        let blowups = rng.gen_range(0..=max_facets - p.num_facets());
        for _ in 0..blowups {
            let index = rng.gen_range(0..p.vertices().len());
            let mut eps = rat(1, rng.gen_range(2..=4));
            for _ in 0..6 {
                if let Some(q) = blow_up(&p, index, &eps) {
                    p = q;
                    break;
                }
                eps /= rat(2, 1);
            }
        }
        let a = random_unimodular(dim, rng);
        let Ok(mut q) = p.transform_normals(&a) else { continue };
        let mut perm: Vec<usize> = (0..q.num_facets()).collect();
        perm.shuffle(rng);
        if let Ok(r) = q.permute_facets(&perm) {
            q = r;
        }
        if q.check_delzant().passed {
            return q;
        }
    }
}

/// A random element of the cone's lattice points: a non-negative
/// combination of the generators plus a multiple of `(1/2, 0)`.
pub fn random_gamma_element(cone: &Cone, rng: &mut impl Rng, max_mult: i64) -> ConeElement {
    let p = cone.polyhedron();
    let mut c = ConeElement::new(rat(rng.gen_range(0..=2), 2), vec![0; p.dim()]);
    for j in 0..p.num_facets() {
        let k = rng.gen_range(0..=max_mult);
        c = &c + &ConeElement::generator(p, j).scaled(k);
    }
    c
}

/// One random perturbation per facet: a few monomials of positive height
/// below `max_height` with small random rational coefficients.
pub fn random_perturbations(cone: &Cone, rng: &mut impl Rng, max_height: &BigRational) -> Vec<FilteredElement> {
    (0..cone.num_facets())
        .map(|_| {
            let mut w = FilteredElement::zero();
            for _ in 0..rng.gen_range(0..=2) {
                for _ in 0..20 {
                    let c = random_gamma_element(cone, rng, 2);
                    let Ok(m) = cone.monomial(c) else { continue };
                    if m.height().is_positive() && m.height() < max_height {
                        let coeff = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
                        w.add_term(m, if coeff.is_zero() { rat(1, 1) } else { coeff });
                        break;
                    }
                }
            }
            w
        })
        .collect()
}
