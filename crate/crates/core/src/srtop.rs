//! Nerve complexes, simplicial homology, Reisner's criterion and the
//! regular-sequence check on Stanley-Reisner rings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{binomial, rank_over, Field};
use crate::polyhedron::{DelzantPolyhedron, FacetSet};

/// A simplicial complex on the ground set `0..ground` (labels `1..=ground`),
/// stored as all of its faces. The empty face is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    ground: usize,
    faces: BTreeSet<FacetSet>,
    maximal: Vec<FacetSet>,
}

/// The nerve of the facets of a polyhedron.
pub type NerveComplex = SimplicialComplex;

impl SimplicialComplex {
    /// Downward closure of the given faces.
    pub fn from_maximal_faces(ground: usize, generators: &[FacetSet]) -> Result<Self> {
        let mut faces = BTreeSet::new();
        faces.insert(FacetSet::EMPTY);
        for &g in generators {
            if g.iter().any(|j| j >= ground) {
                return Err(Error::Precondition(format!("face {g:?} leaves the ground set")));
            }
            let members: Vec<usize> = g.iter().collect();
            for mask in 0u64..(1u64 << members.len()) {
                faces.insert(FacetSet::from_indices(
                    members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &j)| j),
                ));
            }
        }
        Ok(Self::from_closed_faces(ground, faces))
    }

    fn from_closed_faces(ground: usize, faces: BTreeSet<FacetSet>) -> Self {
        let mut maximal: Vec<FacetSet> = faces
            .iter()
            .copied()
            .filter(|&f| (0..ground).all(|j| f.contains(j) || !faces.contains(&f.with(j))))
            .collect();
        maximal.sort_by_key(|f| f.labels());
        SimplicialComplex { ground, faces, maximal }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn faces(&self) -> &BTreeSet<FacetSet> {
        &self.faces
    }

    pub fn maximal_faces(&self) -> &[FacetSet] {
        &self.maximal
    }

    /// Sorted 1-based labels of the maximal faces.
    pub fn maximal_labels(&self) -> Vec<Vec<usize>> {
        self.maximal.iter().map(|f| f.labels()).collect()
    }

    pub fn contains(&self, face: FacetSet) -> bool {
        self.faces.contains(&face)
    }

    /// `max |F| - 1`; the complex `{}` has dimension -1.
    pub fn dim(&self) -> i64 {
        self.faces.iter().map(|f| f.len() as i64).max().unwrap_or(0) - 1
    }

    /// `f_{k}` = number of faces of dimension `k`, for `k = -1..=dim`.
    pub fn face_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; (self.dim() + 2) as usize];
        for f in &self.faces {
            counts[f.len()] += 1;
        }
        counts
    }

    /// Reduced Euler characteristic `sum_k (-1)^k f_k` over `k >= -1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.face_counts().iter().enumerate().map(|(i, &f)| if i % 2 == 1 { f as i64 } else { -(f as i64) }).sum()
    }

    /// `{J' : J' and J disjoint, J' + J a face}`.
    pub fn link(&self, face: FacetSet) -> Result<SimplicialComplex> {
        if !self.contains(face) {
            return Err(Error::Precondition(format!("{face:?} is not a face")));
        }
        let faces = self
            .faces
            .iter()
            .copied()
            .filter(|f| f.intersection(face).is_empty() && self.faces.contains(&f.union(face)))
            .collect();
        Ok(Self::from_closed_faces(self.ground, faces))
    }
}

/// The nerve of a Delzant polyhedron.
pub fn build_nerve(p: &DelzantPolyhedron) -> Result<NerveComplex> {
    p.require_delzant()?;
    Ok(SimplicialComplex::from_closed_faces(p.num_facets(), p.nerve_faces().0))
}

/// Reduced Betti numbers indexed by degree `-1..=dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub field: String,
    pub betti: Vec<usize>,
}

impl HomologyProfile {
    /// Reduced Betti number in degree `k >= -1`; zero outside the stored range.
    pub fn betti(&self, k: i64) -> usize {
        usize::try_from(k + 1).ok().and_then(|i| self.betti.get(i).copied()).unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(i, &b)| if i % 2 == 1 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0)
    }

    /// Reduced homology of the `k`-sphere: a single one in degree `k`.
    pub fn matches_sphere(&self, k: i64) -> bool {
        let top = self.betti.len() as i64 - 2;
        (-1..=top.max(k)).all(|d| self.betti(d) == usize::from(d == k))
    }
}

/// Reduced simplicial homology from boundary-matrix ranks.
pub fn reduced_homology(k: &SimplicialComplex, field: Field) -> Result<HomologyProfile> {
    let dim = k.dim();
    // faces grouped by dimension, each indexed
    let mut by_dim: Vec<Vec<FacetSet>> = vec![Vec::new(); (dim + 2) as usize];
    for &f in k.faces() {
        by_dim[f.len()].push(f);
    }
    // ranks[i] = rank of the boundary from dimension i-1 chains to i-2 chains
    let mut ranks = vec![0usize; by_dim.len() + 1];
    for size in 1..by_dim.len() {
        let lower = &by_dim[size - 1];
        let index = |f: FacetSet| lower.binary_search(&f).expect("boundary face present");
        let rows: Vec<Vec<(usize, BigRational)>> = by_dim[size]
            .iter()
            .map(|&f| {
                f.iter()
                    .enumerate()
                    .map(|(pos, v)| {
                        let sign = if pos % 2 == 0 { 1 } else { -1 };
                        (index(f.without(v)), BigRational::from_integer(sign.into()))
                    })
                    .collect()
            })
            .collect();
        ranks[size] = rank_over(field, lower.len(), &rows)?;
    }
    let betti = (0..by_dim.len()).map(|size| by_dim[size].len() - ranks[size] - ranks[size + 1]).collect();
    Ok(HomologyProfile { field: field.to_string(), betti })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmWitness {
    /// 1-based labels of the face whose link fails
    pub face: Vec<usize>,
    pub degree: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmVerdict {
    pub field: String,
    pub passed: bool,
    pub links_checked: usize,
    pub witness: Option<CmWitness>,
}

/// Reisner's criterion: every link (including the complex itself) has
/// reduced homology only in its top dimension.
pub fn reisner_cm_check(k: &SimplicialComplex, field: Field) -> Result<CmVerdict> {
    let mut checked = 0;
    for &face in k.faces() {
        let l = k.link(face)?;
        let h = reduced_homology(&l, field)?;
        checked += 1;
        for d in -1..l.dim() {
            let rank = h.betti(d);
            if rank != 0 {
                return Ok(CmVerdict {
                    field: field.to_string(),
                    passed: false,
                    links_checked: checked,
                    witness: Some(CmWitness { face: face.labels(), degree: d, rank }),
                });
            }
        }
    }
    Ok(CmVerdict { field: field.to_string(), passed: true, links_checked: checked, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereBallReport {
    pub compact: bool,
    /// `"S^k"` for compact input, `"point"` otherwise
    pub expected: String,
    pub profiles: Vec<HomologyProfile>,
    pub matches: bool,
}

/// Compares the nerve's homology with `S^{n-1}` (compact) or a point,
/// over `Q` and `F_2`.
pub fn sphere_or_ball_profile(p: &DelzantPolyhedron) -> Result<SphereBallReport> {
    let k = build_nerve(p)?;
    let compact = p.is_compact();
    let n = p.dim() as i64;
    let mut profiles = Vec::new();
    let mut matches = true;
    for field in [Field::Rationals, Field::Prime(2)] {
        let h = reduced_homology(&k, field)?;
        matches &= if compact { h.matches_sphere(n - 1) } else { h.is_acyclic() };
        profiles.push(h);
    }
    let expected = if compact { format!("S^{}", n - 1) } else { "point".to_string() };
    Ok(SphereBallReport { compact, expected, profiles, matches })
}

/// Face-counting formula for the Hilbert function of a Stanley-Reisner ring.
pub fn hilbert_function(k: &SimplicialComplex, maxdeg: usize) -> Vec<BigInt> {
    (0..=maxdeg as i64)
        .map(|d| {
            if d == 0 {
                return BigInt::one();
            }
            k.faces().iter().filter(|f| !f.is_empty()).map(|f| binomial(d - 1, f.len() as i64 - 1)).sum()
        })
        .collect()
}

pub fn sr_hilbert_function(p: &DelzantPolyhedron, maxdeg: usize) -> Result<Vec<usize>> {
    let k = build_nerve(p)?;
    Ok(hilbert_function(&k, maxdeg).iter().map(|x| x.to_usize().expect("count fits")).collect())
}

/// Exponent vectors of total degree `d` whose support is a face, sorted
/// lexicographically.
pub fn face_monomials(k: &SimplicialComplex, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; k.ground()];
    fn rec(k: &SimplicialComplex, j: usize, left: u32, support: FacetSet, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            let s = if e > 0 { support.with(j) } else { support };
            if e > 0 && !k.contains(s) {
                break;
            }
            cur[j] = e;
            rec(k, j + 1, left - e, s, cur, out);
        }
        cur[j] = 0;
    }
    rec(k, 0, d as u32, FacetSet::EMPTY, &mut current, &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularSequenceReport {
    pub field: String,
    pub passed: bool,
    pub quotient_dims: Vec<i64>,
    pub expected: Vec<i64>,
    pub total: i64,
    pub vertices: usize,
}

/// Per-degree dimensions of `SR / (c_1, ..., c_n)` with
/// `c_i = sum_j nu_j[i] Z_j`, compared against `(1-t)^n H_SR(t)`.
pub fn regular_sequence_check(p: &DelzantPolyhedron, field: Field, maxdeg: usize) -> Result<RegularSequenceReport> {
    let n = p.dim();
    if maxdeg < n {
        return Err(Error::Precondition(format!("maxdeg {maxdeg} is below the dimension {n}")));
    }
    let k = build_nerve(p)?;
    let hilbert = hilbert_function(&k, maxdeg);
    let expected: Vec<i64> = (0..=maxdeg)
        .map(|d| {
            let v: BigInt =
                (0..=n.min(d)).map(|i| binomial(n as i64, i as i64) * &hilbert[d - i] * if i % 2 == 0 { 1 } else { -1 }).sum();
            v.to_i64().expect("coefficient fits")
        })
        .collect();

    let mut quotient_dims = Vec::with_capacity(maxdeg + 1);
    let mut prev: Vec<Vec<u32>> = Vec::new();
    for d in 0..=maxdeg {
        let basis = face_monomials(&k, d);
        let mut rows: Vec<Vec<(usize, BigRational)>> = Vec::new();
        for mu in &prev {
            for i in 0..n {
                let mut row = Vec::new();
                for j in 0..p.num_facets() {
                    let c = p.normal(j)[i];
                    if c == 0 {
                        continue;
                    }
                    let mut m = mu.clone();
                    m[j] += 1;
                    if let Ok(idx) = basis.binary_search(&m) {
                        row.push((idx, BigRational::from_integer(c.into())));
                    }
                }
                rows.push(row);
            }
        }
        let rank = rank_over(field, basis.len(), &rows)?;
        quotient_dims.push((basis.len() - rank) as i64);
        prev = basis;
    }
    let total = quotient_dims.iter().sum();
    Ok(RegularSequenceReport {
        field: field.to_string(),
        passed: quotient_dims == expected,
        quotient_dims,
        expected,
        total,
        vertices: p.vertices().len(),
    })
}
