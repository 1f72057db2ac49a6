//! Delzant polyhedra `{x : <x, nu_j> >= -lambda_j}` with primitive integer
//! normals and positive rational offsets.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::lp::{LinearProgram, LpOutcome, Relation};
use crate::exactmath::{
    format_rational, gcd_all, int_rat, integer_kernel, parse_rational, solve_rational_rows, IntMatrix,
    RatVector,
};

/// A set of facet indices, stored as a bitmask over `0..N` (`N <= 64`).
/// Labels shown to users are 1-based.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetSet(pub u64);

impl FacetSet {
    pub const EMPTY: FacetSet = FacetSet(0);

    pub fn singleton(j: usize) -> Self {
        FacetSet(1 << j)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        FacetSet(it.into_iter().fold(0, |acc, j| acc | (1 << j)))
    }

    /// From 1-based labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_indices(labels.iter().map(|l| l - 1))
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn with(self, j: usize) -> Self {
        FacetSet(self.0 | 1 << j)
    }

    pub fn without(self, j: usize) -> Self {
        FacetSet(self.0 & !(1 << j))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: FacetSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: FacetSet) -> Self {
        FacetSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FacetSet) -> Self {
        FacetSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&j| self.contains(j))
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|j| j + 1).collect()
    }
}

impl fmt::Debug for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{}}}", labels.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: RatVector,
    /// All facets active at `point`.
    pub incident: FacetSet,
}

/// Input schema shared with the command line tool.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyhedronSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub facets: Vec<FacetSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FacetSpec {
    pub normal: Vec<i64>,
    pub offset: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantPolyhedron {
    name: Option<String>,
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantViolation {
    pub vertex: Vec<String>,
    pub incident: Vec<usize>,
    pub determinant: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantReport {
    pub passed: bool,
    pub has_vertex: bool,
    pub violations: Vec<DelzantViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub has_vertex: bool,
    pub split_rank: usize,
    /// Lattice basis of `{x : <x, nu_j> = 0 for all j}`.
    pub annihilator: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneNormalization {
    /// Translation `b` with `lambda_j = level + <b, nu_j>`.
    pub shift: RatVector,
    /// Common offset after translation, before rescaling.
    pub level: BigRational,
    /// True when `level != 1` and the offsets were divided by it.
    pub rescaled: bool,
    /// The translated polyhedron with every offset equal to one.
    pub polyhedron: DelzantPolyhedron,
}

impl DelzantPolyhedron {
    /// Validates primitivity, positivity and irredundancy; normals that do
    /// not span are accepted (see [`Self::check_vertex_and_splitting`]).
    pub fn new(dim: usize, facets: Vec<(Vec<i64>, BigRational)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        if facets.is_empty() {
            return Err(Error::Parse("at least one facet is required".into()));
        }
        if facets.len() > 64 {
            return Err(Error::Parse("at most 64 facets are supported".into()));
        }
        let mut out = Vec::with_capacity(facets.len());
        for (j, (normal, offset)) in facets.into_iter().enumerate() {
            if normal.len() != dim {
                return Err(Error::Parse(format!("facet {} normal has length {}, expected {dim}", j + 1, normal.len())));
            }
            let g = gcd_all(&normal.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
            if !g.is_one() {
                return Err(Error::Parse(format!(
                    "facet {} normal {:?} is not primitive (gcd {g})",
                    j + 1,
                    normal
                )));
            }
            if !offset.is_positive() {
                return Err(Error::Parse(format!("facet {} offset {offset} is not positive", j + 1)));
            }
            out.push(Facet { normal, offset });
        }
        let mut p = DelzantPolyhedron { name: None, dim, facets: out, vertices: Vec::new() };
        if let Some(j) = p.redundant_facet() {
            return Err(Error::Parse(format!("facet {} is redundant", j + 1)));
        }
        p.vertices = p.compute_vertices();
        Ok(p)
    }

    pub fn from_spec(spec: &PolyhedronSpec) -> Result<Self> {
        let facets = spec
            .facets
            .iter()
            .map(|f| Ok((f.normal.clone(), parse_rational(&f.offset)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self::new(spec.dim, facets)?;
        p.name = spec.name.clone();
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PolyhedronSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("polyhedron JSON: {e}")))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> PolyhedronSpec {
        PolyhedronSpec {
            name: self.name.clone(),
            dim: self.dim,
            facets: self
                .facets
                .iter()
                .map(|f| FacetSpec { normal: f.normal.clone(), offset: format_rational(&f.offset) })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("spec serialises")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn normal(&self, j: usize) -> &[i64] {
        &self.facets[j].normal
    }

    pub fn offset(&self, j: usize) -> &BigRational {
        &self.facets[j].offset
    }

    pub fn all_facets(&self) -> FacetSet {
        FacetSet::from_indices(0..self.num_facets())
    }

    /// N x n matrix whose rows are the normals.
    pub fn normal_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.facets.iter().map(|f| f.normal.clone()).collect();
        IntMatrix::from_rows(self.dim, &rows)
    }

    /// `<x, nu_j> + lambda_j`, non-negative exactly on the polyhedron.
    pub fn slack(&self, x: &[BigRational], j: usize) -> BigRational {
        let f = &self.facets[j];
        x.iter().zip(&f.normal).map(|(a, &b)| a * BigRational::from_integer(b.into())).sum::<BigRational>()
            + &f.offset
    }

    pub fn contains_point(&self, x: &[BigRational]) -> bool {
        (0..self.num_facets()).all(|j| !self.slack(x, j).is_negative())
    }

    fn redundant_facet(&self) -> Option<usize> {
        (0..self.num_facets()).find(|&j| {
            let mut lp = LinearProgram::new(self.dim);
            for k in (0..self.num_facets()).filter(|&k| k != j) {
                lp.constrain(self.normal_rat(k), Relation::Ge, -self.offset(k));
            }
            match lp.minimize(self.normal_rat(j)).solve() {
                LpOutcome::Optimal { value, .. } => value >= -self.offset(j),
                LpOutcome::Unbounded => false,
                LpOutcome::Infeasible => unreachable!("the origin is feasible"),
            }
        })
    }

    fn normal_rat(&self, j: usize) -> RatVector {
        self.facets[j].normal.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn compute_vertices(&self) -> Vec<Vertex> {
        let n = self.dim;
        let big_n = self.num_facets();
        let mut seen: BTreeSet<Vec<BigRational>> = BTreeSet::new();
        let mut out = Vec::new();
        for subset in combinations(big_n, n) {
            let rows: Vec<RatVector> = subset.iter().map(|&j| self.normal_rat(j)).collect();
            let square = IntMatrix::from_rows(n, &subset.iter().map(|&j| self.facets[j].normal.clone()).collect::<Vec<_>>());
            if square.determinant().is_zero() {
                continue;
            }
            let rhs: RatVector = subset.iter().map(|&j| -self.offset(j)).collect();
            let x = solve_rational_rows(&rows, n, &rhs).expect("non-singular system");
            if !self.contains_point(&x) || seen.contains(&x) {
                continue;
            }
            let incident = FacetSet::from_indices((0..big_n).filter(|&j| self.slack(&x, j).is_zero()));
            seen.insert(x.clone());
            out.push(Vertex { point: x, incident });
        }
        out
    }

    /// Every vertex exactly once, in order of first discovery over
    /// lexicographically ordered n-subsets of facets.
    pub fn enumerate_vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn check_delzant(&self) -> DelzantReport {
        let mut violations = Vec::new();
        for v in &self.vertices {
            let vertex: Vec<String> = v.point.iter().map(format_rational).collect();
            if v.incident.len() != self.dim {
                violations.push(DelzantViolation {
                    vertex,
                    incident: v.incident.labels(),
                    determinant: None,
                    reason: format!("{} facets meet at this vertex, expected {}", v.incident.len(), self.dim),
                });
                continue;
            }
            let rows: Vec<Vec<i64>> = v.incident.iter().map(|j| self.facets[j].normal.clone()).collect();
            let det = IntMatrix::from_rows(self.dim, &rows).determinant();
            if !det.abs().is_one() {
                violations.push(DelzantViolation {
                    vertex,
                    incident: v.incident.labels(),
                    determinant: Some(det.to_string()),
                    reason: format!("incident normals have determinant {det}"),
                });
            }
        }
        let has_vertex = !self.vertices.is_empty();
        DelzantReport { passed: violations.is_empty() && has_vertex, has_vertex, violations }
    }

    pub fn check_vertex_and_splitting(&self) -> SplittingReport {
        let m = self.normal_matrix();
        let rank = m.rank();
        let annihilator = integer_kernel(&m)
            .into_iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect();
        SplittingReport { has_vertex: rank == self.dim, split_rank: self.dim - rank, annihilator }
    }

    /// Fails with [`Error::NoVertex`] when the normals do not span.
    pub fn require_vertex(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::NoVertex { rank: self.normal_matrix().rank(), dim: self.dim });
        }
        Ok(())
    }

    /// Fails unless the Delzant check passes (which includes having a vertex).
    pub fn require_delzant(&self) -> Result<()> {
        self.require_vertex()?;
        let report = self.check_delzant();
        if !report.passed {
            let v = &report.violations[0];
            return Err(Error::Precondition(format!(
                "not Delzant at vertex ({}): {}",
                v.vertex.join(", "),
                v.reason
            )));
        }
        Ok(())
    }

    /// True iff the recession cone is `{0}`, i.e. the normals positively
    /// span: they have full rank and some strictly positive combination of
    /// them vanishes.
    pub fn is_compact(&self) -> bool {
        if self.normal_matrix().rank() != self.dim {
            return false;
        }
        let big_n = self.num_facets();
        let mut lp = LinearProgram::new(big_n).all_nonnegative();
        for i in 0..self.dim {
            let row = (0..big_n).map(|j| BigRational::from_integer(self.facets[j].normal[i].into())).collect();
            lp.constrain(row, Relation::Eq, BigRational::zero());
        }
        for j in 0..big_n {
            let mut row = vec![BigRational::zero(); big_n];
            row[j] = BigRational::one();
            lp.constrain(row, Relation::Ge, BigRational::one());
        }
        lp.is_feasible()
    }

    /// Whether the face cut out by the facets in `set` is non-empty.
    pub fn facet_intersection_nonempty(&self, set: FacetSet) -> bool {
        let mut lp = LinearProgram::new(self.dim);
        for j in 0..self.num_facets() {
            let rel = if set.contains(j) { Relation::Eq } else { Relation::Ge };
            lp.constrain(self.normal_rat(j), rel, -self.offset(j));
        }
        lp.is_feasible()
    }

    /// All facet subsets with non-empty intersection (the nerve), together
    /// with the minimal subsets whose intersection is empty.
    pub fn nerve_faces(&self) -> (BTreeSet<FacetSet>, Vec<FacetSet>) {
        let big_n = self.num_facets();
        let mut faces: BTreeSet<FacetSet> = BTreeSet::new();
        faces.insert(FacetSet::EMPTY);
        let mut minimal = Vec::new();
        let mut level = vec![FacetSet::EMPTY];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &face in &level {
                let start = face.max().map_or(0, |m| m + 1);
                for j in start..big_n {
                    let cand = face.with(j);
                    // every codimension-one subset must already be a face
                    if !cand.iter().all(|k| faces.contains(&cand.without(k))) {
                        continue;
                    }
                    if self.facet_intersection_nonempty(cand) {
                        next.push(cand);
                    } else {
                        minimal.push(cand);
                    }
                }
            }
            faces.extend(next.iter().copied());
            level = next;
        }
        minimal.sort_by_key(|s| (s.len(), s.labels()));
        (faces, minimal)
    }

    /// Inclusion-minimal facet subsets with empty intersection.
    pub fn minimal_nonfaces(&self) -> Vec<FacetSet> {
        self.nerve_faces().1
    }

    /// Solves `lambda_j = level + <b, nu_j>` with `level > 0`. When the level
    /// is not determined by the equations (only for `C^n`-like data) it is
    /// fixed to one.
    pub fn monotone_normalization(&self) -> Option<MonotoneNormalization> {
        let n = self.dim;
        let big_n = self.num_facets();
        let rows: Vec<RatVector> = (0..big_n)
            .map(|j| {
                let mut r = self.normal_rat(j);
                r.push(BigRational::one());
                r
            })
            .collect();
        let rhs: RatVector = self.facets.iter().map(|f| f.offset.clone()).collect();
        let mut sol = solve_rational_rows(&rows, n + 1, &rhs)?;
        // is the level free? try forcing it to one
        let mut forced_rows = rows.clone();
        let mut unit = vec![BigRational::zero(); n + 1];
        unit[n] = BigRational::one();
        forced_rows.push(unit);
        let mut forced_rhs = rhs.clone();
        forced_rhs.push(BigRational::one());
        let m = IntMatrix::from_rows(n + 1, &(0..big_n).map(|j| {
            let mut r = self.facets[j].normal.clone();
            r.push(1);
            r
        }).collect::<Vec<_>>());
        let mut with_unit = m.to_rows();
        let mut u = vec![BigInt::zero(); n + 1];
        u[n] = BigInt::one();
        with_unit.push(u);
        let level_free = IntMatrix::from_rows(n + 1, &with_unit).rank() > m.rank();
        if level_free {
            sol = solve_rational_rows(&forced_rows, n + 1, &forced_rhs)?;
        }
        let level = sol[n].clone();
        if !level.is_positive() {
            return None;
        }
        let shift: RatVector = sol[..n].to_vec();
        let facets = self.facets.iter().map(|f| (f.normal.clone(), BigRational::one())).collect();
        let mut polyhedron = DelzantPolyhedron::new(n, facets).ok()?;
        polyhedron.name = self.name.clone();
        Some(MonotoneNormalization { shift, rescaled: !level.is_one(), level, polyhedron })
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone_normalization().is_some()
    }

    /// True when every offset equals one.
    pub fn is_normalized_monotone(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_one())
    }

    /// Applies a unimodular change of lattice basis `nu -> A nu` to every
    /// normal (offsets unchanged).
    pub fn transform_normals(&self, a: &IntMatrix) -> Result<Self> {
        if a.rows() != self.dim || a.cols() != self.dim || !a.determinant().abs().is_one() {
            return Err(Error::Precondition("lattice change must be a unimodular n x n matrix".into()));
        }
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let v: Vec<BigInt> = f.normal.iter().map(|&x| BigInt::from(x)).collect();
                let w = a.mul_vec(&v);
                (w.iter().map(crate::exactmath::to_i64).collect(), f.offset.clone())
            })
            .collect();
        let mut p = Self::new(self.dim, facets)?;
        p.name = self.name.clone();
        Ok(p)
    }

    /// Reorders facets: new facet `i` is old facet `perm[i]`.
    pub fn permute_facets(&self, perm: &[usize]) -> Result<Self> {
        let facets = perm.iter().map(|&j| (self.facets[j].normal.clone(), self.facets[j].offset.clone())).collect();
        let mut p = Self::new(self.dim, facets)?;
        p.name = self.name.clone();
        Ok(p)
    }

    /// Returns a copy with different offsets.
    pub fn with_offsets(&self, offsets: &[BigRational]) -> Result<Self> {
        assert_eq!(offsets.len(), self.num_facets());
        let facets = self.facets.iter().zip(offsets).map(|(f, o)| (f.normal.clone(), o.clone())).collect();
        let mut p = Self::new(self.dim, facets)?;
        p.name = self.name.clone();
        Ok(p)
    }

    /// Adds a facet (used to cut corners when generating examples).
    pub fn with_extra_facet(&self, normal: Vec<i64>, offset: BigRational) -> Result<Self> {
        let mut facets: Vec<(Vec<i64>, BigRational)> =
            self.facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        facets.push((normal, offset));
        Self::new(self.dim, facets)
    }

    pub fn max_offset(&self) -> BigRational {
        self.facets.iter().map(|f| f.offset.clone()).max().expect("at least one facet")
    }

    pub fn min_offset(&self) -> BigRational {
        self.facets.iter().map(|f| f.offset.clone()).min().expect("at least one facet")
    }
}

/// All k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Point as exact rationals, convenient in tests and examples.
pub fn point(coords: &[(i64, i64)]) -> RatVector {
    coords.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect()
}

pub(crate) fn rat_dot(x: &[BigRational], nu: &[i64]) -> BigRational {
    x.iter().zip(nu).map(|(a, &b)| a * int_rat(&BigInt::from(b))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn poly(dim: usize, facets: &[(&[i64], i64)]) -> DelzantPolyhedron {
        DelzantPolyhedron::new(dim, facets.iter().map(|(n, l)| (n.to_vec(), rat(*l, 1))).collect()).unwrap()
    }

    fn o_minus_one() -> DelzantPolyhedron {
        poly(2, &[(&[1, 0], 1), (&[1, 1], 1), (&[0, 1], 1)])
    }

    fn cp2() -> DelzantPolyhedron {
        poly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)])
    }

    #[test]
    fn vertices_of_o_minus_one() {
        let p = o_minus_one();
        let vs = p.enumerate_vertices();
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[0].point, point(&[(-1, 1), (0, 1)]));
        assert_eq!(vs[0].incident, FacetSet::from_labels(&[1, 2]));
        assert_eq!(vs[1].point, point(&[(0, 1), (-1, 1)]));
        assert_eq!(vs[1].incident, FacetSet::from_labels(&[2, 3]));
    }

    #[test]
    fn vertices_of_cp2_and_half_line() {
        let mut pts: Vec<_> = cp2().enumerate_vertices().iter().map(|v| v.point.clone()).collect();
        pts.sort();
        assert_eq!(pts, vec![point(&[(-1, 1), (-1, 1)]), point(&[(-1, 1), (2, 1)]), point(&[(2, 1), (-1, 1)])]);

        let half = poly(1, &[(&[1], 1)]);
        assert_eq!(half.enumerate_vertices().len(), 1);
        assert_eq!(half.enumerate_vertices()[0].point, point(&[(-1, 1)]));
    }

    #[test]
    fn delzant_checks() {
        assert!(o_minus_one().check_delzant().passed);
        assert!(cp2().check_delzant().passed);
        let bad = poly(2, &[(&[1, 0], 1), (&[1, 2], 1)]);
        let r = bad.check_delzant();
        assert!(!r.passed);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].determinant.as_deref(), Some("2"));
    }

    #[test]
    fn splitting() {
        let r = o_minus_one().check_vertex_and_splitting();
        assert!(r.has_vertex);
        assert_eq!(r.split_rank, 0);

        let strip = poly(2, &[(&[1, 0], 1)]);
        let r = strip.check_vertex_and_splitting();
        assert!(!r.has_vertex);
        assert_eq!(r.split_rank, 1);
        assert_eq!(r.annihilator, vec![vec!["0".to_string(), "1".to_string()]]);
        assert!(strip.enumerate_vertices().is_empty());
        assert!(matches!(strip.require_vertex(), Err(Error::NoVertex { rank: 1, dim: 2 })));

        let segment = poly(1, &[(&[1], 1), (&[-1], 1)]);
        assert!(segment.check_vertex_and_splitting().has_vertex);
    }

    #[test]
    fn compactness() {
        assert!(poly(1, &[(&[1], 1), (&[-1], 1)]).is_compact());
        assert!(!poly(1, &[(&[1], 1)]).is_compact());
        assert!(!o_minus_one().is_compact());
        assert!(cp2().is_compact());
    }

    #[test]
    fn facet_intersections() {
        let p = o_minus_one();
        assert!(!p.facet_intersection_nonempty(FacetSet::from_labels(&[1, 3])));
        assert!(p.facet_intersection_nonempty(FacetSet::from_labels(&[1, 2])));
        for j in 0..3 {
            assert!(p.facet_intersection_nonempty(FacetSet::singleton(j)));
        }
    }

    #[test]
    fn minimal_nonfaces_examples() {
        assert_eq!(o_minus_one().minimal_nonfaces(), vec![FacetSet::from_labels(&[1, 3])]);
        assert_eq!(cp2().minimal_nonfaces(), vec![FacetSet::from_labels(&[1, 2, 3])]);
        let c3 = poly(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
        assert!(c3.minimal_nonfaces().is_empty());
    }

    #[test]
    fn monotone_normalizations() {
        let m = o_minus_one().monotone_normalization().unwrap();
        assert_eq!(m.shift, point(&[(0, 1), (0, 1)]));
        assert_eq!(m.level, rat(1, 1));
        assert!(!m.rescaled);
        assert_eq!(m.polyhedron, o_minus_one());

        let cp1 = DelzantPolyhedron::new(1, vec![(vec![1], rat(1, 1)), (vec![-1], rat(3, 1))]).unwrap();
        let m = cp1.monotone_normalization().unwrap();
        assert_eq!(m.shift, point(&[(-1, 1)]));
        assert_eq!(m.level, rat(2, 1));
        assert!(m.rescaled);
        assert!(m.polyhedron.is_normalized_monotone());

        // F_2: (1,0),(0,1),(-1,2),(0,-1)
        let f2 = poly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, 2], 3), (&[0, -1], 1)]);
        assert!(f2.check_delzant().passed);
        assert!(f2.monotone_normalization().is_none());
    }

    #[test]
    fn construction_rejections() {
        assert!(matches!(
            DelzantPolyhedron::new(2, vec![(vec![2, 0], rat(1, 1))]),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            DelzantPolyhedron::new(1, vec![(vec![1], rat(0, 1))]),
            Err(Error::Parse(_))
        ));
        // x >= -1 and x >= -2: the second is redundant
        assert!(matches!(
            DelzantPolyhedron::new(1, vec![(vec![1], rat(1, 1)), (vec![1], rat(2, 1))]),
            Err(Error::Parse(_))
        ));
        assert!(DelzantPolyhedron::from_json(r#"{"dim": 1, "facets": [{"normal": [1], "offset": "1/2"}]}"#).is_ok());
        assert!(DelzantPolyhedron::from_json(r#"{"dim": 1}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = o_minus_one().with_name("O(-1)");
        let q = DelzantPolyhedron::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_json(), q.to_json());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
