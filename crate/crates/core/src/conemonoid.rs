//! The cone of disc classes, heights, intersecting sums and truncated
//! monoid-ring arithmetic.
//!
//! An element `(lambda, nu)` of `Q + Z^n` is written multiplicatively as
//! `T^lambda tau^nu`; the generator `v_j` is `(lambda_j, nu_j)`. Every cone
//! element has a unique intersecting sum `h (1, 0) + sum_j t_j (lambda_j, nu_j)`
//! whose support is a face of the nerve, with `h` its height.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::lp::{LinearProgram, Relation};
use crate::exactmath::{format_rational, parse_rational, IntMatrix};
use crate::polyhedron::{rat_dot, DelzantPolyhedron, FacetSet, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeElement {
    pub lambda: BigRational,
    pub nu: Vec<i64>,
}

impl ConeElement {
    pub fn new(lambda: BigRational, nu: Vec<i64>) -> Self {
        ConeElement { lambda, nu }
    }

    /// `(1, 0)`, i.e. the monomial `T`.
    pub fn t_unit(dim: usize) -> Self {
        ConeElement { lambda: BigRational::one(), nu: vec![0; dim] }
    }

    pub fn zero(dim: usize) -> Self {
        ConeElement { lambda: BigRational::zero(), nu: vec![0; dim] }
    }

    /// The generator `v_j = (lambda_j, nu_j)` (0-based `j`).
    pub fn generator(p: &DelzantPolyhedron, j: usize) -> Self {
        ConeElement { lambda: p.offset(j).clone(), nu: p.normal(j).to_vec() }
    }

    pub fn scaled(&self, k: i64) -> Self {
        ConeElement {
            lambda: &self.lambda * BigRational::from_integer(k.into()),
            nu: self.nu.iter().map(|x| x.checked_mul(k).expect("lattice overflow")).collect(),
        }
    }
}

impl Add for &ConeElement {
    type Output = ConeElement;
    fn add(self, other: &ConeElement) -> ConeElement {
        ConeElement {
            lambda: &self.lambda + &other.lambda,
            nu: self
                .nu
                .iter()
                .zip(&other.nu)
                .map(|(a, b)| a.checked_add(*b).expect("lattice overflow"))
                .collect(),
        }
    }
}

/// `theta_v(c) = lambda + <v, nu>`.
pub fn theta(v: &Vertex, c: &ConeElement) -> BigRational {
    &c.lambda + rat_dot(&v.point, &c.nu)
}

/// Unique intersecting-sum coefficients of a cone element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub height: BigRational,
    pub t: Vec<i64>,
}

impl Decomposition {
    pub fn support(&self) -> FacetSet {
        FacetSet::from_indices(self.t.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, _)| j))
    }

    pub fn degree(&self) -> i64 {
        self.t.iter().sum()
    }
}

/// Per-vertex data for solving `nu = sum_{k in I(v)} t_k nu_k`.
#[derive(Clone, Debug)]
struct VertexSolver {
    incident: Vec<usize>,
    /// adjugate of the matrix whose columns are the incident normals
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
}

/// A polyhedron together with the data needed for fast height and
/// decomposition queries.
#[derive(Clone, Debug)]
pub struct Cone {
    poly: DelzantPolyhedron,
    solvers: Vec<Option<VertexSolver>>,
}

impl Cone {
    pub fn new(poly: &DelzantPolyhedron) -> Result<Self> {
        poly.require_vertex()?;
        let n = poly.dim();
        let solvers = poly
            .vertices()
            .iter()
            .map(|v| {
                if v.incident.len() != n {
                    return None;
                }
                let incident: Vec<usize> = v.incident.iter().collect();
                // columns are normals
                let mut m = IntMatrix::zeros(n, n);
                for (c, &j) in incident.iter().enumerate() {
                    for r in 0..n {
                        m[(r, c)] = poly.normal(j)[r].into();
                    }
                }
                let det = m.determinant();
                if det.is_zero() {
                    return None;
                }
                let adj = adjugate(&m);
                Some(VertexSolver { incident, adj, det })
            })
            .collect();
        Ok(Cone { poly: poly.clone(), solvers })
    }

    pub fn polyhedron(&self) -> &DelzantPolyhedron {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn num_facets(&self) -> usize {
        self.poly.num_facets()
    }

    pub fn theta_values(&self, c: &ConeElement) -> Vec<BigRational> {
        self.poly.vertices().iter().map(|v| theta(v, c)).collect()
    }

    /// Minimum of `theta_v` over vertices, without a membership check.
    pub fn raw_height(&self, c: &ConeElement) -> BigRational {
        self.theta_values(c).into_iter().min().expect("at least one vertex")
    }

    /// Membership via the vertex functionals and an exact LP for `nu` in
    /// the cone spanned by the normals.
    pub fn contains(&self, c: &ConeElement) -> bool {
        if self.theta_values(c).iter().any(|t| t.is_negative()) {
            return false;
        }
        nu_in_normal_cone(&self.poly, &c.nu)
    }

    /// Height of a cone element; rejects elements outside the cone.
    pub fn height(&self, c: &ConeElement) -> Result<BigRational> {
        if !self.contains(c) {
            return Err(Error::NotInCone(render_cone_element(c)));
        }
        Ok(self.raw_height(c))
    }

    fn solve_at(&self, vi: usize, c: &ConeElement) -> Result<Vec<BigRational>> {
        let solver = self.solvers[vi].as_ref().ok_or_else(|| {
            Error::Precondition("vertex is not simple; intersecting sums need Delzant data".into())
        })?;
        let n = self.dim();
        let nu: Vec<BigInt> = c.nu.iter().map(|&x| BigInt::from(x)).collect();
        let mut t = vec![BigRational::zero(); self.num_facets()];
        for (row, &j) in solver.incident.iter().enumerate() {
            let num: BigInt = (0..n).map(|k| &solver.adj[row][k] * &nu[k]).sum();
            t[j] = BigRational::new(num, solver.det.clone());
        }
        Ok(t)
    }

    /// The intersecting sum of `c`: pick a vertex achieving the height and
    /// express `c - h (1, 0)` in the normals incident to it.
    pub fn intersecting_sum(&self, c: &ConeElement) -> Result<Decomposition> {
        let thetas = self.theta_values(c);
        let height = thetas.iter().min().expect("at least one vertex").clone();
        let vi = thetas.iter().position(|t| *t == height).expect("minimum attained");
        if height.is_negative() {
            return Err(Error::NotInCone(render_cone_element(c)));
        }
        let t = self.solve_at(vi, c)?;
        if t.iter().any(|x| x.is_negative()) {
            return Err(Error::NotInCone(render_cone_element(c)));
        }
        let t = t
            .iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer().to_i64().expect("coefficient fits"))
                } else {
                    Err(Error::Lattice(format!(
                        "intersecting sum of {} has non-integral coefficient {x}",
                        render_cone_element(c)
                    )))
                }
            })
            .collect::<Result<Vec<i64>>>()?;
        Ok(Decomposition { height, t })
    }

    /// Monomial for a cone element, checking membership.
    pub fn monomial(&self, c: ConeElement) -> Result<GammaMonomial> {
        if c.nu.len() != self.dim() {
            return Err(Error::Parse(format!("nu has length {}, expected {}", c.nu.len(), self.dim())));
        }
        let decomposition = self.intersecting_sum(&c)?;
        Ok(GammaMonomial { elem: c, decomposition })
    }

    pub fn generator(&self, j: usize) -> GammaMonomial {
        self.monomial(ConeElement::generator(&self.poly, j)).expect("generators lie in the cone")
    }

    pub fn unit(&self) -> GammaMonomial {
        self.monomial(ConeElement::zero(self.dim())).expect("zero lies in the cone")
    }

    /// `T^q` for `q >= 0`.
    pub fn t_power(&self, q: BigRational) -> Result<GammaMonomial> {
        let mut c = ConeElement::zero(self.dim());
        c.lambda = q;
        self.monomial(c)
    }

    /// Monomial `T^h prod v_j^{t_j}` (the intersecting sum need not be
    /// intersecting; it is recomputed).
    pub fn monomial_from_exponents(&self, h: BigRational, t: &[i64]) -> Result<GammaMonomial> {
        let mut c = ConeElement::zero(self.dim());
        c.lambda = h;
        for (j, &tj) in t.iter().enumerate() {
            if tj != 0 {
                c = &c + &ConeElement::generator(&self.poly, j).scaled(tj);
            }
        }
        self.monomial(c)
    }

    pub fn multiply_monomials(&self, a: &GammaMonomial, b: &GammaMonomial) -> GammaMonomial {
        self.monomial(&a.elem + &b.elem).expect("the cone is closed under addition")
    }

    /// Membership in `Gamma_R`, the monotone `Gamma`, or a height-restricted
    /// `Gamma`.
    pub fn gamma_membership(&self, c: &ConeElement, kind: GammaKind<'_>) -> bool {
        if !self.contains(c) {
            return false;
        }
        match kind {
            GammaKind::Real => true,
            GammaKind::Monotone => c.lambda.is_integer(),
            GammaKind::Restricted(g) => g.contains(&self.raw_height(c)),
        }
    }
}

/// Which of the monoids a membership query refers to.
#[derive(Clone, Copy, Debug)]
pub enum GammaKind<'a> {
    Real,
    /// Generated by `(1, nu_j)` and `(1, 0)`; requires all offsets equal to one.
    Monotone,
    Restricted(&'a HeightMonoid),
}

fn adjugate(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = m.rows();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut minor = IntMatrix::zeros(n - 1, n - 1);
            for (ri, r) in (0..n).filter(|&r| r != i).enumerate() {
                for (ci, c) in (0..n).filter(|&c| c != j).enumerate() {
                    minor[(ri, ci)] = m[(r, c)].clone();
                }
            }
            let sign = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            // adj = transpose of cofactor matrix
            adj[j][i] = sign * minor.determinant();
        }
    }
    adj
}

fn nu_in_normal_cone(p: &DelzantPolyhedron, nu: &[i64]) -> bool {
    if nu.iter().all(|&x| x == 0) {
        return true;
    }
    let big_n = p.num_facets();
    let mut lp = LinearProgram::new(big_n).all_nonnegative();
    for i in 0..p.dim() {
        let row = (0..big_n).map(|j| BigRational::from_integer(p.normal(j)[i].into())).collect();
        lp.constrain(row, Relation::Eq, BigRational::from_integer(nu[i].into()));
    }
    lp.is_feasible()
}

/// Free-standing forms of the cone operations, for one-off queries.
pub fn height(p: &DelzantPolyhedron, c: &ConeElement) -> Result<BigRational> {
    Cone::new(p)?.height(c)
}

pub fn cone_membership(p: &DelzantPolyhedron, c: &ConeElement) -> bool {
    Cone::new(p).map(|cone| cone.contains(c)).unwrap_or(false)
}

pub fn intersecting_sum(p: &DelzantPolyhedron, c: &ConeElement) -> Result<Decomposition> {
    Cone::new(p)?.intersecting_sum(c)
}

pub fn render_cone_element(c: &ConeElement) -> String {
    let nu: Vec<String> = c.nu.iter().map(|x| x.to_string()).collect();
    format!("({}, ({}))", format_rational(&c.lambda), nu.join(","))
}

/// A cone element with integral `nu` together with its cached intersecting
/// sum. Identity, hashing and ordering depend only on `(height, nu)`, which
/// determines `(lambda, nu)`.
#[derive(Clone, Debug)]
pub struct GammaMonomial {
    elem: ConeElement,
    decomposition: Decomposition,
}

impl GammaMonomial {
    pub fn element(&self) -> &ConeElement {
        &self.elem
    }

    pub fn lambda(&self) -> &BigRational {
        &self.elem.lambda
    }

    pub fn nu(&self) -> &[i64] {
        &self.elem.nu
    }

    pub fn height(&self) -> &BigRational {
        &self.decomposition.height
    }

    pub fn exponents(&self) -> &[i64] {
        &self.decomposition.t
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// Number of `v_j` factors in the intersecting sum.
    pub fn degree(&self) -> i64 {
        self.decomposition.degree()
    }

    pub fn is_height_zero(&self) -> bool {
        self.decomposition.height.is_zero()
    }

    /// The height-zero part `prod v_j^{t_j}` as a cone element.
    pub fn height_zero_part(&self) -> ConeElement {
        ConeElement { lambda: &self.elem.lambda - &self.decomposition.height, nu: self.elem.nu.clone() }
    }

    /// Rendering such as `T^(1/2)*v1^2*v3`, or `1`.
    pub fn render(&self) -> String {
        render_exponents(&self.decomposition.height, &self.decomposition.t)
    }
}

pub fn render_exponents(h: &BigRational, t: &[i64]) -> String {
    let mut parts = Vec::new();
    if !h.is_zero() {
        if h.is_one() {
            parts.push("T".to_string());
        } else if h.is_integer() {
            parts.push(format!("T^{h}"));
        } else {
            parts.push(format!("T^({h})"));
        }
    }
    for (j, &e) in t.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("v{}", j + 1)),
            e => parts.push(format!("v{}^{e}", j + 1)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl PartialEq for GammaMonomial {
    fn eq(&self, other: &Self) -> bool {
        self.elem == other.elem
    }
}

impl Eq for GammaMonomial {}

impl std::hash::Hash for GammaMonomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elem.hash(state);
    }
}

impl PartialOrd for GammaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GammaMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.decomposition.height, &self.elem.nu, &self.elem.lambda).cmp(&(
            &other.decomposition.height,
            &other.elem.nu,
            &other.elem.lambda,
        ))
    }
}

impl fmt::Display for GammaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A finite sum of monomials with rational coefficients, ordered by
/// `(height, nu)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilteredElement {
    terms: BTreeMap<GammaMonomial, BigRational>,
}

impl FilteredElement {
    pub fn zero() -> Self {
        FilteredElement::default()
    }

    pub fn monomial(m: GammaMonomial, coeff: BigRational) -> Self {
        let mut e = FilteredElement::zero();
        e.add_term(m, coeff);
        e
    }

    pub fn one(cone: &Cone) -> Self {
        Self::monomial(cone.unit(), BigRational::one())
    }

    pub fn generator(cone: &Cone, j: usize) -> Self {
        Self::monomial(cone.generator(j), BigRational::one())
    }

    pub fn add_term(&mut self, m: GammaMonomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self.terms.iter().find(|(_, c)| c.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GammaMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &GammaMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Minimum height over the support; `None` for zero.
    pub fn height(&self) -> Option<BigRational> {
        self.terms.keys().map(|m| m.height().clone()).min()
    }

    pub fn add(&self, other: &FilteredElement) -> FilteredElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FilteredElement) -> FilteredElement {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> FilteredElement {
        if k.is_zero() {
            return FilteredElement::zero();
        }
        FilteredElement { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn multiply(&self, other: &FilteredElement, cone: &Cone) -> FilteredElement {
        let mut out = FilteredElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(cone.multiply_monomials(a, b), ca * cb);
            }
        }
        out
    }

    /// Drops every monomial of height at least `g`.
    pub fn truncate(&self, g: &BigRational) -> FilteredElement {
        FilteredElement {
            terms: self.terms.iter().filter(|(m, _)| m.height() < g).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// The i-th output multiplies each monomial by the i-th coordinate of
    /// its `nu`: the logarithmic derivative `y_i dW/dy_i`.
    pub fn log_derivative_generators(&self, dim: usize) -> Vec<FilteredElement> {
        (0..dim)
            .map(|i| {
                let mut out = FilteredElement::zero();
                for (m, c) in &self.terms {
                    out.add_term(m.clone(), c * BigRational::from_integer(m.nu()[i].into()));
                }
                out
            })
            .collect()
    }

    /// Bit-exact JSON list sorted by `(height, nu)`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("records serialise")
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord {
                lambda: format_rational(m.lambda()),
                nu: m.nu().to_vec(),
                coeff: format_rational(c),
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord], cone: &Cone) -> Result<FilteredElement> {
        let mut out = FilteredElement::zero();
        for r in records {
            let m = cone.monomial(ConeElement::new(parse_rational(&r.lambda)?, r.nu.clone()))?;
            out.add_term(m, parse_rational(&r.coeff)?);
        }
        Ok(out)
    }

    pub fn from_json(text: &str, cone: &Cone) -> Result<FilteredElement> {
        let records: Vec<TermRecord> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("filtered element JSON: {e}")))?;
        Self::from_records(&records, cone)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render();
            if abs.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&format_rational(&abs));
            } else {
                out.push_str(&format!("{}*{}", format_rational(&abs), mono));
            }
        }
        out
    }
}

impl fmt::Display for FilteredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub lambda: String,
    pub nu: Vec<i64>,
    pub coeff: String,
}

/// The discrete monoid `G` of allowed heights, enumerated below a cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightMonoid {
    generators: Vec<BigRational>,
    cutoff: BigRational,
    elements: Vec<BigRational>,
}

impl HeightMonoid {
    /// Enumerates all finite sums of `generators` below `cutoff`.
    pub fn from_generators(generators: &[BigRational], cutoff: BigRational) -> Result<Self> {
        if generators.iter().any(|g| g.is_negative()) {
            return Err(Error::Precondition("height generators must be non-negative".into()));
        }
        if !cutoff.is_positive() {
            return Err(Error::Precondition("cutoff must be positive".into()));
        }
        let gens: BTreeSet<BigRational> = generators.iter().cloned().collect();
        let positive: Vec<&BigRational> = gens.iter().filter(|g| g.is_positive()).collect();
        let mut elements: BTreeSet<BigRational> = BTreeSet::new();
        let mut frontier = vec![BigRational::zero()];
        elements.insert(BigRational::zero());
        while let Some(x) = frontier.pop() {
            for g in &positive {
                let y = &x + *g;
                if y < cutoff && elements.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(HeightMonoid { generators: gens.into_iter().collect(), cutoff, elements: elements.into_iter().collect() })
    }

    pub fn generators(&self) -> &[BigRational] {
        &self.generators
    }

    pub fn cutoff(&self) -> &BigRational {
        &self.cutoff
    }

    /// Elements of `G` in `[0, cutoff)`, strictly increasing.
    pub fn elements(&self) -> &[BigRational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, h: &BigRational) -> bool {
        self.elements.binary_search(h).is_ok()
    }

    /// Smallest positive element below the cutoff.
    pub fn min_positive(&self) -> Option<&BigRational> {
        self.elements.get(1)
    }
}

/// `G_0` (all `theta_v(v_j)`) together with `extra`, enumerated below `g`.
pub fn build_height_monoid(cone: &Cone, extra: &[BigRational], g: BigRational) -> Result<HeightMonoid> {
    if extra.iter().any(|x| x.is_negative()) {
        return Err(Error::Precondition("extra heights must be non-negative".into()));
    }
    let p = cone.polyhedron();
    let mut gens: Vec<BigRational> = Vec::new();
    for v in p.vertices() {
        for j in 0..p.num_facets() {
            gens.push(theta(v, &ConeElement::generator(p, j)));
        }
    }
    gens.extend(extra.iter().cloned());
    HeightMonoid::from_generators(&gens, g)
}

/// The degree-`k` slice of the monotone monoid: all `(k, nu)` with
/// `nu = sum m_j nu_j`, `sum m_j <= k`, sorted lexicographically by `nu`.
pub fn enumerate_gamma_degree(cone: &Cone, k: usize) -> Result<Vec<GammaMonomial>> {
    let slices = monotone_slices(cone.polyhedron(), k)?;
    slices[k]
        .iter()
        .map(|nu| cone.monomial(ConeElement::new(BigRational::from_integer(k.into()), nu.clone())))
        .collect()
}

/// `nu`-sets of the monotone degree slices `0..=k`.
pub fn monotone_slices(p: &DelzantPolyhedron, k: usize) -> Result<Vec<BTreeSet<Vec<i64>>>> {
    if !p.is_normalized_monotone() {
        return Err(Error::Precondition("monotone slices need every offset equal to one".into()));
    }
    let mut slices: Vec<BTreeSet<Vec<i64>>> = Vec::with_capacity(k + 1);
    slices.push(std::iter::once(vec![0; p.dim()]).collect());
    for d in 1..=k {
        let prev = &slices[d - 1];
        let mut next = prev.clone();
        for nu in prev {
            for j in 0..p.num_facets() {
                next.insert(nu.iter().zip(p.normal(j)).map(|(a, b)| a + b).collect());
            }
        }
        slices.push(next);
    }
    Ok(slices)
}
