//! Freeness of the truncated generalised Jacobian ring `S/J` over the
//! truncated coefficient ring `R = k[T^G] / (T^{>= g})`.
//!
//! `S` is spanned by monomials `T^h prod v_j^{t_j}` with `t` supported on a
//! face and `h` in `G`, `h < g`. It is infinite-dimensional when the
//! polyhedron is not compact, so the computation runs in
//! `A_L = S / S_{lambda >= L}`; `lambda` is additive and non-negative on the
//! cone, so `S_{lambda >= L}` is an ideal and `A_L / J_L` is a quotient of
//! `S/J`. The classical basis `e_1..e_m` spans `S/J` over `R` (Nakayama for
//! the nilpotent maximal ideal of `R`), so `dim S/J <= m |G_{<g}|`, and
//! equality at any level `L` proves freeness. Past
//! `L_max = g + lambda_max (n+1) ceil(g / min G_+)` every monomial with
//! `lambda >= L` already lies in `J`, so the dimension there is exact and a
//! shortfall is a genuine failure.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::conemonoid::{build_height_monoid, render_exponents, Cone, FilteredElement};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, Field, FieldOps, PrimeField, RationalField, RowEchelon, SparseRow};
use crate::polyhedron::{DelzantPolyhedron, FacetSet};
use crate::srtop::{build_nerve, SimplicialComplex};

use super::{classical_presentation_with, PresentationOptions, Ring};

/// Inputs beyond the polyhedron.
#[derive(Clone, Debug)]
pub struct JacobianInput {
    /// one filtered element per facet, added to `rho_j v_j`; empty means zero
    pub perturbations: Vec<FilteredElement>,
    pub rho: Option<Vec<BigRational>>,
    pub cutoff: BigRational,
    pub field: Field,
}

impl JacobianInput {
    pub fn unperturbed(cutoff: BigRational, field: Field) -> Self {
        JacobianInput { perturbations: Vec::new(), rho: None, cutoff, field }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianLevel {
    pub level: String,
    pub dim_a: usize,
    pub dim_quotient: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub cutoff: String,
    pub field: String,
    pub monoid_generators: Vec<String>,
    /// elements of `G` below the cutoff
    pub heights: Vec<String>,
    pub dim_r: usize,
    pub m: usize,
    pub basis: Vec<String>,
    pub levels: Vec<JacobianLevel>,
    /// `lambda`-truncation level of the final computation
    pub truncation_level: String,
    pub exact_level: String,
    pub dim_a: usize,
    pub dim_quotient: usize,
    pub expected_dim: usize,
    pub independent: bool,
    pub free: bool,
    pub witness: Option<String>,
    pub note: String,
}

const NOTE: &str = "closure of the ideal is represented by truncation at height >= g; \
freeness is verified for this cutoff only";

/// Column budget for `A_L`; beyond it the run stops without a verdict.
const MAX_COLUMNS: usize = 400_000;

/// Integer-scaled monomial key `(D * lambda, nu)`.
type Key = (i128, Vec<i64>);

struct Scaled {
    denom: BigInt,
    vertices: Vec<Vec<i128>>,
    offsets: Vec<i128>,
    normals: Vec<Vec<i64>>,
}

impl Scaled {
    fn int(&self, q: &BigRational) -> i128 {
        let v = q * BigRational::from_integer(self.denom.clone());
        debug_assert!(v.is_integer());
        v.to_integer().to_i128().expect("scaled value fits in i128")
    }

    fn height(&self, key: &Key) -> i128 {
        self.vertices
            .iter()
            .map(|v| key.0 + v.iter().zip(&key.1).map(|(a, &b)| a * b as i128).sum::<i128>())
            .min()
            .expect("at least one vertex")
    }

    fn to_rational(&self, x: i128) -> BigRational {
        BigRational::new(BigInt::from(x), self.denom.clone())
    }
}

fn add_keys(a: &Key, b: &Key) -> Key {
    (a.0 + b.0, a.1.iter().zip(&b.1).map(|(x, y)| x + y).collect())
}

pub fn jacobian_freeness(p: &DelzantPolyhedron, input: &JacobianInput) -> Result<JacobianReport> {
    p.require_delzant()?;
    let g = &input.cutoff;
    if !g.is_positive() {
        return Err(Error::Precondition("cutoff g must be positive".into()));
    }
    let big_n = p.num_facets();
    let n = p.dim();
    let cone = Cone::new(p)?;
    let perturbations: Vec<FilteredElement> = if input.perturbations.is_empty() {
        vec![FilteredElement::zero(); big_n]
    } else if input.perturbations.len() == big_n {
        input.perturbations.clone()
    } else {
        return Err(Error::Parse(format!("expected {big_n} perturbations, got {}", input.perturbations.len())));
    };
    let mut extra = Vec::new();
    for (j, pert) in perturbations.iter().enumerate() {
        for (mono, _) in pert.terms() {
            if !mono.height().is_positive() {
                return Err(Error::Precondition(format!(
                    "perturbation of v{} has a term {} of non-positive height",
                    j + 1,
                    mono.render()
                )));
            }
            if cone.monomial(mono.element().clone()).is_err() {
                return Err(Error::NotInCone(mono.render()));
            }
            extra.push(mono.height().clone());
        }
    }
    let monoid = build_height_monoid(&cone, &extra, g.clone())?;
    let ring = Ring::Field(input.field);
    let classical =
        classical_presentation_with(p, &PresentationOptions { ring, rho: input.rho.clone(), ..Default::default() })?;
    let rho = classical.rho.clone();
    let m = classical.basis.len();
    let dim_r = monoid.len();
    let expected = m * dim_r;

    // common denominator for every rational quantity involved
    let mut denom = g.denom().clone();
    for v in p.vertices() {
        for x in &v.point {
            denom = denom.lcm(x.denom());
        }
    }
    for j in 0..big_n {
        denom = denom.lcm(p.offset(j).denom());
    }
    for h in monoid.generators() {
        denom = denom.lcm(h.denom());
    }
    for pert in &perturbations {
        for (mono, _) in pert.terms() {
            denom = denom.lcm(mono.lambda().denom());
        }
    }
    let sc = Scaled {
        vertices: Vec::new(),
        offsets: Vec::new(),
        normals: (0..big_n).map(|j| p.normal(j).to_vec()).collect(),
        denom,
    };
    let sc = Scaled {
        vertices: p.vertices().iter().map(|v| v.point.iter().map(|x| sc.int(x)).collect()).collect(),
        offsets: (0..big_n).map(|j| sc.int(p.offset(j))).collect(),
        ..sc
    };
    let g_s = sc.int(g);
    let heights_s: Vec<i128> = monoid.elements().iter().map(|h| sc.int(h)).collect();
    let generator_keys: Vec<Key> = (0..big_n).map(|j| (sc.offsets[j], sc.normals[j].clone())).collect();
    // ĉ_i = sum_j nu_j[i] (rho_j v_j + pert_j) as (key, coefficient) lists per i
    let mut hat_terms: Vec<Vec<(Key, BigRational)>> = vec![Vec::new(); n];
    for j in 0..big_n {
        let mut terms: Vec<(Key, BigRational)> = vec![(generator_keys[j].clone(), rho[j].clone())];
        for (mono, c) in perturbations[j].terms() {
            terms.push(((sc.int(mono.lambda()), mono.nu().to_vec()), c.clone()));
        }
        for (i, hat) in hat_terms.iter_mut().enumerate() {
            let nu = p.normal(j)[i];
            if nu != 0 {
                for (k, c) in &terms {
                    hat.push((k.clone(), c * BigRational::from_integer(nu.into())));
                }
            }
        }
    }

    let complex = build_nerve(p)?;
    let lambda_max = sc.offsets.iter().copied().max().expect("facets exist");
    let step = lambda_max * (n as i128 + 1);
    let min_positive = heights_s.get(1).copied();
    let k_blocks = match min_positive {
        Some(h) => (g_s + h - 1) / h,
        None => 1,
    };
    let exact_level = g_s + step * k_blocks;
    let basis_t: Vec<Vec<i64>> = classical.basis.iter().map(|b| b.exponents.iter().map(|&e| e as i64).collect()).collect();
    let basis_lambda_max = basis_t
        .iter()
        .map(|t| t.iter().zip(&sc.offsets).map(|(&e, &l)| e as i128 * l).sum::<i128>())
        .max()
        .unwrap_or(0);

    // basis monomials T^h e_i have lambda < g + n lambda_max, inside the first level
    debug_assert!(basis_lambda_max < step);
    let mut level = g_s + step;
    let mut levels = Vec::new();
    loop {
        let outcome = run_level(input.field, &sc, &complex, &heights_s, g_s, level, &hat_terms, &basis_t)?;
        let Some(outcome) = outcome else {
            let report = finish(
                input, &monoid, &classical.labels(), &sc, levels, level, exact_level, 0, 0, expected, false,
                Some(format!("column budget {MAX_COLUMNS} exceeded; no verdict")),
            );
            return Ok(report);
        };
        levels.push(JacobianLevel {
            level: format_rational(&sc.to_rational(level)),
            dim_a: outcome.dim_a,
            dim_quotient: outcome.dim_quotient,
        });
        if outcome.dim_quotient > expected {
            return Err(Error::Property(format!(
                "dim(S/J) lower bound {} exceeds the spanning bound {expected}",
                outcome.dim_quotient
            )));
        }
        if outcome.dim_quotient == expected || level >= exact_level {
            let free = outcome.dim_quotient == expected && outcome.independent;
            let witness = if free {
                None
            } else if let Some(dep) = &outcome.first_dependent {
                Some(format!("{dep} is dependent in S/J; dim(S/J) = {} < {expected}", outcome.dim_quotient))
            } else {
                Some(format!("dim(S/J) = {} < {expected}", outcome.dim_quotient))
            };
            return Ok(finish(
                input,
                &monoid,
                &classical.labels(),
                &sc,
                levels,
                level,
                exact_level,
                outcome.dim_a,
                outcome.dim_quotient,
                expected,
                outcome.independent,
                witness,
            ));
        }
        level = (level + step).min(exact_level);
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    input: &JacobianInput,
    monoid: &crate::conemonoid::HeightMonoid,
    labels: &[String],
    sc: &Scaled,
    levels: Vec<JacobianLevel>,
    level: i128,
    exact_level: i128,
    dim_a: usize,
    dim_quotient: usize,
    expected: usize,
    independent: bool,
    witness: Option<String>,
) -> JacobianReport {
    JacobianReport {
        cutoff: format_rational(&input.cutoff),
        field: input.field.to_string(),
        monoid_generators: monoid.generators().iter().map(format_rational).collect(),
        heights: monoid.elements().iter().map(format_rational).collect(),
        dim_r: monoid.len(),
        m: labels.len(),
        basis: labels.to_vec(),
        levels,
        truncation_level: format_rational(&sc.to_rational(level)),
        exact_level: format_rational(&sc.to_rational(exact_level)),
        dim_a,
        dim_quotient,
        expected_dim: expected,
        independent,
        free: witness.is_none() && dim_quotient == expected && independent,
        witness,
        note: NOTE.to_string(),
    }
}

struct LevelOutcome {
    dim_a: usize,
    dim_quotient: usize,
    independent: bool,
    first_dependent: Option<String>,
}

/// Face-supported exponent vectors with scaled `sum t_j lambda_j < bound`.
fn intersecting_exponents(sc: &Scaled, complex: &SimplicialComplex, bound: i128) -> Vec<(Vec<i64>, i128)> {
    fn rec(
        sc: &Scaled,
        complex: &SimplicialComplex,
        j: usize,
        support: FacetSet,
        t: &mut Vec<i64>,
        lam: i128,
        bound: i128,
        out: &mut Vec<(Vec<i64>, i128)>,
    ) {
        if j == t.len() {
            out.push((t.clone(), lam));
            return;
        }
        rec(sc, complex, j + 1, support, t, lam, bound, out);
        let s = support.with(j);
        if !complex.contains(s) {
            return;
        }
        let mut e = 1;
        while lam + e * sc.offsets[j] < bound {
            t[j] = e as i64;
            rec(sc, complex, j + 1, s, t, lam + e * sc.offsets[j], bound, out);
            e += 1;
        }
        t[j] = 0;
    }
    let mut out = Vec::new();
    let mut t = vec![0; sc.offsets.len()];
    rec(sc, complex, 0, FacetSet::EMPTY, &mut t, 0, bound, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn run_level(
    field: Field,
    sc: &Scaled,
    complex: &SimplicialComplex,
    heights: &[i128],
    g_s: i128,
    level: i128,
    hat_terms: &[Vec<(Key, BigRational)>],
    basis_t: &[Vec<i64>],
) -> Result<Option<LevelOutcome>> {
    let exps = intersecting_exponents(sc, complex, level);
    let mut keys: Vec<(Key, i128, Vec<i64>)> = Vec::new();
    for &h in heights {
        for (t, lam) in &exps {
            if h + lam < level {
                let mut nu = vec![0i64; sc.normals[0].len()];
                for (j, &e) in t.iter().enumerate() {
                    if e != 0 {
                        for (x, &a) in nu.iter_mut().zip(&sc.normals[j]) {
                            *x += e * a;
                        }
                    }
                }
                keys.push(((h + lam, nu), h, t.clone()));
            }
        }
        if keys.len() > MAX_COLUMNS {
            return Ok(None);
        }
    }
    // columns sorted by (lambda, nu) so relations are close to triangular
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    let index: HashMap<Key, usize> = keys.iter().enumerate().map(|(i, k)| (k.0.clone(), i)).collect();
    let cols = keys.len();

    let mut rows: Vec<Vec<(usize, BigRational)>> = Vec::with_capacity(cols * hat_terms.len());
    for (mu, _, _) in &keys {
        for hat in hat_terms {
            let mut row = Vec::new();
            for (k, c) in hat {
                let prod = add_keys(mu, k);
                if prod.0 >= level || sc.height(&prod) >= g_s {
                    continue;
                }
                let idx = *index.get(&prod).ok_or_else(|| {
                    Error::Property("product monomial missing from the enumerated basis of A_L".into())
                })?;
                row.push((idx, c.clone()));
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    let mut targets: Vec<(usize, String)> = Vec::new();
    for &h in heights {
        for t in basis_t {
            let lam: i128 = t.iter().zip(&sc.offsets).map(|(&e, &l)| e as i128 * l).sum();
            let mut nu = vec![0i64; sc.normals[0].len()];
            for (j, &e) in t.iter().enumerate() {
                for (x, &a) in nu.iter_mut().zip(&sc.normals[j]) {
                    *x += e * a;
                }
            }
            let idx = *index.get(&(h + lam, nu)).expect("basis monomials lie below the level");
            targets.push((idx, render_exponents(&sc.to_rational(h), t)));
        }
    }
    let outcome = match field {
        Field::Rationals => eliminate(RationalField, cols, &rows, &targets)?,
        Field::Prime(p) => eliminate(PrimeField::new(p), cols, &rows, &targets)?,
    };
    Ok(Some(outcome))
}

fn eliminate<F: FieldOps>(
    field: F,
    cols: usize,
    rows: &[Vec<(usize, BigRational)>],
    targets: &[(usize, String)],
) -> Result<LevelOutcome> {
    let mut e = RowEchelon::new(field.clone(), cols);
    let mut rows: Vec<&Vec<(usize, BigRational)>> = rows.iter().collect();
    // short rows first keeps pivots sparse and coefficients small
    rows.sort_by_key(|r| (r.len(), r.iter().map(|x| x.0).min()));
    for row in rows {
        let r = row.iter().map(|(c, q)| Ok((*c, field.from_rational(q)?))).collect::<Result<SparseRow<F::Elem>>>()?;
        e.insert(r);
    }
    let dim_quotient = cols - e.rank();
    let mut first_dependent = None;
    for (idx, label) in targets {
        if e.insert(vec![(*idx, field.one())]).is_none() && first_dependent.is_none() {
            first_dependent = Some(label.clone());
        }
    }
    Ok(LevelOutcome { dim_a: cols, dim_quotient, independent: first_dependent.is_none(), first_dependent })
}
