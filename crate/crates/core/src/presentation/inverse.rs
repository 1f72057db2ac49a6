use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::conemonoid::{render_exponents, Cone, ConeElement};
use crate::error::{Error, Result};
use crate::exactmath::format_rational;
use crate::exactmath::lp::{LinearProgram, LpOutcome, Relation};
use crate::polyhedron::DelzantPolyhedron;

/// `v_j * prod v_k^{m_k - delta_jk} = T^exponent`, so `v_j` is invertible
/// once `T` is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseCertificate {
    /// 1-based facet label
    pub facet: usize,
    pub multiplicities: Vec<u64>,
    pub exponent: String,
    pub identity: String,
    pub verified: bool,
}

/// Largest total weight searched exhaustively before falling back to an LP.
const SEARCH_WEIGHT: u64 = 12;

pub fn divisor_inverse_certificate(p: &DelzantPolyhedron, j: usize) -> Result<InverseCertificate> {
    if j >= p.num_facets() {
        return Err(Error::Precondition(format!("facet index {} out of range", j + 1)));
    }
    if !p.is_compact() {
        return Err(Error::NonCompact);
    }
    let m = (1..=SEARCH_WEIGHT).find_map(|w| search_weight(p, j, w)).map_or_else(|| lp_multiplicities(p, j), Ok)?;
    certify(p, j, m)
}

/// First `m` of total weight `w` (lexicographically largest) with
/// `m_j >= 1` and `sum m_k nu_k = 0`.
fn search_weight(p: &DelzantPolyhedron, j: usize, w: u64) -> Option<Vec<u64>> {
    fn rec(p: &DelzantPolyhedron, j: usize, k: usize, left: u64, m: &mut Vec<u64>, acc: &mut Vec<i64>) -> bool {
        if k == p.num_facets() {
            return left == 0 && acc.iter().all(|&x| x == 0);
        }
        let lo = u64::from(k == j);
        for e in (lo..=left).rev() {
            m[k] = e;
            for (a, &v) in acc.iter_mut().zip(p.normal(k)) {
                *a += e as i64 * v;
            }
            let found = rec(p, j, k + 1, left - e, m, acc);
            for (a, &v) in acc.iter_mut().zip(p.normal(k)) {
                *a -= e as i64 * v;
            }
            if found {
                return true;
            }
        }
        m[k] = 0;
        false
    }
    let mut m = vec![0; p.num_facets()];
    let mut acc = vec![0i64; p.dim()];
    rec(p, j, 0, w, &mut m, &mut acc).then_some(m)
}

fn lp_multiplicities(p: &DelzantPolyhedron, j: usize) -> Result<Vec<u64>> {
    let big_n = p.num_facets();
    let mut lp = LinearProgram::new(big_n).all_nonnegative();
    for i in 0..p.dim() {
        lp.constrain((0..big_n).map(|k| BigRational::from_integer(p.normal(k)[i].into())).collect(), Relation::Eq, BigRational::zero());
    }
    let mut unit = vec![BigRational::zero(); big_n];
    unit[j] = BigRational::one();
    lp.constrain(unit, Relation::Ge, BigRational::one());
    let lp = lp.minimize(vec![BigRational::one(); big_n]);
    let LpOutcome::Optimal { point, .. } = lp.solve() else {
        return Err(Error::Property("compact polyhedron without a positive relation among normals".into()));
    };
    let lcm = point.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    point
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer().to_u64().ok_or_else(|| Error::Property("multiplicity overflow".into())))
        .collect()
}

fn certify(p: &DelzantPolyhedron, j: usize, m: Vec<u64>) -> Result<InverseCertificate> {
    let cone = Cone::new(p)?;
    let mut sum = ConeElement::zero(p.dim());
    let mut exponent = BigRational::zero();
    for (k, &e) in m.iter().enumerate() {
        sum = &sum + &ConeElement::generator(p, k).scaled(e as i64);
        exponent += p.offset(k) * BigRational::from_integer(e.into());
    }
    let product = cone.monomial(sum)?;
    let verified = product.height() == &exponent
        && product.exponents().iter().all(|&t| t == 0)
        && product.nu().iter().all(|&x| x == 0);
    let mut rest: Vec<i64> = m.iter().map(|&e| e as i64).collect();
    rest[j] -= 1;
    let mut single = vec![0i64; p.num_facets()];
    single[j] = 1;
    let identity = format!(
        "{} * {} = {}",
        render_exponents(&BigRational::zero(), &single),
        render_exponents(&BigRational::zero(), &rest),
        render_exponents(&exponent, &vec![0; p.num_facets()])
    );
    Ok(InverseCertificate { facet: j + 1, multiplicities: m, exponent: format_rational(&exponent), identity, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn poly(dim: usize, facets: &[(&[i64], i64)]) -> DelzantPolyhedron {
        DelzantPolyhedron::new(dim, facets.iter().map(|(n, l)| (n.to_vec(), rat(*l, 1))).collect()).unwrap()
    }

    #[test]
    fn projective_certificates() {
        let cp1 = poly(1, &[(&[1], 1), (&[-1], 1)]);
        let c = divisor_inverse_certificate(&cp1, 0).unwrap();
        assert_eq!(c.multiplicities, vec![1, 1]);
        assert_eq!(c.identity, "v1 * v2 = T^2");
        assert!(c.verified);

        let cp2 = poly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 1)]);
        let c = divisor_inverse_certificate(&cp2, 0).unwrap();
        assert_eq!(c.multiplicities, vec![1, 1, 1]);
        assert_eq!(c.exponent, "3");
        assert!(c.verified);
    }

    #[test]
    fn non_compact_is_rejected() {
        let o = poly(2, &[(&[1, 0], 1), (&[1, 1], 1), (&[0, 1], 1)]);
        for j in 0..3 {
            assert_eq!(divisor_inverse_certificate(&o, j).unwrap_err(), Error::NonCompact);
        }
    }

    #[test]
    fn lp_fallback_agrees() {
        let f1 = poly(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[-1, -1], 3), (&[0, -1], 2)]);
        for j in 0..4 {
            let m = lp_multiplicities(&f1, j).unwrap();
            let cert = certify(&f1, j, m).unwrap();
            assert!(cert.verified);
            assert!(cert.multiplicities[j] >= 1);
        }
    }
}
