use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field selector used throughout the topology and Jacobian code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || !is_prime(p) || p >= (1 << 62) {
            return Err(Error::Parse(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic of a concrete field. Elements are plain values; the field
/// object carries any context (the modulus for prime fields).
pub trait FieldOps: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of a rational; fails when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl FieldOps for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u64().expect("residue fits")
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_p");
        // Fermat: a^(p-2)
        let mut result = 1u64;
        let mut base = *a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return Err(Error::Precondition(format!(
                "coefficient {q} is not defined over F{}",
                self.p
            )));
        }
        Ok(self.mul(&self.reduce_int(q.numer()), &self.inv(&den)))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
}

/// Sparse row as sorted `(column, value)` pairs with non-zero values.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Incrementally built row echelon basis of a subspace of `F^cols`.
///
/// Pivot rows are normalised with leading coefficient one and their leading
/// column is the smallest column in their support.
#[derive(Clone, Debug)]
pub struct RowEchelon<F: FieldOps> {
    field: F,
    cols: usize,
    pivots: BTreeMap<usize, SparseRow<F::Elem>>,
}

impl<F: FieldOps> RowEchelon<F> {
    pub fn new(field: F, cols: usize) -> Self {
        RowEchelon { field, cols, pivots: BTreeMap::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// `a - k * b` for sparse rows.
    fn axpy(&self, a: &SparseRow<F::Elem>, k: &F::Elem, b: &SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let v = f.neg(&f.mul(k, &b[j].1));
                if !f.is_zero(&v) {
                    out.push((b[j].0, v));
                }
                j += 1;
            } else {
                let v = f.sub(&a[i].1, &f.mul(k, &b[j].1));
                if !f.is_zero(&v) {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn normalize(&self, row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let mut row: SparseRow<F::Elem> = row.into_iter().filter(|(_, v)| !self.field.is_zero(v)).collect();
        row.sort_by_key(|(c, _)| *c);
        // merge duplicate columns
        let mut merged: SparseRow<F::Elem> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = self.field.add(lv, &v),
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !self.field.is_zero(v));
        merged
    }

    /// Reduces every entry that sits in a pivot column.
    pub fn reduce(&self, row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let mut row = self.normalize(row);
        let mut idx = 0;
        while idx < row.len() {
            let (c, v) = row[idx].clone();
            match self.pivots.get(&c) {
                Some(p) => {
                    row = self.axpy(&row, &v, p);
                    // entries before idx are untouched: pivot rows start at c
                }
                None => idx += 1,
            }
        }
        row
    }

    /// Adds a row; returns its new pivot column, or `None` if it was
    /// already in the span.
    pub fn insert(&mut self, row: SparseRow<F::Elem>) -> Option<usize> {
        let mut row = self.normalize(row);
        loop {
            let Some((c, v)) = row.first().cloned() else { return None };
            match self.pivots.get(&c) {
                Some(p) => row = self.axpy(&row, &v, p),
                None => {
                    let inv = self.field.inv(&v);
                    let row: SparseRow<F::Elem> =
                        row.into_iter().map(|(c, x)| (c, self.field.mul(&x, &inv))).collect();
                    self.pivots.insert(c, row);
                    return Some(c);
                }
            }
        }
    }

    pub fn contains(&self, row: SparseRow<F::Elem>) -> bool {
        self.reduce(row).is_empty()
    }
}

fn echelon_rank<F: FieldOps>(field: F, cols: usize, rows: &[Vec<(usize, BigRational)>]) -> Result<usize> {
    let mut e = RowEchelon::new(field.clone(), cols);
    for row in rows {
        let row = row
            .iter()
            .map(|(c, q)| Ok((*c, field.from_rational(q)?)))
            .collect::<Result<SparseRow<F::Elem>>>()?;
        e.insert(row);
    }
    Ok(e.rank())
}

/// Rank of a sparse rational matrix over the selected field.
pub fn rank_over(field: Field, cols: usize, rows: &[Vec<(usize, BigRational)>]) -> Result<usize> {
    match field {
        Field::Rationals => echelon_rank(RationalField, cols, rows),
        Field::Prime(p) => echelon_rank(PrimeField::new(p), cols, rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), 5);
        assert_eq!(f.from_rational(&rat(1, 2)).unwrap(), 4);
        assert_eq!(f.from_rational(&rat(-1, 1)).unwrap(), 6);
        assert!(f.from_rational(&rat(1, 7)).is_err());
    }

    #[test]
    fn field_selector() {
        assert!(Field::prime(4).is_err());
        assert_eq!(Field::prime(2).unwrap(), Field::Prime(2));
        assert_eq!(Field::Rationals.to_string(), "Q");
    }

    #[test]
    fn echelon_rank_and_reduce() {
        let mut e = RowEchelon::new(RationalField, 3);
        assert_eq!(e.insert(vec![(0, rat(1, 1)), (1, rat(1, 1))]), Some(0));
        assert_eq!(e.insert(vec![(1, rat(1, 1)), (2, rat(1, 1))]), Some(1));
        assert_eq!(e.insert(vec![(0, rat(1, 1)), (2, rat(-1, 1))]), None);
        assert_eq!(e.rank(), 2);
        // x0 = -x1 = x2 modulo the span
        let r = e.reduce(vec![(0, rat(1, 1))]);
        assert_eq!(r, vec![(2, rat(1, 1))]);
    }

    #[test]
    fn echelon_over_f2_sees_characteristic() {
        let f = PrimeField::new(2);
        let mut e = RowEchelon::new(f, 2);
        e.insert(vec![(0, 1), (1, 1)]);
        // (1, -1) = (1, 1) in characteristic two
        assert!(e.contains(vec![(0, 1), (1, f.neg(&1))]));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // [[1,1],[1,-1]] has determinant -2
        let rows = vec![vec![(0, rat(1, 1)), (1, rat(1, 1))], vec![(0, rat(1, 1)), (1, rat(-1, 1))]];
        assert_eq!(rank_over(Field::Rationals, 2, &rows).unwrap(), 2);
        assert_eq!(rank_over(Field::Prime(2), 2, &rows).unwrap(), 1);
        assert_eq!(rank_over(Field::Prime(3), 2, &rows).unwrap(), 2);
    }
}
