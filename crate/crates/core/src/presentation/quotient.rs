//! Quotients `R^cols / span(relations)` for one graded slice, over the
//! integers (via Smith normal form) or over a field (via sparse elimination),
//! together with a chosen monomial basis and exact coordinates on it.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{
    smith_normal_form, solve_rational, Field, FieldOps, IntMatrix, PrimeField, RationalField, RowEchelon, SparseRow,
};

use super::Ring;

pub type RationalRow = Vec<(usize, BigRational)>;

#[derive(Clone, Debug)]
pub(crate) enum SliceQuotient {
    Integers(IntegerQuotient),
    Rationals(FieldQuotient<RationalField>),
    Prime(FieldQuotient<PrimeField>),
}

impl SliceQuotient {
    /// Fails with `Lattice` when the integer quotient has torsion.
    pub fn new(ring: Ring, cols: usize, relations: &[RationalRow]) -> Result<Self> {
        Ok(match ring {
            Ring::Integers => SliceQuotient::Integers(IntegerQuotient::new(cols, relations)?),
            Ring::Field(Field::Rationals) => SliceQuotient::Rationals(FieldQuotient::new(RationalField, cols, relations)?),
            Ring::Field(Field::Prime(p)) => SliceQuotient::Prime(FieldQuotient::new(PrimeField::new(p), cols, relations)?),
        })
    }

    pub fn rank(&self) -> usize {
        match self {
            SliceQuotient::Integers(q) => q.rank(),
            SliceQuotient::Rationals(q) => q.rank(),
            SliceQuotient::Prime(q) => q.rank(),
        }
    }

    /// Greedily accepts candidate columns in the given order.
    pub fn select_basis(&mut self, candidates: &[usize]) -> Result<Vec<usize>> {
        let chosen = match self {
            SliceQuotient::Integers(q) => q.select(candidates),
            SliceQuotient::Rationals(q) => q.select(candidates),
            SliceQuotient::Prime(q) => q.select(candidates),
        };
        if chosen.len() != self.rank() {
            return Err(Error::Lattice(format!(
                "no monomial basis found greedily: {} of {} chosen",
                chosen.len(),
                self.rank()
            )));
        }
        self.set_basis(&chosen)?;
        Ok(chosen)
    }

    /// Fixes the basis; fails unless the columns form a basis of the quotient.
    pub fn set_basis(&mut self, basis: &[usize]) -> Result<()> {
        match self {
            SliceQuotient::Integers(q) => q.set_basis(basis),
            SliceQuotient::Rationals(q) => q.set_basis(basis),
            SliceQuotient::Prime(q) => q.set_basis(basis),
        }
    }

    pub fn coordinates(&self, x: &RationalRow) -> Result<Vec<BigRational>> {
        match self {
            SliceQuotient::Integers(q) => q.coordinates(x),
            SliceQuotient::Rationals(q) => q.coordinates(x),
            SliceQuotient::Prime(q) => q.coordinates(x),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct IntegerQuotient {
    cols: usize,
    /// rows of `U` past the relation rank: `x -> qmap x` identifies the quotient with `Z^rank`
    qmap: IntMatrix,
    basis: Vec<usize>,
    basis_matrix: Option<IntMatrix>,
}

impl IntegerQuotient {
    fn new(cols: usize, relations: &[RationalRow]) -> Result<Self> {
        let mut a = IntMatrix::zeros(cols, relations.len());
        for (r, row) in relations.iter().enumerate() {
            for (c, v) in row {
                if !v.is_integer() {
                    return Err(Error::Precondition(format!("relation coefficient {v} is not an integer")));
                }
                a[(*c, r)] += v.to_integer();
            }
        }
        let snf = smith_normal_form(&a);
        let torsion = snf.torsion();
        if !torsion.is_empty() {
            let t: Vec<String> = torsion.iter().map(|x| x.to_string()).collect();
            return Err(Error::Lattice(format!("quotient has torsion with invariant factors [{}]", t.join(", "))));
        }
        let r = snf.rank();
        let mut qmap = IntMatrix::zeros(cols - r, cols);
        for i in r..cols {
            for c in 0..cols {
                qmap[(i - r, c)] = snf.u[(i, c)].clone();
            }
        }
        Ok(IntegerQuotient { cols, qmap, basis: Vec::new(), basis_matrix: None })
    }

    fn rank(&self) -> usize {
        self.qmap.rows()
    }

    fn images(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..self.rank() {
                m[(i, j)] = self.qmap[(i, c)].clone();
            }
        }
        m
    }

    /// Images must be independent and span a saturated sublattice.
    fn saturated(&self, cols: &[usize]) -> bool {
        let snf = smith_normal_form(&self.images(cols));
        snf.rank() == cols.len() && snf.diagonal().iter().all(|d| d.is_one() || d.is_zero())
    }

    fn select(&self, candidates: &[usize]) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for &c in candidates {
            if chosen.len() == self.rank() {
                break;
            }
            chosen.push(c);
            if !self.saturated(&chosen) {
                chosen.pop();
            }
        }
        chosen
    }

    fn set_basis(&mut self, basis: &[usize]) -> Result<()> {
        let m = self.images(basis);
        if basis.len() != self.rank() || (self.rank() > 0 && !m.determinant().abs().is_one()) {
            return Err(Error::Lattice("chosen monomials are not a basis of the integer quotient".into()));
        }
        self.basis = basis.to_vec();
        self.basis_matrix = Some(m);
        Ok(())
    }

    fn coordinates(&self, x: &RationalRow) -> Result<Vec<BigRational>> {
        let b = self.basis_matrix.as_ref().expect("basis set before coordinates");
        if self.rank() == 0 {
            return Ok(Vec::new());
        }
        // qmap is integral, x may carry rational coefficients
        let mut image = vec![BigRational::zero(); self.rank()];
        for (c, v) in x {
            assert!(*c < self.cols);
            for (i, slot) in image.iter_mut().enumerate() {
                let q = &self.qmap[(i, *c)];
                if !q.is_zero() {
                    *slot += v * BigRational::from_integer(q.clone());
                }
            }
        }
        solve_rational(b, &image).ok_or_else(|| Error::Lattice("basis matrix is singular".into()))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FieldQuotient<F: FieldOps> {
    field: F,
    cols: usize,
    relations: Vec<SparseRow<F::Elem>>,
    echelon: RowEchelon<F>,
    /// position of each original column after moving the basis columns last
    permutation: Vec<usize>,
    basis: Vec<usize>,
    reduced: Option<RowEchelon<F>>,
}

impl<F: FieldOps> FieldQuotient<F> {
    fn new(field: F, cols: usize, relations: &[RationalRow]) -> Result<Self> {
        let rows = relations
            .iter()
            .map(|row| row.iter().map(|(c, v)| Ok((*c, field.from_rational(v)?))).collect::<Result<SparseRow<F::Elem>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut echelon = RowEchelon::new(field.clone(), cols);
        for row in &rows {
            echelon.insert(row.clone());
        }
        Ok(FieldQuotient {
            field,
            cols,
            relations: rows,
            echelon,
            permutation: (0..cols).collect(),
            basis: Vec::new(),
            reduced: None,
        })
    }

    fn rank(&self) -> usize {
        self.cols - self.echelon.rank()
    }

    fn select(&self, candidates: &[usize]) -> Vec<usize> {
        let mut e = self.echelon.clone();
        let mut chosen = Vec::new();
        for &c in candidates {
            if chosen.len() == self.rank() {
                break;
            }
            if e.insert(vec![(c, self.field.one())]).is_some() {
                chosen.push(c);
            }
        }
        chosen
    }

    fn set_basis(&mut self, basis: &[usize]) -> Result<()> {
        if basis.len() != self.rank() {
            return Err(Error::Lattice("basis size differs from the quotient dimension".into()));
        }
        let mut is_basis = vec![false; self.cols];
        for &b in basis {
            is_basis[b] = true;
        }
        let mut permutation = vec![0; self.cols];
        let mut next = 0;
        for c in (0..self.cols).filter(|&c| !is_basis[c]) {
            permutation[c] = next;
            next += 1;
        }
        for &b in basis {
            permutation[b] = next;
            next += 1;
        }
        let mut reduced = RowEchelon::new(self.field.clone(), self.cols);
        for row in &self.relations {
            reduced.insert(row.iter().map(|(c, v)| (permutation[*c], v.clone())).collect());
        }
        // the relations must eliminate exactly the non-basis columns
        if reduced.pivot_columns().any(|c| c >= self.cols - basis.len()) {
            return Err(Error::Lattice("chosen monomials are not a basis of the quotient".into()));
        }
        self.permutation = permutation;
        self.basis = basis.to_vec();
        self.reduced = Some(reduced);
        Ok(())
    }

    fn coordinates(&self, x: &RationalRow) -> Result<Vec<BigRational>> {
        let reduced = self.reduced.as_ref().expect("basis set before coordinates");
        let row = x
            .iter()
            .map(|(c, v)| Ok((self.permutation[*c], self.field.from_rational(v)?)))
            .collect::<Result<SparseRow<F::Elem>>>()?;
        let rem = reduced.reduce(row);
        let offset = self.cols - self.basis.len();
        let mut out = vec![BigRational::zero(); self.basis.len()];
        for (c, v) in rem {
            debug_assert!(c >= offset);
            out[c - offset] = self.field.to_rational(&v);
        }
        Ok(out)
    }
}
