//! Exact integer and rational linear algebra.
//!
//! Everything here works on arbitrary-precision values; nothing is ever
//! rounded. The matrices involved in toric computations are small, so the
//! algorithms are the textbook ones with gcd-based pivoting.

mod field;
pub mod lp;

pub use field::{rank_over, Field, FieldOps, PrimeField, RationalField, RowEchelon, SparseRow};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Vector of exact rationals. `BigRational` keeps fractions reduced with a
/// positive denominator.
pub type RatVector = Vec<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(cols, &owned)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    /// Replaces rows (a, b) by (p*a + q*b, r*a + s*b); the 2x2 block must be unimodular.
    fn combine_rows(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for c in 0..self.cols {
            let x = self.data[a * self.cols + c].clone();
            let y = self.data[b * self.cols + c].clone();
            self.data[a * self.cols + c] = p * &x + q * &y;
            self.data[b * self.cols + c] = r * &x + s * &y;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for row in 0..self.rows {
            let x = self.data[row * self.cols + a].clone();
            let y = self.data[row * self.cols + b].clone();
            self.data[row * self.cols + a] = p * &x + q * &y;
            self.data[row * self.cols + b] = r * &x + s * &y;
        }
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(int_rat).collect())
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut ech = RowEchelon::new(RationalField, self.cols);
        for r in 0..self.rows {
            let row: Vec<(usize, BigRational)> = self
                .row(r)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, int_rat(x)))
                .collect();
            ech.insert(row);
        }
        ech.rank()
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

/// Extended gcd returning (g, x, y) with g = x*a + y*b and g >= 0.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * M = H`. `H` is in row echelon form, pivots are positive, and entries
/// above each pivot lie in `[0, pivot)`. Zero rows are at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut pivot_row = 0;
    for col in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        // gcd-combine every lower row into the pivot row
        for r in pivot_row + 1..h.rows() {
            if h[(r, col)].is_zero() {
                continue;
            }
            let a = h[(pivot_row, col)].clone();
            let b = h[(r, col)].clone();
            let (g, x, y) = xgcd(&a, &b);
            let (p, q) = (&a / &g, &b / &g);
            // [x y; -q p] has determinant x*p + y*q = 1
            let neg_q = -&q;
            h.combine_rows(pivot_row, r, &x, &y, &neg_q, &p);
            u.combine_rows(pivot_row, r, &x, &y, &neg_q, &p);
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let piv = h[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&piv);
            if !q.is_zero() {
                let neg = -q;
                h.add_row_multiple(r, pivot_row, &neg);
                u.add_row_multiple(r, pivot_row, &neg);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Output of [`smith_normal_form`]: `u * m * v = s`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_i` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of non-zero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one; empty iff the cokernel is torsion-free.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect()
    }
}

/// Smith normal form with unimodular transforms: `U * M * V = S`, `S`
/// diagonal with non-negative entries and `d_i | d_{i+1}`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let (rows, cols) = (m.rows(), m.cols());
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = &s[(r, c)];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(br, bc)| x.abs() < s[(br, bc)].abs()) {
                    best = Some((r, c));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
        }
        let Some((br, bc)) = best else { break };
        s.swap_rows(t, br);
        u.swap_rows(t, br);
        s.swap_cols(t, bc);
        v.swap_cols(t, bc);

        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if s[(r, t)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(r, t)].clone();
                if b.is_multiple_of(&a) {
                    let k = -(&b / &a);
                    s.add_row_multiple(r, t, &k);
                    u.add_row_multiple(r, t, &k);
                } else {
                    let (g, x, y) = xgcd(&a, &b);
                    let (p, q) = (&a / &g, &b / &g);
                    let neg_q = -&q;
                    s.combine_rows(t, r, &x, &y, &neg_q, &p);
                    u.combine_rows(t, r, &x, &y, &neg_q, &p);
                    clean = false;
                }
            }
            for c in t + 1..cols {
                if s[(t, c)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(t, c)].clone();
                if b.is_multiple_of(&a) {
                    let k = -(&b / &a);
                    s.add_col_multiple(c, t, &k);
                    v.add_col_multiple(c, t, &k);
                } else {
                    let (g, x, y) = xgcd(&a, &b);
                    let (p, q) = (&a / &g, &b / &g);
                    let neg_q = -&q;
                    s.combine_cols(t, c, &x, &y, &neg_q, &p);
                    v.combine_cols(t, c, &x, &y, &neg_q, &p);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold any offending row into row t and redo
            let piv = s[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !s[(r, c)].is_multiple_of(&piv)));
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm { s, u, v }
}

/// Solves `A x = b` over the rationals, returning one solution (free
/// variables set to zero) or `None` when the system is inconsistent.
pub fn solve_rational(a: &IntMatrix, b: &[BigRational]) -> Option<RatVector> {
    let rows = a.to_rational_rows();
    solve_rational_rows(&rows, a.cols(), b)
}

/// Same as [`solve_rational`] for a rational coefficient matrix.
pub fn solve_rational_rows(a: &[Vec<BigRational>], cols: usize, b: &[BigRational]) -> Option<RatVector> {
    assert_eq!(a.len(), b.len(), "right-hand side length mismatch");
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        let Some(r) = (prow..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(prow, r);
        let inv = m[prow][col].recip();
        for x in m[prow].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != prow && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                for c in col..=cols {
                    let sub = &k * &m[prow][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    if m[prow..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// A lattice basis of `{x in Z^cols : M x = 0}`. Each vector is normalised
/// so that its first non-zero entry is positive.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, u) = hermite_normal_form(&m.transpose());
    let rank = (0..h.rows()).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).count();
    (rank..h.rows())
        .map(|r| {
            let mut v = u.row(r).to_vec();
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v.iter_mut().for_each(|x| *x = -&*x);
            }
            v
        })
        .collect()
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn dot_rat_int(x: &[BigRational], v: &[BigInt]) -> BigRational {
    x.iter().zip(v).map(|(a, b)| a * int_rat(b)).sum()
}

pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer fits in i64")
}

/// Binomial coefficient for small arguments; zero when `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
