//! Dense matrices of Laurent polynomials.
//!
//! Determinants and adjugates clear the matrix to polynomial form by a global
//! power of `z` and then run fraction-free (Bareiss) elimination over `Q[z]`,
//! so every intermediate entry is a minor of the input and all divisions are
//! exact.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::rational::Rational;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = LaurentPoly::one();
        }
        m
    }

    pub fn diagonal(diag: Vec<LaurentPoly>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        LaurentMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&LaurentPoly> {
        (i < self.rows && j < self.cols).then(|| &self.entries[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `((i, j), entry)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &LaurentPoly)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, p)| ((k / self.cols, k % self.cols), p))
    }

    pub fn map<F: Fn(&LaurentPoly) -> LaurentPoly>(&self, f: F) -> Self {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Multiply every entry by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        self.map(|p| p.shift(k))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Substitute `z -> 1/z` entrywise.
    pub fn invert_variable(&self) -> Self {
        self.map(LaurentPoly::invert_variable)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Kronecker product: entry `((i1, i2), (j1, j2))` at
    /// `(i1·rows(other) + i2, j1·cols(other) + j2)` is `self[i1][j1]·other[i2][j2]`.
    pub fn kron(&self, other: &LaurentMatrix) -> Self {
        let mut k = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for ((i1, j1), a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            for ((i2, j2), b) in other.iter() {
                if !b.is_zero() {
                    k[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * b;
                }
            }
        }
        k
    }

    pub fn block_diagonal(a: &LaurentMatrix, b: &LaurentMatrix) -> Self {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for ((i, j), p) in a.iter() {
            m[(i, j)] = p.clone();
        }
        for ((i, j), p) in b.iter() {
            m[(a.rows + i, a.cols + j)] = p.clone();
        }
        m
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// `diag(I_k, self)`.
    pub fn embed_lower_right(&self, k: usize) -> Self {
        Self::block_diagonal(&Self::identity(k), self)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::ord).min()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::deg).max()
    }

    pub fn max_abs_exponent(&self) -> i64 {
        let lo = self.min_exponent().unwrap_or(0).abs();
        let hi = self.max_exponent().unwrap_or(0).abs();
        lo.max(hi)
    }

    /// All entries in `Q[z]`.
    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_polynomial)
    }

    /// All entries in `Q[w]`, `w = 1/z`.
    pub fn is_polynomial_in_w(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_polynomial_in_w)
    }

    pub fn checked_mul(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = LaurentPoly::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Shift exponent `s` with `z^s·self` polynomial, and the dense rows.
    fn cleared(&self) -> (i64, Vec<Vec<UniPoly>>) {
        let s = -self.min_exponent().unwrap_or(0);
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|p| p.to_unipoly(s).expect("cleared entry is polynomial"))
                    .collect()
            })
            .collect();
        (s, rows)
    }

    /// Exact determinant.
    pub fn det(&self) -> Result<LaurentPoly> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one());
        }
        let (s, rows) = self.cleared();
        // det(z^s M) = z^{n s} det(M)
        Ok(LaurentPoly::from_unipoly(&bareiss_det(rows), -(n as i64) * s))
    }

    /// Exact adjugate: `adj(M)·M = M·adj(M) = det(M)·I`.
    pub fn adjugate(&self) -> Result<LaurentMatrix> {
        self.require_square()?;
        let n = self.rows;
        if n <= 1 {
            return Ok(Self::identity(n));
        }
        let (s, rows) = self.cleared();
        let adj = match fraction_free_inverse(rows.clone()) {
            Some((_, sign, x)) => {
                // T·B = d·I with T = x, and det(B) = sign·d, so adj(B) = sign·x.
                let sign = Rational::from_integer(sign.into());
                x.into_iter()
                    .map(|r| r.into_iter().map(|p| p.scale(&sign)).collect())
                    .collect()
            }
            None => cofactor_adjugate(&rows),
        };
        // adj(z^s M) = z^{(n-1)s} adj(M)
        let shift = -((n as i64) - 1) * s;
        let mut out = Self::zeros(n, n);
        for (i, r) in adj.iter().enumerate() {
            for (j, p) in r.iter().enumerate() {
                out[(i, j)] = LaurentPoly::from_unipoly(p, shift);
            }
        }
        Ok(out)
    }

    /// Inverse over the Laurent ring; requires `det` to be a nonzero monomial.
    pub fn inverse(&self) -> Result<LaurentMatrix> {
        let det = self.det()?;
        let (e, c) = det
            .as_monomial()
            .ok_or_else(|| Error::DetNotMonomial(det.to_string()))?;
        let adj = self.adjugate()?;
        Ok(adj.map(|p| p.div_monomial(c, e)))
    }
}

impl std::ops::Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl Add<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

fn exact(num: &UniPoly, den: &UniPoly) -> UniPoly {
    num.exact_div(den)
        .expect("fraction-free elimination produced an inexact division")
}

/// Bareiss determinant of a square polynomial matrix.
pub(crate) fn bareiss_det(mut a: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = a.len();
    let mut prev = UniPoly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return UniPoly::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = exact(&t, &prev);
            }
            a[i][k] = UniPoly::zero();
        }
        prev = a[k][k].clone();
    }
    if negate {
        -&prev
    } else {
        prev
    }
}

/// Fraction-free Gauss-Jordan on `[B | I]`.
///
/// Returns `(d, sign, T)` with `T·B = d·I` and `det(B) = sign·d`, or `None`
/// when `B` is singular.
pub(crate) fn fraction_free_inverse(b: Vec<Vec<UniPoly>>) -> Option<(UniPoly, i32, Vec<Vec<UniPoly>>)> {
    let n = b.len();
    let mut a: Vec<Vec<UniPoly>> = b
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { UniPoly::one() } else { UniPoly::zero() }));
            row
        })
        .collect();
    let mut prev = UniPoly::one();
    let mut sign = 1;
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let t = &(&pivot_row[k] * &row[j]) - &(&factor * &pivot_row[j]);
                row[j] = if t.is_zero() { t } else { exact(&t, &prev) };
            }
            row[k] = UniPoly::zero();
        }
        prev = pivot_row[k].clone();
    }
    let x = a.into_iter().map(|row| row[n..].to_vec()).collect();
    Some((prev, sign, x))
}

#[allow(clippy::needless_range_loop)]
fn cofactor_adjugate(b: &[Vec<UniPoly>]) -> Vec<Vec<UniPoly>> {
    let n = b.len();
    let mut adj = vec![vec![UniPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<UniPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| b[r][c].clone()).collect())
                .collect();
            let d = bareiss_det(minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -&d };
        }
    }
    adj
}

/// Constant value of a determinant that must lie in `Q^*`.
pub fn nonzero_constant(p: &LaurentPoly) -> Option<Rational> {
    p.as_constant().filter(|c| !c.is_zero())
}

/// `true` if `p` equals `z^e` with coefficient exactly one.
pub fn is_unit_monomial(p: &LaurentPoly, e: i64) -> bool {
    p.as_monomial().is_some_and(|(ex, c)| ex == e && c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn z(e: i64) -> LaurentPoly {
        LaurentPoly::z_pow(e)
    }

    #[test]
    fn det_examples() {
        let m = LaurentMatrix::from_rows(vec![vec![z(-1)]]);
        assert_eq!(m.det().unwrap(), z(-1));
        assert_eq!(LaurentMatrix::identity(3).det().unwrap(), LaurentPoly::one());
        let m = LaurentMatrix::from_rows(vec![vec![z(1), z(0)], vec![LaurentPoly::zero(), z(-1)]]);
        assert_eq!(m.det().unwrap(), LaurentPoly::one());
    }

    #[test]
    fn adjugate_examples() {
        let m = LaurentMatrix::from_rows(vec![vec![LaurentPoly::monomial(int(7), 3)]]);
        assert_eq!(m.adjugate().unwrap(), LaurentMatrix::identity(1));
        let m = LaurentMatrix::from_rows(vec![vec![z(1), z(0)], vec![LaurentPoly::zero(), z(-1)]]);
        let expected = LaurentMatrix::from_rows(vec![
            vec![z(-1), LaurentPoly::constant(int(-1))],
            vec![LaurentPoly::zero(), z(1)],
        ]);
        assert_eq!(m.adjugate().unwrap(), expected);
        assert_eq!(LaurentMatrix::identity(2).adjugate().unwrap(), LaurentMatrix::identity(2));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = LaurentMatrix::zeros(2, 3);
        assert_eq!(m.det(), Err(Error::NonSquare { rows: 2, cols: 3 }));
        assert!(m.adjugate().is_err());
    }

    #[test]
    fn singular_adjugate_uses_cofactors() {
        // [[1, z], [1, z]] has adjugate [[z, -z], [-1, 1]].
        let m = LaurentMatrix::from_rows(vec![vec![z(0), z(1)], vec![z(0), z(1)]]);
        let adj = m.adjugate().unwrap();
        assert_eq!(&adj * &m, LaurentMatrix::zeros(2, 2));
        assert_eq!(adj[(0, 0)], z(1));
        assert_eq!(adj[(1, 0)], -z(0));
    }

    #[test]
    fn pivoting_adjugate_sign() {
        // zero leading entry forces a row swap
        let m = LaurentMatrix::from_rows(vec![
            vec![LaurentPoly::zero(), z(1), z(0)],
            vec![z(-1), z(0), LaurentPoly::zero()],
            vec![z(0), LaurentPoly::zero(), z(2)],
        ]);
        let det = m.det().unwrap();
        let adj = m.adjugate().unwrap();
        let scaled = LaurentMatrix::identity(3).map(|p| p * &det);
        assert_eq!(&adj * &m, scaled);
        assert_eq!(&m * &adj, scaled);
    }

    #[test]
    fn inverse_requires_monomial_det() {
        let m = LaurentMatrix::from_rows(vec![vec![z(0) + z(1)]]);
        assert!(matches!(m.inverse(), Err(Error::DetNotMonomial(_))));
        let m = LaurentMatrix::from_rows(vec![vec![z(2), z(0)], vec![LaurentPoly::zero(), z(-1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, LaurentMatrix::identity(2));
    }
}
