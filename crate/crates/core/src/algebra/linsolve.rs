//! Exact linear algebra over `Q`: reduced row echelon form, rank, kernel.
//!
//! The systems produced by the cohomology solvers are banded and sparse, so
//! elimination only walks the nonzero columns of each pivot row.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub cols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rational matrix");
        RatMatrix { rows, cols }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows: vec![vec![Rational::zero(); cols]; rows],
            cols,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        RatMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
            cols,
        )
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// In-place row reduction; returns the pivot columns.
/// With `reduced`, entries above each pivot are cleared as well.
fn eliminate(rows: &mut [Vec<Rational>], cols: usize, reduced: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (c..cols).filter(|&j| !rows[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut rows[r]);
        let start = if reduced { 0 } else { r + 1 };
        for (i, row) in rows.iter_mut().enumerate().skip(start) {
            if i == r || row.is_empty() || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut rows = m.rows.clone();
    eliminate(&mut rows, m.cols, false).len()
}

/// Kernel basis from the reduced row echelon form: one vector per free
/// column, with a one in that column, in increasing column order.
pub fn solve_rational_kernel(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let mut rows = m.rows.clone();
    let pivots = eliminate(&mut rows, m.cols, true);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rank_has_empty_kernel() {
        let m = RatMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert!(solve_rational_kernel(&m).is_empty());
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn one_relation() {
        let m = RatMatrix::from_i64(&[&[1, 1]]);
        let k = solve_rational_kernel(&m);
        assert_eq!(k.len(), 1);
        let expected: Vec<Rational> = vec![Rational::from_integer((-1).into()), Rational::one()];
        // free column is the second one; normalised to (-1, 1), i.e. ±(1, -1)
        assert_eq!(k[0], expected);
    }

    #[test]
    fn zero_map() {
        let m = RatMatrix::zeros(2, 3);
        assert_eq!(solve_rational_kernel(&m).len(), 3);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = RatMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, -1, 2]]);
        let k = solve_rational_kernel(&m);
        assert_eq!(k.len(), 4 - rank(&m));
        for v in &k {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }
}
