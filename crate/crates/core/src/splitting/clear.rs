//! Clearing the strictly upper part of a triangular transition.

use crate::algebra::matrix::is_unit_monomial;
use crate::algebra::{LaurentMatrix, LaurentPoly};
use crate::error::{Error, Result};

/// Unipotent chart frames with `w_inf · R · w0_inv = diag(z^{-n_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clearing {
    /// over `k[z]`
    pub w0: LaurentMatrix,
    pub w0_inv: LaurentMatrix,
    /// over `k[w]`, stored with `z`-exponents
    pub w_inf: LaurentMatrix,
}

/// Entry `β` at `(i, j)` is split as `β = -x·z^{-n_i} - y·z^{-n_j}`: terms with
/// exponent `≥ -n_i` go to the chart-0 multiplier `x ∈ k[z]`, the rest to the
/// chart-∞ multiplier `y ∈ k[w]`. Since `n_i ≥ n_j` the two ranges cover
/// every exponent. Entries are processed by increasing distance from the
/// diagonal, so each elementary operation only disturbs entries not yet
/// visited.
pub fn triangular_clear(r: &LaurentMatrix, degrees: &[i64]) -> Result<Clearing> {
    let m = degrees.len();
    if r.rows() != m || r.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} transition with {m} degrees",
            r.rows(),
            r.cols()
        )));
    }
    if degrees.windows(2).any(|p| p[0] < p[1]) {
        return Err(Error::Invariant(format!("diagonal degrees {degrees:?} are not non-increasing")));
    }
    for i in 0..m {
        if !is_unit_monomial(&r[(i, i)], -degrees[i]) {
            return Err(Error::Invariant(format!(
                "diagonal entry {i} is {}, expected z^{}",
                r[(i, i)],
                -degrees[i]
            )));
        }
        if (0..i).any(|j| !r[(i, j)].is_zero()) {
            return Err(Error::Invariant(format!("row {i} has entries below the diagonal")));
        }
    }

    let mut work = r.clone();
    let mut w0_inv = LaurentMatrix::identity(m);
    let mut w_inf = LaurentMatrix::identity(m);
    for s in 1..m {
        for i in 0..m - s {
            let j = i + s;
            let beta = work[(i, j)].clone();
            if beta.is_zero() {
                continue;
            }
            let (ni, nj) = (degrees[i], degrees[j]);
            let x = -beta.filter(|e| e >= -ni).shift(ni);
            let y = -beta.filter(|e| e < -ni).shift(nj);
            debug_assert!(x.is_polynomial() && y.is_polynomial_in_w());
            if !x.is_zero() {
                add_column_multiple(&mut work, i, j, &x);
                add_column_multiple(&mut w0_inv, i, j, &x);
            }
            if !y.is_zero() {
                add_row_multiple(&mut work, j, i, &y);
                add_row_multiple(&mut w_inf, j, i, &y);
            }
            if !work[(i, j)].is_zero() {
                return Err(Error::Invariant(format!("entry ({i}, {j}) survived clearing")));
            }
        }
    }
    let diag = LaurentMatrix::diagonal(degrees.iter().map(|&n| LaurentPoly::z_pow(-n)).collect());
    if work != diag {
        return Err(Error::Invariant("clearing did not reach the diagonal form".into()));
    }
    let w0 = w0_inv.inverse()?;
    Ok(Clearing { w0, w0_inv, w_inf })
}

/// column `to` += `factor` · column `from`
fn add_column_multiple(m: &mut LaurentMatrix, from: usize, to: usize, factor: &LaurentPoly) {
    for r in 0..m.rows() {
        if !m[(r, from)].is_zero() {
            let t = &m[(r, from)] * factor;
            m[(r, to)] += &t;
        }
    }
}

/// row `to` += `factor` · row `from`
fn add_row_multiple(m: &mut LaurentMatrix, from: usize, to: usize, factor: &LaurentPoly) {
    for c in 0..m.cols() {
        if !m[(from, c)].is_zero() {
            let t = &m[(from, c)] * factor;
            m[(to, c)] += &t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(e: i64) -> LaurentPoly {
        LaurentPoly::z_pow(e)
    }

    #[test]
    fn clears_constant_entry_on_chart_zero() {
        let r = LaurentMatrix::from_rows(vec![vec![z(-1), z(0)], vec![LaurentPoly::zero(), z(-1)]]);
        let c = triangular_clear(&r, &[1, 1]).unwrap();
        assert_eq!(c.w_inf, LaurentMatrix::identity(2));
        assert_eq!(c.w0_inv[(0, 1)], -z(1));
        assert_eq!(&(&c.w_inf * &r) * &c.w0_inv, LaurentMatrix::diagonal(vec![z(-1), z(-1)]));
        assert_eq!(&c.w0 * &c.w0_inv, LaurentMatrix::identity(2));
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let r = LaurentMatrix::diagonal(vec![z(-2), z(0), z(3)]);
        let c = triangular_clear(&r, &[2, 0, -3]).unwrap();
        assert_eq!(c.w0, LaurentMatrix::identity(3));
        assert_eq!(c.w_inf, LaurentMatrix::identity(3));
    }

    #[test]
    fn low_exponent_goes_to_infinity_chart() {
        let r = LaurentMatrix::from_rows(vec![vec![z(0), z(-3)], vec![LaurentPoly::zero(), z(2)]]);
        let c = triangular_clear(&r, &[0, -2]).unwrap();
        assert_eq!(c.w0_inv, LaurentMatrix::identity(2));
        assert_eq!(c.w_inf[(0, 1)], -z(-5));
        assert!(c.w_inf.is_polynomial_in_w());
    }

    #[test]
    fn unsorted_degrees_are_rejected() {
        let r = LaurentMatrix::diagonal(vec![z(0), z(-1)]);
        assert!(matches!(triangular_clear(&r, &[0, 1]), Err(Error::Invariant(_))));
    }

    #[test]
    fn three_by_three_with_cascading_entries() {
        let r = LaurentMatrix::from_rows(vec![
            vec![z(-2), z(0) + z(-3), z(1) + z(-4)],
            vec![LaurentPoly::zero(), z(-1), z(-2) + z(2)],
            vec![LaurentPoly::zero(), LaurentPoly::zero(), z(1)],
        ]);
        let degrees = [2, 1, -1];
        let c = triangular_clear(&r, &degrees).unwrap();
        assert!(c.w0_inv.is_polynomial() && c.w_inf.is_polynomial_in_w());
        let diag = LaurentMatrix::diagonal(vec![z(-2), z(-1), z(1)]);
        assert_eq!(&(&c.w_inf * &r) * &c.w0_inv, diag);
    }
}
