//! Extended gcd of a list of polynomials with a unimodular transform.

use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Square polynomial matrix, row-major.
pub type PolyMatrix = Vec<Vec<UniPoly>>;

/// Returns `(g, U)` with `U·f = (g, 0, …, 0)^T`, `g` the monic gcd of the
/// inputs and `det U` a nonzero constant.
///
/// Entries are folded left to right: position 0 is combined with position
/// `i` by the 2x2 Bézout block `[[s, t], [-f_i/g, f_0/g]]`, which has
/// determinant one.
pub fn poly_ext_gcd(f: &[UniPoly]) -> Result<(UniPoly, PolyMatrix)> {
    let k = f.len();
    if f.iter().all(UniPoly::is_zero) {
        return Err(Error::AllZero);
    }
    let mut u: PolyMatrix = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { UniPoly::one() } else { UniPoly::zero() })
                .collect()
        })
        .collect();
    let mut acc = f[0].clone();
    for i in 1..k {
        let p = &acc;
        let q = &f[i];
        if p.is_zero() && q.is_zero() {
            continue;
        }
        let (g, s, t) = UniPoly::ext_gcd(p, q);
        let lower_left = -&q.exact_div(&g).expect("gcd divides its arguments");
        let lower_right = p.exact_div(&g).expect("gcd divides its arguments");
        let (row0, rowi) = (u[0].clone(), u[i].clone());
        u[0] = combine(&s, &row0, &t, &rowi);
        u[i] = combine(&lower_left, &row0, &lower_right, &rowi);
        acc = g;
    }
    let lc = acc.leading().cloned().expect("nonzero input has a nonzero gcd");
    if !num_traits::One::is_one(&lc) {
        let inv = lc.recip();
        u[0] = u[0].iter().map(|p| p.scale(&inv)).collect();
        acc = acc.scale(&inv);
    }
    Ok((acc, u))
}

fn combine(a: &UniPoly, x: &[UniPoly], b: &UniPoly, y: &[UniPoly]) -> Vec<UniPoly> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| &(a * xi) + &(b * yi))
        .collect()
}

/// Monic gcd of all entries (zero for an all-zero list).
pub fn gcd_all(f: &[UniPoly]) -> UniPoly {
    f.iter().fold(UniPoly::zero(), |g, p| UniPoly::gcd(&g, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::bareiss_det;
    use crate::algebra::rational::{int, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&x| int(x)).collect())
    }

    fn apply(u: &PolyMatrix, f: &[UniPoly]) -> Vec<UniPoly> {
        u.iter()
            .map(|row| row.iter().zip(f).fold(UniPoly::zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    #[test]
    fn coprime_pair() {
        let f = [p(&[0, 1]), p(&[1, 1])];
        let (g, u) = poly_ext_gcd(&f).unwrap();
        assert_eq!(g, UniPoly::one());
        assert_eq!(apply(&u, &f), vec![UniPoly::one(), UniPoly::zero()]);
        assert!(bareiss_det(u).is_constant());
    }

    #[test]
    fn single_entry() {
        let (g, u) = poly_ext_gcd(&[p(&[0, 0, 1])]).unwrap();
        assert_eq!(g, p(&[0, 0, 1]));
        assert_eq!(u, vec![vec![UniPoly::one()]]);
    }

    #[test]
    fn zero_then_constant() {
        let f = [UniPoly::zero(), p(&[5])];
        let (g, u) = poly_ext_gcd(&f).unwrap();
        assert_eq!(g, UniPoly::one());
        assert_eq!(apply(&u, &f), vec![UniPoly::one(), UniPoly::zero()]);
        assert!(u.iter().flatten().all(UniPoly::is_constant));
        let d = bareiss_det(u);
        assert!(d.is_constant() && !d.is_zero());
    }

    #[test]
    fn scaled_single_entry_is_made_monic() {
        let (g, u) = poly_ext_gcd(&[p(&[0, 2])]).unwrap();
        assert_eq!(g, p(&[0, 1]));
        assert_eq!(u[0][0], UniPoly::constant(rat(1, 2)));
    }

    #[test]
    fn all_zero_errors() {
        assert_eq!(poly_ext_gcd(&[UniPoly::zero(), UniPoly::zero()]), Err(Error::AllZero));
        assert_eq!(poly_ext_gcd(&[]), Err(Error::AllZero));
    }
}
