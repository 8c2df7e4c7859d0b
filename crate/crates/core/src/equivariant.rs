//! Weight bookkeeping: characters, standard linearizations, weights of
//! section and Hom monomials, and projection of bundle maps onto a weight.
//!
//! A bundle map `E -> F` is a pair of chart matrices `(F0, FInf)` with
//! `A_F·F0 = FInf·A_E`. The monomial `z^d` in entry `(p, q)` has weight
//! `λ_F[p] - λ_E[q] - d·a`, using chart-0 weights for `F0` and chart-∞
//! weights for `FInf` (whose exponents are stored in `z`, hence `d ≤ 0`).

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use crate::algebra::{LaurentMatrix, LaurentPoly};
use crate::bundle::{
    law_violations, split_bundle, Chart, EquivariantBundle, LineSummand, TorusAction, Violation, Weight,
};
use crate::error::{Error, Result};

/// Finite (possibly virtual) multiset of weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Character {
    mults: BTreeMap<Weight, i64>,
}

impl Character {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weights<I: IntoIterator<Item = Weight>>(weights: I) -> Self {
        let mut c = Character::new();
        for w in weights {
            c.add_weight(w, 1);
        }
        c
    }

    pub fn add_weight(&mut self, w: Weight, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.mults.entry(w.clone()).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.mults.remove(&w);
        }
    }

    pub fn mult(&self, w: &Weight) -> i64 {
        self.mults.get(w).copied().unwrap_or(0)
    }

    /// Sum of multiplicities (the dimension, for an honest character).
    pub fn dim(&self) -> i64 {
        self.mults.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    /// Entries in lexicographic weight order.
    pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> + '_ {
        self.mults.iter().map(|(w, &m)| (w, m))
    }
}

impl Add<&Character> for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        for (w, m) in rhs.iter() {
            out.add_weight(w.clone(), m);
        }
        out
    }
}

impl Sub<&Character> for &Character {
    type Output = Character;
    fn sub(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        for (w, m) in rhs.iter() {
            out.add_weight(w.clone(), -m);
        }
        out
    }
}

/// `{λ - d·a : 0 ≤ d ≤ n}`, the weights of `H^0(O(n))`.
pub fn line_h0_character(summand: &LineSummand, torus: &TorusAction) -> Character {
    Character::from_weights((0..=summand.n).map(|d| &summand.lam - &torus.exponent_weight(d)))
}

/// `{λ - d·a : n < d < 0}`, the weights of `H^1(O(n))`.
pub fn line_h1_character(summand: &LineSummand, torus: &TorusAction) -> Character {
    Character::from_weights((summand.n + 1..0).map(|d| &summand.lam - &torus.exponent_weight(d)))
}

/// Monomials of the transition breaking the weight law.
pub fn check_equivariance(bundle: &EquivariantBundle) -> Vec<Violation> {
    law_violations(
        bundle.transition(),
        bundle.lambda0(),
        bundle.lambda_inf(),
        bundle.torus(),
    )
}

/// `O(n)` with chart-0 weight `lam`: transition `z^{-n}`, chart-∞ weight `lam - n·a`.
pub fn standard_linearization(n: i64, lam: &Weight, torus: &TorusAction) -> EquivariantBundle {
    split_bundle(torus, &[LineSummand { n, lam: lam.clone() }])
}

/// Weight of a section monomial: `λ0[i] - d·a` for `z^d` on chart 0,
/// `λ∞[i] + j·a` for `w^j` on chart ∞.
pub fn monomial_weight(bundle: &EquivariantBundle, chart: Chart, index: usize, exponent: i64) -> Result<Weight> {
    let rank = bundle.rank();
    if index >= rank {
        return Err(Error::IndexOutOfRange { index, rank });
    }
    let a = bundle.torus();
    Ok(match chart {
        Chart::Zero => &bundle.lambda0()[index] - &a.exponent_weight(exponent),
        Chart::Infinity => &bundle.lambda_inf()[index] + &a.exponent_weight(exponent),
    })
}

/// Chart matrices of a bundle map. `f_inf` lives in `k[w]` but is stored
/// with `z`-exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub f0: LaurentMatrix,
    pub f_inf: LaurentMatrix,
}

impl HomElement {
    pub fn identity(m: usize) -> Self {
        HomElement {
            f0: LaurentMatrix::identity(m),
            f_inf: LaurentMatrix::identity(m),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        HomElement {
            f0: LaurentMatrix::zeros(rows, cols),
            f_inf: LaurentMatrix::zeros(rows, cols),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &HomElement) -> HomElement {
        HomElement {
            f0: &self.f0 * &first.f0,
            f_inf: &self.f_inf * &first.f_inf,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f_inf.is_zero()
    }

    /// `A_target·F0 == FInf·A_source`, with `F0` over `k[z]` and `FInf` over `k[w]`.
    pub fn intertwines(&self, source: &EquivariantBundle, target: &EquivariantBundle) -> bool {
        let shape = (target.rank(), source.rank());
        (self.f0.rows(), self.f0.cols()) == shape
            && (self.f_inf.rows(), self.f_inf.cols()) == shape
            && self.f0.is_polynomial()
            && self.f_inf.is_polynomial_in_w()
            && target.transition() * &self.f0 == &self.f_inf * source.transition()
    }

    /// Builds the map from a global section of `hom_bundle(source, target)`:
    /// component `q·m_target + p` becomes entry `(p, q)`.
    pub fn from_hom_section(f: &[LaurentPoly], g_in_z: &[LaurentPoly], source_rank: usize, target_rank: usize) -> Self {
        let mut out = HomElement::zero(target_rank, source_rank);
        for q in 0..source_rank {
            for p in 0..target_rank {
                out.f0[(p, q)] = f[q * target_rank + p].clone();
                out.f_inf[(p, q)] = g_in_z[q * target_rank + p].clone();
            }
        }
        out
    }
}

/// Weight of the monomial `z^d` in entry `(p, q)` of a Hom matrix on `chart`.
pub fn hom_weight(source: &EquivariantBundle, target: &EquivariantBundle, chart: Chart, p: usize, q: usize, d: i64) -> Weight {
    let (s, t) = match chart {
        Chart::Zero => (&source.lambda0()[q], &target.lambda0()[p]),
        Chart::Infinity => (&source.lambda_inf()[q], &target.lambda_inf()[p]),
    };
    &(t - s) - &source.torus().exponent_weight(d)
}

fn project(m: &LaurentMatrix, chart: Chart, source: &EquivariantBundle, target: &EquivariantBundle, chi: &Weight) -> LaurentMatrix {
    let mut out = LaurentMatrix::zeros(m.rows(), m.cols());
    for ((p, q), poly) in m.iter() {
        out[(p, q)] = LaurentPoly::from_terms(
            poly.terms()
                .filter(|&(d, _)| hom_weight(source, target, chart, p, q, d) == *chi)
                .map(|(d, c)| (d, c.clone())),
        );
    }
    out
}

/// Weight-`chi` component of a bundle map; `chi = 0` gives the invariant part.
pub fn weight_project_hom(
    source: &EquivariantBundle,
    target: &EquivariantBundle,
    h: &HomElement,
    chi: &Weight,
) -> Result<HomElement> {
    if source.torus() != target.torus() {
        return Err(Error::TorusMismatch {
            left: source.torus().rank(),
            right: target.torus().rank(),
        });
    }
    if !h.intertwines(source, target) {
        return Err(Error::NotIntertwining);
    }
    Ok(HomElement {
        f0: project(&h.f0, Chart::Zero, source, target, chi),
        f_inf: project(&h.f_inf, Chart::Infinity, source, target, chi),
    })
}

/// All weights carried by monomials of `h`.
pub fn hom_weights(source: &EquivariantBundle, target: &EquivariantBundle, h: &HomElement) -> Vec<Weight> {
    let mut out = std::collections::BTreeSet::new();
    for (chart, m) in [(Chart::Zero, &h.f0), (Chart::Infinity, &h.f_inf)] {
        for ((p, q), poly) in m.iter() {
            for (d, _) in poly.terms() {
                out.insert(hom_weight(source, target, chart, p, q, d));
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn torus1() -> TorusAction {
        TorusAction::new(vec![1])
    }

    fn w(x: i64) -> Weight {
        Weight(vec![x])
    }

    #[test]
    fn standard_linearization_examples() {
        let o1 = standard_linearization(1, &w(0), &torus1());
        assert_eq!(o1.lambda_inf(), &[w(-1)]);
        assert!(check_equivariance(&o1).is_empty());
        let o0 = standard_linearization(0, &w(4), &torus1());
        assert_eq!(o0.lambda_inf(), &[w(4)]);
        let om1 = standard_linearization(-1, &w(0), &torus1());
        assert_eq!(om1.lambda_inf(), &[w(1)]);
    }

    #[test]
    fn block_law_with_fibre_only_action() {
        let torus = TorusAction::new(vec![0]);
        let a = LaurentMatrix::from_rows(vec![
            vec![LaurentPoly::one(), LaurentPoly::one()],
            vec![LaurentPoly::zero(), LaurentPoly::one()],
        ]);
        let e = EquivariantBundle::new(a, vec![w(0), w(1)], vec![w(0), w(1)], torus);
        let v = check_equivariance(&e);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Equivariance { row: 0, col: 1, .. }));
    }

    #[test]
    fn no_torus_never_violates() {
        let e = EquivariantBundle::plain(LaurentMatrix::from_rows(vec![vec![
            LaurentPoly::z_pow(3) + LaurentPoly::z_pow(-7),
        ]]));
        assert!(check_equivariance(&e).is_empty());
    }

    #[test]
    fn monomial_weights() {
        let o1 = standard_linearization(1, &w(0), &torus1());
        assert_eq!(monomial_weight(&o1, Chart::Zero, 0, 1).unwrap(), w(-1));
        assert_eq!(monomial_weight(&o1, Chart::Infinity, 0, 0).unwrap(), w(-1));
        assert!(matches!(
            monomial_weight(&o1, Chart::Zero, 1, 0),
            Err(Error::IndexOutOfRange { index: 1, rank: 1 })
        ));
        let fixed = standard_linearization(2, &w(3), &TorusAction::new(vec![0]));
        assert_eq!(monomial_weight(&fixed, Chart::Zero, 0, 2).unwrap(), w(3));
        assert_eq!(monomial_weight(&fixed, Chart::Zero, 0, 0).unwrap(), w(3));
    }

    #[test]
    fn identity_projection() {
        let e = standard_linearization(2, &w(1), &torus1());
        let id = HomElement::identity(1);
        assert_eq!(weight_project_hom(&e, &e, &id, &w(0)).unwrap(), id);
        assert!(weight_project_hom(&e, &e, &id, &w(1)).unwrap().is_zero());
    }

    #[test]
    fn single_monomial_projection() {
        // z: O(0) -> O(1), both weight 0, a = 1: weight 0 - 0 - 1 = -1.
        let src = standard_linearization(0, &w(0), &torus1());
        let tgt = standard_linearization(1, &w(0), &torus1());
        let h = HomElement {
            f0: LaurentMatrix::from_rows(vec![vec![LaurentPoly::z_pow(1)]]),
            f_inf: LaurentMatrix::from_rows(vec![vec![LaurentPoly::one()]]),
        };
        assert!(h.intertwines(&src, &tgt));
        assert_eq!(hom_weights(&src, &tgt, &h), vec![w(-1)]);
        assert_eq!(weight_project_hom(&src, &tgt, &h, &w(-1)).unwrap(), h);
        assert!(weight_project_hom(&src, &tgt, &h, &w(0)).unwrap().is_zero());
    }

    #[test]
    fn projection_rejects_non_intertwining() {
        let e = standard_linearization(1, &w(0), &torus1());
        let h = HomElement {
            f0: LaurentMatrix::from_rows(vec![vec![LaurentPoly::constant(int(2))]]),
            f_inf: LaurentMatrix::identity(1),
        };
        assert_eq!(weight_project_hom(&e, &e, &h, &w(0)), Err(Error::NotIntertwining));
    }

    #[test]
    fn characters_add_and_cancel() {
        let mut c = Character::from_weights([w(0), w(0), w(-1)]);
        assert_eq!(c.dim(), 3);
        c.add_weight(w(0), -2);
        assert_eq!(c, Character::from_weights([w(-1)]));
        let o_minus2 = LineSummand::new(-2, vec![0]);
        assert_eq!(line_h1_character(&o_minus2, &torus1()), Character::from_weights([w(1)]));
        assert!(line_h0_character(&o_minus2, &torus1()).is_empty());
    }
}
