//! Lifting invariant endomorphisms of the quotient through a peeling step.
//!
//! For `0 -> L -> E -> Q -> 0` from [`peel`](super::peel), with `E` in the
//! peeled frames, composing with the projection `π = [0 | I]` sends
//! invariant maps `Q -> E` to invariant maps `Q -> Q`. The check compares
//! the rank of that image with the dimension of `Hom(Q, Q)^T`.

use std::collections::BTreeMap;

use crate::algebra::{rank, LaurentMatrix, RatMatrix, Rational};
use crate::bundle::Weight;
use crate::cohomology::{h0_character, h0_weight_class};
use crate::equivariant::HomElement;
use crate::error::Result;

use super::PeelStep;

/// sparse coefficient vector keyed by (row, column, exponent)
type Coefficients = Vec<((usize, usize, i64), Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    /// `dim Hom(Q, E)^T`
    pub source_dim: usize,
    /// `dim Hom(Q, Q)^T`
    pub target_dim: usize,
    /// rank of `π ∘ -`
    pub image_rank: usize,
}

impl LiftReport {
    pub fn surjective(&self) -> bool {
        self.image_rank == self.target_dim
    }
}

pub fn invariant_lift_check(step: &PeelStep) -> Result<LiftReport> {
    let e = &step.reframed;
    let q = &step.quotient;
    let (m, mq) = (e.rank(), q.rank());
    let zero = Weight::zero(e.torus().rank());
    let target_dim = h0_character(&q.hom_bundle(q)?)?.mult(&zero) as usize;
    let sections = h0_weight_class(&q.hom_bundle(e)?, &zero)?;

    let mut pi = LaurentMatrix::zeros(mq, m);
    for i in 0..mq {
        pi[(i, i + 1)] = crate::algebra::LaurentPoly::one();
    }
    let pi = HomElement {
        f0: pi.clone(),
        f_inf: pi,
    };

    let mut keys: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
    let mut vectors: Vec<Coefficients> = Vec::new();
    for s in &sections {
        let h = HomElement::from_hom_section(&s.f, &s.g_in_z(), mq, m);
        let image = pi.compose(&h);
        let mut v = Vec::new();
        for ((p, c), poly) in image.f0.iter() {
            for (d, coeff) in poly.terms() {
                let next = keys.len();
                keys.entry((p, c, d)).or_insert(next);
                v.push(((p, c, d), coeff.clone()));
            }
        }
        vectors.push(v);
    }
    let mut mat = RatMatrix::zeros(keys.len(), vectors.len());
    for (col, v) in vectors.iter().enumerate() {
        for (key, c) in v {
            mat.rows[keys[key]][col] = c.clone();
        }
    }
    let image_rank = if vectors.is_empty() || keys.is_empty() { 0 } else { rank(&mat) };
    Ok(LiftReport {
        source_dim: sections.len(),
        target_dim,
        image_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentPoly;
    use crate::bundle::{EquivariantBundle, TorusAction};
    use crate::splitting::peel;

    #[test]
    fn e3_step_lifts() {
        let z = LaurentPoly::z_pow;
        let e = EquivariantBundle::new(
            LaurentMatrix::from_rows(vec![vec![z(-1), z(0)], vec![LaurentPoly::zero(), z(-1)]]),
            vec![Weight(vec![0]), Weight(vec![-1])],
            vec![Weight(vec![-1]), Weight(vec![-2])],
            TorusAction::new(vec![1]),
        );
        let r = invariant_lift_check(&peel(&e).unwrap()).unwrap();
        assert_eq!(r.target_dim, 1);
        assert!(r.surjective());
    }
}
