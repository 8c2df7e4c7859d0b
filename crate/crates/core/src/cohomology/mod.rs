//! Global sections and first cohomology, graded by torus weight.
//!
//! `H^0` is computed by the adjugate-kernel parametrization: writing
//! `h(z) = g(1/z) = A·f`, the exponents of `h` lie in `[o, 0]` where `o` is
//! the smallest exponent in `A`, and `f = c^{-1} z^{-D} adj(A)·h` is
//! polynomial exactly when `adj(A)·h` has no terms below `z^D`
//! (`det A = c·z^D`). That is a finite rational linear system, solved per
//! weight class.
//!
//! `H^1` comes from a truncated Čech complex (see [`cech`]), which also
//! serves as an independent oracle for `H^0`.

pub mod cech;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::algebra::{solve_rational_kernel, LaurentMatrix, LaurentPoly, RatMatrix, Rational};
use crate::bundle::{EquivariantBundle, TorusAction, Weight};
use crate::equivariant::Character;
use crate::error::{Error, Result};

pub use cech::{cech_cohomology, h1_character, h1_character_with, CechCohomology, CechConfig};

/// A global section: `f` over `k[z]` in the chart-0 frame, `g` over `k[w]`
/// in the chart-∞ frame (exponents of `g` are powers of `w`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub f: Vec<LaurentPoly>,
    pub g: Vec<LaurentPoly>,
    pub weight: Option<Weight>,
}

impl Section {
    /// `g` rewritten in `z`.
    pub fn g_in_z(&self) -> Vec<LaurentPoly> {
        self.g.iter().map(LaurentPoly::invert_variable).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.f.iter().all(LaurentPoly::is_zero)
    }

    /// `g(1/z) = A(z)·f(z)` with both sides polynomial in their chart, and
    /// every monomial carrying `weight` if one is recorded.
    pub fn is_section_of(&self, bundle: &EquivariantBundle) -> bool {
        let m = bundle.rank();
        if self.f.len() != m || self.g.len() != m {
            return false;
        }
        if !self.f.iter().all(LaurentPoly::is_polynomial) || !self.g.iter().all(LaurentPoly::is_polynomial) {
            return false;
        }
        if bundle.transition().apply(&self.f) != self.g_in_z() {
            return false;
        }
        let Some(chi) = &self.weight else {
            return true;
        };
        let a = bundle.torus();
        let chart0 = self.f.iter().enumerate().all(|(i, p)| {
            p.terms()
                .all(|(d, _)| &bundle.lambda0()[i] - &a.exponent_weight(d) == *chi)
        });
        let chart_inf = self.g.iter().enumerate().all(|(i, p)| {
            p.terms()
                .all(|(j, _)| &bundle.lambda_inf()[i] + &a.exponent_weight(j) == *chi)
        });
        chart0 && chart_inf
    }
}

/// Unknown `h[i]` coefficient of `z^e`.
type Unknown = (usize, i64);

struct SectionSystem<'a> {
    bundle: &'a EquivariantBundle,
    adj: LaurentMatrix,
    det_exp: i64,
    det_coeff: Rational,
    classes: BTreeMap<Weight, Vec<Unknown>>,
}

fn unknown_weight(torus: &TorusAction, lambda_inf: &Weight, e: i64) -> Weight {
    lambda_inf - &torus.exponent_weight(e)
}

impl<'a> SectionSystem<'a> {
    fn new(bundle: &'a EquivariantBundle) -> Result<Self> {
        bundle.ensure_valid()?;
        let (det_exp, det_coeff) = bundle.det_monomial()?;
        let adj = bundle.adjugate()?;
        let lo = bundle.transition().min_exponent().unwrap_or(1);
        let mut classes: BTreeMap<Weight, Vec<Unknown>> = BTreeMap::new();
        for i in 0..bundle.rank() {
            for e in lo..=0 {
                let w = unknown_weight(bundle.torus(), &bundle.lambda_inf()[i], e);
                classes.entry(w).or_default().push((i, e));
            }
        }
        Ok(SectionSystem {
            bundle,
            adj,
            det_exp,
            det_coeff,
            classes,
        })
    }

    /// Rows are the coefficients of `z^t`, `t < D`, of `adj(A)·h`.
    fn matrix(&self, unknowns: &[Unknown]) -> RatMatrix {
        let m = self.bundle.rank();
        let mut row_of: HashMap<(usize, i64), usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
        for (col, &(i, e)) in unknowns.iter().enumerate() {
            for k in 0..m {
                for (t, c) in self.adj[(k, i)].terms() {
                    if t + e >= self.det_exp {
                        continue;
                    }
                    let next = row_of.len();
                    let row = *row_of.entry((k, t + e)).or_insert(next);
                    entries.push((row, col, c.clone()));
                }
            }
        }
        let mut mat = RatMatrix::zeros(row_of.len(), unknowns.len());
        for (r, c, v) in entries {
            mat.rows[r][c] += v;
        }
        mat
    }

    fn section_from(&self, unknowns: &[Unknown], v: &[Rational], weight: &Weight) -> Result<Section> {
        let m = self.bundle.rank();
        let mut h = vec![LaurentPoly::zero(); m];
        for (&(i, e), c) in unknowns.iter().zip(v) {
            if !c.is_zero() {
                h[i].add_term(e, c.clone());
            }
        }
        let f: Vec<LaurentPoly> = self
            .adj
            .apply(&h)
            .iter()
            .map(|p| p.div_monomial(&self.det_coeff, self.det_exp))
            .collect();
        if !f.iter().all(LaurentPoly::is_polynomial) {
            return Err(Error::Invariant("section solver produced a non-polynomial chart-0 vector".into()));
        }
        Ok(Section {
            f,
            g: h.iter().map(LaurentPoly::invert_variable).collect(),
            weight: Some(weight.clone()),
        })
    }

    fn solve(&self, weight: &Weight) -> Result<Vec<Section>> {
        let Some(unknowns) = self.classes.get(weight) else {
            return Ok(Vec::new());
        };
        solve_rational_kernel(&self.matrix(unknowns))
            .iter()
            .map(|v| self.section_from(unknowns, v, weight))
            .collect()
    }

    fn dimension(&self, weight: &Weight) -> usize {
        self.classes.get(weight).map_or(0, |unknowns| {
            let mat = self.matrix(unknowns);
            unknowns.len() - crate::algebra::rank(&mat)
        })
    }
}

/// Basis of `H^0` grouped by weight, in lexicographic weight order.
/// Within a class the vectors follow the echelon order of the kernel.
pub fn h0_by_weight(bundle: &EquivariantBundle) -> Result<BTreeMap<Weight, Vec<Section>>> {
    let sys = SectionSystem::new(bundle)?;
    let mut out = BTreeMap::new();
    for w in sys.classes.keys() {
        let secs = sys.solve(w)?;
        if !secs.is_empty() {
            out.insert(w.clone(), secs);
        }
    }
    Ok(out)
}

/// Basis of `H^0` as `(section, weight)` pairs.
pub fn h0_sections(bundle: &EquivariantBundle) -> Result<Vec<(Section, Weight)>> {
    Ok(h0_by_weight(bundle)?
        .into_iter()
        .flat_map(|(w, secs)| secs.into_iter().map(move |s| (s, w.clone())))
        .collect())
}

/// Basis of the weight-`chi` part of `H^0`.
pub fn h0_weight_class(bundle: &EquivariantBundle, chi: &Weight) -> Result<Vec<Section>> {
    SectionSystem::new(bundle)?.solve(chi)
}

pub fn h0_character(bundle: &EquivariantBundle) -> Result<Character> {
    let sys = SectionSystem::new(bundle)?;
    let mut c = Character::new();
    for w in sys.classes.keys() {
        c.add_weight(w.clone(), sys.dimension(w) as i64);
    }
    Ok(c)
}

pub fn h0_dimension(bundle: &EquivariantBundle) -> Result<usize> {
    Ok(h0_character(bundle)?.dim() as usize)
}

/// Lexicographically smallest weight with a nonzero section, if any.
pub fn first_nonempty_weight(bundle: &EquivariantBundle) -> Result<Option<Weight>> {
    let sys = SectionSystem::new(bundle)?;
    Ok(sys.classes.keys().find(|w| sys.dimension(w) > 0).cloned())
}

/// Outcome of the Riemann-Roch and Serre-duality cross-checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub rank: usize,
    pub degree: i64,
    pub h0: i64,
    pub h1: i64,
    /// `h^0(E^∨ ⊗ O(-2))`
    pub serre_dual_h0: i64,
    pub riemann_roch: bool,
    pub serre_duality: bool,
}

impl EulerReport {
    pub fn passed(&self) -> bool {
        self.riemann_roch && self.serre_duality
    }
}

/// Checks `h^0 - h^1 = deg + rank` and `h^1(E) = h^0(Hom(E, O) ⊗ O(-2))`.
pub fn euler_check(bundle: &EquivariantBundle, cfg: &CechConfig) -> Result<EulerReport> {
    bundle.ensure_valid()?;
    let degree = bundle.degree()?;
    let rank = bundle.rank();
    let h0 = h0_character(bundle)?.dim();
    let h1 = cech::cech_cohomology(bundle, cfg)?.h1.dim();
    let r = bundle.torus().rank();
    let trivial = crate::equivariant::standard_linearization(0, &Weight::zero(r), bundle.torus());
    let dual_twist = bundle.hom_bundle(&trivial)?.twist(-2, &Weight::zero(r));
    let serre_dual_h0 = h0_character(&dual_twist)?.dim();
    Ok(EulerReport {
        rank,
        degree,
        h0,
        h1,
        serre_dual_h0,
        riemann_roch: h0 - h1 == degree + rank as i64,
        serre_duality: h1 == serre_dual_h0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentMatrix;
    use crate::bundle::{split_bundle, LineSummand};

    fn w(x: i64) -> Weight {
        Weight(vec![x])
    }

    fn line(n: i64, lam: i64) -> EquivariantBundle {
        split_bundle(&TorusAction::new(vec![1]), &[LineSummand::new(n, vec![lam])])
    }

    #[test]
    fn sections_of_o_n() {
        let e = line(3, 2);
        let secs = h0_sections(&e).unwrap();
        assert_eq!(secs.len(), 4);
        let weights: Vec<Weight> = secs.iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(weights, vec![w(-1), w(0), w(1), w(2)]);
        for (s, _) in &secs {
            assert!(s.is_section_of(&e));
            assert_eq!(s.f[0].num_terms(), 1);
        }
    }

    #[test]
    fn negative_degree_has_no_sections() {
        assert!(h0_sections(&line(-1, 0)).unwrap().is_empty());
        assert!(h0_character(&line(-5, 0)).unwrap().is_empty());
    }

    #[test]
    fn jump_instance_has_two_sections() {
        let z = LaurentPoly::z_pow;
        let e = EquivariantBundle::plain(LaurentMatrix::from_rows(vec![
            vec![z(1), z(0)],
            vec![LaurentPoly::zero(), z(-1)],
        ]));
        let secs = h0_sections(&e).unwrap();
        assert_eq!(secs.len(), 2);
        assert!(secs.iter().all(|(s, _)| s.is_section_of(&e)));
        assert_eq!(h0_dimension(&e.twist(-1, &Weight::default())).unwrap(), 0);
    }

    #[test]
    fn sum_of_lines_character() {
        let e = line(1, 0).direct_sum(&line(0, 0)).unwrap();
        let mut expected = Character::new();
        expected.add_weight(w(0), 2);
        expected.add_weight(w(-1), 1);
        assert_eq!(h0_character(&e).unwrap(), expected);
    }

    #[test]
    fn invalid_bundle_is_rejected() {
        let bad = EquivariantBundle::new(
            LaurentMatrix::from_rows(vec![vec![LaurentPoly::z_pow(-1)]]),
            vec![w(0)],
            vec![w(0)],
            TorusAction::new(vec![1]),
        );
        assert!(matches!(h0_sections(&bad), Err(Error::InvalidBundle(_))));
    }

    #[test]
    fn euler_check_on_lines() {
        let cfg = CechConfig::default();
        for n in [-3, -2, -1, 0, 1, 3] {
            let r = euler_check(&line(n, 0), &cfg).unwrap();
            assert!(r.passed(), "{n}: {r:?}");
        }
        let r = euler_check(&line(-2, 0), &cfg).unwrap();
        assert_eq!((r.h1, r.serre_dual_h0), (1, 1));
    }
}
