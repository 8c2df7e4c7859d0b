//! Equivariant splitting of a bundle into line bundles.
//!
//! One induction step ([`peel`]) twists the bundle down by its largest
//! splitting degree `n_1`, takes a torus eigen-section `σ` of the twist
//! (nowhere vanishing, since every summand of the twist has degree `≤ 0`),
//! and completes it to chart frames on both charts. In the new frames the
//! transition is block upper triangular with `z^{-n_1}` in the corner and
//! the quotient bundle in the lower right. Repeating on the quotient gives
//! an upper-triangular transition, which [`triangular_clear`] diagonalizes.

mod clear;
mod lift;
mod verify;

use crate::algebra::matrix::{is_unit_monomial, nonzero_constant};
use crate::algebra::{gcd_all, poly_ext_gcd, LaurentMatrix, LaurentPoly, UniPoly};
use crate::bundle::{law_violations, split_bundle, sort_summands, EquivariantBundle, LineSummand, Weight};
use crate::cohomology::{first_nonempty_weight, h0_weight_class, Section};
use crate::equivariant::HomElement;
use crate::error::{Error, Result};

pub use clear::{triangular_clear, Clearing};
pub use lift::{invariant_lift_check, LiftReport};
pub use verify::{verify_certificate, CertificateReport, CheckResult};

/// One induction step: `V·A·U^{-1} = [[z^{-n_1}, β], [0, A_Q]]`.
#[derive(Clone, Debug)]
pub struct PeelStep {
    pub summand: LineSummand,
    /// chart-0 frame change over `k[z]`, constant determinant
    pub u: LaurentMatrix,
    pub u_inv: LaurentMatrix,
    /// chart-∞ frame change over `k[w]` (stored with `z`-exponents)
    pub v: LaurentMatrix,
    /// first row of the new transition past the corner
    pub beta: Vec<LaurentPoly>,
    pub quotient: EquivariantBundle,
    /// the bundle in the new frames, i.e. transition `V·A·U^{-1}`
    pub reframed: EquivariantBundle,
}

/// Chart frames exhibiting `E ≅ ⊕ O(n_i)`: `m_inf · A · m0 = diag(z^{-n_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingCertificate {
    pub summands: Vec<LineSummand>,
    /// over `k[z]`
    pub m0: LaurentMatrix,
    /// over `k[w]`, stored with `z`-exponents
    pub m_inf: LaurentMatrix,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

/// Largest `n` with `h^0(E(-n)) > 0`.
///
/// No section window exists above `-o` (`o` the smallest exponent of `A`),
/// and a section must appear by `ceil(deg/m)`.
pub fn max_twist(bundle: &EquivariantBundle) -> Result<i64> {
    bundle.ensure_valid()?;
    let m = bundle.rank() as i64;
    let lower = ceil_div(bundle.degree()?, m);
    let upper = -bundle.transition().min_exponent().unwrap_or(0);
    let zero = Weight::zero(bundle.torus().rank());
    for k in (lower..=upper).rev() {
        if first_nonempty_weight(&bundle.twist(-k, &zero))?.is_some() {
            return Ok(k);
        }
    }
    Err(Error::Invariant(format!(
        "no twist in [{lower}, {upper}] has sections"
    )))
}

/// A section spanning a weight space: the first basis vector of the
/// lexicographically smallest nonempty weight class.
pub fn eigen_section(bundle: &EquivariantBundle) -> Result<Section> {
    let chi = first_nonempty_weight(bundle)?.ok_or(Error::NoSections)?;
    h0_weight_class(bundle, &chi)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Invariant("nonempty weight class returned no sections".into()))
}

/// Frame change `U` (rows: new frame, columns: old frame) with `U·v = e_1`,
/// and the old index of each new frame vector.
///
/// Without `block`, the entries are monomials and some entry is a nonzero
/// constant: it becomes the pivot and the other entries are eliminated
/// against it. With `block`, the nonzero entries sit inside `block` and the
/// gcd chain runs over those positions only.
fn unimodular_frame(v: &[UniPoly], block: Option<&[usize]>) -> Result<(Vec<Vec<UniPoly>>, Vec<usize>)> {
    let m = v.len();
    let mut u = vec![vec![UniPoly::zero(); m]; m];
    match block {
        None => {
            let pivot = (0..m)
                .find(|&i| v[i].degree() == Some(0))
                .ok_or_else(|| Error::Invariant("eigen-section has no constant entry".into()))?;
            let c_inv = v[pivot].coeff(0).recip();
            let order: Vec<usize> = std::iter::once(pivot).chain((0..m).filter(|&i| i != pivot)).collect();
            u[0][pivot] = UniPoly::constant(c_inv.clone());
            for (r, &i) in order.iter().enumerate().skip(1) {
                u[r][i] = UniPoly::one();
                u[r][pivot] = -&v[i].scale(&c_inv);
            }
            Ok((u, order))
        }
        Some(block) => {
            if (0..m).any(|i| !v[i].is_zero() && !block.contains(&i)) {
                return Err(Error::Invariant("eigen-section leaves its weight block".into()));
            }
            let local: Vec<UniPoly> = block.iter().map(|&i| v[i].clone()).collect();
            let (g, ub) = poly_ext_gcd(&local)?;
            if g != UniPoly::one() {
                return Err(Error::Invariant(format!("section entries have common factor {g}")));
            }
            let head = block[0];
            let order: Vec<usize> = std::iter::once(head).chain((0..m).filter(|&i| i != head)).collect();
            let new_pos = |old: usize| order.iter().position(|&o| o == old).unwrap();
            for (t, row) in ub.into_iter().enumerate() {
                let r = if t == 0 { 0 } else { new_pos(block[t]) };
                for (s, p) in row.into_iter().enumerate() {
                    u[r][block[s]] = p;
                }
            }
            for i in (0..m).filter(|i| !block.contains(i)) {
                u[new_pos(i)][i] = UniPoly::one();
            }
            Ok((u, order))
        }
    }
}

fn to_matrix(u: &[Vec<UniPoly>], in_w: bool) -> LaurentMatrix {
    LaurentMatrix::from_rows(
        u.iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        let l = LaurentPoly::from_unipoly(p, 0);
                        if in_w {
                            l.invert_variable()
                        } else {
                            l
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

fn polys(v: &[LaurentPoly]) -> Result<Vec<UniPoly>> {
    v.iter()
        .map(|p| {
            p.to_unipoly(0)
                .ok_or_else(|| Error::Invariant("section entry is not polynomial".into()))
        })
        .collect()
}

fn constant_det(m: &LaurentMatrix, what: &str) -> Result<()> {
    nonzero_constant(&m.det()?)
        .map(|_| ())
        .ok_or_else(|| Error::Invariant(format!("{what} does not have constant determinant")))
}

/// Splits off the top-degree equivariant line subbundle.
pub fn peel(bundle: &EquivariantBundle) -> Result<PeelStep> {
    bundle.ensure_valid()?;
    let torus = bundle.torus().clone();
    let m = bundle.rank();
    let n1 = max_twist(bundle)?;
    let twisted = bundle.twist(-n1, &Weight::zero(torus.rank()));
    let sigma = eigen_section(&twisted)?;
    let chi = sigma.weight.clone().expect("solver sections carry a weight");

    let f = polys(&sigma.f)?;
    let g = polys(&sigma.g)?;
    if gcd_all(&f) != UniPoly::one() || gcd_all(&g) != UniPoly::one() {
        return Err(Error::Invariant(format!(
            "section of weight {chi} vanishes somewhere on P^1"
        )));
    }

    let (u_poly, order0, v_poly, order_inf) = if torus.fixes_base() {
        let block0: Vec<usize> = (0..m).filter(|&i| twisted.lambda0()[i] == chi).collect();
        let block_inf: Vec<usize> = (0..m).filter(|&i| twisted.lambda_inf()[i] == chi).collect();
        let (u, o0) = unimodular_frame(&f, Some(&block0))?;
        let (v, oi) = unimodular_frame(&g, Some(&block_inf))?;
        (u, o0, v, oi)
    } else {
        let (u, o0) = unimodular_frame(&f, None)?;
        let (v, oi) = unimodular_frame(&g, None)?;
        (u, o0, v, oi)
    };
    let u = to_matrix(&u_poly, false);
    let v = to_matrix(&v_poly, true);
    constant_det(&u, "chart-0 frame")?;
    constant_det(&v, "chart-∞ frame")?;

    let mu0: Vec<Weight> = order0.iter().map(|&i| bundle.lambda0()[i].clone()).collect();
    let mu_inf: Vec<Weight> = order_inf.iter().map(|&i| bundle.lambda_inf()[i].clone()).collect();
    if !law_violations(&u, bundle.lambda0(), &mu0, &torus).is_empty()
        || !law_violations(&v, bundle.lambda_inf(), &mu_inf, &torus).is_empty()
    {
        return Err(Error::Invariant("peeling frame is not equivariant".into()));
    }

    let u_inv = u.inverse()?;
    let t = &(&v * bundle.transition()) * &u_inv;
    if !is_unit_monomial(&t[(0, 0)], -n1) || (1..m).any(|i| !t[(i, 0)].is_zero()) {
        return Err(Error::Invariant(format!(
            "first column of the reframed transition is not z^{}·e_1",
            -n1
        )));
    }
    let summand = LineSummand { n: n1, lam: mu0[0].clone() };
    if summand.lam != chi || mu_inf[0] != summand.weight_at_infinity(&torus) {
        return Err(Error::Invariant("peeled line bundle has inconsistent weights".into()));
    }
    let quotient = EquivariantBundle::new(
        t.submatrix(1, m, 1, m),
        mu0[1..].to_vec(),
        mu_inf[1..].to_vec(),
        torus.clone(),
    );
    if m > 1 {
        quotient
            .ensure_valid()
            .map_err(|e| Error::Invariant(format!("quotient is not a valid bundle: {e}")))?;
    }
    let beta = t.row(0)[1..].to_vec();
    let reframed = EquivariantBundle::new(t, mu0, mu_inf, torus);
    Ok(PeelStep {
        summand,
        u,
        u_inv,
        v,
        beta,
        quotient,
        reframed,
    })
}

/// Runs [`peel`] down the quotients, returning every step.
pub fn peel_all(bundle: &EquivariantBundle) -> Result<Vec<PeelStep>> {
    let mut steps: Vec<PeelStep> = Vec::with_capacity(bundle.rank());
    let mut current = bundle.clone();
    while current.rank() > 0 {
        let step = peel(&current)?;
        if let Some(prev) = steps.last() {
            if step.summand.n > prev.summand.n {
                return Err(Error::Invariant(format!(
                    "quotient degree {} exceeds peeled degree {}",
                    step.summand.n, prev.summand.n
                )));
            }
        }
        current = step.quotient.clone();
        steps.push(step);
    }
    Ok(steps)
}

/// Decomposes `E` into equivariant line bundles with a certificate.
///
/// Summands come out in peeling order, which has non-increasing degrees.
pub fn equivariant_split(bundle: &EquivariantBundle) -> Result<(Vec<LineSummand>, SplittingCertificate)> {
    bundle.ensure_valid()?;
    let m = bundle.rank();
    let torus = bundle.torus();
    let steps = peel_all(bundle)?;

    let mut v_total = LaurentMatrix::identity(m);
    let mut u_inv_total = LaurentMatrix::identity(m);
    for (level, step) in steps.iter().enumerate() {
        v_total = &step.v.embed_lower_right(level) * &v_total;
        u_inv_total = &u_inv_total * &step.u_inv.embed_lower_right(level);
    }
    let summands: Vec<LineSummand> = steps.into_iter().map(|s| s.summand).collect();
    let degrees: Vec<i64> = summands.iter().map(|s| s.n).collect();

    let upper = &(&v_total * bundle.transition()) * &u_inv_total;
    let clearing = triangular_clear(&upper, &degrees)?;
    let m0 = &u_inv_total * &clearing.w0_inv;
    let m_inf = &clearing.w_inf * &v_total;

    let target = split_bundle(torus, &summands);
    if &(&m_inf * bundle.transition()) * &m0 != *target.transition() {
        return Err(Error::Invariant("assembled frames do not diagonalize the transition".into()));
    }
    if !law_violations(&m0, target.lambda0(), bundle.lambda0(), torus).is_empty()
        || !law_violations(&m_inf, bundle.lambda_inf(), target.lambda_inf(), torus).is_empty()
    {
        return Err(Error::Invariant("splitting frames are not equivariant".into()));
    }
    let cert = SplittingCertificate {
        summands: summands.clone(),
        m0,
        m_inf,
    };
    Ok((summands, cert))
}

/// Summands in canonical multiset order.
pub fn splitting_type(bundle: &EquivariantBundle) -> Result<Vec<LineSummand>> {
    let (mut s, _) = equivariant_split(bundle)?;
    sort_summands(&mut s);
    Ok(s)
}

/// Mutually inverse invariant bundle maps `s: ⊕ O(n_i, λ_i) -> E` and
/// `p: E -> ⊕ O(n_i, λ_i)`.
pub fn splitting_hom(bundle: &EquivariantBundle, cert: &SplittingCertificate) -> Result<(HomElement, HomElement)> {
    let report = verify_certificate(bundle, cert);
    if !report.passed() {
        return Err(Error::InvalidCertificate(report.summary()));
    }
    let s = HomElement {
        f0: cert.m0.clone(),
        f_inf: cert.m_inf.inverse()?,
    };
    let p = HomElement {
        f0: cert.m0.inverse()?,
        f_inf: cert.m_inf.clone(),
    };
    Ok((s, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{random_instance, TorusAction};
    use crate::equivariant::weight_project_hom;

    fn z(e: i64) -> LaurentPoly {
        LaurentPoly::z_pow(e)
    }

    fn w(x: i64) -> Weight {
        Weight(vec![x])
    }

    /// `[[z^{-1}, 1], [0, z^{-1}]]`, `λ0 = (0, -1)`, `a = 1`.
    fn e3() -> EquivariantBundle {
        EquivariantBundle::new(
            LaurentMatrix::from_rows(vec![vec![z(-1), z(0)], vec![LaurentPoly::zero(), z(-1)]]),
            vec![w(0), w(-1)],
            vec![w(-1), w(-2)],
            TorusAction::new(vec![1]),
        )
    }

    fn jump() -> EquivariantBundle {
        EquivariantBundle::plain(LaurentMatrix::from_rows(vec![
            vec![z(1), z(0)],
            vec![LaurentPoly::zero(), z(-1)],
        ]))
    }

    #[test]
    fn max_twist_examples() {
        let torus = TorusAction::new(vec![1]);
        assert_eq!(max_twist(&split_bundle(&torus, &[LineSummand::new(3, vec![0])])).unwrap(), 3);
        assert_eq!(max_twist(&jump()).unwrap(), 0);
        let d = EquivariantBundle::plain(LaurentMatrix::diagonal(vec![z(-2), z(3)]));
        assert_eq!(max_twist(&d).unwrap(), 2);
    }

    #[test]
    fn eigen_section_of_trivial_bundle() {
        let torus = TorusAction::new(vec![1]);
        let e = split_bundle(&torus, &[LineSummand::new(0, vec![0]), LineSummand::new(0, vec![0])]);
        let s = eigen_section(&e).unwrap();
        assert_eq!(s.weight, Some(w(0)));
        assert!(s.f.iter().all(LaurentPoly::is_constant));
        assert!(s.is_section_of(&e));
    }

    #[test]
    fn eigen_section_of_e3_twist_takes_smallest_weight() {
        let t = e3().twist(-1, &w(0));
        assert_eq!(t.lambda_inf(), &[w(0), w(-1)]);
        let s = eigen_section(&t).unwrap();
        // weight classes {-1, 0}; -1 is spanned by h = e_2, f = (-z, 1)
        assert_eq!(s.weight, Some(w(-1)));
        assert_eq!(s.g, vec![LaurentPoly::zero(), z(0)]);
        assert_eq!(s.f, vec![-z(1), z(0)]);
    }

    #[test]
    fn eigen_section_without_torus() {
        let s = eigen_section(&jump()).unwrap();
        assert_eq!(s.weight, Some(Weight::default()));
        assert!(s.is_section_of(&jump()));
    }

    #[test]
    fn eigen_section_requires_sections() {
        let torus = TorusAction::new(vec![1]);
        let e = split_bundle(&torus, &[LineSummand::new(-1, vec![0])]);
        assert_eq!(eigen_section(&e), Err(Error::NoSections));
    }

    #[test]
    fn peel_line_bundle() {
        let torus = TorusAction::new(vec![1]);
        let e = split_bundle(&torus, &[LineSummand::new(2, vec![7])]);
        let step = peel(&e).unwrap();
        assert_eq!(step.summand, LineSummand::new(2, vec![7]));
        assert_eq!(step.quotient.rank(), 0);
    }

    #[test]
    fn peel_e3() {
        let step = peel(&e3()).unwrap();
        assert_eq!(step.summand, LineSummand::new(1, vec![-1]));
        assert_eq!(step.quotient.transition(), &LaurentMatrix::from_rows(vec![vec![z(-1)]]));
        assert_eq!(step.quotient.lambda0(), &[w(0)]);
        let recon = &(&step.v * e3().transition()) * &step.u_inv;
        assert_eq!(&recon, step.reframed.transition());
    }

    #[test]
    fn peel_picks_smallest_weight() {
        let torus = TorusAction::new(vec![1]);
        let e = split_bundle(&torus, &[LineSummand::new(1, vec![5]), LineSummand::new(1, vec![7])]);
        assert_eq!(peel(&e).unwrap().summand, LineSummand::new(1, vec![5]));
    }

    #[test]
    fn split_examples() {
        let torus = TorusAction::new(vec![1]);
        let d = EquivariantBundle::new(
            LaurentMatrix::diagonal(vec![z(-2), z(3)]),
            vec![w(0), w(0)],
            vec![w(-2), w(3)],
            torus,
        );
        let (s, cert) = equivariant_split(&d).unwrap();
        assert_eq!(s, vec![LineSummand::new(2, vec![0]), LineSummand::new(-3, vec![0])]);
        assert!(verify_certificate(&d, &cert).passed());

        let mut s = splitting_type(&e3()).unwrap();
        sort_summands(&mut s);
        assert_eq!(s, vec![LineSummand::new(1, vec![-1]), LineSummand::new(1, vec![0])]);

        let (s, cert) = equivariant_split(&jump()).unwrap();
        assert_eq!(s, vec![LineSummand::new(0, vec![]), LineSummand::new(0, vec![])]);
        assert!(verify_certificate(&jump(), &cert).passed());
    }

    #[test]
    fn splitting_hom_is_invariant_inverse_pair() {
        let e = e3();
        let (summands, cert) = equivariant_split(&e).unwrap();
        let (s, p) = splitting_hom(&e, &cert).unwrap();
        let d = split_bundle(e.torus(), &summands);
        assert!(s.intertwines(&d, &e));
        assert!(p.intertwines(&e, &d));
        assert_eq!(p.compose(&s), HomElement::identity(2));
        assert_eq!(weight_project_hom(&d, &e, &s, &w(0)).unwrap(), s);
        assert_eq!(weight_project_hom(&e, &d, &p, &w(0)).unwrap(), p);
    }

    #[test]
    fn already_split_bundle_has_identity_hom() {
        let torus = TorusAction::new(vec![1]);
        let e = split_bundle(&torus, &[LineSummand::new(2, vec![0]), LineSummand::new(-1, vec![3])]);
        let (_, cert) = equivariant_split(&e).unwrap();
        let (s, p) = splitting_hom(&e, &cert).unwrap();
        assert_eq!(s, HomElement::identity(2));
        assert_eq!(p, HomElement::identity(2));
    }

    #[test]
    fn fibre_only_action_round_trip() {
        let torus = TorusAction::new(vec![0]);
        let s = vec![
            LineSummand::new(1, vec![2]),
            LineSummand::new(1, vec![2]),
            LineSummand::new(-1, vec![2]),
            LineSummand::new(0, vec![-1]),
        ];
        for seed in 0..5 {
            let (e, answer) = random_instance(seed, &torus, &s, 10).unwrap();
            let (_, cert) = equivariant_split(&e).unwrap();
            let mut got = cert.summands.clone();
            sort_summands(&mut got);
            assert_eq!(got, answer);
            assert!(verify_certificate(&e, &cert).passed());
        }
    }
}
