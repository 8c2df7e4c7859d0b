//! Algebraic identities and bundle invariants on random inputs.

use equisplit::acceptance::{draw_case, split_characters, CaseShape};
use equisplit::algebra::{poly_ext_gcd, rank, solve_rational_kernel, LaurentMatrix, LaurentPoly, RatMatrix, Rational, UniPoly};
use equisplit::bundle::{random_reframe, sort_summands, split_bundle, LineSummand, TorusAction, Weight};
use equisplit::cohomology::{cech_cohomology, euler_check, h0_by_weight, h0_character, h0_dimension, CechConfig};
use equisplit::equivariant::{hom_weights, weight_project_hom, HomElement};
use equisplit::format::{certificate_to_json, instance_from_value, instance_to_json, parse_certificate, to_string};
use equisplit::splitting::{equivariant_split, peel, splitting_hom, verify_certificate};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 0..4)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, q(c)))))
}

fn laurent_matrix(max: usize) -> impl Strategy<Value = LaurentMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(laurent(), n), n).prop_map(LaurentMatrix::from_rows)
    })
}

fn unipoly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-4i64..=4, 0..5).prop_map(|c| UniPoly::from_coeffs(c.into_iter().map(q).collect()))
}

fn shape(max_rank: usize, fixed_base: bool) -> CaseShape {
    CaseShape {
        max_rank,
        max_torus_rank: 2,
        max_ops: 10,
        max_degree: 3,
        fixed_base,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn adjugate_identity(m in laurent_matrix(4)) {
        let det = m.det().unwrap();
        let adj = m.adjugate().unwrap();
        let scaled = LaurentMatrix::identity(m.rows()).map(|p| p * &det);
        prop_assert_eq!(&adj * &m, scaled.clone());
        prop_assert_eq!(&m * &adj, scaled);
    }

    #[test]
    fn determinant_is_multiplicative(a in laurent_matrix(3), seed in 0u64..1000) {
        let n = a.rows();
        let b = LaurentMatrix::from_rows((0..n).map(|i| (0..n).map(|j| {
            LaurentPoly::monomial(q(((seed as usize + 3 * i + 5 * j) % 5) as i64 - 2), ((i + j) % 3) as i64 - 1)
        }).collect()).collect());
        prop_assert_eq!((&a * &b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn ext_gcd_transform(f in prop::collection::vec(unipoly(), 1..5)) {
        prop_assume!(f.iter().any(|p| !p.is_zero()));
        let (g, u) = poly_ext_gcd(&f).unwrap();
        for p in &f {
            prop_assert!(p.exact_div(&g).is_some());
        }
        for (i, row) in u.iter().enumerate() {
            let s = row.iter().zip(&f).fold(UniPoly::zero(), |acc, (x, y)| &acc + &(x * y));
            prop_assert_eq!(s, if i == 0 { g.clone() } else { UniPoly::zero() });
        }
        let um = LaurentMatrix::from_rows(
            u.iter().map(|r| r.iter().map(|p| LaurentPoly::from_unipoly(p, 0)).collect()).collect(),
        );
        let d = um.det().unwrap();
        prop_assert!(d.is_constant() && !d.is_zero());
    }

    #[test]
    fn kernel_rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6)) {
        let m = RatMatrix::new(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), 5);
        let ker = solve_rational_kernel(&m);
        prop_assert_eq!(ker.len() + rank(&m), 5);
        for v in &ker {
            prop_assert!(m.apply(v).iter().all(|x| *x == q(0)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn generated_instances_are_valid(seed in 0u64..100_000) {
        let case = draw_case(seed, shape(5, false)).unwrap();
        prop_assert!(case.bundle.validate().is_valid());
        prop_assert_eq!(case.bundle.degree().unwrap(), case.answer.iter().map(|s| s.n).sum::<i64>());
    }

    #[test]
    fn degree_is_additive_and_dual_is_involutive(s1 in 0u64..100_000, s2 in 0u64..100_000) {
        let a = draw_case(s1, shape(3, false)).unwrap().bundle;
        let b = draw_case(s2, shape(3, false)).unwrap().bundle;
        prop_assume!(a.torus() == b.torus());
        let sum = a.direct_sum(&b).unwrap();
        prop_assert_eq!(sum.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        prop_assert_eq!(a.dual().unwrap().dual().unwrap(), a.clone());
        prop_assert_eq!(a.dual().unwrap().degree().unwrap(), -a.degree().unwrap());
    }

    #[test]
    fn sections_are_graded_and_complete(seed in 0u64..100_000) {
        let case = draw_case(seed, shape(4, false)).unwrap();
        let classes = h0_by_weight(&case.bundle).unwrap();
        let total: usize = classes.values().map(Vec::len).sum();
        prop_assert_eq!(total, h0_dimension(&case.bundle).unwrap());
        for (w, secs) in &classes {
            for s in secs {
                prop_assert_eq!(s.weight.as_ref(), Some(w));
                prop_assert!(s.is_section_of(&case.bundle));
            }
        }
    }

    #[test]
    fn twisting_shifts_characters(seed in 0u64..100_000, k in -2i64..=2, mu in -2i64..=2) {
        let case = draw_case(seed, shape(3, false)).unwrap();
        let torus = case.bundle.torus().clone();
        let lam = Weight(vec![mu; torus.rank()]);
        let twisted = case.bundle.twist(k, &lam);
        let shifted: Vec<LineSummand> = case.answer.iter()
            .map(|s| LineSummand { n: s.n + k, lam: &s.lam + &lam })
            .collect();
        let (h0, h1) = split_characters(&shifted, &torus);
        prop_assert_eq!(h0_character(&twisted).unwrap(), h0);
        prop_assert_eq!(cech_cohomology(&twisted, &CechConfig::default()).unwrap().h1, h1);
        let down = case.bundle.twist(-1, &Weight::zero(torus.rank()));
        prop_assert!(h0_dimension(&down).unwrap() <= h0_dimension(&case.bundle).unwrap());
    }

    #[test]
    fn euler_characteristic_and_serre_duality(seed in 0u64..100_000, fixed in any::<bool>()) {
        let case = draw_case(seed, shape(3, fixed)).unwrap();
        let r = euler_check(&case.bundle, &CechConfig::default()).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn split_is_unique_under_reframing(seed in 0u64..100_000, reseed in 0u64..1000) {
        let case = draw_case(seed, shape(4, false)).unwrap();
        let other = random_reframe(&case.bundle, reseed, 8);
        let mut got = equivariant_split(&other).unwrap().0;
        sort_summands(&mut got);
        prop_assert_eq!(got, case.answer);
    }

    #[test]
    fn certificates_verify_and_round_trip(seed in 0u64..100_000) {
        let case = draw_case(seed, shape(5, false)).unwrap();
        let (summands, cert) = equivariant_split(&case.bundle).unwrap();
        prop_assert!(summands.windows(2).all(|p| p[0].n >= p[1].n));
        let report = verify_certificate(&case.bundle, &cert);
        prop_assert!(report.passed(), "{}", report.summary());
        let text = to_string(&certificate_to_json(&cert));
        let back = parse_certificate(&text, case.bundle.rank(), case.bundle.torus().rank()).unwrap();
        prop_assert_eq!(back, cert);
        let inst = instance_from_value(&instance_to_json(&case.bundle, Some(&case.answer))).unwrap();
        prop_assert_eq!(inst.bundle, case.bundle);
        prop_assert_eq!(inst.expected, Some(case.answer));
    }

    #[test]
    fn splitting_maps_are_invariant_inverses(seed in 0u64..100_000) {
        let case = draw_case(seed, shape(4, false)).unwrap();
        let (summands, cert) = equivariant_split(&case.bundle).unwrap();
        let d = split_bundle(case.bundle.torus(), &summands);
        let (s, p) = splitting_hom(&case.bundle, &cert).unwrap();
        let m = case.bundle.rank();
        prop_assert_eq!(p.compose(&s), HomElement::identity(m));
        prop_assert_eq!(s.compose(&p), HomElement::identity(m));
        let zero = Weight::zero(case.bundle.torus().rank());
        prop_assert_eq!(hom_weights(&d, &case.bundle, &s), vec![zero.clone()]);
        prop_assert_eq!(weight_project_hom(&case.bundle, &d, &p, &zero).unwrap(), p);
    }

    #[test]
    fn composition_adds_weights(seed in 0u64..100_000) {
        let case = draw_case(seed, shape(3, false)).unwrap();
        let e = &case.bundle;
        let end = e.hom_bundle(e).unwrap();
        let classes = h0_by_weight(&end).unwrap();
        let picks: Vec<(Weight, HomElement)> = classes.iter()
            .filter_map(|(w, secs)| secs.first().map(|s| (w.clone(), s)))
            .map(|(w, s)| (w, HomElement::from_hom_section(&s.f, &s.g_in_z(), e.rank(), e.rank())))
            .take(3)
            .collect();
        for (w1, h1) in &picks {
            prop_assert!(h1.intertwines(e, e));
            for (w2, h2) in &picks {
                let c = h1.compose(h2);
                if !c.is_zero() {
                    prop_assert_eq!(hom_weights(e, e, &c), vec![w1 + w2]);
                }
            }
        }
    }

    #[test]
    fn peel_quotient_has_lower_degrees(seed in 0u64..100_000) {
        let case = draw_case(seed, shape(4, false)).unwrap();
        let step = peel(&case.bundle).unwrap();
        prop_assert_eq!(step.summand.n, case.answer[0].n);
        let mut rest = equivariant_split(&step.quotient).map(|x| x.0).unwrap_or_default();
        prop_assert!(rest.iter().all(|s| s.n <= step.summand.n));
        rest.push(step.summand.clone());
        sort_summands(&mut rest);
        prop_assert_eq!(rest, case.answer);
    }
}

#[test]
fn trivial_torus_gives_single_weight_class() {
    let e = split_bundle(&TorusAction::none(), &[LineSummand::new(2, vec![]), LineSummand::new(-1, vec![])]);
    let c = h0_character(&e).unwrap();
    assert_eq!(c.iter().count(), 1);
    assert_eq!(c.dim(), 3);
}
