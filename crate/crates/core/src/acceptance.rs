//! Acceptance suite shared by the `acceptance` test target and `selftest`.
//!
//! Every criterion runs on seeded instances, so a run is reproducible. Any
//! [`Error::Invariant`] raised along the way is counted against criterion 8.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::algebra::{LaurentPoly, Rational};
use crate::bundle::{random_instance, random_reframe, sort_summands, EquivariantBundle, LineSummand, TorusAction, Weight};
use crate::cohomology::{cech_cohomology, h0_character, h0_dimension, CechConfig};
use crate::equivariant::{line_h0_character, line_h1_character, Character};
use crate::error::{Error, Result};
use crate::format::{parse_character, parse_instance, parse_summands};
use crate::splitting::{equivariant_split, invariant_lift_check, peel_all, verify_certificate, SplittingCertificate};

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({} cases, {:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.cases,
            self.seconds,
            self.detail
        )
    }
}

/// Sizes of the randomized criteria.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub round_trip: usize,
    pub uniqueness: usize,
    pub riemann_roch: usize,
    pub oracle: usize,
    pub lift_steps: usize,
    pub mutations_per_certificate: usize,
    pub cech: CechConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            round_trip: 200,
            uniqueness: 100,
            riemann_roch: 500,
            oracle: 100,
            lift_steps: 50,
            mutations_per_certificate: 4,
            cech: CechConfig::from_env(),
        }
    }
}

/// A randomly drawn instance with its hidden answer.
#[derive(Clone, Debug)]
pub struct Case {
    pub seed: u64,
    pub bundle: EquivariantBundle,
    pub answer: Vec<LineSummand>,
}

/// Shape limits for [`draw_case`].
#[derive(Clone, Copy, Debug)]
pub struct CaseShape {
    pub max_rank: usize,
    pub max_torus_rank: usize,
    pub max_ops: usize,
    pub max_degree: i64,
    /// force the base to be fixed (`a = 0`, possibly `r = 0`)
    pub fixed_base: bool,
}

/// Draws a summand list and torus from `seed`, then scrambles the split
/// bundle with [`random_instance`].
pub fn draw_case(seed: u64, shape: CaseShape) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_ca5e);
    let m = rng.gen_range(1..=shape.max_rank);
    let r = rng.gen_range(0..=shape.max_torus_rank);
    let a: Vec<i64> = (0..r)
        .map(|_| if shape.fixed_base { 0 } else { rng.gen_range(-2..=2) })
        .collect();
    let torus = TorusAction::new(a);
    let summands: Vec<LineSummand> = (0..m)
        .map(|_| LineSummand {
            n: rng.gen_range(-shape.max_degree..=shape.max_degree),
            lam: Weight((0..r).map(|_| rng.gen_range(-2..=2)).collect()),
        })
        .collect();
    let ops = rng.gen_range(0..=shape.max_ops);
    let (bundle, answer) = random_instance(seed, &torus, &summands, ops)?;
    Ok(Case { seed, bundle, answer })
}

const ROUND_TRIP: CaseShape = CaseShape {
    max_rank: 5,
    max_torus_rank: 2,
    max_ops: 10,
    max_degree: 3,
    fixed_base: false,
};

/// Closed-form characters of `⊕ O(n_i, λ_i)`.
pub fn split_characters(summands: &[LineSummand], torus: &TorusAction) -> (Character, Character) {
    let mut h0 = Character::new();
    let mut h1 = Character::new();
    for s in summands {
        h0 = &h0 + &line_h0_character(s, torus);
        h1 = &h1 + &line_h1_character(s, torus);
    }
    (h0, h1)
}

struct Tally {
    invariant_failures: AtomicUsize,
}

impl Tally {
    fn note<T>(&self, r: &Result<T>) {
        if let Err(e) = r {
            if e.is_invariant() {
                self.invariant_failures.fetch_add(1, Ordering::Relaxed);
            }
        }
    }
}

fn outcome(id: u32, name: &'static str, start: Instant, cases: usize, failures: Vec<String>) -> CriterionOutcome {
    let passed = failures.is_empty();
    let detail = if passed {
        "ok".to_string()
    } else {
        let shown: Vec<&String> = failures.iter().take(3).collect();
        format!("{} failures, first: {:?}", failures.len(), shown)
    };
    CriterionOutcome {
        id,
        name,
        passed,
        cases,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn sorted(mut s: Vec<LineSummand>) -> Vec<LineSummand> {
    sort_summands(&mut s);
    s
}

type Split = (Case, Vec<LineSummand>, SplittingCertificate);

fn criterion_round_trip(cfg: &SuiteConfig, tally: &Tally) -> (CriterionOutcome, Vec<Split>) {
    let start = Instant::now();
    let results: Vec<std::result::Result<Split, String>> = (0..cfg.round_trip as u64)
        .into_par_iter()
        .map(|seed| {
            let case = draw_case(seed, ROUND_TRIP).map_err(|e| format!("seed {seed}: {e}"))?;
            let split = equivariant_split(&case.bundle);
            tally.note(&split);
            let (summands, cert) = split.map_err(|e| format!("seed {seed}: {e}"))?;
            if sorted(summands.clone()) != case.answer {
                return Err(format!("seed {seed}: got {summands:?}, expected {:?}", case.answer));
            }
            let report = verify_certificate(&case.bundle, &cert);
            if !report.passed() {
                return Err(format!("seed {seed}: {}", report.summary()));
            }
            Ok((case, summands, cert))
        })
        .collect();
    let mut good = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(s) => good.push(s),
            Err(e) => failures.push(e),
        }
    }
    (
        outcome(1, "split round trip with verified certificates", start, cfg.round_trip, failures),
        good,
    )
}

fn criterion_uniqueness(cfg: &SuiteConfig, tally: &Tally) -> CriterionOutcome {
    let start = Instant::now();
    let shape = CaseShape {
        max_rank: 5,
        max_torus_rank: 0,
        max_ops: 10,
        max_degree: 3,
        fixed_base: true,
    };
    let failures: Vec<String> = (0..cfg.uniqueness as u64)
        .into_par_iter()
        .filter_map(|seed| {
            let seed = 10_000 + seed;
            let case = match draw_case(seed, shape) {
                Ok(c) => c,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            let degrees = |b: &EquivariantBundle| -> Result<Vec<i64>> {
                let r = equivariant_split(b);
                tally.note(&r);
                let mut d: Vec<i64> = r?.0.into_iter().map(|s| s.n).collect();
                d.sort_unstable_by(|x, y| y.cmp(x));
                Ok(d)
            };
            let other = random_reframe(&case.bundle, seed.wrapping_mul(31) + 7, 10);
            match (degrees(&case.bundle), degrees(&other)) {
                (Ok(x), Ok(y)) if x == y => {
                    let want: Vec<i64> = case.answer.iter().map(|s| s.n).collect();
                    (x != want).then(|| format!("seed {seed}: degrees {x:?}, expected {want:?}"))
                }
                (Ok(x), Ok(y)) => Some(format!("seed {seed}: {x:?} vs {y:?} after reframing")),
                (Err(e), _) | (_, Err(e)) => Some(format!("seed {seed}: {e}")),
            }
        })
        .collect();
    outcome(2, "splitting type invariant under reframing", start, cfg.uniqueness, failures)
}

fn criterion_riemann_roch(cfg: &SuiteConfig, tally: &Tally) -> CriterionOutcome {
    let start = Instant::now();
    let failures: Vec<String> = (0..cfg.riemann_roch as u64)
        .into_par_iter()
        .filter_map(|k| {
            let seed = 20_000 + k;
            let shape = CaseShape {
                max_rank: 4,
                max_torus_rank: 2,
                max_ops: 10,
                max_degree: 3,
                fixed_base: k % 3 == 0,
            };
            let case = match draw_case(seed, shape) {
                Ok(c) => c,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            let b = &case.bundle;
            let run = || -> Result<Option<String>> {
                let h0 = h0_dimension(b)? as i64;
                let h1 = cech_cohomology(b, &cfg.cech)?.h1.dim();
                let rhs = b.degree()? + b.rank() as i64;
                Ok((h0 - h1 != rhs).then(|| format!("seed {seed}: h0 {h0} - h1 {h1} != {rhs}")))
            };
            let r = run();
            tally.note(&r);
            r.unwrap_or_else(|e| Some(format!("seed {seed}: {e}")))
        })
        .collect();
    outcome(3, "Riemann-Roch h0 - h1 = deg + rank", start, cfg.riemann_roch, failures)
}

fn criterion_characters(cfg: &SuiteConfig, splits: &[Split], tally: &Tally) -> CriterionOutcome {
    let start = Instant::now();
    let failures: Vec<String> = splits
        .par_iter()
        .filter_map(|(case, summands, _)| {
            let seed = case.seed;
            let run = || -> Result<Option<String>> {
                let (want0, want1) = split_characters(summands, case.bundle.torus());
                let h0 = h0_character(&case.bundle)?;
                let h1 = cech_cohomology(&case.bundle, &cfg.cech)?.h1;
                Ok(if h0 != want0 {
                    Some(format!("seed {seed}: h0 {h0:?} != {want0:?}"))
                } else if h1 != want1 {
                    Some(format!("seed {seed}: h1 {h1:?} != {want1:?}"))
                } else {
                    None
                })
            };
            let r = run();
            tally.note(&r);
            r.unwrap_or_else(|e| Some(format!("seed {seed}: {e}")))
        })
        .collect();
    let mut failures = failures;
    if splits.len() < cfg.round_trip {
        failures.push(format!("only {} of {} round-trip instances available", splits.len(), cfg.round_trip));
    }
    outcome(4, "cohomology characters match split closed forms", start, splits.len(), failures)
}

fn criterion_oracles(cfg: &SuiteConfig, tally: &Tally) -> CriterionOutcome {
    let start = Instant::now();
    let shape = CaseShape {
        max_rank: 4,
        max_torus_rank: 2,
        max_ops: 10,
        max_degree: 3,
        fixed_base: false,
    };
    let failures: Vec<String> = (0..cfg.oracle as u64)
        .into_par_iter()
        .filter_map(|k| {
            let seed = 30_000 + k;
            let run = || -> Result<Option<String>> {
                let case = draw_case(seed, shape)?;
                let adj = h0_character(&case.bundle)?;
                let cech = cech_cohomology(&case.bundle, &cfg.cech)?.h0;
                Ok((adj != cech).then(|| format!("seed {seed}: adjugate {adj:?}, Čech {cech:?}")))
            };
            let r = run();
            tally.note(&r);
            r.unwrap_or_else(|e| Some(format!("seed {seed}: {e}")))
        })
        .collect();
    outcome(5, "adjugate and Čech H^0 agree", start, cfg.oracle, failures)
}

fn criterion_lift(cfg: &SuiteConfig, tally: &Tally) -> CriterionOutcome {
    let start = Instant::now();
    let shape = CaseShape {
        max_rank: 4,
        max_torus_rank: 2,
        max_ops: 10,
        max_degree: 3,
        fixed_base: false,
    };
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut seed = 40_000u64;
    while checked < cfg.lift_steps && seed < 40_000 + 20 * cfg.lift_steps as u64 + 100 {
        seed += 1;
        let steps = match draw_case(seed, shape).and_then(|c| peel_all(&c.bundle)) {
            Ok(s) => s,
            Err(e) => {
                tally.note::<()>(&Err(e.clone()));
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        for step in steps.iter().filter(|s| s.quotient.rank() > 0) {
            if checked == cfg.lift_steps {
                break;
            }
            checked += 1;
            let r = invariant_lift_check(step);
            tally.note(&r);
            match r {
                Ok(rep) if rep.surjective() => {}
                Ok(rep) => failures.push(format!(
                    "seed {seed}: image rank {} < {}",
                    rep.image_rank, rep.target_dim
                )),
                Err(e) => failures.push(format!("seed {seed}: {e}")),
            }
        }
    }
    if checked < cfg.lift_steps {
        failures.push(format!("only {checked} peel steps with nonzero quotient found"));
    }
    outcome(6, "invariant Hom lifts through each peel", start, checked, failures)
}

/// Golden fixture: instance text and expected values.
pub struct Fixture {
    pub name: &'static str,
    pub instance: &'static str,
    pub expected: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            instance: include_str!(concat!("../../../fixtures/", $name, "/instance.json")),
            expected: include_str!(concat!("../../../fixtures/", $name, "/expected.json")),
        }
    };
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        fixture!("line_m2"),
        fixture!("line_m1"),
        fixture!("line_0"),
        fixture!("line_1"),
        fixture!("line_3"),
        fixture!("jump"),
        fixture!("equivariant_rank2"),
    ]
}

/// Recomputes a fixture with every oracle; returns the mismatches.
pub fn check_fixture(f: &Fixture, cech: &CechConfig) -> Result<Vec<String>> {
    let inst = parse_instance(f.instance)?;
    let b = &inst.bundle;
    b.ensure_valid()?;
    let r = b.torus().rank();
    let expected: Value = serde_json::from_str(f.expected)
        .map_err(|e| Error::Parse { pointer: "/".into(), message: e.to_string() })?;
    let want_summands = parse_summands(&expected["summands"], "/summands", r)?;
    let want_h0 = parse_character(&expected["h0"], "/h0", r)?;
    let want_h1 = parse_character(&expected["h1"], "/h1", r)?;

    let mut bad = Vec::new();
    let (closed0, closed1) = split_characters(&want_summands, b.torus());
    if closed0 != want_h0 || closed1 != want_h1 {
        bad.push(format!("{}: golden characters disagree with golden summands", f.name));
    }
    let (summands, cert) = equivariant_split(b)?;
    if sorted(summands) != want_summands {
        bad.push(format!("{}: splitting type", f.name));
    }
    if !verify_certificate(b, &cert).passed() {
        bad.push(format!("{}: certificate", f.name));
    }
    if h0_character(b)? != want_h0 {
        bad.push(format!("{}: adjugate h0", f.name));
    }
    let c = cech_cohomology(b, cech)?;
    if c.h0 != want_h0 {
        bad.push(format!("{}: Čech h0", f.name));
    }
    if c.h1 != want_h1 {
        bad.push(format!("{}: Čech h1", f.name));
    }
    Ok(bad)
}

fn criterion_fixtures(cfg: &SuiteConfig, tally: &Tally) -> CriterionOutcome {
    let start = Instant::now();
    let all = fixtures();
    let mut failures = Vec::new();
    for f in &all {
        let r = check_fixture(f, &cfg.cech);
        tally.note(&r);
        match r {
            Ok(bad) => failures.extend(bad),
            Err(e) => failures.push(format!("{}: {e}", f.name)),
        }
    }
    outcome(7, "golden fixtures recomputed by both oracles", start, all.len(), failures)
}

/// Single-monomial and single-field tamperings of a certificate.
pub fn mutations(cert: &SplittingCertificate, seed: u64, count: usize) -> Vec<(String, SplittingCertificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = cert.summands.len();
    let mut out = Vec::with_capacity(count + 2);
    for k in 0..count {
        let mut c = cert.clone();
        let on_inf = k % 2 == 1;
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let target = if on_inf { &mut c.m_inf } else { &mut c.m0 };
        let existing: Vec<i64> = target[(i, j)].terms().map(|(e, _)| e).collect();
        let exp = if !existing.is_empty() && rng.gen_bool(0.5) {
            existing[rng.gen_range(0..existing.len())]
        } else if on_inf {
            -rng.gen_range(0..=3)
        } else {
            rng.gen_range(0..=3)
        };
        let delta = Rational::from_integer(rng.gen_range(1..=3).into());
        target[(i, j)] += &LaurentPoly::monomial(delta, exp);
        let which = if on_inf { "MInf" } else { "M0" };
        out.push((format!("{which}[{i}][{j}] z^{exp}"), c));
    }
    let s = rng.gen_range(0..m);
    let mut c = cert.clone();
    c.summands[s].n += 1;
    out.push((format!("n of summand {s}"), c));
    if !cert.summands[s].lam.is_empty() {
        let mut c = cert.clone();
        c.summands[s].lam.0[0] += 1;
        out.push((format!("lam of summand {s}"), c));
    }
    out
}

fn criterion_mutations(cfg: &SuiteConfig, splits: &[Split]) -> CriterionOutcome {
    let start = Instant::now();
    let per: Vec<(usize, Vec<String>)> = splits
        .par_iter()
        .map(|(case, _, cert)| {
            let muts = mutations(cert, case.seed ^ 0xbad, cfg.mutations_per_certificate);
            let missed = muts
                .iter()
                .filter(|(_, c)| verify_certificate(&case.bundle, c).passed())
                .map(|(what, _)| format!("seed {}: {what} undetected", case.seed))
                .collect();
            (muts.len(), missed)
        })
        .collect();
    let cases = per.iter().map(|p| p.0).sum();
    let failures = per.into_iter().flat_map(|p| p.1).collect();
    outcome(9, "tampered certificates are rejected", start, cases, failures)
}

/// Runs criteria 1 to 9 and returns them in order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    let tally = Tally {
        invariant_failures: AtomicUsize::new(0),
    };
    let start = Instant::now();
    let (c1, splits) = criterion_round_trip(cfg, &tally);
    let c2 = criterion_uniqueness(cfg, &tally);
    let c3 = criterion_riemann_roch(cfg, &tally);
    let c4 = criterion_characters(cfg, &splits, &tally);
    let c5 = criterion_oracles(cfg, &tally);
    let c6 = criterion_lift(cfg, &tally);
    let c7 = criterion_fixtures(cfg, &tally);
    let c9 = criterion_mutations(cfg, &splits);
    let fired = tally.invariant_failures.load(Ordering::Relaxed);
    let c8 = CriterionOutcome {
        id: 8,
        name: "internal invariant assertions never fire",
        passed: fired == 0,
        cases: c1.cases + c2.cases + c3.cases + c4.cases + c5.cases + c6.cases + c7.cases,
        detail: if fired == 0 { "ok".into() } else { format!("{fired} invariant failures") },
        seconds: start.elapsed().as_secs_f64(),
    };
    vec![c1, c2, c3, c4, c5, c6, c7, c8, c9]
}
