//! Equivariant vector bundles on `P^1` as transition matrices.
//!
//! Conventions used throughout the crate:
//!
//! * A global section is a pair `(f, g)` with `f ∈ k[z]^m` in the chart-0
//!   frame and `g ∈ k[w]^m` in the chart-∞ frame, related by
//!   `g(1/z) = A(z)·f(z)`.
//! * `O(n)` has transition `z^{-n}`, so `H^0(O(n))` is spanned by
//!   `1, z, …, z^n`.
//! * The torus acts on sections by `(t·f)(z) = t^{λ0} f(α(t)^{-1} z)` where
//!   `α` has exponent vector `a`. The monomial `z^d` in component `i` has
//!   weight `λ0[i] - d·a` on chart 0, and `w^j` in component `i` has weight
//!   `λ∞[i] + j·a` on chart ∞.
//!
//! With these conventions a transition (or any frame change) mapping frame
//! weights `source` to `target` must satisfy `d·a = target[i] - source[j]`
//! for every monomial `c·z^d` of entry `(i, j)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::rational::{int, rat};
use crate::algebra::{LaurentMatrix, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// A character of the torus, as an integer exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(r: usize) -> Self {
        Weight(vec![0; r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Torus of rank `r` acting on `P^1` through the character with exponent
/// vector `a`. Rank zero means no torus; `a = 0` means the torus acts only on
/// the fibres.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TorusAction {
    pub a: Weight,
}

impl TorusAction {
    pub fn new(a: Vec<i64>) -> Self {
        TorusAction { a: Weight(a) }
    }

    pub fn none() -> Self {
        TorusAction::default()
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    /// `true` when the base `P^1` is acted on trivially (including rank 0).
    pub fn fixes_base(&self) -> bool {
        self.a.is_zero()
    }

    /// `d·a`
    pub fn exponent_weight(&self, d: i64) -> Weight {
        self.a.scaled(d)
    }
}

/// Equivariant line bundle `O(n)` with chart-0 weight `lam`; its chart-∞
/// weight is `lam - n·a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineSummand {
    pub n: i64,
    pub lam: Weight,
}

impl LineSummand {
    pub fn new(n: i64, lam: Vec<i64>) -> Self {
        LineSummand { n, lam: Weight(lam) }
    }

    pub fn weight_at_infinity(&self, torus: &TorusAction) -> Weight {
        &self.lam - &torus.exponent_weight(self.n)
    }
}

impl fmt::Display for LineSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}){}", self.n, self.lam)
    }
}

/// Sort into the canonical multiset order: degree descending, then weight.
pub fn sort_summands(s: &mut [LineSummand]) {
    s.sort_by(|x, y| y.n.cmp(&x.n).then_with(|| x.lam.cmp(&y.lam)));
}

/// Which local frame a weight or exponent refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Zero,
    Infinity,
}

/// One failed invariant of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    WeightLength {
        chart: Chart,
        index: usize,
        expected: usize,
        found: usize,
    },
    DetNotMonomial {
        det: String,
    },
    Equivariance {
        row: usize,
        col: usize,
        exponent: i64,
        /// `d·a`
        found: Weight,
        /// `λ∞[row] - λ0[col]`
        expected: Weight,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::WeightLength {
                chart,
                index,
                expected,
                found,
            } => write!(
                f,
                "weight {index} on chart {chart:?} has length {found}, expected {expected}"
            ),
            Violation::DetNotMonomial { det } => {
                write!(f, "determinant {det} is not a nonzero monomial")
            }
            Violation::Equivariance {
                row,
                col,
                exponent,
                found,
                expected,
            } => write!(
                f,
                "entry ({row}, {col}), monomial z^{exponent}: d·a = {found} but target - source = {expected}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Monomials of `m` breaking the weight law for a frame change mapping
/// weights `source` (columns) to `target` (rows).
pub fn law_violations(
    m: &LaurentMatrix,
    source: &[Weight],
    target: &[Weight],
    torus: &TorusAction,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for ((i, j), p) in m.iter() {
        if p.is_zero() {
            continue;
        }
        let expected = &target[i] - &source[j];
        for (d, _) in p.terms() {
            let found = torus.exponent_weight(d);
            if found != expected {
                out.push(Violation::Equivariance {
                    row: i,
                    col: j,
                    exponent: d,
                    found,
                    expected: expected.clone(),
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Inverse {
    det_exp: i64,
    det_coeff: Rational,
    matrix: LaurentMatrix,
}

/// A `T`-equivariant vector bundle on `P^1`.
///
/// The inverse transition is computed at most once and carried through
/// `twist`, `dual` and `hom_bundle` without recomputation.
#[derive(Clone, Debug)]
pub struct EquivariantBundle {
    transition: LaurentMatrix,
    lambda0: Vec<Weight>,
    lambda_inf: Vec<Weight>,
    torus: TorusAction,
    inverse: OnceLock<std::result::Result<Arc<Inverse>, Error>>,
}

impl PartialEq for EquivariantBundle {
    fn eq(&self, other: &Self) -> bool {
        self.transition == other.transition
            && self.lambda0 == other.lambda0
            && self.lambda_inf == other.lambda_inf
            && self.torus == other.torus
    }
}

impl Eq for EquivariantBundle {}

impl EquivariantBundle {
    /// Assembles an instance without checking it; see [`validate`](Self::validate).
    pub fn new(
        transition: LaurentMatrix,
        lambda0: Vec<Weight>,
        lambda_inf: Vec<Weight>,
        torus: TorusAction,
    ) -> Self {
        EquivariantBundle {
            transition,
            lambda0,
            lambda_inf,
            torus,
            inverse: OnceLock::new(),
        }
    }

    /// Bundle without torus action.
    pub fn plain(transition: LaurentMatrix) -> Self {
        let m = transition.rows();
        Self::new(transition, vec![Weight::default(); m], vec![Weight::default(); m], TorusAction::none())
    }

    fn with_inverse(mut self, inv: Inverse) -> Self {
        self.inverse = OnceLock::from(Ok(Arc::new(inv)));
        self
    }

    pub fn rank(&self) -> usize {
        self.transition.rows()
    }

    pub fn transition(&self) -> &LaurentMatrix {
        &self.transition
    }

    pub fn lambda0(&self) -> &[Weight] {
        &self.lambda0
    }

    pub fn lambda_inf(&self) -> &[Weight] {
        &self.lambda_inf
    }

    pub fn torus(&self) -> &TorusAction {
        &self.torus
    }

    fn inverse_data(&self) -> Result<Arc<Inverse>> {
        self.inverse
            .get_or_init(|| {
                let det = self.transition.det()?;
                let (det_exp, det_coeff) = det
                    .as_monomial()
                    .map(|(e, c)| (e, c.clone()))
                    .ok_or_else(|| Error::DetNotMonomial(det.to_string()))?;
                let adj = self.transition.adjugate()?;
                let matrix = adj.map(|p| p.div_monomial(&det_coeff, det_exp));
                Ok(Arc::new(Inverse {
                    det_exp,
                    det_coeff,
                    matrix,
                }))
            })
            .clone()
    }

    /// `det A = c·z^e` as `(e, c)`.
    pub fn det_monomial(&self) -> Result<(i64, Rational)> {
        let inv = self.inverse_data()?;
        Ok((inv.det_exp, inv.det_coeff.clone()))
    }

    pub fn inverse_transition(&self) -> Result<LaurentMatrix> {
        Ok(self.inverse_data()?.matrix.clone())
    }

    /// `adj(A) = det(A)·A^{-1}`.
    pub fn adjugate(&self) -> Result<LaurentMatrix> {
        let inv = self.inverse_data()?;
        Ok(inv.matrix.map(|p| p.scale(&inv.det_coeff).shift(inv.det_exp)))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let m = self.transition.rows();
        let r = self.torus.rank();
        if !self.transition.is_square() {
            violations.push(Violation::Shape(format!(
                "transition is {}x{}",
                self.transition.rows(),
                self.transition.cols()
            )));
            return ValidationReport { violations };
        }
        if m == 0 {
            violations.push(Violation::Shape("rank must be positive".into()));
            return ValidationReport { violations };
        }
        for (chart, lams) in [(Chart::Zero, &self.lambda0), (Chart::Infinity, &self.lambda_inf)] {
            if lams.len() != m {
                violations.push(Violation::Shape(format!(
                    "{} weights given on chart {chart:?} for rank {m}",
                    lams.len()
                )));
                continue;
            }
            for (index, w) in lams.iter().enumerate() {
                if w.len() != r {
                    violations.push(Violation::WeightLength {
                        chart,
                        index,
                        expected: r,
                        found: w.len(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        if let Err(e) = self.det_monomial() {
            let det = match e {
                Error::DetNotMonomial(d) => d,
                other => other.to_string(),
            };
            violations.push(Violation::DetNotMonomial { det });
        }
        violations.extend(law_violations(
            &self.transition,
            &self.lambda0,
            &self.lambda_inf,
            &self.torus,
        ));
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidBundle(report.summary()))
        }
    }

    /// `-(exponent of z in det A)`.
    pub fn degree(&self) -> Result<i64> {
        Ok(-self.det_monomial()?.0)
    }

    /// Tensor with `O(n)` linearized by chart-0 weight `lam`.
    pub fn twist(&self, n: i64, lam: &Weight) -> EquivariantBundle {
        assert_eq!(lam.len(), self.torus.rank(), "twist weight has wrong length");
        let shift_inf = lam - &self.torus.exponent_weight(n);
        let out = EquivariantBundle::new(
            self.transition.shift(-n),
            self.lambda0.iter().map(|w| w + lam).collect(),
            self.lambda_inf.iter().map(|w| w + &shift_inf).collect(),
            self.torus.clone(),
        );
        match self.inverse.get() {
            Some(Ok(inv)) => out.with_inverse(Inverse {
                det_exp: inv.det_exp - (self.rank() as i64) * n,
                det_coeff: inv.det_coeff.clone(),
                matrix: inv.matrix.shift(n),
            }),
            _ => out,
        }
    }

    /// Dual bundle: transition `(A^{-1})^T`, weights negated.
    pub fn dual(&self) -> Result<EquivariantBundle> {
        let inv = self.inverse_data()?;
        let out = EquivariantBundle::new(
            inv.matrix.transpose(),
            self.lambda0.iter().map(|w| -w).collect(),
            self.lambda_inf.iter().map(|w| -w).collect(),
            self.torus.clone(),
        );
        Ok(out.with_inverse(Inverse {
            det_exp: -inv.det_exp,
            det_coeff: inv.det_coeff.recip(),
            matrix: self.transition.transpose(),
        }))
    }

    fn same_torus(&self, other: &EquivariantBundle) -> Result<()> {
        if self.torus == other.torus {
            Ok(())
        } else {
            Err(Error::TorusMismatch {
                left: self.torus.rank(),
                right: other.torus.rank(),
            })
        }
    }

    pub fn direct_sum(&self, other: &EquivariantBundle) -> Result<EquivariantBundle> {
        self.same_torus(other)?;
        let out = EquivariantBundle::new(
            LaurentMatrix::block_diagonal(&self.transition, &other.transition),
            [self.lambda0.clone(), other.lambda0.clone()].concat(),
            [self.lambda_inf.clone(), other.lambda_inf.clone()].concat(),
            self.torus.clone(),
        );
        match (self.inverse.get(), other.inverse.get()) {
            (Some(Ok(a)), Some(Ok(b))) => Ok(out.with_inverse(Inverse {
                det_exp: a.det_exp + b.det_exp,
                det_coeff: &a.det_coeff * &b.det_coeff,
                matrix: LaurentMatrix::block_diagonal(&a.matrix, &b.matrix),
            })),
            _ => Ok(out),
        }
    }

    /// `Hom(self, target) = self^∨ ⊗ target`.
    ///
    /// Index `q·m_target + p` carries the matrix entry `(p, q)` of a bundle map
    /// (`p` indexes the target frame, `q` the source frame), so its weights
    /// are `λ_target[p] - λ_source[q]`.
    pub fn hom_bundle(&self, target: &EquivariantBundle) -> Result<EquivariantBundle> {
        self.same_torus(target)?;
        let dual = self.dual()?;
        let dual_inv = dual.inverse_data()?;
        let tgt_inv = target.inverse_data()?;
        let (ms, mt) = (self.rank() as i64, target.rank() as i64);
        let weights = |src: &[Weight], tgt: &[Weight]| -> Vec<Weight> {
            src.iter()
                .flat_map(|q| tgt.iter().map(move |p| p - q))
                .collect()
        };
        let det_coeff = num_traits::pow(dual_inv.det_coeff.clone(), mt as usize)
            * num_traits::pow(tgt_inv.det_coeff.clone(), ms as usize);
        let out = EquivariantBundle::new(
            dual.transition.kron(&target.transition),
            weights(&self.lambda0, &target.lambda0),
            weights(&self.lambda_inf, &target.lambda_inf),
            self.torus.clone(),
        );
        Ok(out.with_inverse(Inverse {
            det_exp: dual_inv.det_exp * mt + tgt_inv.det_exp * ms,
            det_coeff,
            matrix: dual_inv.matrix.kron(&tgt_inv.matrix),
        }))
    }
}

/// `⊕ O(n_i)` with the given linearizations: transition `diag(z^{-n_i})`.
pub fn split_bundle(torus: &TorusAction, summands: &[LineSummand]) -> EquivariantBundle {
    let out = EquivariantBundle::new(
        LaurentMatrix::diagonal(summands.iter().map(|s| LaurentPoly::z_pow(-s.n)).collect()),
        summands.iter().map(|s| s.lam.clone()).collect(),
        summands.iter().map(|s| s.weight_at_infinity(torus)).collect(),
        torus.clone(),
    );
    out.with_inverse(Inverse {
        det_exp: -summands.iter().map(|s| s.n).sum::<i64>(),
        det_coeff: Rational::one(),
        matrix: LaurentMatrix::diagonal(summands.iter().map(|s| LaurentPoly::z_pow(s.n)).collect()),
    })
}

/// Exponent bound for a single elementary operation of the generator.
pub const MAX_OP_EXPONENT: i64 = 3;

fn multiplier_pool() -> [Rational; 7] {
    [int(1), int(-1), int(2), int(-2), rat(1, 2), int(3), rat(-1, 3)]
}

/// Seeded instance equivariantly isomorphic to `⊕ summands`.
///
/// Starts from `diag(z^{-n_i})` and applies `complexity` random elementary
/// frame changes that respect the weight law. Returns the instance and the
/// summands in canonical order.
pub fn random_instance(
    seed: u64,
    torus: &TorusAction,
    summands: &[LineSummand],
    complexity: usize,
) -> Result<(EquivariantBundle, Vec<LineSummand>)> {
    if summands.is_empty() {
        return Err(Error::InvalidArgument("at least one summand is required".into()));
    }
    if let Some(s) = summands.iter().find(|s| s.lam.len() != torus.rank()) {
        return Err(Error::InvalidArgument(format!(
            "summand weight {} does not match torus rank {}",
            s.lam,
            torus.rank()
        )));
    }
    let base = split_bundle(torus, summands);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bundle = reframe(&base, &mut rng, complexity);
    let mut answer = summands.to_vec();
    sort_summands(&mut answer);
    Ok((bundle, answer))
}

/// Applies `ops` random weight-respecting chart-local frame changes.
pub fn random_reframe(bundle: &EquivariantBundle, seed: u64, ops: usize) -> EquivariantBundle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    reframe(bundle, &mut rng, ops)
}

fn reframe<R: Rng>(bundle: &EquivariantBundle, rng: &mut R, ops: usize) -> EquivariantBundle {
    let pool = multiplier_pool();
    let m = bundle.rank();
    let torus = bundle.torus.clone();
    let mut a = bundle.transition.clone();
    let mut lam0 = bundle.lambda0.clone();
    let mut laminf = bundle.lambda_inf.clone();

    let mut applied = 0;
    let mut attempts = 0;
    while applied < ops && attempts < 20 * ops + 20 {
        attempts += 1;
        let c = pool.choose(rng).unwrap().clone();
        let kind = rng.gen_range(0..5);
        if kind < 2 && m < 2 {
            continue;
        }
        match kind {
            // chart 0: A <- A·(I - c z^d E_ij), d >= 0
            0 => {
                let (i, j) = distinct_pair(rng, m);
                let Some(d) = legal_exponent(rng, &torus, &(&lam0[i] - &lam0[j]), 1) else {
                    continue;
                };
                let factor = LaurentPoly::monomial(c, d);
                for r in 0..m {
                    let t = &a[(r, i)] * &factor;
                    a[(r, j)] -= &t;
                }
            }
            // chart ∞: A <- (I + c w^k E_ij)·A, z-exponent -k <= 0
            1 => {
                let (i, j) = distinct_pair(rng, m);
                let Some(d) = legal_exponent(rng, &torus, &(&laminf[i] - &laminf[j]), -1) else {
                    continue;
                };
                let factor = LaurentPoly::monomial(c, d);
                for col in 0..m {
                    let t = &a[(j, col)] * &factor;
                    a[(i, col)] += &t;
                }
            }
            2 | 3 => {
                if m < 2 {
                    scale(&mut a, kind == 2, 0, &c);
                } else {
                    let (i, j) = distinct_pair(rng, m);
                    if kind == 2 {
                        swap_cols(&mut a, i, j);
                        lam0.swap(i, j);
                    } else {
                        swap_rows(&mut a, i, j);
                        laminf.swap(i, j);
                    }
                }
            }
            _ => {
                let i = rng.gen_range(0..m);
                scale(&mut a, rng.gen_bool(0.5), i, &c);
            }
        }
        applied += 1;
    }
    EquivariantBundle::new(a, lam0, laminf, torus)
}

fn distinct_pair<R: Rng>(rng: &mut R, m: usize) -> (usize, usize) {
    let i = rng.gen_range(0..m);
    let mut j = rng.gen_range(0..m - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Random `d` with `sign·d ∈ [0, 3]` and `d·a = diff`.
fn legal_exponent<R: Rng>(rng: &mut R, torus: &TorusAction, diff: &Weight, sign: i64) -> Option<i64> {
    let legal: Vec<i64> = (0..=MAX_OP_EXPONENT)
        .map(|k| sign * k)
        .filter(|&d| torus.exponent_weight(d) == *diff)
        .collect();
    legal.choose(rng).copied()
}

fn scale(a: &mut LaurentMatrix, column: bool, i: usize, c: &Rational) {
    let m = a.rows();
    for k in 0..m {
        let idx = if column { (k, i) } else { (i, k) };
        a[idx] = a[idx].scale(c);
    }
}

fn swap_cols(a: &mut LaurentMatrix, i: usize, j: usize) {
    for r in 0..a.rows() {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

fn swap_rows(a: &mut LaurentMatrix, i: usize, j: usize) {
    for c in 0..a.cols() {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
}
