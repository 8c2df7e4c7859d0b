//! Standalone certificate checking.
//!
//! Nothing here calls the splitting code; the checks are recomputed from the
//! bundle data and the two frame matrices.

use crate::algebra::{LaurentMatrix, LaurentPoly};
use crate::bundle::{EquivariantBundle, Weight};

use super::SplittingCertificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub checks: Vec<CheckResult>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("({}) {}: {}", c.id, c.name, c.detail))
            .collect();
        if failed.is_empty() {
            "all checks passed".into()
        } else {
            failed.join("; ")
        }
    }
}

fn check(id: &'static str, name: &'static str, problem: Option<String>) -> CheckResult {
    CheckResult {
        id,
        name,
        passed: problem.is_none(),
        detail: problem.unwrap_or_else(|| "ok".into()),
    }
}

fn shape_ok(m: &LaurentMatrix, r: usize) -> bool {
    m.rows() == r && m.cols() == r
}

fn weight_of(base: &Weight, a: &[i64], d: i64) -> Weight {
    Weight(base.0.iter().zip(a).map(|(b, x)| b + d * x).collect())
}

fn constant_det(m: &LaurentMatrix) -> Option<String> {
    match m.det() {
        Ok(d) if d.is_constant() && !d.is_zero() => None,
        Ok(d) => Some(format!("determinant {d} is not a nonzero constant")),
        Err(e) => Some(e.to_string()),
    }
}

/// Checks a splitting certificate against `E`:
///
/// * (i) `MInf · A · M0 = diag(z^{-n_i})`
/// * (ii) `M0` over `k[z]`, `MInf` over `k[w]`, both with constant nonzero determinant
/// * (iii) `M0` carries the summand weights to `λ0`, and each row of `MInf` is homogeneous
/// * (iv) degrees are non-increasing and sum to `deg E`
/// * (v) row `i` of `MInf` has weight `λ_i - n_i·a`
#[allow(clippy::needless_range_loop)]
pub fn verify_certificate(bundle: &EquivariantBundle, cert: &SplittingCertificate) -> CertificateReport {
    let r = bundle.rank();
    let a = &bundle.torus().a.0;
    let tr = a.len();
    let s = &cert.summands;
    let shapes = s.len() == r && shape_ok(&cert.m0, r) && shape_ok(&cert.m_inf, r) && shape_ok(bundle.transition(), r);
    let lam_ok = s.iter().all(|x| x.lam.len() == tr)
        && bundle.lambda0().iter().chain(bundle.lambda_inf()).all(|w| w.len() == tr)
        && bundle.lambda0().len() == r
        && bundle.lambda_inf().len() == r;

    let mut checks = Vec::with_capacity(5);
    if !shapes {
        let msg = format!(
            "rank {r}, {} summands, M0 {}x{}, MInf {}x{}",
            s.len(),
            cert.m0.rows(),
            cert.m0.cols(),
            cert.m_inf.rows(),
            cert.m_inf.cols()
        );
        for (id, name) in NAMES {
            checks.push(check(id, name, Some(msg.clone())));
        }
        return CertificateReport { checks };
    }

    // (i)
    let product = &(&cert.m_inf * bundle.transition()) * &cert.m0;
    let diag = LaurentMatrix::diagonal(s.iter().map(|x| LaurentPoly::z_pow(-x.n)).collect());
    checks.push(check(
        NAMES[0].0,
        NAMES[0].1,
        (product != diag).then(|| format!("MInf·A·M0 = {product}, expected {diag}")),
    ));

    // (ii)
    let mut problems = Vec::new();
    if !cert.m0.is_polynomial() {
        problems.push("M0 has negative powers of z".to_string());
    }
    if !cert.m_inf.is_polynomial_in_w() {
        problems.push("MInf has negative powers of w".to_string());
    }
    if let Some(p) = constant_det(&cert.m0) {
        problems.push(format!("M0: {p}"));
    }
    if let Some(p) = constant_det(&cert.m_inf) {
        problems.push(format!("MInf: {p}"));
    }
    checks.push(check(NAMES[1].0, NAMES[1].1, (!problems.is_empty()).then(|| problems.join("; "))));

    // (iii) and (v)
    let mut law = Vec::new();
    let mut row_weights = Vec::new();
    if lam_ok {
        for i in 0..r {
            for j in 0..r {
                for (d, _) in cert.m0[(i, j)].terms() {
                    let got = weight_of(&s[j].lam, a, d);
                    if got != bundle.lambda0()[i] {
                        law.push(format!("M0[{i}][{j}] z^{d} has weight {got}, expected {}", bundle.lambda0()[i]));
                    }
                }
            }
            let mut row: Option<Weight> = None;
            for j in 0..r {
                for (d, _) in cert.m_inf[(i, j)].terms() {
                    let got = weight_of(&bundle.lambda_inf()[j], a, d);
                    match &row {
                        None => row = Some(got),
                        Some(w) if *w != got => {
                            law.push(format!("MInf row {i} mixes weights {w} and {got}"));
                        }
                        _ => {}
                    }
                }
            }
            row_weights.push(row);
        }
    } else {
        law.push("weight vectors do not match the torus rank".into());
    }
    checks.push(check(NAMES[2].0, NAMES[2].1, (!law.is_empty()).then(|| law.join("; "))));

    // (iv)
    let mut deg_problems = Vec::new();
    if s.windows(2).any(|p| p[0].n < p[1].n) {
        deg_problems.push("degrees are not non-increasing".to_string());
    }
    let total: i64 = s.iter().map(|x| x.n).sum();
    match bundle.degree() {
        Ok(d) if d == total => {}
        Ok(d) => deg_problems.push(format!("degrees sum to {total}, bundle has degree {d}")),
        Err(e) => deg_problems.push(e.to_string()),
    }
    checks.push(check(
        NAMES[3].0,
        NAMES[3].1,
        (!deg_problems.is_empty()).then(|| deg_problems.join("; ")),
    ));

    // (v)
    let mut inf_problems = Vec::new();
    if lam_ok {
        for (i, row) in row_weights.iter().enumerate() {
            let expected = weight_of(&s[i].lam, a, -s[i].n);
            match row {
                Some(w) if *w == expected => {}
                Some(w) => inf_problems.push(format!("MInf row {i} has weight {w}, expected {expected}")),
                None => inf_problems.push(format!("MInf row {i} is zero")),
            }
        }
    } else {
        inf_problems.push("weight vectors do not match the torus rank".into());
    }
    checks.push(check(
        NAMES[4].0,
        NAMES[4].1,
        (!inf_problems.is_empty()).then(|| inf_problems.join("; ")),
    ));
    CertificateReport { checks }
}

const NAMES: [(&str, &str); 5] = [
    ("i", "diagonalizes transition"),
    ("ii", "chart-regular and invertible"),
    ("iii", "equivariant frames"),
    ("iv", "degree sequence"),
    ("v", "weights at infinity"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::bundle::{LineSummand, TorusAction};

    fn z(e: i64) -> LaurentPoly {
        LaurentPoly::z_pow(e)
    }

    fn e3() -> EquivariantBundle {
        EquivariantBundle::new(
            LaurentMatrix::from_rows(vec![vec![z(-1), z(0)], vec![LaurentPoly::zero(), z(-1)]]),
            vec![Weight(vec![0]), Weight(vec![-1])],
            vec![Weight(vec![-1]), Weight(vec![-2])],
            TorusAction::new(vec![1]),
        )
    }

    /// Hand-built: column `(1, 0)` spans `O(1, 0)`, column `(-z, 1)` spans `O(1, -1)`.
    fn e3_cert() -> SplittingCertificate {
        SplittingCertificate {
            summands: vec![LineSummand::new(1, vec![0]), LineSummand::new(1, vec![-1])],
            m0: LaurentMatrix::from_rows(vec![vec![z(0), -z(1)], vec![LaurentPoly::zero(), z(0)]]),
            m_inf: LaurentMatrix::identity(2),
        }
    }

    #[test]
    fn hand_certificate_passes() {
        let r = verify_certificate(&e3(), &e3_cert());
        assert!(r.passed(), "{}", r.summary());
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn tampering_fails() {
        let mut c = e3_cert();
        let mut rows = c.m0.to_rows();
        rows[0][1] = rows[0][1].clone() + LaurentPoly::monomial(int(1), 2);
        c.m0 = LaurentMatrix::from_rows(rows);
        assert!(!verify_certificate(&e3(), &c).passed());

        let mut c = e3_cert();
        c.summands[0].lam = Weight(vec![1]);
        assert!(!verify_certificate(&e3(), &c).passed());

        let mut c = e3_cert();
        c.summands[1].n = 0;
        assert!(!verify_certificate(&e3(), &c).passed());
    }

    #[test]
    fn wrong_shape_fails_every_check() {
        let mut c = e3_cert();
        c.summands.pop();
        let r = verify_certificate(&e3(), &c);
        assert!(r.checks.iter().all(|c| !c.passed));
    }
}
