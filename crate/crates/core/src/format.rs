//! JSON encoding of instances, certificates, characters and reports.
//!
//! A matrix is a list of rows; each entry is a list of monomials
//! `[exponent, numerator, denominator]`. Numerators and denominators are
//! written as JSON integers when they fit in `i64` and as decimal strings
//! otherwise; both forms are accepted on input. Object keys are emitted in
//! sorted order.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{LaurentMatrix, LaurentPoly, Rational};
use crate::bundle::{Chart, EquivariantBundle, LineSummand, TorusAction, ValidationReport, Violation, Weight};
use crate::cohomology::EulerReport;
use crate::equivariant::Character;
use crate::error::{Error, Result};
use crate::splitting::{CertificateReport, SplittingCertificate};

/// A bundle read from disk, with the generator's answer if present.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub bundle: EquivariantBundle,
    pub expected: Option<Vec<LineSummand>>,
}

fn err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

fn child(pointer: &str, key: impl std::fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{key}")
}

fn field<'a>(obj: &'a Map<String, Value>, pointer: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| err(&child(pointer, key), "missing field"))
}

fn as_object<'a>(v: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(pointer, "expected an object"))
}

fn as_array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(pointer, "expected an array"))
}

fn as_i64(v: &Value, pointer: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| err(pointer, "expected an integer"))
}

fn as_usize(v: &Value, pointer: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(pointer, "expected a non-negative integer"))
}

fn as_bigint(v: &Value, pointer: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| err(pointer, "expected an integer")),
        Value::String(s) => s
            .trim()
            .replace('−', "-")
            .parse::<BigInt>()
            .map_err(|_| err(pointer, format!("invalid integer string {s:?}"))),
        _ => Err(err(pointer, "expected an integer or integer string")),
    }
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

pub fn parse_weight(v: &Value, pointer: &str, len: usize) -> Result<Weight> {
    let arr = as_array(v, pointer)?;
    if arr.len() != len {
        return Err(err(pointer, format!("weight has length {}, expected {len}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(k, x)| as_i64(x, &child(pointer, k)))
        .collect::<Result<Vec<_>>>()
        .map(Weight)
}

fn parse_weights(v: &Value, pointer: &str, count: usize, len: usize) -> Result<Vec<Weight>> {
    let arr = as_array(v, pointer)?;
    if arr.len() != count {
        return Err(err(pointer, format!("{} weights, expected {count}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(i, w)| parse_weight(w, &child(pointer, i), len))
        .collect()
}

pub fn weight_to_json(w: &Weight) -> Value {
    json!(w.0)
}

pub fn poly_from_json(v: &Value, pointer: &str) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero();
    for (k, mono) in as_array(v, pointer)?.iter().enumerate() {
        let ptr = child(pointer, k);
        let parts = as_array(mono, &ptr)?;
        if parts.len() != 3 {
            return Err(err(&ptr, "monomial must be [exponent, numerator, denominator]"));
        }
        let exp = as_i64(&parts[0], &child(&ptr, 0))?;
        let num = as_bigint(&parts[1], &child(&ptr, 1))?;
        let den = as_bigint(&parts[2], &child(&ptr, 2))?;
        if den.is_zero() {
            return Err(err(&child(&ptr, 2), "zero denominator"));
        }
        p.add_term(exp, Rational::new(num, den));
    }
    Ok(p)
}

pub fn poly_to_json(p: &LaurentPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!([e, int_value(c.numer()), int_value(c.denom())]))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, pointer: &str, rows: usize, cols: usize) -> Result<LaurentMatrix> {
    let arr = as_array(v, pointer)?;
    if arr.len() != rows {
        return Err(err(pointer, format!("{} rows, expected {rows}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        let rp = child(pointer, i);
        let entries = as_array(row, &rp)?;
        if entries.len() != cols {
            return Err(err(&rp, format!("{} entries, expected {cols}", entries.len())));
        }
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, e)| poly_from_json(e, &child(&rp, j)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if rows == 0 {
        return Ok(LaurentMatrix::zeros(0, cols));
    }
    Ok(LaurentMatrix::from_rows(out))
}

pub fn matrix_to_json(m: &LaurentMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(poly_to_json).collect()))
            .collect(),
    )
}

pub fn summand_to_json(s: &LineSummand) -> Value {
    json!({"n": s.n, "lam": weight_to_json(&s.lam)})
}

pub fn summands_to_json(s: &[LineSummand]) -> Value {
    Value::Array(s.iter().map(summand_to_json).collect())
}

pub fn parse_summands(v: &Value, pointer: &str, torus_rank: usize) -> Result<Vec<LineSummand>> {
    as_array(v, pointer)?
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let ptr = child(pointer, k);
            let obj = as_object(s, &ptr)?;
            let n = as_i64(field(obj, &ptr, "n")?, &child(&ptr, "n"))?;
            let lam = parse_weight(field(obj, &ptr, "lam")?, &child(&ptr, "lam"), torus_rank)?;
            Ok(LineSummand { n, lam })
        })
        .collect()
}

fn parse_torus(root: &Map<String, Value>) -> Result<TorusAction> {
    let Some(t) = root.get("torus") else {
        return Ok(TorusAction::none());
    };
    let obj = as_object(t, "/torus")?;
    let a = as_array(field(obj, "/torus", "a")?, "/torus/a")?
        .iter()
        .enumerate()
        .map(|(k, x)| as_i64(x, &child("/torus/a", k)))
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = obj.get("rank") {
        let r = as_usize(r, "/torus/rank")?;
        if r != a.len() {
            return Err(err("/torus/rank", format!("rank {r} but a has length {}", a.len())));
        }
    }
    Ok(TorusAction::new(a))
}

/// Reads an instance. Shape and weight lengths are checked here;
/// determinant and equivariance are left to [`EquivariantBundle::validate`].
pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    instance_from_value(&value)
}

pub fn instance_from_value(value: &Value) -> Result<Instance> {
    let root = as_object(value, "")?;
    let torus = parse_torus(root)?;
    let r = torus.rank();
    let m = as_usize(field(root, "", "rank")?, "/rank")?;
    let lambda0 = parse_weights(field(root, "", "lambda0")?, "/lambda0", m, r)?;
    let lambda_inf = parse_weights(field(root, "", "lambdaInf")?, "/lambdaInf", m, r)?;
    let a = matrix_from_json(field(root, "", "A")?, "/A", m, m)?;
    let expected = match root.get("expected") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_summands(v, "/expected", r)?),
    };
    Ok(Instance {
        bundle: EquivariantBundle::new(a, lambda0, lambda_inf, torus),
        expected,
    })
}

pub fn instance_to_json(bundle: &EquivariantBundle, expected: Option<&[LineSummand]>) -> Value {
    let torus = bundle.torus();
    let mut out = json!({
        "rank": bundle.rank(),
        "torus": {"rank": torus.rank(), "a": weight_to_json(&torus.a)},
        "lambda0": bundle.lambda0().iter().map(weight_to_json).collect::<Vec<_>>(),
        "lambdaInf": bundle.lambda_inf().iter().map(weight_to_json).collect::<Vec<_>>(),
        "A": matrix_to_json(bundle.transition()),
    });
    if let Some(e) = expected {
        out["expected"] = summands_to_json(e);
    }
    out
}

pub fn certificate_to_json(c: &SplittingCertificate) -> Value {
    json!({
        "summands": summands_to_json(&c.summands),
        "M0": matrix_to_json(&c.m0),
        "MInf": matrix_to_json(&c.m_inf),
    })
}

/// Reads a certificate for a bundle of rank `m` and torus rank `r`.
pub fn parse_certificate(text: &str, m: usize, r: usize) -> Result<SplittingCertificate> {
    let value: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    let root = as_object(&value, "")?;
    let summands = parse_summands(field(root, "", "summands")?, "/summands", r)?;
    Ok(SplittingCertificate {
        summands,
        m0: matrix_from_json(field(root, "", "M0")?, "/M0", m, m)?,
        m_inf: matrix_from_json(field(root, "", "MInf")?, "/MInf", m, m)?,
    })
}

pub fn character_to_json(c: &Character) -> Value {
    Value::Array(
        c.iter()
            .map(|(w, mult)| json!({"weight": weight_to_json(w), "mult": mult}))
            .collect(),
    )
}

pub fn parse_character(v: &Value, pointer: &str, r: usize) -> Result<Character> {
    let mut c = Character::new();
    for (k, e) in as_array(v, pointer)?.iter().enumerate() {
        let ptr = child(pointer, k);
        let obj = as_object(e, &ptr)?;
        let w = parse_weight(field(obj, &ptr, "weight")?, &child(&ptr, "weight"), r)?;
        c.add_weight(w, as_i64(field(obj, &ptr, "mult")?, &child(&ptr, "mult"))?);
    }
    Ok(c)
}

fn violation_to_json(v: &Violation) -> Value {
    let chart = |c: &Chart| match c {
        Chart::Zero => "0",
        Chart::Infinity => "inf",
    };
    let mut out = match v {
        Violation::Shape(s) => json!({"kind": "shape", "detail": s}),
        Violation::WeightLength {
            chart: c,
            index,
            expected,
            found,
        } => json!({"kind": "weight_length", "chart": chart(c), "index": index, "expected": expected, "found": found}),
        Violation::DetNotMonomial { det } => json!({"kind": "det_not_monomial", "det": det}),
        Violation::Equivariance {
            row,
            col,
            exponent,
            found,
            expected,
        } => json!({
            "kind": "equivariance",
            "row": row,
            "col": col,
            "exponent": exponent,
            "found": weight_to_json(found),
            "expected": weight_to_json(expected),
        }),
    };
    out["message"] = json!(v.to_string());
    out
}

pub fn validation_to_json(r: &ValidationReport) -> Value {
    json!({
        "valid": r.is_valid(),
        "violations": r.violations.iter().map(violation_to_json).collect::<Vec<_>>(),
    })
}

pub fn certificate_report_to_json(r: &CertificateReport) -> Value {
    json!({
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "id": c.id,
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn cohomology_to_json(h0: &Character, h1: &Character, euler: &EulerReport) -> Value {
    json!({
        "rank": euler.rank,
        "degree": euler.degree,
        "h0": {"dim": h0.dim(), "character": character_to_json(h0)},
        "h1": {"dim": h1.dim(), "character": character_to_json(h1)},
        "riemannRoch": euler.riemann_roch,
        "serreDuality": euler.serre_duality,
    })
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::splitting::equivariant_split;

    const E3: &str = r#"{
        "rank": 2,
        "torus": {"rank": 1, "a": [1]},
        "lambda0": [[0], [-1]],
        "lambdaInf": [[-1], [-2]],
        "A": [[[[-1, 1, 1]], [[0, 1, 1]]], [[], [[-1, 1, 1]]]]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let inst = parse_instance(E3).unwrap();
        assert!(inst.bundle.validate().is_valid());
        assert_eq!(inst.expected, None);
        let again = instance_from_value(&instance_to_json(&inst.bundle, None)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn big_and_fractional_coefficients() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let q = Rational::new(big, BigInt::from(7));
        let p = LaurentPoly::monomial(q.clone(), -3) + LaurentPoly::monomial(rat(-3, 2), 1);
        let v = poly_to_json(&p);
        assert!(q.numer().to_i64().is_none());
        assert_eq!(v[0][1], json!(q.numer().to_string()));
        assert_eq!(v[1], json!([1, -3, 2]));
        assert_eq!(poly_from_json(&v, "").unwrap(), p);
    }

    #[test]
    fn errors_carry_pointer() {
        let bad = E3.replace("[[0], [-1]]", "[[0], [-1, 2]]");
        match parse_instance(&bad) {
            Err(Error::Parse { pointer, .. }) => assert_eq!(pointer, "/lambda0/1"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = E3.replace("[[-1, 1, 1]], [[0, 1, 1]]", "[[-1, 1, 0]], [[0, 1, 1]]");
        match parse_instance(&bad) {
            Err(Error::Parse { pointer, .. }) => assert_eq!(pointer, "/A/0/0/0/2"),
            other => panic!("unexpected {other:?}"),
        }
        match parse_instance("{\"rank\": 1}") {
            Err(Error::Parse { pointer, .. }) => assert_eq!(pointer, "/lambda0"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn certificate_round_trip() {
        let inst = parse_instance(E3).unwrap();
        let (_, cert) = equivariant_split(&inst.bundle).unwrap();
        let text = to_string(&certificate_to_json(&cert));
        assert_eq!(parse_certificate(&text, 2, 1).unwrap(), cert);
    }

    #[test]
    fn output_keys_are_sorted() {
        let s = to_string(&json!({"b": 1, "a": 2}));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
