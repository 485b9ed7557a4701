use serde_json::{json, Value};

use super::{Basis, DiffOp};
use crate::error::{Error, Result};
use crate::exactfield::{parse_rat, BigRat, Poly, RatFun};

fn perr(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

fn parse_poly(v: &Value, loc: &str) -> Result<Poly<BigRat>> {
    let arr = v.as_array().ok_or_else(|| perr(loc, "expected an array of coefficients"))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for (i, c) in arr.iter().enumerate() {
        let here = format!("{loc}[{i}]");
        let q = match c {
            Value::Number(n) if n.is_i64() || n.is_u64() => parse_rat(&n.to_string())?,
            Value::String(s) => parse_rat(s).map_err(|_| perr(&here, "not a rational number"))?,
            _ => return Err(perr(here, "expected an integer or a rational string")),
        };
        coeffs.push(q);
    }
    Ok(Poly::new(coeffs, ()))
}

/// Parses `{"basis": "d"|"delta", "coeffs": [{"num": [...], "den": [...]}, ...]}`
/// with coefficients listed leading (highest derivative) first and each
/// polynomial lowest degree first. `den` may be omitted.
pub fn operator_from_value(v: &Value) -> Result<DiffOp<BigRat>> {
    let obj = v.as_object().ok_or_else(|| perr("$", "expected an object"))?;
    let basis = match obj.get("basis").and_then(Value::as_str) {
        Some("d") => Basis::D,
        Some("delta") => Basis::Delta,
        Some(other) => return Err(perr("$.basis", format!("unknown basis '{other}'"))),
        None => return Err(perr("$.basis", "missing string field")),
    };
    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("$.coeffs", "missing array field"))?;
    if coeffs.len() < 2 {
        return Err(perr("$.coeffs", "need at least two coefficients"));
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for (i, c) in coeffs.iter().enumerate() {
        let loc = format!("$.coeffs[{i}]");
        let num = parse_poly(c.get("num").ok_or_else(|| perr(&loc, "missing 'num'"))?, &format!("{loc}.num"))?;
        let den = match c.get("den") {
            Some(d) => parse_poly(d, &format!("{loc}.den"))?,
            None => Poly::one(&()),
        };
        if den.is_zero() {
            return Err(perr(format!("{loc}.den"), "zero denominator"));
        }
        out.push(RatFun::new(num, den)?);
    }
    if out[0].is_zero() {
        return Err(perr("$.coeffs[0]", "leading coefficient is zero"));
    }
    DiffOp::new(basis, out)
}

pub fn operator_from_json(text: &str) -> Result<DiffOp<BigRat>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| perr(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    operator_from_value(&v)
}

fn poly_value(p: &Poly<BigRat>) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| match (c.denom() == &1.into(), i64::try_from(c.numer())) {
                (true, Ok(n)) => json!(n),
                _ => json!(c.to_string()),
            })
            .collect(),
    )
}

pub fn operator_to_json(l: &DiffOp<BigRat>) -> Value {
    let basis = match l.basis() {
        Basis::D => "d",
        Basis::Delta => "delta",
    };
    let coeffs: Vec<Value> =
        l.coeffs().iter().map(|c| json!({"num": poly_value(c.num()), "den": poly_value(c.den())})).collect();
    json!({"basis": basis, "coeffs": coeffs})
}
