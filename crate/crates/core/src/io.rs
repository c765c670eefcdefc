//! JSON encodings of operators and vectors.
//!
//! An operator is `{"n": 2, "field": "real", "entries": [[1, 0], [0, 2]]}`;
//! complex entries are written as `[re, im]` pairs. A vector is a bare array
//! of the same entry forms, optionally wrapped as `{"x": [...]}`.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::operator::{Field, Operator};
use serde_json::{json, Value};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn entry(v: &Value) -> Result<C64> {
    match v {
        Value::Number(x) => x.as_f64().map(|re| C64::new(re, 0.0)).ok_or_else(|| parse_err("bad number")),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| parse_err("complex entry needs numeric parts"))?;
            let im = pair[1].as_f64().ok_or_else(|| parse_err("complex entry needs numeric parts"))?;
            Ok(C64::new(re, im))
        }
        other => Err(parse_err(format!("entry must be a number or [re, im], got {other}"))),
    }
}

pub fn parse_field(s: &str) -> Result<Field> {
    match s {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        other => Err(parse_err(format!("field must be \"real\" or \"complex\", got {other:?}"))),
    }
}

pub fn field_name(field: Field) -> &'static str {
    match field {
        Field::Real => "real",
        Field::Complex => "complex",
    }
}

pub fn operator_from_json(v: &Value) -> Result<Operator> {
    let obj = v.as_object().ok_or_else(|| parse_err("operator must be a JSON object"))?;
    let rows = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"entries\" array"))?;
    let n = match obj.get("n") {
        Some(n) => n.as_u64().ok_or_else(|| parse_err("\"n\" must be a positive integer"))? as usize,
        None => rows.len(),
    };
    let field = match obj.get("field") {
        Some(f) => parse_field(f.as_str().ok_or_else(|| parse_err("\"field\" must be a string"))?)?,
        None => Field::Real,
    };
    if rows.len() != n {
        return Err(parse_err(format!("expected {n} rows, got {}", rows.len())));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(parse_err(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for e in row {
            data.push(entry(e)?);
        }
    }
    if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
        return Err(parse_err("real operator has a nonzero imaginary part"));
    }
    let t = Operator::complex(n, data)?;
    t.with_field(field)
}

pub fn parse_operator(text: &str) -> Result<Operator> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    operator_from_json(&v)
}

fn entry_json(z: C64, field: Field) -> Value {
    match field {
        Field::Real => json!(z.re),
        Field::Complex => json!([z.re, z.im]),
    }
}

pub fn operator_to_json(t: &Operator) -> Value {
    let n = t.n();
    let entries: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| entry_json(t.entry(i, j), t.field())).collect()))
        .collect();
    json!({"n": n, "field": field_name(t.field()), "entries": entries})
}

pub fn vector_from_json(v: &Value) -> Result<Vec<C64>> {
    let arr = match v {
        Value::Object(obj) => obj.get("x").ok_or_else(|| parse_err("vector object needs an \"x\" key"))?,
        other => other,
    };
    let arr = arr.as_array().ok_or_else(|| parse_err("vector must be an array"))?;
    if arr.is_empty() {
        return Err(parse_err("vector is empty"));
    }
    arr.iter().map(entry).collect()
}

pub fn parse_vector(text: &str) -> Result<Vec<C64>> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    vector_from_json(&v)
}

pub fn vector_to_json(x: &[C64], field: Field) -> Value {
    Value::Array(x.iter().map(|&z| entry_json(z, field)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"n": 2, "field": "complex", "entries": [[[1, 0], [0, -1]], [2, [0.5, 0.25]]]}"#;
        let t = parse_operator(text).unwrap();
        assert_eq!(t.entry(0, 1), C64::new(0.0, -1.0));
        assert_eq!(t.entry(1, 0), C64::new(2.0, 0.0));
        assert_eq!(operator_from_json(&operator_to_json(&t)).unwrap(), t);
        let r = parse_operator(r#"{"n":2,"field":"real","entries":[[1,0],[0,2]]}"#).unwrap();
        assert_eq!(r.field(), Field::Real);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "not json",
            r#"{"n": 2, "entries": [[1, 0]]}"#,
            r#"{"n": 2, "entries": [[1, 0], [0]]}"#,
            r#"{"n": 1, "field": "real", "entries": [[[1, 2]]]}"#,
            r#"{"n": 1, "field": "quaternion", "entries": [[1]]}"#,
            r#"{"n": 1, "entries": [["a"]]}"#,
        ] {
            assert!(matches!(parse_operator(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("[1, 0]").unwrap(), vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(parse_vector(r#"{"x": [[0, 1]]}"#).unwrap(), vec![C64::new(0.0, 1.0)]);
        assert!(parse_vector("[]").is_err());
    }
}
