//! Exact JSON encodings: integers as numbers when they fit in `i64`,
//! otherwise as decimal strings; rationals always as `"p/q"` strings
//! (`"p"` when the denominator is 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::forms::{FiniteQuadraticForm, TorsionElement};
use crate::linalg::{IntMat, RatMat};

pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn rat(v: &BigRational) -> Value {
    json!(v.to_string())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn int_mat(m: &IntMat) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

pub fn rat_mat(m: &RatMat) -> Value {
    Value::Array((0..m.rows()).map(|i| rats(m.row(i))).collect())
}

pub fn element(x: &TorsionElement) -> Value {
    json!(x.coeffs())
}

pub fn form(f: &FiniteQuadraticForm) -> Value {
    let n = f.generator_count();
    let b: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| rat(f.b_gen(i, j))).collect()))
        .collect();
    let q: Value = if f.quadratic_defined() {
        Value::Array((0..n).map(|i| rat(f.q_gen(i))).collect())
    } else {
        Value::Null
    };
    json!({"orders": f.orders(), "b": b, "q": q})
}

/// Pretty-printed with sorted keys (serde_json's default map is ordered) and
/// a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Whether any number in `v` is a float.
pub fn contains_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(a) => a.iter().any(contains_float),
        Value::Object(o) => o.values().any(contains_float),
        _ => false,
    }
}

/// Whether every object in `v` lists its keys in sorted order.
pub fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(keys_sorted),
        Value::Object(o) => {
            let keys: Vec<&String> = o.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && o.values().all(keys_sorted)
        }
        _ => true,
    }
}
