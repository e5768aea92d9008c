use std::fmt::Write;

use dtloc::{HalfLaurent, TruncatedSeries};
use num_bigint::BigInt;
use serde_json::{Number, Value};

pub fn big(n: &BigInt) -> Value {
    Value::Number(
        n.to_string()
            .parse::<Number>()
            .expect("integers are valid JSON numbers"),
    )
}

/// `[[exponent, coefficient], ...]` in ascending exponent.
pub fn laurent_json(h: &HalfLaurent) -> Value {
    Value::Array(
        h.terms()
            .map(|(e, c)| Value::Array(vec![Value::from(e), big(c)]))
            .collect(),
    )
}

pub fn series_json(s: &TruncatedSeries) -> Value {
    Value::Array(s.coeffs().iter().map(laurent_json).collect())
}

pub fn series_table(s: &TruncatedSeries) -> String {
    let mut out = String::new();
    for (n, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "q^{n:<3} {c}").unwrap();
    }
    out
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn ints(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::from(x)).collect())
}
