//! JSON output: every float with 17 significant digits, short scalar arrays
//! kept on one line.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{Number, Value};

pub fn to_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("output types serialize infallibly");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

/// `v` with 17 significant digits, which round-trips every finite `f64`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        format!("{v:.16e}")
    }
}

fn write_number(out: &mut String, n: &Number) {
    match (n.as_i64(), n.as_u64()) {
        (Some(i), _) if !n.is_f64() => write!(out, "{i}").unwrap(),
        (_, Some(u)) if !n.is_f64() => write!(out, "{u}").unwrap(),
        _ => out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn indent(out: &mut String, depth: usize) {
    out.extend(std::iter::repeat_n("  ", depth));
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 5.0 * std::f64::consts::PI / 13.0, 1e-9, 2.5e20, -7.25, 123456.789] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            let digits = s
                .trim_start_matches('-')
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect::<String>();
            assert_eq!(digits.trim_start_matches('0').len(), 17, "{s}");
        }
        assert_eq!(format_f64(0.0), "0.0");
    }

    #[test]
    fn layout() {
        let v = serde_json::json!({"a": [1, 2.5], "b": [[0.0, 1.0]], "c": {}});
        let s = to_string(&v);
        assert_eq!(
            s,
            "{\n  \"a\": [1, 2.5000000000000000],\n  \"b\": [\n    [0.0, 1.0000000000000000]\n  ],\n  \"c\": {}\n}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
