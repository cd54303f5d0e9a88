//! Minimal ordered JSON emission.
//!
//! Records are written with keys in insertion order and floats in the
//! fixed 17-significant-digit form, so identical inputs produce
//! byte-identical output.

use rotdist_core::linalg::RealMatrix;
use rotdist_core::textmat::format_f64;

pub enum Value {
    Str(String),
    Num(f64),
    Int(i64),
    Bool(bool),
    Arr(Vec<Value>),
    Obj(Vec<(String, Value)>),
}

impl Value {
    pub fn str(s: impl Into<String>) -> Self {
        Value::Str(s.into())
    }

    pub fn obj(fields: Vec<(&str, Value)>) -> Self {
        Value::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn matrix(m: &RealMatrix) -> Self {
        Value::Arr(
            (0..m.rows())
                .map(|i| {
                    Value::Arr((0..m.cols()).map(|j| Value::Num(m[(i, j)])).collect())
                })
                .collect(),
        )
    }

    pub fn floats(v: &[f64]) -> Self {
        Value::Arr(v.iter().map(|x| Value::Num(*x)).collect())
    }

    fn render(&self, out: &mut String) {
        match self {
            Value::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32))
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Value::Num(x) => out.push_str(&format_f64(*x)),
            Value::Int(k) => out.push_str(&k.to_string()),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render(out);
                }
                out.push(']');
            }
            Value::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Value::Str(k.clone()).render(out);
                    out.push(':');
                    v.render(out);
                }
                out.push('}');
            }
        }
    }
}

/// One output record: `{"command": ..., "inputs": [...], <tail>}`.
pub fn record(command: &str, inputs: &[String], tail_key: &str, tail: Value) -> String {
    let rec = Value::Obj(vec![
        ("command".to_string(), Value::str(command)),
        (
            "inputs".to_string(),
            Value::Arr(inputs.iter().map(|s| Value::str(s.clone())).collect()),
        ),
        (tail_key.to_string(), tail),
    ]);
    let mut out = String::new();
    rec.render(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_compact_and_ordered() {
        let line = record(
            "dist",
            &["a.mat".into(), "b.mat".into()],
            "value",
            Value::Num(2.0),
        );
        assert_eq!(
            line,
            r#"{"command":"dist","inputs":["a.mat","b.mat"],"value":2.0000000000000000e0}"#
        );
    }

    #[test]
    fn strings_are_escaped() {
        let mut out = String::new();
        Value::str("a\"b\\c\nd").render(&mut out);
        assert_eq!(out, r#""a\"b\\c\nd""#);
    }

    #[test]
    fn nested_values_render() {
        let v = Value::obj(vec![
            ("pass", Value::Bool(true)),
            ("xs", Value::floats(&[1.0, -0.0])),
            ("k", Value::Int(3)),
        ]);
        let mut out = String::new();
        v.render(&mut out);
        assert_eq!(
            out,
            r#"{"pass":true,"xs":[1.0000000000000000e0,0.0000000000000000e0],"k":3}"#
        );
    }
}
