//! Byte-stable number and document formatting.

use serde_json::Value;

use crate::SCHEMA;

/// Round to 12 significant digits; `-0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal that round-trips the 12-digit rounding of `x`;
/// scientific notation outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON document with the schema tag first and rounded floats.
pub fn json_document(invalid: bool, body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), Value::from(SCHEMA));
    doc.insert("invalid_representation".into(), Value::from(invalid));
    if let Value::Object(fields) = body {
        doc.extend(fields);
    }
    let mut doc = Value::Object(doc);
    round_floats(&mut doc);
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON serialization");
    s.push('\n');
    s
}

/// Marker line for text and CSV output built from a forced representation.
pub fn invalid_marker(invalid: bool) -> &'static str {
    if invalid {
        "# invalid_representation: true\n"
    } else {
        ""
    }
}

/// Left-aligned, space-padded table.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if k + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  ", w = *w));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
