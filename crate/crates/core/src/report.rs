//! JSON rendering helpers for reports. Maps are sorted, so equal inputs give equal bytes.

use serde_json::{json, Value};

use crate::cert::Certificate;
use crate::descent_matrix::DescentMatrix;
use crate::dstructure::DStructure;
use crate::error::Error;
use crate::linalg::Matrix;
use crate::ring::PresentedRing;

pub fn ring_json(ring: &PresentedRing) -> Value {
    json!({
        "variables": ring.vars(),
        "relations": ring.relations().iter().map(|p| ring.render(p)).collect::<Vec<_>>(),
    })
}

/// Variables, relations and structure images of a D-ring.
pub fn presentation(s: &DStructure) -> Value {
    let mut v = ring_json(s.carrier());
    v["images"] = Value::Array(
        s.render_images()
            .into_iter()
            .map(|(name, coords)| json!({"variable": name, "image": coords}))
            .collect(),
    );
    v
}

pub fn matrix_rows(m: &Matrix, ring: &PresentedRing) -> Value {
    json!(m.render_rows(ring))
}

pub fn descent_matrix(m: &DescentMatrix, a: &PresentedRing) -> Value {
    json!({
        "rendered": m.render(a),
        "rows": matrix_rows(m.matrix(), a),
        "r": m.r(),
        "l": m.l(),
        "invertible": m.invertible(),
        "reason": m.reason(),
        "inverse": m.inverse().map(|inv| matrix_rows(inv, a)),
    })
}

pub fn certificates(certs: &[Certificate]) -> Value {
    json!(certs)
}

pub fn prefixed(prefix: &str, certs: Vec<Certificate>) -> Vec<Certificate> {
    certs
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix}{}", c.name);
            c
        })
        .collect()
}

pub fn error_json(e: &Error) -> Value {
    let mut v = json!({"kind": e.kind(), "message": e.to_string()});
    match e {
        Error::NonInvertibleMatrix { witness, reason } => {
            v["witness"] = json!(witness);
            v["reason"] = json!(reason);
        }
        Error::Parse { context, line, column, .. } => {
            v["context"] = json!(context);
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        _ => {}
    }
    v
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
