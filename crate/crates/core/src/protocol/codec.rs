//! On-disk protocol format.
//!
//! A protocol file is a UTF-8 JSON document in one of two shapes.
//!
//! Explicit form:
//! ```json
//! {"dims":{"A":2,"B":2},"psi":[[re,im],...],"E0":[[[re,im],...],...]}
//! ```
//! with `psi` of length `A*B` (index `i*B + j`) and `E0` a row-major `B x B`
//! complex matrix.
//!
//! Aligned shorthand for instances diagonal in the standard basis:
//! ```json
//! {"aligned":{"a":[...],"b":[...]}}
//! ```
//! which expands to ψ = Σ √a_i |i>|i> and E0 = diag(b).
//!
//! Numbers are written with 17 significant digits, so serialize → parse is
//! lossless for f64. Unknown keys are rejected.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::Protocol;
use crate::qla::ComplexMatrix;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitDoc {
    dims: DimsDoc,
    psi: Vec<[f64; 2]>,
    #[serde(rename = "E0")]
    e0: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct DimsDoc {
    #[serde(rename = "A")]
    a: usize,
    #[serde(rename = "B")]
    b: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlignedDoc {
    aligned: AlignedProfileDoc,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AlignedProfileDoc {
    a: Vec<f64>,
    b: Vec<f64>,
}

fn parse_error(context: &str, message: impl ToString) -> Error {
    Error::Parse { context: context.to_string(), message: message.to_string() }
}

/// Expand the aligned shorthand into a validated protocol.
pub fn aligned_protocol(a: &[f64], b: &[f64]) -> Result<Protocol> {
    if a.len() != b.len() {
        return Err(parse_error(
            "aligned",
            format!("a has {} entries but b has {}", a.len(), b.len()),
        ));
    }
    if a.is_empty() {
        return Err(parse_error("aligned.a", "profile must not be empty"));
    }
    if let Some(bad) = a.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(parse_error("aligned.a", format!("entry {bad} is not a probability")));
    }
    if let Some(bad) = b.iter().find(|&&x| !x.is_finite()) {
        return Err(parse_error("aligned.b", format!("entry {bad} is not finite")));
    }
    let k = a.len();
    let mut psi = vec![Complex64::new(0.0, 0.0); k * k];
    for (i, &ai) in a.iter().enumerate() {
        psi[i * k + i] = Complex64::new(ai.sqrt(), 0.0);
    }
    Protocol::validate(k, k, psi, ComplexMatrix::from_diag(b))
}

/// Parse a protocol document (either form) and validate it.
pub fn parse_protocol(text: &str) -> Result<Protocol> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        parse_error(&format!("line {}, column {}", e.line(), e.column()), &e)
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| parse_error("document", "expected a JSON object"))?;

    if obj.contains_key("aligned") {
        let doc: AlignedDoc =
            serde_json::from_value(value).map_err(|e| parse_error("aligned document", &e))?;
        aligned_protocol(&doc.aligned.a, &doc.aligned.b)
    } else {
        let doc: ExplicitDoc =
            serde_json::from_value(value).map_err(|e| parse_error("protocol document", &e))?;
        let psi: Vec<Complex64> = doc.psi.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let db = doc.dims.b;
        if doc.e0.len() != db || doc.e0.iter().any(|row| row.len() != db) {
            return Err(parse_error("E0", format!("expected a row-major {db}x{db} matrix")));
        }
        let mut entries = Vec::with_capacity(db * db);
        for row in &doc.e0 {
            for [re, im] in row {
                entries.push(Complex64::new(*re, *im));
            }
        }
        Protocol::validate(doc.dims.a, doc.dims.b, psi, ComplexMatrix::new(db, entries)?)
    }
}

/// Formatter that writes every float with 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

#[derive(Serialize)]
struct ExplicitOut {
    dims: DimsDoc,
    psi: Vec<[f64; 2]>,
    #[serde(rename = "E0")]
    e0: Vec<Vec<[f64; 2]>>,
}

/// Serialize in the explicit form.
pub fn serialize_protocol(p: &Protocol) -> String {
    let psi = p.psi().amplitudes().iter().map(|z| [z.re, z.im]).collect();
    let db = p.dim_b();
    let e0 = (0..db)
        .map(|i| (0..db).map(|j| { let z = p.e0().get(i, j); [z.re, z.im] }).collect())
        .collect();
    to_json_17(&ExplicitOut { dims: DimsDoc { a: p.dim_a(), b: p.dim_b() }, psi, e0 })
}

/// Serialize an aligned profile in the shorthand form.
pub fn serialize_aligned(a: &[f64], b: &[f64]) -> String {
    #[derive(Serialize)]
    struct AlignedOut {
        aligned: AlignedProfileDoc,
    }
    to_json_17(&AlignedOut { aligned: AlignedProfileDoc { a: a.to_vec(), b: b.to_vec() } })
}
