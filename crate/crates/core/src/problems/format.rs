//! JSON instance files.
//!
//! ```json
//! {
//!   "equalities": [],
//!   "family": "biobj_linkn",
//!   "inequalities": [[{"coeff": "3/1", "exps": [0, 0]}, {"coeff": "-2/1", "exps": [1, 0]}]],
//!   "n": 2,
//!   "objectives": ["-x1 - 2*x2", "x1 + x2"],
//!   "seed": 7
//! }
//! ```
//!
//! Polynomials are written as term lists; on input a string in the
//! expression grammar of [`parse_polynomial`] is accepted as well. `family`
//! and `seed` may be omitted or `null` for hand-written instances. Optional
//! `bounds` attach integer upper bounds and `data` carries the raw generator
//! arrays.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::poly::{
    format_rational, parse_polynomial, parse_rational, Monomial, Polynomial, VarContext,
};
use crate::systems::ProblemInstance;

use super::{Family, FamilySpec, GeneratedInstance, RawData};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        path: path.to_string(),
        message: message.into(),
    }
}

fn poly_value(p: &Polynomial) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!({"coeff": format_rational(c), "exps": m.exponents()}))
            .collect(),
    )
}

fn to_value(inst: &GeneratedInstance) -> Value {
    let p = &inst.problem;
    let list = |ps: &[Polynomial]| Value::Array(ps.iter().map(poly_value).collect());
    let mut doc = Map::new();
    doc.insert("n".into(), json!(p.n()));
    doc.insert("family".into(), json!(inst.spec.map(|s| s.family)));
    doc.insert("seed".into(), json!(inst.spec.map(|s| s.seed)));
    doc.insert("objectives".into(), list(p.objectives()));
    doc.insert("inequalities".into(), list(p.inequalities()));
    doc.insert("equalities".into(), list(p.equalities()));
    if let Some(b) = p.bounds() {
        doc.insert("bounds".into(), json!(b));
    }
    if let Some(d) = &inst.data {
        doc.insert(
            "data".into(),
            serde_json::to_value(d).expect("raw data serializes"),
        );
    }
    Value::Object(doc)
}

/// Canonical text of an instance: sorted keys, rationals as `num/den`.
pub fn serialize(inst: &GeneratedInstance) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(inst)).expect("instance serializes");
    s.push('\n');
    s
}

fn parse_poly(v: &Value, ctx: &Arc<VarContext>, path: &str) -> Result<Polynomial, FormatError> {
    match v {
        Value::String(text) => {
            parse_polynomial(text, ctx).map_err(|e| invalid(path, e.to_string()))
        }
        Value::Array(terms) => {
            let n = ctx.len();
            let mut out = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                let here = format!("{path}[{i}]");
                let obj = t
                    .as_object()
                    .ok_or_else(|| invalid(&here, "term must be an object"))?;
                let coeff = match obj.get("coeff") {
                    Some(Value::String(s)) => {
                        parse_rational(s).map_err(|e| invalid(&here, e.to_string()))?
                    }
                    Some(Value::Number(x)) => {
                        x.as_i64().map(crate::poly::rat).ok_or_else(|| {
                            invalid(&here, "coeff must be an integer or a \"num/den\" string")
                        })?
                    }
                    _ => return Err(invalid(&here, "missing coeff")),
                };
                let exps = obj
                    .get("exps")
                    .and_then(Value::as_array)
                    .ok_or_else(|| invalid(&here, "missing exps array"))?;
                if exps.len() != n {
                    return Err(invalid(
                        &here,
                        format!("expected {n} exponents, got {}", exps.len()),
                    ));
                }
                let exps = exps
                    .iter()
                    .map(|e| e.as_u64().and_then(|e| u16::try_from(e).ok()))
                    .collect::<Option<Vec<u16>>>()
                    .ok_or_else(|| {
                        invalid(&here, "exponents must be small non-negative integers")
                    })?;
                out.push((Monomial::from_exponents(&exps), coeff));
            }
            Ok(Polynomial::from_terms(ctx, out))
        }
        _ => Err(invalid(
            path,
            "polynomial must be a term list or an expression string",
        )),
    }
}

fn parse_list(
    doc: &Map<String, Value>,
    key: &str,
    ctx: &Arc<VarContext>,
) -> Result<Vec<Polynomial>, FormatError> {
    match doc.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| parse_poly(v, ctx, &format!("{key}[{i}]")))
            .collect(),
        Some(_) => Err(invalid(key, "expected an array")),
    }
}

/// Parses an instance document. Syntax errors carry line and column,
/// structural errors the path of the offending field.
pub fn deserialize(bytes: &[u8]) -> Result<GeneratedInstance, FormatError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let doc = value
        .as_object()
        .ok_or_else(|| invalid("$", "expected an object"))?;
    let n = doc
        .get("n")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| invalid("n", "expected a positive integer"))? as usize;
    let family = match doc.get("family") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(
            s.parse::<Family>()
                .map_err(|e| invalid("family", e.to_string()))?,
        ),
        Some(_) => return Err(invalid("family", "expected a string")),
    };
    let seed = match doc.get("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| invalid("seed", "expected an unsigned integer"))?,
        ),
    };
    let spec = match (family, seed) {
        (Some(family), Some(seed)) => {
            Some(FamilySpec::new(family, n, seed).map_err(|e| invalid("family", e.to_string()))?)
        }
        (None, None) => None,
        _ => return Err(invalid("seed", "family and seed must be given together")),
    };
    let ctx = VarContext::decision(n);
    let objectives = parse_list(doc, "objectives", &ctx)?;
    let inequalities = parse_list(doc, "inequalities", &ctx)?;
    let equalities = parse_list(doc, "equalities", &ctx)?;
    let mut problem = ProblemInstance::in_context(&ctx, objectives, inequalities, equalities)
        .map_err(|e| invalid("objectives", e.to_string()))?;
    if let Some(b) = doc.get("bounds").filter(|b| !b.is_null()) {
        let bounds: Vec<u64> =
            serde_json::from_value(b.clone()).map_err(|e| invalid("bounds", e.to_string()))?;
        problem = problem
            .with_bounds(bounds)
            .map_err(|e| invalid("bounds", e.to_string()))?;
    }
    let data = match doc.get("data") {
        None | Some(Value::Null) => None,
        Some(d) => Some(
            serde_json::from_value::<RawData>(d.clone())
                .map_err(|e| invalid("data", e.to_string()))?,
        ),
    };
    Ok(GeneratedInstance {
        spec,
        problem,
        data,
    })
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<GeneratedInstance, FormatError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    deserialize(&bytes)
}
