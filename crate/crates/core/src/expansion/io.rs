//! Coefficient files.
//!
//! A file is one JSON object: `dim`, `kind` (`"zonal"` or `"full"`), `pole`
//! (zonal only, `dim` reals) and `coeffs` (zonal: flat array; full: one array
//! per degree, block `k` of length `d_k` in the order of [`super::basis`]).

use serde_json::{json, Map, Value};

use super::{ExpansionKind, HarmonicExpansion, MultiplierSequence};
use crate::error::{Error, Result};
use crate::report::to_json_string;

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::invalid(name, "missing"))
}

fn real(v: &Value, what: impl Fn() -> String) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::invalid("coeffs", format!("{} is not a number", what())))
}

fn reals(v: &Value, name: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::invalid(name, "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_f64()
                .ok_or_else(|| Error::invalid(name, format!("entry {i} is not a number")))
        })
        .collect()
}

/// Parsed but not yet validated file contents.
struct Raw {
    dim: usize,
    kind: ExpansionKind,
    pole: Option<Vec<f64>>,
    blocks: Vec<Vec<f64>>,
}

fn parse_raw(text: &str) -> Result<Raw> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid("file", format!("not valid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::invalid("file", "expected a JSON object"))?;
    let dim = field(obj, "dim")?
        .as_u64()
        .ok_or_else(|| Error::invalid("dim", "expected a non-negative integer"))? as usize;
    let kind = match field(obj, "kind")?.as_str() {
        Some("zonal") => ExpansionKind::Zonal,
        Some("full") => ExpansionKind::Full,
        _ => return Err(Error::invalid("kind", "expected \"zonal\" or \"full\"")),
    };
    let coeffs = field(obj, "coeffs")?
        .as_array()
        .ok_or_else(|| Error::invalid("coeffs", "expected an array"))?;
    let blocks = match kind {
        ExpansionKind::Zonal => coeffs
            .iter()
            .enumerate()
            .map(|(k, v)| real(v, || format!("coefficient {k}")).map(|x| vec![x]))
            .collect::<Result<_>>()?,
        ExpansionKind::Full => coeffs
            .iter()
            .enumerate()
            .map(|(k, block)| {
                let arr = block
                    .as_array()
                    .ok_or_else(|| Error::invalid("coeffs", format!("block {k} is not an array")))?;
                arr.iter()
                    .enumerate()
                    .map(|(j, v)| real(v, || format!("block {k} entry {j}")))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?,
    };
    let pole = match (kind, obj.get("pole")) {
        (ExpansionKind::Zonal, Some(p)) => Some(reals(p, "pole")?),
        (ExpansionKind::Zonal, None) => return Err(Error::invalid("pole", "missing (required for zonal kind)")),
        (ExpansionKind::Full, Some(Value::Null) | None) => None,
        (ExpansionKind::Full, Some(_)) => {
            return Err(Error::invalid("pole", "only zonal expansions carry a pole"))
        }
    };
    Ok(Raw {
        dim,
        kind,
        pole,
        blocks,
    })
}

pub fn parse_expansion(text: &str) -> Result<HarmonicExpansion> {
    let raw = parse_raw(text)?;
    match raw.kind {
        ExpansionKind::Zonal => HarmonicExpansion::zonal(
            raw.dim,
            raw.pole.expect("checked above"),
            raw.blocks.into_iter().map(|b| b[0]).collect(),
        ),
        ExpansionKind::Full => HarmonicExpansion::full(raw.dim, raw.blocks),
    }
}

/// Multiplier files share the layout; a zonal multiplier's pole is optional and ignored.
pub fn parse_multiplier(text: &str) -> Result<MultiplierSequence> {
    let mut patched: Value =
        serde_json::from_str(text).map_err(|e| Error::invalid("file", format!("not valid JSON: {e}")))?;
    if let Some(obj) = patched.as_object_mut() {
        if obj.get("kind").and_then(Value::as_str) == Some("zonal") && !obj.contains_key("pole") {
            let dim = obj.get("dim").and_then(Value::as_u64).unwrap_or(0) as usize;
            let mut pole = vec![0.0; dim];
            if let Some(last) = pole.last_mut() {
                *last = 1.0;
            }
            obj.insert("pole".into(), json!(pole));
        }
    }
    let raw = parse_raw(&patched.to_string())?;
    match raw.kind {
        ExpansionKind::Zonal => {
            MultiplierSequence::zonal(raw.dim, raw.blocks.into_iter().map(|b| b[0]).collect())
        }
        ExpansionKind::Full => MultiplierSequence::full(raw.dim, raw.blocks),
    }
}

pub fn write_expansion(f: &HarmonicExpansion) -> String {
    let coeffs = match f.kind() {
        ExpansionKind::Zonal => json!(f.zonal_coeffs().expect("zonal")),
        ExpansionKind::Full => json!(f.blocks()),
    };
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(f.dim()));
    obj.insert("kind".into(), json!(f.kind().as_str()));
    if let Some(p) = f.pole() {
        obj.insert("pole".into(), json!(p));
    }
    obj.insert("coeffs".into(), coeffs);
    to_json_string(&Value::Object(obj))
}
