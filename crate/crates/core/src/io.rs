//! JSON encodings of tensors and file helpers.
//!
//! Dense: `{"shape": [n₀, …], "entries": [x, …]}` in row-major order.
//! Sparse: `{"shape": [n₀, …], "coords": [[i₀, …], …], "values": [x, …]}`.
//! Scalars are `"p/q"` strings, integers, or `{"a", "b", "delta"}` objects.

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symmetric::HomPoly;
use crate::tensor::{DenseTensor, Shape};

pub fn tensor_to_json(t: &DenseTensor) -> Value {
    serde_json::json!({ "shape": t.dims(), "entries": t.entries() })
}

pub fn tensor_from_json(v: &Value) -> Result<DenseTensor> {
    let bad = |what: &str| Error::Parse(format!("tensor: {what}"));
    let dims = v
        .get("shape")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array \"shape\""))?
        .iter()
        .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| bad("shape entries must be positive integers")))
        .collect::<Result<Vec<_>>>()?;
    let shape = Shape::new(dims)?;
    let scalars = |key: &str| -> Result<Option<Vec<Scalar>>> {
        match v.get(key) {
            None => Ok(None),
            Some(a) => a
                .as_array()
                .ok_or_else(|| bad(&format!("\"{key}\" is not an array")))?
                .iter()
                .map(|x| Scalar::from_json(x).map_err(Error::from))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    };
    if let Some(entries) = scalars("entries")? {
        if entries.len() != shape.len() {
            return Err(bad(&format!("{} entries for shape {:?} of size {}", entries.len(), shape.dims(), shape.len())));
        }
        return DenseTensor::new(shape, entries);
    }
    let values = scalars("values")?.ok_or_else(|| bad("needs \"entries\" or \"coords\"/\"values\""))?;
    let coords = v.get("coords").and_then(Value::as_array).ok_or_else(|| bad("sparse form without \"coords\""))?;
    if coords.len() != values.len() {
        return Err(bad(&format!("{} coords but {} values", coords.len(), values.len())));
    }
    let mut entries = vec![Scalar::zero(); shape.len()];
    let mut seen = vec![false; shape.len()];
    for (c, x) in coords.iter().zip(values) {
        let idx = c
            .as_array()
            .ok_or_else(|| bad("coordinate is not an array"))?
            .iter()
            .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| bad("coordinates must be non-negative integers")))
            .collect::<Result<Vec<_>>>()?;
        let off = shape.offset(&idx)?;
        if std::mem::replace(&mut seen[off], true) {
            return Err(bad(&format!("coordinate {idx:?} listed twice")));
        }
        entries[off] = x;
    }
    DenseTensor::new(shape, entries)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_tensor(path: &Path) -> Result<DenseTensor> {
    tensor_from_json(&read_json(path)?)
}

pub fn read_poly(path: &Path) -> Result<HomPoly> {
    HomPoly::from_json(&read_json(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_agree() {
        let dense = serde_json::json!({ "shape": [2, 2, 2], "entries": [0, 1, 1, 0, 1, 0, 0, 0] });
        let sparse = serde_json::json!({ "shape": [2, 2, 2], "coords": [[0, 0, 1], [0, 1, 0], [1, 0, 0]], "values": ["1", "1", "1"] });
        let a = tensor_from_json(&dense).unwrap();
        assert_eq!(a, tensor_from_json(&sparse).unwrap());
        assert_eq!(tensor_from_json(&tensor_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn malformed_inputs() {
        for v in [
            serde_json::json!({ "shape": [2, 2], "entries": [1, 2, 3] }),
            serde_json::json!({ "shape": [2, 0], "entries": [] }),
            serde_json::json!({ "shape": [2], "coords": [[2]], "values": [1] }),
            serde_json::json!({ "shape": [2], "coords": [[0], [0]], "values": [1, 2] }),
            serde_json::json!({ "shape": [2], "entries": ["1/0", "1"] }),
            serde_json::json!({ "entries": [1] }),
        ] {
            assert!(tensor_from_json(&v).is_err(), "{v}");
        }
    }

    #[test]
    fn quadratic_entries_round_trip() {
        let v = serde_json::json!({ "shape": [2], "entries": [{ "a": "1/2", "b": "3", "delta": 5 }, "2"] });
        let t = tensor_from_json(&v).unwrap();
        assert_eq!(t.delta().unwrap().value(), &5.into());
        assert_eq!(tensor_from_json(&tensor_to_json(&t)).unwrap(), t);
    }
}
