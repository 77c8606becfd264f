//! JSON wire formats: complexes, chain maps, and the pieces reports embed.
//!
//! Integer and rational entries travel as decimal strings ("3", "-7/2");
//! prime-field entries travel as plain integers in [0, p). Degrees are
//! serialized as string keys. Parsing classifies failures three ways —
//! malformed document, shape mismatch, violated differential identity — and
//! each class carries its own process exit code.

use std::collections::BTreeMap;

use serde_json::{json, Map as JsonMap, Value};

use crate::complex::{ChainComplex, ChainMap, ComplexError, Cx, Homotopy};
use crate::matrix::Matrix;
use crate::ring::RingSpec;

#[derive(thiserror::Error, Debug)]
pub enum WireError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("differential identity violated: {0}")]
    Differential(String),
}

impl WireError {
    /// Exit code for the error class: 2 malformed, 3 shape, 4 differential.
    pub fn exit_code(&self) -> i32 {
        match self {
            WireError::Malformed(_) => 2,
            WireError::Shape(_) => 3,
            WireError::Differential(_) => 4,
        }
    }
}

fn from_complex_error(e: ComplexError) -> WireError {
    match e {
        ComplexError::DifferentialSquare(n) => {
            WireError::Differential(format!("differential does not square to zero at degree {n}"))
        }
        other => WireError::Shape(other.to_string()),
    }
}

/// Parses the `--ring` flag syntax: `Z`, `Q`, or `Fp:<p>` with p prime.
pub fn parse_ring(text: &str) -> Result<RingSpec, WireError> {
    let t = text.trim();
    let ring = match t {
        "Z" => RingSpec::Integers,
        "Q" => RingSpec::Rationals,
        _ => {
            let p = t
                .strip_prefix("Fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| WireError::Malformed(format!("unknown ring `{t}`")))?;
            RingSpec::PrimeField(p)
        }
    };
    ring.validate().map_err(|e| WireError::Malformed(e.to_string()))?;
    Ok(ring)
}

pub fn ring_to_json(ring: RingSpec) -> Value {
    match ring {
        RingSpec::Integers => json!("Z"),
        RingSpec::Rationals => json!("Q"),
        RingSpec::PrimeField(p) => json!({ "Fp": p }),
    }
}

pub fn ring_from_json(v: &Value) -> Result<RingSpec, WireError> {
    let ring = match v {
        Value::String(s) if s == "Z" => RingSpec::Integers,
        Value::String(s) if s == "Q" => RingSpec::Rationals,
        Value::Object(o) => {
            let p = o
                .get("Fp")
                .and_then(Value::as_u64)
                .ok_or_else(|| WireError::Malformed("ring object must be {\"Fp\": p}".into()))?;
            RingSpec::PrimeField(p)
        }
        other => return Err(WireError::Malformed(format!("unrecognized ring {other}"))),
    };
    ring.validate().map_err(|e| WireError::Malformed(e.to_string()))?;
    Ok(ring)
}

fn scalar_to_json(ring: RingSpec, s: &crate::ring::Scalar) -> Value {
    match ring {
        RingSpec::PrimeField(_) => match s {
            crate::ring::Scalar::Fp(v) => json!(v),
            _ => unreachable!("prime-field matrix holds prime-field scalars"),
        },
        _ => Value::String(ring.format_scalar(s)),
    }
}

fn scalar_from_json(ring: RingSpec, v: &Value) -> Result<crate::ring::Scalar, WireError> {
    match v {
        Value::String(s) => {
            ring.parse_scalar(s).map_err(|e| WireError::Malformed(e.to_string()))
        }
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| WireError::Malformed(format!("non-integer entry {n}")))?;
            Ok(ring.from_i64(i))
        }
        other => Err(WireError::Malformed(format!("unrecognized matrix entry {other}"))),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let ring = m.ring();
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| scalar_to_json(ring, m.get(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(
    ring: RingSpec,
    v: &Value,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<Matrix, WireError> {
    let arr = v
        .as_array()
        .ok_or_else(|| WireError::Malformed(format!("{what}: matrix must be an array of rows")))?;
    if arr.len() != rows {
        return Err(WireError::Shape(format!("{what}: expected {rows} rows, found {}", arr.len())));
    }
    let mut m = Matrix::zero(ring, rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| {
            WireError::Malformed(format!("{what}: row {i} must be an array"))
        })?;
        if row.len() != cols {
            return Err(WireError::Shape(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, scalar_from_json(ring, e)?);
        }
    }
    Ok(m)
}

fn degree_key(v: &str) -> Result<i64, WireError> {
    v.parse::<i64>().map_err(|_| WireError::Malformed(format!("degree key `{v}` is not an integer")))
}

pub fn complex_to_json(cx: &Cx) -> Value {
    let mut ranks = JsonMap::new();
    let mut d = JsonMap::new();
    for n in cx.degrees() {
        ranks.insert(n.to_string(), json!(cx.rank(n)));
        let dn = cx.d(n);
        if !dn.is_zero() {
            d.insert(n.to_string(), matrix_to_json(&dn));
        }
    }
    json!({ "ring": ring_to_json(cx.ring()), "ranks": ranks, "d": d })
}

pub fn complex_from_json(v: &Value) -> Result<Cx, WireError> {
    let obj = v
        .as_object()
        .ok_or_else(|| WireError::Malformed("complex must be a JSON object".into()))?;
    let ring = ring_from_json(
        obj.get("ring").ok_or_else(|| WireError::Malformed("complex is missing \"ring\"".into()))?,
    )?;
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    if let Some(r) = obj.get("ranks") {
        let r = r
            .as_object()
            .ok_or_else(|| WireError::Malformed("\"ranks\" must be an object".into()))?;
        for (k, val) in r {
            let n = degree_key(k)?;
            let rank = val
                .as_u64()
                .ok_or_else(|| WireError::Malformed(format!("rank at degree {n} must be ≥ 0")))?;
            if rank > 0 {
                ranks.insert(n, rank as usize);
            }
        }
    }
    let rank = |n: i64| ranks.get(&n).copied().unwrap_or(0);
    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    if let Some(d) = obj.get("d") {
        let d = d
            .as_object()
            .ok_or_else(|| WireError::Malformed("\"d\" must be an object".into()))?;
        for (k, val) in d {
            let n = degree_key(k)?;
            let m = matrix_from_json(ring, val, rank(n + 1), rank(n), &format!("d at degree {n}"))?;
            diffs.insert(n, m);
        }
    }
    ChainComplex::build(ring, ranks, diffs).map_err(from_complex_error)
}

/// Serializes a map in context, referencing its endpoints by identifier.
pub fn map_to_json(f: &ChainMap, source_id: &str, target_id: &str) -> Value {
    json!({
        "source": source_id,
        "target": target_id,
        "degree": f.degree(),
        "components": components_to_json(f),
    })
}

fn components_to_json(f: &ChainMap) -> Value {
    let mut comps = JsonMap::new();
    for n in f.source().degrees() {
        let m = f.comp(n);
        if !m.is_zero() {
            comps.insert(n.to_string(), matrix_to_json(&m));
        }
    }
    Value::Object(comps)
}

/// Report embedding of a map: degree and nonzero components only, with the
/// endpoints implied by the surrounding construction.
pub fn map_body_to_json(f: &ChainMap) -> Value {
    json!({ "degree": f.degree(), "components": components_to_json(f) })
}

/// Report embedding of a homotopy certificate: both composites and the
/// degree −1 witness, everything re-checkable.
pub fn homotopy_to_json(h: &Homotopy) -> Value {
    json!({
        "lhs": map_body_to_json(h.lhs()),
        "rhs": map_body_to_json(h.rhs()),
        "witness": map_body_to_json(h.witness()),
    })
}

/// Either the string `"exact"` or a serialized homotopy certificate; the
/// shape every per-cell report entry uses.
pub fn exactness_to_json(witness: Option<&Homotopy>) -> Value {
    match witness {
        None => json!("exact"),
        Some(h) => homotopy_to_json(h),
    }
}

pub fn map_from_json(
    v: &Value,
    complexes: &BTreeMap<String, Cx>,
) -> Result<ChainMap, WireError> {
    let obj = v
        .as_object()
        .ok_or_else(|| WireError::Malformed("map must be a JSON object".into()))?;
    let endpoint = |key: &str| -> Result<Cx, WireError> {
        let id = obj
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| WireError::Malformed(format!("map is missing \"{key}\"")))?;
        complexes
            .get(id)
            .cloned()
            .ok_or_else(|| WireError::Malformed(format!("map references unknown complex `{id}`")))
    };
    let source = endpoint("source")?;
    let target = endpoint("target")?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_i64)
        .ok_or_else(|| WireError::Malformed("map is missing an integer \"degree\"".into()))?;
    let mut comps: BTreeMap<i64, Matrix> = BTreeMap::new();
    if let Some(c) = obj.get("components") {
        let c = c
            .as_object()
            .ok_or_else(|| WireError::Malformed("\"components\" must be an object".into()))?;
        for (k, val) in c {
            let n = degree_key(k)?;
            let m = matrix_from_json(
                source.ring(),
                val,
                target.rank(n + degree),
                source.rank(n),
                &format!("component at degree {n}"),
            )?;
            comps.insert(n, m);
        }
    }
    ChainMap::new(&source, &target, degree, comps).map_err(from_complex_error)
}

/// A parsed input document: named complexes and named maps over them. A bare
/// complex object (one with "ranks") is accepted as the single complex "E".
#[derive(Debug)]
pub struct Input {
    pub complexes: BTreeMap<String, Cx>,
    pub maps: BTreeMap<String, ChainMap>,
}

pub fn parse_input(text: &str) -> Result<Input, WireError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| WireError::Malformed(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| WireError::Malformed("input must be a JSON object".into()))?;
    let mut complexes = BTreeMap::new();
    let mut maps = BTreeMap::new();
    if obj.contains_key("ranks") {
        complexes.insert("E".to_string(), complex_from_json(&v)?);
        return Ok(Input { complexes, maps });
    }
    if let Some(cs) = obj.get("complexes") {
        let cs = cs
            .as_object()
            .ok_or_else(|| WireError::Malformed("\"complexes\" must be an object".into()))?;
        for (id, val) in cs {
            complexes.insert(id.clone(), complex_from_json(val)?);
        }
    }
    if let Some(ms) = obj.get("maps") {
        let ms = ms
            .as_object()
            .ok_or_else(|| WireError::Malformed("\"maps\" must be an object".into()))?;
        for (id, val) in ms {
            maps.insert(id.clone(), map_from_json(val, &complexes)?);
        }
    }
    Ok(Input { complexes, maps })
}

/// Looks up a required map and enforces the chain condition when the
/// operation needs an honest chain map (exit class 4 when violated).
pub fn require_chain_map(input: &Input, name: &str) -> Result<ChainMap, WireError> {
    let f = input
        .maps
        .get(name)
        .cloned()
        .ok_or_else(|| WireError::Malformed(format!("input does not define map `{name}`")))?;
    if !f.is_chain_map() {
        return Err(WireError::Differential(format!(
            "map `{name}` does not commute with the differentials"
        )));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_chain_map, random_complex, GenParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn complexes_round_trip_canonically() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for ring in [RingSpec::Integers, RingSpec::Rationals, RingSpec::PrimeField(7)] {
            let params = GenParams { ring, min_deg: -2, max_deg: 2, max_rank: 3 };
            let rc = random_complex(&mut rng, &params);
            let v = complex_to_json(&rc.complex);
            let back = complex_from_json(&v).unwrap();
            assert_eq!(*back, *rc.complex);
            let text = serde_json::to_string(&v).unwrap();
            let again = serde_json::to_string(&complex_to_json(&back)).unwrap();
            assert_eq!(text, again);
        }
    }

    #[test]
    fn maps_round_trip_against_their_complexes() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let params = GenParams { ring: RingSpec::Integers, min_deg: -1, max_deg: 2, max_rank: 3 };
        let a = random_complex(&mut rng, &params);
        let b = random_complex(&mut rng, &params);
        let f = random_chain_map(&mut rng, &a, &b);
        let doc = json!({
            "complexes": { "A": complex_to_json(&a.complex), "B": complex_to_json(&b.complex) },
            "maps": { "f": map_to_json(&f, "A", "B") },
        });
        let input = parse_input(&doc.to_string()).unwrap();
        let back = require_chain_map(&input, "f").unwrap();
        assert_eq!(back.comp(0), f.comp(0));
        assert!(back == f);
    }

    #[test]
    fn failure_classes_carry_distinct_exit_codes() {
        assert_eq!(parse_input("{not json").unwrap_err().exit_code(), 2);

        // ragged rows: a shape problem
        let ragged = json!({
            "ring": "Z", "ranks": { "0": 2, "1": 1 }, "d": { "0": [[ "1" ]] }
        });
        assert_eq!(complex_from_json(&ragged).unwrap_err().exit_code(), 3);

        // d² ≠ 0 gets the dedicated class
        let bad = json!({
            "ring": "Z",
            "ranks": { "0": 1, "1": 1, "2": 1 },
            "d": { "0": [["1"]], "1": [["1"]] }
        });
        assert_eq!(complex_from_json(&bad).unwrap_err().exit_code(), 4);

        assert!(matches!(parse_ring("Fp:9"), Err(WireError::Malformed(_))));
        assert!(matches!(parse_ring("GF(4)"), Err(WireError::Malformed(_))));
        assert_eq!(parse_ring("Fp:7").unwrap(), RingSpec::PrimeField(7));

        // a non-chain map where a chain map is required: differential class
        let doc = json!({
            "complexes": {
                "A": { "ring": "Z", "ranks": { "0": 1, "1": 1 }, "d": { "0": [["2"]] } },
                "B": { "ring": "Z", "ranks": { "0": 1, "1": 1 }, "d": { "0": [["1"]] } },
            },
            "maps": { "f": { "source": "A", "target": "B", "degree": 0,
                             "components": { "0": [["1"]], "1": [["1"]] } } },
        });
        let input = parse_input(&doc.to_string()).unwrap();
        assert_eq!(require_chain_map(&input, "f").unwrap_err().exit_code(), 4);
        assert_eq!(require_chain_map(&input, "g").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn scalar_forms_follow_the_ring() {
        let q = RingSpec::Rationals;
        let v = scalar_to_json(q, &q.parse_scalar("-7/2").unwrap());
        assert_eq!(v, json!("-7/2"));
        let p = RingSpec::PrimeField(7);
        assert_eq!(scalar_to_json(p, &p.from_i64(-1)), json!(6));
        assert_eq!(scalar_from_json(p, &json!(6)).unwrap(), p.from_i64(6));
        assert_eq!(scalar_from_json(q, &json!("1/3")).unwrap(), q.parse_scalar("1/3").unwrap());
        assert!(scalar_from_json(q, &json!(2.5)).is_err());
    }
}
