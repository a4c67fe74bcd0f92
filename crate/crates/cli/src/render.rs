//! JSON helpers and the TSV view of command output.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use quadfrob::algebra::Polynomial;
use quadfrob::pushforward::SummandKind;

/// Integers that fit in an `i64` become JSON numbers, larger ones strings.
pub fn big(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn kind_json(kind: &SummandKind) -> Value {
    match kind {
        SummandKind::Line(t) => json!({"kind": "line", "twist": t}),
        SummandKind::Spinor(sp, t) => json!({"kind": "spinor", "species": sp.name(), "twist": t}),
    }
}

/// Sparse term list `[[coefficient, [exponents...]], ...]`, coefficients as
/// symmetric residues, in descending monomial order.
pub fn poly_json(poly: &Polynomial) -> Value {
    let p = poly.modulus();
    let mut terms: Vec<Value> = poly.terms().map(|(m, c)| json!([p.signed(c), m.exponents()])).collect();
    terms.reverse();
    json!(terms)
}

/// Flat rows extracted from a JSON payload: the first array of objects
/// found under `rows`, `summands`, `certain`/`possible`, `suites[].cases`,
/// or else the top-level object as a single row.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Table {
    fn from_objects(objects: &[(Option<String>, &Value)], prefix: Option<&str>) -> Table {
        let mut header: Vec<String> = Vec::new();
        if prefix.is_some() {
            header.push(prefix.unwrap().to_string());
        }
        for (_, obj) in objects {
            if let Value::Object(map) = obj {
                for k in map.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
        }
        let rows = objects
            .iter()
            .map(|(tag, obj)| {
                header
                    .iter()
                    .enumerate()
                    .map(|(i, k)| {
                        if i == 0 && prefix.is_some() {
                            tag.clone().unwrap_or_default()
                        } else {
                            obj.get(k).map(cell).unwrap_or_default()
                        }
                    })
                    .collect()
            })
            .collect();
        Table { header, rows }
    }

    pub fn from_json(v: &Value) -> Table {
        if let Some(suites) = v.get("suites").and_then(Value::as_array) {
            let mut objects = Vec::new();
            for s in suites {
                let name = s.get("suite").map(cell);
                for c in s.get("cases").and_then(Value::as_array).into_iter().flatten() {
                    objects.push((name.clone(), c));
                }
            }
            return Table::from_objects(&objects, Some("suite"));
        }
        for key in ["rows", "summands"] {
            if let Some(arr) = v.get(key).and_then(Value::as_array) {
                let objects: Vec<(Option<String>, &Value)> = arr.iter().map(|o| (None, o)).collect();
                return Table::from_objects(&objects, None);
            }
        }
        if v.get("certain").is_some() && v.get("verdict").is_none() {
            let mut objects = Vec::new();
            for key in ["certain", "possible"] {
                for o in v.get(key).and_then(Value::as_array).into_iter().flatten() {
                    objects.push((Some(key.to_string()), o));
                }
            }
            return Table::from_objects(&objects, Some("set"));
        }
        Table::from_objects(&[(None, v)], None)
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header.join("\t"))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}
