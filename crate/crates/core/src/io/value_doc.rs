//! JSON encodings of values, maps, towers and level morphisms.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pro::{LevelMorphism, Tower};
use crate::value::{
    FinAb, FinAbCat, FinAbMap, FinSet, FinSetCat, FinSetMap, ValueCategory, ZMatrix,
};

fn doc_err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Document {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// A value category with a JSON encoding.
pub trait Codec: ValueCategory {
    /// The `"category"` tag of documents.
    const TAG: &'static str;
    fn obj_to_json(x: &Self::Obj) -> Result<Value>;
    fn obj_from_json(v: &Value, at: &str) -> Result<Self::Obj>;
    fn map_to_json(f: &Self::Map) -> Result<Value>;
    fn map_from_json(v: &Value, src: &Self::Obj, dst: &Self::Obj, at: &str) -> Result<Self::Map>;
}

fn as_array<'a>(v: &'a Value, at: &str, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| doc_err(at, format!("expected {what}")))
}

fn as_usize(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| doc_err(at, "expected a non-negative integer"))
}

impl Codec for FinSetCat {
    const TAG: &'static str = "finset";

    /// Repeated display labels get a `#i` suffix so the saved set is a set.
    fn obj_to_json(x: &FinSet) -> Result<Value> {
        let labels = x.labels();
        let unique: Vec<String> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if labels.iter().filter(|m| *m == l).count() > 1 {
                    format!("{l}#{i}")
                } else {
                    l.clone()
                }
            })
            .collect();
        Ok(json!(unique))
    }

    fn obj_from_json(v: &Value, at: &str) -> Result<FinSet> {
        let items = as_array(v, at, "an array of element labels")?;
        let labels = items
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| doc_err(&format!("{at}/{i}"), "expected a string label"))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(doc_err(at, "duplicate element label"));
        }
        Ok(FinSet::labeled(labels))
    }

    fn map_to_json(f: &FinSetMap) -> Result<Value> {
        Ok(json!(f.table()))
    }

    fn map_from_json(v: &Value, src: &FinSet, dst: &FinSet, at: &str) -> Result<FinSetMap> {
        let items = as_array(v, at, "a function table")?;
        let table = items
            .iter()
            .enumerate()
            .map(|(i, x)| as_usize(x, &format!("{at}/{i}")))
            .collect::<Result<Vec<_>>>()?;
        FinSetMap::new(src.clone(), dst.clone(), table).map_err(|e| doc_err(at, e.to_string()))
    }
}

fn matrix_to_json(m: &ZMatrix) -> Result<Value> {
    let rows = m
        .to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.to_i64()
                        .map(Value::from)
                        .ok_or_else(|| Error::Unsupported(format!("entry {x} exceeds 64 bits")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Value::Array)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(rows))
}

fn matrix_from_json(v: &Value, rows: usize, cols: usize, at: &str) -> Result<ZMatrix> {
    let items = as_array(v, at, "an integer matrix (array of rows)")?;
    if items.len() != rows {
        return Err(doc_err(
            at,
            format!("expected {rows} rows, found {}", items.len()),
        ));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, r) in items.iter().enumerate() {
        let here = format!("{at}/{i}");
        let entries = as_array(r, &here, "a matrix row")?;
        if entries.len() != cols {
            return Err(doc_err(
                &here,
                format!("expected {cols} entries, found {}", entries.len()),
            ));
        }
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| doc_err(&format!("{here}/{j}"), "expected an integer"))
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(ZMatrix::from_big_rows(out, cols))
}

impl Codec for FinAbCat {
    const TAG: &'static str = "finab";

    fn obj_to_json(x: &FinAb) -> Result<Value> {
        Ok(
            json!({"generators": x.gens(), "relations": matrix_to_json(&x.relations().transpose())?}),
        )
    }

    fn obj_from_json(v: &Value, at: &str) -> Result<FinAb> {
        let o = v
            .as_object()
            .ok_or_else(|| doc_err(at, "expected {generators, relations}"))?;
        if let Some(k) = o.keys().find(|k| *k != "generators" && *k != "relations") {
            return Err(doc_err(&format!("{at}/{k}"), "unknown field"));
        }
        let gens = as_usize(
            o.get("generators")
                .ok_or_else(|| doc_err(at, "missing field generators"))?,
            &format!("{at}/generators"),
        )?;
        let rel = match o.get("relations") {
            None => ZMatrix::zeros(gens, 0),
            Some(r) => {
                let here = format!("{at}/relations");
                let count = as_array(r, &here, "an array of relation vectors")?.len();
                matrix_from_json(r, count, gens, &here)?.transpose()
            }
        };
        FinAb::new(gens, rel).map_err(|e| doc_err(at, e.to_string()))
    }

    fn map_to_json(f: &FinAbMap) -> Result<Value> {
        matrix_to_json(f.matrix())
    }

    fn map_from_json(v: &Value, src: &FinAb, dst: &FinAb, at: &str) -> Result<FinAbMap> {
        let m = matrix_from_json(v, dst.gens(), src.gens(), at)?;
        FinAbMap::new(src.clone(), dst.clone(), m).map_err(|e| doc_err(at, e.to_string()))
    }
}

/// A value is plain, or a tower `{"levels": [...], "bonds": [...]}` whose
/// bond `j` maps level `j + 1` to level `j`.
pub fn tower_to_json<K: Codec>(t: &Tower<K>) -> Result<Value> {
    if t.depth() == 0 {
        return K::obj_to_json(t.level(0));
    }
    let levels = t
        .levels()
        .iter()
        .map(K::obj_to_json)
        .collect::<Result<Vec<_>>>()?;
    let bonds = t
        .bonds()
        .iter()
        .map(K::map_to_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"levels": levels, "bonds": bonds}))
}

fn is_tower_json(v: &Value) -> bool {
    v.as_object().is_some_and(|o| o.contains_key("levels"))
}

pub fn tower_from_json<K: Codec>(v: &Value, at: &str) -> Result<Tower<K>> {
    if !is_tower_json(v) {
        return Ok(Tower::rudimentary(K::obj_from_json(v, at)?));
    }
    let o = v.as_object().expect("checked");
    if let Some(k) = o.keys().find(|k| *k != "levels" && *k != "bonds") {
        return Err(doc_err(&format!("{at}/{k}"), "unknown field"));
    }
    let levels = as_array(&o["levels"], &format!("{at}/levels"), "an array of levels")?
        .iter()
        .enumerate()
        .map(|(i, x)| K::obj_from_json(x, &format!("{at}/levels/{i}")))
        .collect::<Result<Vec<_>>>()?;
    if levels.is_empty() {
        return Err(doc_err(
            &format!("{at}/levels"),
            "a tower needs at least one level",
        ));
    }
    let empty = Value::Array(Vec::new());
    let bonds_json = as_array(
        o.get("bonds").unwrap_or(&empty),
        &format!("{at}/bonds"),
        "an array of bonds",
    )?;
    if bonds_json.len() + 1 != levels.len() {
        return Err(doc_err(
            &format!("{at}/bonds"),
            "expected one bond fewer than levels",
        ));
    }
    let bonds = bonds_json
        .iter()
        .enumerate()
        .map(|(j, b)| K::map_from_json(b, &levels[j + 1], &levels[j], &format!("{at}/bonds/{j}")))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(levels, bonds).map_err(|e| doc_err(at, e.to_string()))
}

/// A map between plain values is plain; otherwise
/// `{"shift": [...], "components": [...]}`.
pub fn level_morphism_to_json<K: Codec>(f: &LevelMorphism<K>) -> Result<Value> {
    if f.src().depth() == 0 && f.dst().depth() == 0 {
        return K::map_to_json(f.component(0));
    }
    let comps = f
        .components()
        .iter()
        .map(K::map_to_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"shift": f.shifts(), "components": comps}))
}

pub fn level_morphism_from_json<K: Codec>(
    v: &Value,
    src: &Arc<Tower<K>>,
    dst: &Arc<Tower<K>>,
    at: &str,
) -> Result<LevelMorphism<K>> {
    let Some(o) = v.as_object().filter(|o| o.contains_key("shift")) else {
        if src.depth() != 0 || dst.depth() != 0 {
            return Err(doc_err(at, "maps between towers need {shift, components}"));
        }
        let f = K::map_from_json(v, src.level(0), dst.level(0), at)?;
        return LevelMorphism::new(src.clone(), dst.clone(), vec![0], vec![f])
            .map_err(|e| doc_err(at, e.to_string()));
    };
    if let Some(k) = o.keys().find(|k| *k != "shift" && *k != "components") {
        return Err(doc_err(&format!("{at}/{k}"), "unknown field"));
    }
    let shift = as_array(&o["shift"], &format!("{at}/shift"), "an array of levels")?
        .iter()
        .enumerate()
        .map(|(j, s)| as_usize(s, &format!("{at}/shift/{j}")))
        .collect::<Result<Vec<_>>>()?;
    if shift.len() != dst.depth() + 1 {
        return Err(doc_err(
            &format!("{at}/shift"),
            format!("expected {} entries", dst.depth() + 1),
        ));
    }
    let empty = Value::Array(Vec::new());
    let comps_json = as_array(
        o.get("components").unwrap_or(&empty),
        &format!("{at}/components"),
        "an array of maps",
    )?;
    if comps_json.len() != shift.len() {
        return Err(doc_err(
            &format!("{at}/components"),
            "expected one component per target level",
        ));
    }
    let comps = comps_json
        .iter()
        .enumerate()
        .map(|(j, c)| {
            K::map_from_json(
                c,
                src.level(shift[j]),
                dst.level(j),
                &format!("{at}/components/{j}"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    LevelMorphism::new(src.clone(), dst.clone(), shift, comps)
        .map_err(|e| doc_err(at, e.to_string()))
}
