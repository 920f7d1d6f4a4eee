//! Canonical JSON documents for sites, precosheaves, presheaves and
//! reports, and the command-line driver.

pub mod cli;
pub mod site_doc;
pub mod value_doc;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::cosheaf::Precosheaf;
use crate::error::{Error, Result};
use crate::pro::{LevelMorphism, Tower};
use crate::report::CheckReport;
use crate::sheaf::Presheaf;
use crate::site::SiteSpec;
use crate::value::{FinAbCat, FinSetCat};

pub use site_doc::{site_from_doc, site_to_doc, SiteDoc};
pub use value_doc::Codec;

/// Any loadable document.
#[derive(Clone, Debug)]
pub enum Document {
    Site(Arc<SiteSpec>),
    SetPrecosheaf(Arc<Precosheaf<FinSetCat>>),
    AbPrecosheaf(Arc<Precosheaf<FinAbCat>>),
    SetPresheaf(Presheaf<FinSetCat>),
    AbPresheaf(Presheaf<FinAbCat>),
    Report(CheckReport),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Site(_) => "site",
            Document::SetPrecosheaf(_) | Document::AbPrecosheaf(_) => "precosheaf",
            Document::SetPresheaf(_) | Document::AbPresheaf(_) => "presheaf",
            Document::Report(_) => "report",
        }
    }
}

fn doc_err(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Escapes a key for use in a JSON pointer.
pub fn pointer_token(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let pointer = if path == "." {
            prefix.to_string()
        } else {
            format!(
                "{prefix}/{}",
                path.replace(['.', '['], "/").replace(']', "")
            )
        };
        doc_err(pointer, e.into_inner().to_string())
    })
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SiteRef {
    Path(String),
    Inline(Value),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDoc {
    site: SiteRef,
    category: String,
    values: BTreeMap<String, Value>,
    #[serde(default)]
    action: BTreeMap<String, Value>,
}

fn split_kind(v: Value) -> Result<(String, Map<String, Value>)> {
    let Value::Object(mut o) = v else {
        return Err(doc_err("", "expected a JSON object"));
    };
    let kind = match o.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(doc_err("/kind", "expected a string")),
        None => return Err(doc_err("/kind", "missing document kind")),
    };
    Ok((kind, o))
}

fn load_site_value(v: Value, prefix: &str) -> Result<Arc<SiteSpec>> {
    let (kind, rest) = split_kind(v).map_err(|e| rebase(e, prefix))?;
    if kind != "site" {
        return Err(doc_err(
            format!("{prefix}/kind"),
            format!("expected a site, found {kind:?}"),
        ));
    }
    let doc: SiteDoc = typed(Value::Object(rest), prefix)?;
    site_from_doc(&doc).map_err(|e| rebase(e, prefix))
}

fn rebase(e: Error, prefix: &str) -> Error {
    match e {
        Error::Document { pointer, message } => Error::Document {
            pointer: format!("{prefix}{pointer}"),
            message,
        },
        other => other,
    }
}

fn resolve_site(r: SiteRef, base: Option<&Path>) -> Result<Arc<SiteSpec>> {
    match r {
        SiteRef::Inline(v) => load_site_value(v, "/site"),
        SiteRef::Path(p) => {
            let path = base.map_or_else(|| PathBuf::from(&p), |b| b.join(&p));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| doc_err("/site", format!("cannot read {}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| doc_err("/site", format!("{}: {e}", path.display())))?;
            load_site_value(v, "").map_err(|e| match e {
                Error::Document { pointer, message } => doc_err(
                    "/site",
                    format!("{} at {pointer}: {message}", path.display()),
                ),
                other => other,
            })
        }
    }
}

fn action_entry<'a>(doc: &'a FunctorDoc, site: &SiteSpec, m: usize) -> Result<Option<&'a Value>> {
    let cat = &site.category;
    match doc.action.get(&cat.morphism(m).name) {
        Some(v) => Ok(Some(v)),
        None if cat.is_identity(m) => Ok(None),
        None => Err(doc_err(
            "/action",
            format!("missing action of morphism {:?}", cat.morphism(m).name),
        )),
    }
}

fn check_keys(doc: &FunctorDoc, site: &SiteSpec) -> Result<()> {
    let cat = &site.category;
    if let Some(k) = doc.values.keys().find(|k| cat.object_id(k).is_none()) {
        return Err(doc_err(
            format!("/values/{}", pointer_token(k)),
            format!("unknown object {k:?}"),
        ));
    }
    if let Some(k) = doc.action.keys().find(|k| cat.morphism_id(k).is_none()) {
        return Err(doc_err(
            format!("/action/{}", pointer_token(k)),
            format!("unknown morphism {k:?}"),
        ));
    }
    Ok(())
}

fn load_values<K: Codec>(doc: &FunctorDoc, site: &SiteSpec) -> Result<Vec<Arc<Tower<K>>>> {
    let cat = &site.category;
    (0..cat.object_count())
        .map(|o| {
            let name = cat.object_name(o);
            let v = doc
                .values
                .get(name)
                .ok_or_else(|| doc_err("/values", format!("missing value of object {name:?}")))?;
            value_doc::tower_from_json::<K>(v, &format!("/values/{}", pointer_token(name)))
                .map(Arc::new)
        })
        .collect()
}

fn load_precosheaf<K: Codec>(doc: &FunctorDoc, site: Arc<SiteSpec>) -> Result<Precosheaf<K>> {
    check_keys(doc, &site)?;
    let values = load_values::<K>(doc, &site)?;
    let cat = &site.category;
    let mut action = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (src, dst) = (&values[cat.src(m)], &values[cat.dst(m)]);
        let at = format!("/action/{}", pointer_token(&cat.morphism(m).name));
        action.push(match action_entry(doc, &site, m)? {
            Some(v) => value_doc::level_morphism_from_json(v, src, dst, &at)?,
            None => LevelMorphism::identity(src.clone()),
        });
    }
    Precosheaf::new(site, values, action)
}

fn load_presheaf<K: Codec>(doc: &FunctorDoc, site: Arc<SiteSpec>) -> Result<Presheaf<K>> {
    check_keys(doc, &site)?;
    let towers = load_values::<K>(doc, &site)?;
    let cat = &site.category;
    let mut values = Vec::with_capacity(towers.len());
    for (o, t) in towers.iter().enumerate() {
        if t.depth() != 0 {
            return Err(doc_err(
                format!("/values/{}", pointer_token(cat.object_name(o))),
                "presheaf values must be plain",
            ));
        }
        values.push(t.level(0).clone());
    }
    let mut action = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (src, dst) = (&values[cat.dst(m)], &values[cat.src(m)]);
        let at = format!("/action/{}", pointer_token(&cat.morphism(m).name));
        action.push(match action_entry(doc, &site, m)? {
            Some(v) => K::map_from_json(v, src, dst, &at)?,
            None => K::identity(src),
        });
    }
    Presheaf::new(site, values, action)
}

/// Parses a document; relative site paths resolve against `base`.
pub fn load_str(text: &str, base: Option<&Path>) -> Result<Document> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| doc_err("", format!("malformed JSON: {e}")))?;
    let (kind, rest) = split_kind(v)?;
    match kind.as_str() {
        "site" => {
            let doc: SiteDoc = typed(Value::Object(rest), "")?;
            Ok(Document::Site(site_from_doc(&doc)?))
        }
        "precosheaf" | "presheaf" => {
            let FunctorDoc {
                site,
                category: tag,
                values,
                action,
            } = typed(Value::Object(rest), "")?;
            let site = resolve_site(site, base)?;
            let doc = FunctorDoc {
                site: SiteRef::Path(String::new()),
                category: tag.clone(),
                values,
                action,
            };
            match (kind.as_str(), tag.as_str()) {
                ("precosheaf", "finset") => Ok(Document::SetPrecosheaf(Arc::new(load_precosheaf(
                    &doc, site,
                )?))),
                ("precosheaf", "finab") => Ok(Document::AbPrecosheaf(Arc::new(load_precosheaf(
                    &doc, site,
                )?))),
                ("presheaf", "finset") => Ok(Document::SetPresheaf(load_presheaf(&doc, site)?)),
                ("presheaf", "finab") => Ok(Document::AbPresheaf(load_presheaf(&doc, site)?)),
                _ => Err(doc_err(
                    "/category",
                    format!("unknown category {tag:?}; expected \"finset\" or \"finab\""),
                )),
            }
        }
        "report" => Ok(Document::Report(typed(Value::Object(rest), "")?)),
        other => Err(doc_err("/kind", format!("unknown document kind {other:?}"))),
    }
}

pub fn load(path: &Path) -> Result<Document> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_str(&text, path.parent())
}

fn with_kind(kind: &str, v: Value) -> Value {
    let mut o = match v {
        Value::Object(o) => o,
        _ => unreachable!("documents serialize to objects"),
    };
    o.insert("kind".into(), Value::String(kind.into()));
    Value::Object(o)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("document types serialize")
}

pub fn site_json(site: &SiteSpec) -> Value {
    with_kind("site", to_value(&site_to_doc(site)))
}

fn functor_json<K: Codec>(
    kind: &str,
    site: &SiteSpec,
    values: Vec<Value>,
    action: impl Fn(usize) -> Result<Value>,
) -> Result<Value> {
    let cat = &site.category;
    let values = (0..cat.object_count())
        .map(|o| (cat.object_name(o).to_string(), values[o].clone()))
        .collect();
    let mut acts = BTreeMap::new();
    for m in (0..cat.morphism_count()).filter(|&m| !cat.is_identity(m)) {
        acts.insert(cat.morphism(m).name.clone(), action(m)?);
    }
    let doc = FunctorDoc {
        site: SiteRef::Inline(site_json(site)),
        category: K::TAG.into(),
        values,
        action: acts,
    };
    Ok(with_kind(kind, to_value(&doc)))
}

pub fn precosheaf_json<K: Codec>(a: &Precosheaf<K>) -> Result<Value> {
    let values = a
        .values
        .iter()
        .map(|t| value_doc::tower_to_json(t))
        .collect::<Result<Vec<_>>>()?;
    functor_json::<K>("precosheaf", &a.site, values, |m| {
        value_doc::level_morphism_to_json(&a.action[m])
    })
}

pub fn presheaf_json<K: Codec>(a: &Presheaf<K>) -> Result<Value> {
    let values = a
        .values
        .iter()
        .map(K::obj_to_json)
        .collect::<Result<Vec<_>>>()?;
    functor_json::<K>("presheaf", &a.site, values, |m| {
        K::map_to_json(&a.action[m])
    })
}

pub fn report_json(r: &CheckReport) -> Value {
    with_kind("report", to_value(r))
}

pub fn document_json(d: &Document) -> Result<Value> {
    match d {
        Document::Site(s) => Ok(site_json(s)),
        Document::SetPrecosheaf(a) => precosheaf_json(a),
        Document::AbPrecosheaf(a) => precosheaf_json(a),
        Document::SetPresheaf(a) => presheaf_json(a),
        Document::AbPresheaf(a) => presheaf_json(a),
        Document::Report(r) => Ok(report_json(r)),
    }
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn to_canonical_string(d: &Document) -> Result<String> {
    Ok(canonical_string(&document_json(d)?))
}

pub fn save(d: &Document, path: &Path) -> Result<()> {
    std::fs::write(path, to_canonical_string(d)?)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
