//! JSON form of sites.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::{
    ChainRule, Cover, CoverChain, Coverage, FiniteCategory, Intersection, Morphism, MorphismId,
    ObjectId, PointFilter, SiteSpec,
};
use crate::topo::converging_chain_for;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A declared intersection: the meet object on poset sites, or an object
/// with its two legs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntersectionDoc {
    Meet(String),
    Legs {
        object: String,
        to_left: String,
        to_right: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    pub target: String,
    pub pieces: Vec<String>,
    /// Keyed by `"i,j"` with `i < j` piece positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersections: Option<BTreeMap<String, IntersectionDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainRuleDoc {
    Named(String),
    Explicit(Vec<CoverDoc>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub target: String,
    pub rule: ChainRuleDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub label: String,
    pub chain: Vec<String>,
    #[serde(default)]
    pub unbounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDoc {
    #[serde(default)]
    pub name: String,
    pub objects: Vec<String>,
    #[serde(default)]
    pub poset: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leq: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composition: Vec<[String; 3]>,
    #[serde(default)]
    pub covers: Vec<CoverDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointDoc>,
}

fn doc_err(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Resolves names against a category while building a site.
struct Resolver<'a> {
    cat: &'a FiniteCategory,
    poset: bool,
}

impl Resolver<'_> {
    fn object(&self, name: &str, at: &str) -> Result<ObjectId> {
        self.cat
            .object_id(name)
            .ok_or_else(|| doc_err(at, format!("unknown object {name:?}")))
    }

    fn morphism(&self, name: &str, at: &str) -> Result<MorphismId> {
        self.cat
            .morphism_id(name)
            .ok_or_else(|| doc_err(at, format!("unknown morphism {name:?}")))
    }

    /// A cover piece: a morphism name, or on posets also a source object.
    fn piece(&self, name: &str, target: ObjectId, at: &str) -> Result<MorphismId> {
        if let Some(m) = self.cat.morphism_id(name) {
            return Ok(m);
        }
        if self.poset {
            if let Some(o) = self.cat.object_id(name) {
                return self.cat.hom(o, target).first().copied().ok_or_else(|| {
                    doc_err(
                        at,
                        format!("{name} is not below {}", self.cat.object_name(target)),
                    )
                });
            }
        }
        Err(doc_err(at, format!("unknown morphism {name:?}")))
    }

    fn cover(&self, c: &CoverDoc, at: &str) -> Result<Cover> {
        let target = self.object(&c.target, &format!("{at}/target"))?;
        let pieces = c
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| self.piece(p, target, &format!("{at}/pieces/{i}")))
            .collect::<Result<Vec<_>>>()?;
        let mut cover = Cover::new(target, pieces);
        if let Some(ix) = &c.intersections {
            let mut out = BTreeMap::new();
            for (key, d) in ix {
                let here = format!("{at}/intersections/{key}");
                let (i, j) = key
                    .split_once(',')
                    .and_then(|(a, b)| {
                        Some((
                            a.trim().parse::<usize>().ok()?,
                            b.trim().parse::<usize>().ok()?,
                        ))
                    })
                    .filter(|&(i, j)| i < j && j < cover.pieces.len())
                    .ok_or_else(|| {
                        doc_err(&here, "key must be \"i,j\" with i < j naming two pieces")
                    })?;
                let entry = match d {
                    IntersectionDoc::Meet(w) => {
                        let w = self.object(w, &here)?;
                        let single = BTreeMap::from([((i, j), w)]);
                        let tmp = Cover::new(target, cover.pieces.clone())
                            .with_meets(self.cat, &single)
                            .map_err(|e| doc_err(&here, e.to_string()))?;
                        tmp.intersections.expect("meets set")[&(i, j)].clone()
                    }
                    IntersectionDoc::Legs {
                        object,
                        to_left,
                        to_right,
                    } => Intersection {
                        object: self.object(object, &format!("{here}/object"))?,
                        to_left: self.morphism(to_left, &format!("{here}/to_left"))?,
                        to_right: self.morphism(to_right, &format!("{here}/to_right"))?,
                    },
                };
                out.insert((i, j), entry);
            }
            cover = cover.with_intersections(out);
        }
        cover
            .validate(self.cat)
            .map_err(|e| doc_err(at, e.to_string()))?;
        Ok(cover)
    }
}

fn build_category(doc: &SiteDoc) -> Result<FiniteCategory> {
    let index: HashMap<&str, ObjectId> = doc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    if index.len() != doc.objects.len() {
        return Err(doc_err("/objects", "duplicate object name"));
    }
    let obj = |name: &str, at: String| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| doc_err(at, format!("unknown object {name:?}")))
    };
    if doc.poset {
        if !doc.morphisms.is_empty() || !doc.composition.is_empty() {
            return Err(doc_err(
                "/morphisms",
                "poset sites infer morphisms from \"leq\"",
            ));
        }
        let leq = doc
            .leq
            .iter()
            .enumerate()
            .map(|(i, [a, b])| {
                Ok((
                    obj(a, format!("/leq/{i}/0"))?,
                    obj(b, format!("/leq/{i}/1"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        return FiniteCategory::from_poset(doc.objects.clone(), &leq)
            .map_err(|e| doc_err("/leq", e.to_string()));
    }
    let n = doc.objects.len();
    let mut morphisms: Vec<Morphism> = doc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism {
            name: format!("id_{o}"),
            src: i,
            dst: i,
        })
        .collect();
    for (i, m) in doc.morphisms.iter().enumerate() {
        let src = obj(&m.src, format!("/morphisms/{i}/src"))?;
        let dst = obj(&m.dst, format!("/morphisms/{i}/dst"))?;
        if morphisms.iter().any(|x| x.name == m.id) {
            return Err(doc_err(
                format!("/morphisms/{i}/id"),
                format!("duplicate morphism id {:?}", m.id),
            ));
        }
        morphisms.push(Morphism {
            name: m.id.clone(),
            src,
            dst,
        });
    }
    let mid: HashMap<&str, MorphismId> = morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.as_str(), i))
        .collect();
    let mut composition = HashMap::new();
    for (f, mf) in morphisms.iter().enumerate() {
        composition.insert((f, mf.src), f);
        composition.insert((mf.dst, f), f);
    }
    for (i, [g, f, gf]) in doc.composition.iter().enumerate() {
        let look = |name: &str, k: usize| {
            mid.get(name).copied().ok_or_else(|| {
                doc_err(
                    format!("/composition/{i}/{k}"),
                    format!("unknown morphism {name:?}"),
                )
            })
        };
        let (g, f, gf) = (look(g, 0)?, look(f, 1)?, look(gf, 2)?);
        if g < n || f < n {
            return Err(doc_err(
                format!("/composition/{i}"),
                "composites with identities are implied",
            ));
        }
        if composition.insert((g, f), gf).is_some() {
            return Err(doc_err(
                format!("/composition/{i}"),
                "duplicate composition triple",
            ));
        }
    }
    let identity = (0..n).collect();
    FiniteCategory::new(doc.objects.clone(), morphisms, identity, composition)
        .map_err(|e| doc_err("/composition", e.to_string()))
}

/// Builds and validates a site from its document form.
pub fn site_from_doc(doc: &SiteDoc) -> Result<Arc<SiteSpec>> {
    let cat = build_category(doc)?;
    let r = Resolver {
        cat: &cat,
        poset: doc.poset,
    };
    let mut coverage = Coverage::empty(cat.object_count());
    for (i, c) in doc.covers.iter().enumerate() {
        let cover = r.cover(c, &format!("/covers/{i}"))?;
        coverage.covers[cover.target].push(cover);
    }
    for (i, ch) in doc.chains.iter().enumerate() {
        let at = format!("/chains/{i}");
        let target = r.object(&ch.target, &format!("{at}/target"))?;
        if coverage.chains[target].is_some() {
            return Err(doc_err(&at, format!("second chain on {}", ch.target)));
        }
        let chain = match &ch.rule {
            ChainRuleDoc::Named(rule) if rule == "converging" => {
                converging_chain_for(&cat, &ch.target)
                    .map_err(|e| doc_err(format!("{at}/rule"), e.to_string()))?
            }
            ChainRuleDoc::Named(rule) => {
                return Err(doc_err(
                    format!("{at}/rule"),
                    format!("unknown chain rule {rule:?}"),
                ))
            }
            ChainRuleDoc::Explicit(levels) => {
                let levels = levels
                    .iter()
                    .enumerate()
                    .map(|(k, c)| r.cover(c, &format!("{at}/rule/{k}")))
                    .collect::<Result<Vec<_>>>()?;
                CoverChain::new(&cat, ChainRule::Explicit, levels)
                    .map_err(|e| doc_err(&at, e.to_string()))?
            }
        };
        coverage.chains[target] = Some(chain);
    }
    let mut points = Vec::with_capacity(doc.points.len());
    for (i, p) in doc.points.iter().enumerate() {
        let chain = p
            .chain
            .iter()
            .enumerate()
            .map(|(k, o)| r.object(o, &format!("/points/{i}/chain/{k}")))
            .collect::<Result<Vec<_>>>()?;
        let filter = PointFilter {
            label: p.label.clone(),
            chain,
            unbounded: p.unbounded,
        };
        filter
            .validate(&cat)
            .map_err(|e| doc_err(format!("/points/{i}"), e.to_string()))?;
        points.push(filter);
    }
    Ok(Arc::new(SiteSpec::new(
        doc.name.clone(),
        cat,
        coverage,
        points,
    )?))
}

fn cover_to_doc(site: &SiteSpec, c: &Cover) -> CoverDoc {
    let cat = &site.category;
    let pieces = c
        .pieces
        .iter()
        .map(|&m| {
            if site.poset {
                cat.object_name(cat.src(m)).to_string()
            } else {
                cat.morphism(m).name.clone()
            }
        })
        .collect();
    let intersections = c.intersections.as_ref().map(|ix| {
        ix.iter()
            .map(|(&(i, j), x)| {
                let d = if site.poset {
                    IntersectionDoc::Meet(cat.object_name(x.object).to_string())
                } else {
                    IntersectionDoc::Legs {
                        object: cat.object_name(x.object).to_string(),
                        to_left: cat.morphism(x.to_left).name.clone(),
                        to_right: cat.morphism(x.to_right).name.clone(),
                    }
                };
                (format!("{i},{j}"), d)
            })
            .collect()
    });
    CoverDoc {
        target: cat.object_name(c.target).to_string(),
        pieces,
        intersections,
    }
}

/// The canonical document form of a site.
pub fn site_to_doc(site: &SiteSpec) -> SiteDoc {
    let cat = &site.category;
    let name = |o: ObjectId| cat.object_name(o).to_string();
    let non_identity: Vec<MorphismId> = (0..cat.morphism_count())
        .filter(|&m| !cat.is_identity(m))
        .collect();
    let (leq, morphisms, composition) = if site.poset {
        let leq = non_identity
            .iter()
            .map(|&m| [name(cat.src(m)), name(cat.dst(m))])
            .collect();
        (leq, Vec::new(), Vec::new())
    } else {
        let morphisms = non_identity
            .iter()
            .map(|&m| MorphismDoc {
                id: cat.morphism(m).name.clone(),
                src: name(cat.src(m)),
                dst: name(cat.dst(m)),
            })
            .collect();
        let mut composition = Vec::new();
        for &g in &non_identity {
            for &f in &non_identity {
                if let Some(gf) = cat.compose(g, f) {
                    composition.push([
                        cat.morphism(g).name.clone(),
                        cat.morphism(f).name.clone(),
                        cat.morphism(gf).name.clone(),
                    ]);
                }
            }
        }
        (Vec::new(), morphisms, composition)
    };
    let covers = (0..cat.object_count())
        .flat_map(|u| {
            site.coverage.covers[u]
                .iter()
                .map(|c| cover_to_doc(site, c))
        })
        .collect();
    let chains = (0..cat.object_count())
        .filter_map(|u| {
            site.coverage.chains[u].as_ref().map(|ch| ChainDoc {
                target: name(u),
                rule: match ch.rule {
                    ChainRule::Converging => ChainRuleDoc::Named("converging".into()),
                    ChainRule::Explicit => ChainRuleDoc::Explicit(
                        ch.levels.iter().map(|c| cover_to_doc(site, c)).collect(),
                    ),
                },
            })
        })
        .collect();
    let points = site
        .points
        .iter()
        .map(|p| PointDoc {
            label: p.label.clone(),
            chain: p.chain.iter().map(|&o| name(o)).collect(),
            unbounded: p.unbounded,
        })
        .collect();
    SiteDoc {
        name: site.name.clone(),
        objects: cat.objects().to_vec(),
        poset: site.poset,
        leq,
        morphisms,
        composition,
        covers,
        chains,
        points,
    }
}
