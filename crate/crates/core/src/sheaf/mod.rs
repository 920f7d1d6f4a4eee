//! Presheaves, the sheaf condition, the plus construction and stalks.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::json;

use crate::cosheaf::check::covers_to_check_on;
use crate::cosheaf::tensor::comma_generators;
use crate::cosheaf::Precosheaf;
use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};
use crate::site::{MorphismId, PointFilter, Sieve, SiteSpec};
use crate::value::{Cone, FinSet, FinSetCat, FinSetMap, FiniteDiagram, ValueCategory};

/// A contravariant functor from a site to a value category:
/// `action[m]: A(U) → A(V)` for `m: V → U`.
#[derive(Clone, Debug)]
pub struct Presheaf<K: ValueCategory> {
    pub site: Arc<SiteSpec>,
    pub values: Vec<K::Obj>,
    pub action: Vec<K::Map>,
}

impl<K: ValueCategory> Presheaf<K> {
    /// Checks endpoints and contravariant functoriality exactly.
    pub fn new(site: Arc<SiteSpec>, values: Vec<K::Obj>, action: Vec<K::Map>) -> Result<Self> {
        let cat = &site.category;
        if values.len() != cat.object_count() || action.len() != cat.morphism_count() {
            return Err(Error::InvalidPresheaf(format!(
                "expected {} values and {} actions, got {} and {}",
                cat.object_count(),
                cat.morphism_count(),
                values.len(),
                action.len()
            )));
        }
        for (m, f) in action.iter().enumerate() {
            if K::src(f) != &values[cat.dst(m)] || K::dst(f) != &values[cat.src(m)] {
                return Err(Error::InvalidPresheaf(format!(
                    "action on {} has wrong endpoints",
                    cat.morphism(m).name
                )));
            }
        }
        for o in 0..cat.object_count() {
            if !K::maps_equal(&action[cat.identity(o)], &K::identity(&values[o])) {
                return Err(Error::InvalidPresheaf(format!(
                    "identity of {} does not act trivially",
                    cat.object_name(o)
                )));
            }
        }
        for ((g, f), gf) in cat.composition_table() {
            if !K::maps_equal(&action[gf], &K::compose(&action[f], &action[g])) {
                return Err(Error::InvalidPresheaf(format!(
                    "action does not respect {} ∘ {}",
                    cat.morphism(g).name,
                    cat.morphism(f).name
                )));
            }
        }
        Ok(Presheaf {
            site,
            values,
            action,
        })
    }

    pub fn constant(site: Arc<SiteSpec>, g: K::Obj) -> Self {
        let n = site.category.object_count();
        let action = (0..site.category.morphism_count())
            .map(|_| K::identity(&g))
            .collect();
        Presheaf {
            site,
            values: vec![g; n],
            action,
        }
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        let cat = &self.site.category;
        (0..cat.object_count())
            .map(|o| (cat.object_name(o).to_string(), K::describe(&self.values[o])))
            .collect()
    }
}

/// `Hom(R, A) ≅ lim_{C_R^op} A(V)` with the restriction `A(U) → lim`.
#[derive(Clone, Debug)]
pub struct SieveLimit<K: ValueCategory> {
    pub members: Vec<MorphismId>,
    pub cone: Cone<K>,
    pub restriction: K::Map,
}

impl<K: ValueCategory> SieveLimit<K> {
    fn leg(&self, m: MorphismId) -> Option<&K::Map> {
        self.members
            .binary_search(&m)
            .ok()
            .map(|i| &self.cone.legs[i])
    }
}

pub fn hom_with_sieve<K: ValueCategory>(a: &Presheaf<K>, sieve: &Sieve) -> Result<SieveLimit<K>> {
    let cat = &a.site.category;
    if sieve.target >= cat.object_count() {
        return Err(Error::InvalidSite(format!(
            "sieve target {} not in site",
            sieve.target
        )));
    }
    let members: Vec<MorphismId> = sieve.members.iter().copied().collect();
    let nodes = members
        .iter()
        .map(|&m| a.values[cat.src(m)].clone())
        .collect();
    let edges = comma_generators(cat, &members)
        .into_iter()
        .map(|(i, j, b)| (j, i, a.action[b].clone()))
        .collect();
    let cone = K::limit(&FiniteDiagram::new(nodes, edges));
    let legs: Vec<K::Map> = members.iter().map(|&m| a.action[m].clone()).collect();
    let restriction = K::factor_limit(&cone, &a.values[sieve.target], &legs);
    Ok(SieveLimit {
        members,
        cone,
        restriction,
    })
}

#[derive(Clone, Debug)]
pub struct SheafStatus {
    pub separated: bool,
    pub sheaf: bool,
    /// Some object has a chain deeper than the covers examined.
    pub chain_truncated: bool,
    pub non_mono: Option<Witness>,
    pub non_iso: Option<Witness>,
}

impl SheafStatus {
    pub fn label(&self) -> &'static str {
        if self.sheaf {
            "SHEAF"
        } else if self.separated {
            "SEPARATED"
        } else {
            "NOT-SEPARATED"
        }
    }
}

/// Classifies the restriction map of every declared cover and every
/// stored chain level.
pub fn sheaf_status<K: ValueCategory>(a: &Presheaf<K>) -> Result<SheafStatus> {
    let cat = &a.site.category;
    let mut status = SheafStatus {
        separated: true,
        sheaf: true,
        chain_truncated: false,
        non_mono: None,
        non_iso: None,
    };
    for u in 0..cat.object_count() {
        status.chain_truncated |= a.site.has_chain(u);
        for (idx, (cover, level)) in covers_to_check_on(&a.site, u, usize::MAX)
            .into_iter()
            .enumerate()
        {
            let lim = hom_with_sieve(a, &cover.sieve(cat))?;
            let c = K::classify(&lim.restriction);
            if c.iso {
                continue;
            }
            let mut w = Witness::new(if c.mono {
                "non-iso-restriction"
            } else {
                "non-mono-restriction"
            })
            .object(cat.object_name(u))
            .cover(idx);
            if let Some(k) = level {
                w = w.level(k);
            }
            let pieces: Vec<&str> = cover
                .pieces
                .iter()
                .map(|&p| cat.object_name(cat.src(p)))
                .collect();
            w = w.detail(json!({
                "pieces": pieces,
                "limit": K::describe(&lim.cone.apex),
                "value": K::describe(&a.values[u]),
            }));
            status.sheaf = false;
            if status.non_iso.is_none() {
                status.non_iso = Some(w.clone());
            }
            if !c.mono {
                status.separated = false;
                if status.non_mono.is_none() {
                    status.non_mono = Some(w);
                }
            }
        }
    }
    Ok(status)
}

/// PASS iff every restriction map is an isomorphism. On chain sites the
/// verdict is qualified by the stored chain depth.
pub fn check_sheaf<K: ValueCategory>(a: &Presheaf<K>) -> Result<CheckReport> {
    let s = sheaf_status(a)?;
    let mut r = if s.sheaf {
        CheckReport::pass("check-sheaf", s.label())
    } else {
        let w = s
            .non_mono
            .clone()
            .or_else(|| s.non_iso.clone())
            .expect("failure has a witness");
        CheckReport::fail("check-sheaf", s.label(), w)
    };
    r = r.with_trace(format!("separated: {}, sheaf: {}", s.separated, s.sheaf));
    if s.chain_truncated {
        let d = (0..a.site.object_count())
            .map(|u| a.site.chain_depth(u))
            .max()
            .unwrap_or(0);
        r = r
            .at_depth(d)
            .with_trace("chains evaluated at their stored depth");
    }
    Ok(r)
}

/// `A⁺` with its unit `A → A⁺`.
#[derive(Clone, Debug)]
pub struct SheafPlus<K: ValueCategory> {
    pub value: Arc<Presheaf<K>>,
    pub unit: Vec<K::Map>,
}

/// `A⁺(U) = colim_R Hom(R, A)`, evaluated at the least covering sieve.
pub fn plus_sheaf<K: ValueCategory>(a: &Presheaf<K>) -> Result<SheafPlus<K>> {
    let cat = &a.site.category;
    let n = cat.object_count();
    let limits = (0..n)
        .map(|u| hom_with_sieve(a, &a.site.minimal_covering_sieves()[u]))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<K::Obj> = limits.iter().map(|l| l.cone.apex.clone()).collect();
    let mut action = Vec::with_capacity(cat.morphism_count());
    for f in 0..cat.morphism_count() {
        let (v, u) = (cat.src(f), cat.dst(f));
        let legs = limits[v]
            .members
            .iter()
            .map(|&m| {
                let fm = cat.compose(f, m).expect("composable");
                limits[u].leg(fm).cloned().ok_or_else(|| {
                    Error::InvalidSite(format!(
                        "least covering sieve of {} is not stable",
                        cat.object_name(v)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        action.push(K::factor_limit(&limits[v].cone, &values[u], &legs));
    }
    let unit = limits.iter().map(|l| l.restriction.clone()).collect();
    Ok(SheafPlus {
        value: Arc::new(Presheaf {
            site: a.site.clone(),
            values,
            action,
        }),
        unit,
    })
}

/// `A⁺⁺` with the composite unit and the postconditions on both steps.
#[derive(Clone, Debug)]
pub struct Sheafification<K: ValueCategory> {
    pub plus: SheafPlus<K>,
    pub value: Arc<Presheaf<K>>,
    pub unit: Vec<K::Map>,
    pub plus_separated: bool,
    pub result_is_sheaf: bool,
}

pub fn sheafify<K: ValueCategory>(a: &Presheaf<K>) -> Result<Sheafification<K>> {
    let first = plus_sheaf(a)?;
    let second = plus_sheaf(&first.value)?;
    let unit = first
        .unit
        .iter()
        .zip(&second.unit)
        .map(|(f, g)| K::compose(g, f))
        .collect();
    let plus_separated = sheaf_status(&first.value)?.separated;
    let result_is_sheaf = sheaf_status(&second.value)?.sheaf;
    Ok(Sheafification {
        value: second.value.clone(),
        unit,
        plus: first,
        plus_separated,
        result_is_sheaf,
    })
}

/// The value at the filter's last neighbourhood, flagged when the filter
/// is unbounded and the colimit is therefore truncated.
pub fn stalk<K: ValueCategory>(a: &Presheaf<K>, p: &PointFilter) -> Result<(K::Obj, bool)> {
    p.validate(&a.site.category)?;
    let last = *p.chain.last().expect("validated filters are nonempty");
    Ok((a.values[last].clone(), p.unbounded))
}

/// Componentwise maps `B(U) → A(U)` commuting with restrictions.
pub fn is_natural<K: ValueCategory>(b: &Presheaf<K>, a: &Presheaf<K>, maps: &[K::Map]) -> bool {
    let cat = &a.site.category;
    (0..cat.morphism_count()).all(|m| {
        let (v, u) = (cat.src(m), cat.dst(m));
        K::maps_equal(
            &K::compose(&a.action[m], &maps[u]),
            &K::compose(&maps[v], &b.action[m]),
        )
    })
}

/// The presheaf `U ↦ Hom(A(U), G)` of a set-valued precosheaf with plain
/// values.
pub fn hom_presheaf(a: &Precosheaf<FinSetCat>, g: &FinSet) -> Result<Presheaf<FinSetCat>> {
    if !a.is_rudimentary() {
        return Err(Error::Unsupported(
            "Hom into a test set needs plain values".into(),
        ));
    }
    let cat = &a.site.category;
    let homs: Vec<Vec<FinSetMap>> = (0..cat.object_count())
        .map(|u| FinSetCat::enumerate_homs(a.values[u].level(0), g).expect("finite sets"))
        .collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = homs
        .iter()
        .map(|hs| {
            hs.iter()
                .enumerate()
                .map(|(i, h)| (h.table().to_vec(), i))
                .collect()
        })
        .collect();
    let values: Vec<FinSet> = homs.iter().map(|hs| FinSet::new(hs.len())).collect();
    let action = (0..cat.morphism_count())
        .map(|m| {
            let (v, u) = (cat.src(m), cat.dst(m));
            let am = a.action[m].component(0);
            FinSetMap::from_fn(values[u].clone(), values[v].clone(), |i| {
                index[v][FinSetCat::compose(&homs[u][i], am).table()]
            })
        })
        .collect();
    Presheaf::new(a.site.clone(), values, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{Cover, Coverage, FiniteCategory};
    use std::collections::BTreeMap;

    /// `∅ ≤ a, b ≤ X` with `X` covered by `{a, b}` and meet `∅`.
    fn disjoint_pair() -> Arc<SiteSpec> {
        let names = ["e", "a", "b", "X"].map(String::from).to_vec();
        let cat =
            FiniteCategory::from_poset(names, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]).unwrap();
        let mut cov = Coverage::empty(4);
        cov.covers[0].push(Cover::new(0, vec![]));
        cov.covers[1].push(Cover::trivial(&cat, 1));
        cov.covers[2].push(Cover::trivial(&cat, 2));
        let pieces = vec![cat.hom(1, 3)[0], cat.hom(2, 3)[0]];
        let meets = BTreeMap::from([((0, 1), 0)]);
        cov.covers[3].push(Cover::new(3, pieces).with_meets(&cat, &meets).unwrap());
        Arc::new(SiteSpec::new("disjoint", cat, cov, vec![]).unwrap())
    }

    #[test]
    fn constant_presheaf_is_not_a_sheaf() {
        let a = Presheaf::<FinSetCat>::constant(disjoint_pair(), FinSet::new(2));
        let r = check_sheaf(&a).unwrap();
        assert!(!r.is_pass());
        let s = sheafify(&a).unwrap();
        assert!(s.result_is_sheaf && s.plus_separated);
        assert_eq!(s.value.values[3].len(), 4);
        assert_eq!(s.value.values[0].len(), 1);
    }
}
