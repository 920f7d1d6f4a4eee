//! Precosheaves with tower values and their morphisms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pro::{equal_at_depth, reindex, LevelMorphism, Tower};
use crate::site::{MorphismId, ObjectId, SiteSpec};
use crate::value::ValueCategory;

/// A covariant functor from a site to towers. Rudimentary towers encode
/// plain values.
#[derive(Clone, Debug)]
pub struct Precosheaf<K: ValueCategory> {
    pub site: Arc<SiteSpec>,
    pub values: Vec<Arc<Tower<K>>>,
    /// One level morphism per morphism of the site.
    pub action: Vec<LevelMorphism<K>>,
}

impl<K: ValueCategory> Precosheaf<K> {
    /// Checks endpoints and functoriality at the deepest stored level.
    pub fn new(
        site: Arc<SiteSpec>,
        values: Vec<Arc<Tower<K>>>,
        action: Vec<LevelMorphism<K>>,
    ) -> Result<Self> {
        let a = Self::new_unchecked(site, values, action)?;
        a.check_functoriality(a.max_depth())?;
        Ok(a)
    }

    /// Checks endpoints only.
    pub fn new_unchecked(
        site: Arc<SiteSpec>,
        values: Vec<Arc<Tower<K>>>,
        action: Vec<LevelMorphism<K>>,
    ) -> Result<Self> {
        let cat = &site.category;
        if values.len() != cat.object_count() || action.len() != cat.morphism_count() {
            return Err(Error::InvalidPrecosheaf(format!(
                "expected {} values and {} actions, got {} and {}",
                cat.object_count(),
                cat.morphism_count(),
                values.len(),
                action.len()
            )));
        }
        for (m, f) in action.iter().enumerate() {
            if f.src().levels() != values[cat.src(m)].levels()
                || f.dst().levels() != values[cat.dst(m)].levels()
            {
                return Err(Error::InvalidPrecosheaf(format!(
                    "action on {} has wrong endpoints",
                    cat.morphism(m).name
                )));
            }
        }
        Ok(Precosheaf {
            site,
            values,
            action,
        })
    }

    /// A precosheaf with plain values: `values[o]` and `maps[m]`.
    pub fn rudimentary(
        site: Arc<SiteSpec>,
        values: Vec<K::Obj>,
        maps: Vec<K::Map>,
    ) -> Result<Self> {
        let towers: Vec<Arc<Tower<K>>> = values
            .into_iter()
            .map(|v| Arc::new(Tower::rudimentary(v)))
            .collect();
        if maps.len() != site.category.morphism_count() {
            return Err(Error::InvalidPrecosheaf(format!(
                "expected {} maps, got {}",
                site.category.morphism_count(),
                maps.len()
            )));
        }
        let mut action = Vec::with_capacity(maps.len());
        for (m, f) in maps.into_iter().enumerate() {
            let (s, t) = (site.category.src(m), site.category.dst(m));
            if s >= towers.len() || t >= towers.len() {
                return Err(Error::InvalidPrecosheaf("value list too short".into()));
            }
            action.push(LevelMorphism::new(
                towers[s].clone(),
                towers[t].clone(),
                vec![0],
                vec![f],
            )?);
        }
        Self::new(site, towers, action)
    }

    pub fn value(&self, o: ObjectId) -> &Arc<Tower<K>> {
        &self.values[o]
    }

    pub fn act(&self, m: MorphismId) -> &LevelMorphism<K> {
        &self.action[m]
    }

    /// Every value is a single object.
    pub fn is_rudimentary(&self) -> bool {
        self.values.iter().all(|v| v.is_rudimentary())
    }

    pub fn max_depth(&self) -> usize {
        self.values.iter().map(|v| v.depth()).max().unwrap_or(0)
    }

    /// The value at `o` when it is a single object.
    pub fn plain_value(&self, o: ObjectId) -> Option<&K::Obj> {
        self.values[o]
            .is_rudimentary()
            .then(|| self.values[o].level(0))
    }

    /// Identities act as identities and composites as composites, up to
    /// equality at `depth`.
    pub fn check_functoriality(&self, depth: usize) -> Result<()> {
        let cat = &self.site.category;
        for o in 0..cat.object_count() {
            let id = LevelMorphism::identity(self.values[o].clone());
            if !equal_at_depth(&self.action[cat.identity(o)], &id, depth)? {
                return Err(Error::InvalidPrecosheaf(format!(
                    "identity of {} does not act trivially",
                    cat.object_name(o)
                )));
            }
        }
        for ((g, f), gf) in cat.composition_table() {
            if cat.is_identity(g) || cat.is_identity(f) {
                continue;
            }
            let composite = self.action[f].then(&self.action[g]);
            if !equal_at_depth(&self.action[gf], &composite, depth)? {
                return Err(Error::InvalidPrecosheaf(format!(
                    "action does not respect {} ∘ {}",
                    cat.morphism(g).name,
                    cat.morphism(f).name
                )));
            }
        }
        Ok(())
    }

    /// Site-wide level choices for `levels + 1` output levels: `ψ_o(k)`
    /// is deep enough in `A(o)` for every action into deeper choices.
    pub fn reindexing(&self, levels: usize) -> Vec<Vec<usize>> {
        let cat = &self.site.category;
        let edges: Vec<_> = (0..cat.morphism_count())
            .filter(|&m| !cat.is_identity(m))
            .map(|m| (cat.src(m), cat.dst(m), self.action[m].clone()))
            .collect();
        reindex(&self.values, &edges, levels)
    }

    /// The same precosheaf with every value compacted.
    pub fn compacted(&self) -> Result<Self> {
        let values: Vec<Arc<Tower<K>>> =
            self.values.iter().map(|v| Arc::new(v.compact())).collect();
        let cat = &self.site.category;
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(m, f)| f.reseated(values[cat.src(m)].clone(), values[cat.dst(m)].clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Precosheaf {
            site: self.site.clone(),
            values,
            action,
        })
    }

    /// Invariants of each value, level by level.
    pub fn describe(&self) -> Vec<(String, Vec<String>)> {
        let cat = &self.site.category;
        (0..cat.object_count())
            .map(|o| (cat.object_name(o).to_string(), self.values[o].describe()))
            .collect()
    }
}

/// All values `G`, all actions identities.
pub fn constant_precosheaf<K: ValueCategory>(site: Arc<SiteSpec>, g: K::Obj) -> Precosheaf<K> {
    let n = site.category.object_count();
    let maps = (0..site.category.morphism_count())
        .map(|_| K::identity(&g))
        .collect();
    Precosheaf::rudimentary(site, vec![g; n], maps).expect("constant precosheaf is functorial")
}

/// Componentwise level morphisms `A(U) → B(U)`.
#[derive(Clone, Debug)]
pub struct PrecosheafMorphism<K: ValueCategory> {
    pub src: Arc<Precosheaf<K>>,
    pub dst: Arc<Precosheaf<K>>,
    pub components: Vec<LevelMorphism<K>>,
}

impl<K: ValueCategory> PrecosheafMorphism<K> {
    /// Checks endpoints and the naturality squares at `depth`.
    pub fn new(
        src: Arc<Precosheaf<K>>,
        dst: Arc<Precosheaf<K>>,
        components: Vec<LevelMorphism<K>>,
        depth: usize,
    ) -> Result<Self> {
        let f = Self::new_unchecked(src, dst, components)?;
        f.check_naturality(depth)?;
        Ok(f)
    }

    pub fn new_unchecked(
        src: Arc<Precosheaf<K>>,
        dst: Arc<Precosheaf<K>>,
        components: Vec<LevelMorphism<K>>,
    ) -> Result<Self> {
        if src.site != dst.site {
            return Err(Error::InvalidPrecosheaf(
                "morphism between precosheaves on different sites".into(),
            ));
        }
        if components.len() != src.values.len() {
            return Err(Error::InvalidPrecosheaf(
                "one component per object required".into(),
            ));
        }
        for (o, c) in components.iter().enumerate() {
            if c.src().levels() != src.values[o].levels()
                || c.dst().levels() != dst.values[o].levels()
            {
                return Err(Error::InvalidPrecosheaf(format!(
                    "component at {} has wrong endpoints",
                    src.site.category.object_name(o)
                )));
            }
        }
        Ok(PrecosheafMorphism {
            src,
            dst,
            components,
        })
    }

    /// Plain maps between rudimentary precosheaves.
    pub fn rudimentary(
        src: Arc<Precosheaf<K>>,
        dst: Arc<Precosheaf<K>>,
        maps: Vec<K::Map>,
    ) -> Result<Self> {
        if maps.len() != src.values.len() {
            return Err(Error::InvalidPrecosheaf(
                "one component per object required".into(),
            ));
        }
        let components = maps
            .into_iter()
            .enumerate()
            .map(|(o, f)| {
                LevelMorphism::new(
                    src.values[o].clone(),
                    dst.values[o].clone(),
                    vec![0],
                    vec![f],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let depth = src.max_depth().max(dst.max_depth());
        Self::new(src, dst, components, depth)
    }

    pub fn identity(a: Arc<Precosheaf<K>>) -> Self {
        let components = a
            .values
            .iter()
            .map(|v| LevelMorphism::identity(v.clone()))
            .collect();
        PrecosheafMorphism {
            src: a.clone(),
            dst: a,
            components,
        }
    }

    /// `B(m) ∘ f_V ~ f_U ∘ A(m)` for every `m: V → U`; the error names the
    /// first failing square.
    pub fn check_naturality(&self, depth: usize) -> Result<()> {
        let cat = &self.src.site.category;
        for m in 0..cat.morphism_count() {
            let (v, u) = (cat.src(m), cat.dst(m));
            let lhs = self.components[v].then(&self.dst.action[m]);
            let rhs = self.src.action[m].then(&self.components[u]);
            if !equal_at_depth(&lhs, &rhs, depth)? {
                return Err(Error::Naturality(format!(
                    "square at {} fails",
                    cat.morphism(m).name
                )));
            }
        }
        Ok(())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PrecosheafMorphism<K>) -> PrecosheafMorphism<K> {
        let components = self
            .components
            .iter()
            .zip(&g.components)
            .map(|(f, g)| f.then(g))
            .collect();
        PrecosheafMorphism {
            src: self.src.clone(),
            dst: g.dst.clone(),
            components,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{Cover, Coverage, FiniteCategory};
    use crate::value::{FinSet, FinSetCat, FinSetMap};

    /// Two opens `a ≤ b`, `b` covered trivially.
    fn two_chain() -> Arc<SiteSpec> {
        let cat = FiniteCategory::from_poset(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        let mut cov = Coverage::empty(2);
        for o in 0..2 {
            cov.covers[o].push(Cover::trivial(&cat, o));
        }
        Arc::new(SiteSpec::new("two", cat, cov, vec![]).unwrap())
    }

    #[test]
    fn constant_is_functorial() {
        let a = constant_precosheaf::<FinSetCat>(two_chain(), FinSet::new(2));
        assert!(a.is_rudimentary());
        assert!(a.check_functoriality(0).is_ok());
    }

    #[test]
    fn naturality_violation_named() {
        let site = two_chain();
        let a = Arc::new(constant_precosheaf::<FinSetCat>(
            site.clone(),
            FinSet::new(2),
        ));
        let id = FinSetCat::identity(&FinSet::new(2));
        let swap = FinSetMap::from_fn(FinSet::new(2), FinSet::new(2), |x| 1 - x);
        let err = PrecosheafMorphism::rudimentary(a.clone(), a.clone(), vec![id.clone(), swap])
            .unwrap_err();
        assert!(matches!(err, Error::Naturality(_)));
        assert!(PrecosheafMorphism::rudimentary(a.clone(), a, vec![id.clone(), id]).is_ok());
    }
}
