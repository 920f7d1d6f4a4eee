//! Finite categories given by an explicit composition table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

pub type ObjectId = usize;
pub type MorphismId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjectId,
    pub dst: ObjectId,
}

/// A finite category. Objects and morphisms are addressed by dense indices;
/// names are kept for I/O and reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<MorphismId>,
    composition: HashMap<(MorphismId, MorphismId), MorphismId>,
    into: Vec<Vec<MorphismId>>,
    hom: HashMap<(ObjectId, ObjectId), Vec<MorphismId>>,
}

impl FiniteCategory {
    /// Builds and validates a category. `composition` maps `(g, f)` to `g∘f`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorphismId>,
        composition: HashMap<(MorphismId, MorphismId), MorphismId>,
    ) -> Result<Self> {
        let cat = Self::assemble(objects, morphisms, identity, composition);
        cat.validate()?;
        Ok(cat)
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorphismId>,
        composition: HashMap<(MorphismId, MorphismId), MorphismId>,
    ) -> Self {
        let mut into = vec![Vec::new(); objects.len()];
        let mut hom: HashMap<(ObjectId, ObjectId), Vec<MorphismId>> = HashMap::new();
        for (id, m) in morphisms.iter().enumerate() {
            if m.dst < objects.len() {
                into[m.dst].push(id);
            }
            hom.entry((m.src, m.dst)).or_default().push(id);
        }
        FiniteCategory {
            objects,
            morphisms,
            identity,
            composition,
            into,
            hom,
        }
    }

    /// The category of a finite preorder given by `leq` pairs `(a, b)`
    /// meaning `a ≤ b`, i.e. a morphism `a → b`. Reflexive-transitive
    /// closure is taken; the closure must be antisymmetric.
    pub fn from_poset(objects: Vec<String>, leq: &[(ObjectId, ObjectId)]) -> Result<Self> {
        let n = objects.len();
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for &(a, b) in leq {
            if a >= n || b >= n {
                return Err(Error::InvalidCategory(format!(
                    "order pair ({a}, {b}) out of range"
                )));
            }
            rel[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rel[i][j] && rel[j][i] {
                    return Err(Error::InvalidCategory(format!(
                        "order is not antisymmetric: {} and {}",
                        objects[i], objects[j]
                    )));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut index = vec![vec![usize::MAX; n]; n];
        let mut identity = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    let name = if i == j {
                        format!("id_{}", objects[i])
                    } else {
                        format!("{}<={}", objects[i], objects[j])
                    };
                    index[i][j] = morphisms.len();
                    if i == j {
                        identity[i] = morphisms.len();
                    }
                    morphisms.push(Morphism {
                        name,
                        src: i,
                        dst: j,
                    });
                }
            }
        }
        let mut composition = HashMap::new();
        for (f, mf) in morphisms.iter().enumerate() {
            for (g, mg) in morphisms.iter().enumerate() {
                if mg.src == mf.dst {
                    composition.insert((g, f), index[mf.src][mg.dst]);
                }
            }
        }
        Ok(Self::assemble(objects, morphisms, identity, composition))
    }

    /// Exhaustive check of the composition table, identity laws and
    /// associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.objects.len();
        if self.identity.len() != n {
            return Err(Error::InvalidCategory(
                "identity table has wrong length".into(),
            ));
        }
        for m in &self.morphisms {
            if m.src >= n || m.dst >= n {
                return Err(Error::InvalidCategory(format!(
                    "morphism {} has unknown endpoint",
                    m.name
                )));
            }
        }
        for (o, &id) in self.identity.iter().enumerate() {
            let m = self.morphisms.get(id).ok_or_else(|| {
                Error::InvalidCategory(format!("identity of {} is not a morphism", self.objects[o]))
            })?;
            if m.src != o || m.dst != o {
                return Err(Error::InvalidCategory(format!(
                    "identity of {} has wrong endpoints",
                    self.objects[o]
                )));
            }
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for (g, mg) in self.morphisms.iter().enumerate() {
                match (mg.src == mf.dst, self.composition.get(&(g, f))) {
                    (true, None) => {
                        return Err(Error::InvalidCategory(format!(
                            "composition {} ∘ {} undefined",
                            mg.name, mf.name
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(Error::InvalidCategory(format!(
                            "composition {} ∘ {} defined on a non-composable pair",
                            mg.name, mf.name
                        )))
                    }
                    (true, Some(&h)) => {
                        let mh = self.morphisms.get(h).ok_or_else(|| {
                            Error::InvalidCategory(format!(
                                "composite {} ∘ {} is not a morphism",
                                mg.name, mf.name
                            ))
                        })?;
                        if mh.src != mf.src || mh.dst != mg.dst {
                            return Err(Error::InvalidCategory(format!(
                                "triple ({}, {}, {}) has wrong endpoints",
                                mg.name, mf.name, mh.name
                            )));
                        }
                    }
                    (false, None) => {}
                }
            }
            if self.composition[&(self.identity[mf.dst], f)] != f
                || self.composition[&(f, self.identity[mf.src])] != f
            {
                return Err(Error::InvalidCategory(format!(
                    "identity law fails at {}",
                    mf.name
                )));
            }
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for &g in &self.out_of(mf.dst) {
                let gf = self.composition[&(g, f)];
                for &h in &self.out_of(self.morphisms[g].dst) {
                    let hg = self.composition[&(h, g)];
                    if self.composition[&(h, gf)] != self.composition[&(hg, f)] {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails on ({}, {}, {})",
                            self.morphisms[h].name, self.morphisms[g].name, mf.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: MorphismId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphism_id(&self, name: &str) -> Option<MorphismId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn src(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m].src
    }

    pub fn dst(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m].dst
    }

    pub fn identity(&self, o: ObjectId) -> MorphismId {
        self.identity[o]
    }

    pub fn is_identity(&self, m: MorphismId) -> bool {
        self.identity[self.morphisms[m].src] == m
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: MorphismId, f: MorphismId) -> Option<MorphismId> {
        self.composition.get(&(g, f)).copied()
    }

    pub fn composition_table(&self) -> BTreeMap<(MorphismId, MorphismId), MorphismId> {
        self.composition.iter().map(|(k, v)| (*k, *v)).collect()
    }

    /// All morphisms with the given codomain.
    pub fn morphisms_into(&self, o: ObjectId) -> &[MorphismId] {
        &self.into[o]
    }

    pub fn out_of(&self, o: ObjectId) -> Vec<MorphismId> {
        (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].src == o)
            .collect()
    }

    pub fn hom(&self, a: ObjectId, b: ObjectId) -> &[MorphismId] {
        self.hom.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// At most one morphism between any two objects.
    pub fn is_poset(&self) -> bool {
        self.hom.values().all(|v| v.len() <= 1)
            && (0..self.objects.len()).all(|a| {
                (0..self.objects.len())
                    .all(|b| a == b || self.hom(a, b).is_empty() || self.hom(b, a).is_empty())
            })
    }

    /// Objects `V` with some morphism `V → o`.
    pub fn down_set(&self, o: ObjectId) -> BTreeSet<ObjectId> {
        self.into[o]
            .iter()
            .map(|&m| self.morphisms[m].src)
            .collect()
    }
}

/// The comma category `C_R` of a sieve: objects are the sieve's members,
/// morphisms `β: V₁ → V₂` with `m₂ ∘ β = m₁`.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: FiniteCategory,
    /// Comma object index → member morphism of the base category.
    pub members: Vec<MorphismId>,
    /// Comma morphism index → underlying base morphism `β`.
    pub underlying: Vec<MorphismId>,
}

impl CommaCategory {
    pub fn build(base: &FiniteCategory, members: &[MorphismId]) -> Self {
        let objects: Vec<String> = members
            .iter()
            .map(|&m| base.morphism(m).name.clone())
            .collect();
        let mut morphisms = Vec::new();
        let mut underlying = Vec::new();
        let mut lookup: HashMap<(usize, usize, MorphismId), usize> = HashMap::new();
        let mut identity = vec![0; members.len()];
        for (i, &m1) in members.iter().enumerate() {
            let v1 = base.src(m1);
            for (j, &m2) in members.iter().enumerate() {
                let v2 = base.src(m2);
                for &beta in base.hom(v1, v2) {
                    if base.compose(m2, beta) == Some(m1) {
                        let id = morphisms.len();
                        if i == j && base.is_identity(beta) {
                            identity[i] = id;
                        }
                        lookup.insert((i, j, beta), id);
                        morphisms.push(Morphism {
                            name: format!(
                                "{}:{}->{}",
                                base.morphism(beta).name,
                                objects[i],
                                objects[j]
                            ),
                            src: i,
                            dst: j,
                        });
                        underlying.push(beta);
                    }
                }
            }
        }
        let mut composition = HashMap::new();
        for (f, mf) in morphisms.iter().enumerate() {
            for (g, mg) in morphisms.iter().enumerate() {
                if mg.src == mf.dst {
                    let beta = base
                        .compose(underlying[g], underlying[f])
                        .expect("composable in base");
                    composition.insert((g, f), lookup[&(mf.src, mg.dst, beta)]);
                }
            }
        }

        let category = FiniteCategory::assemble(objects, morphisms, identity, composition);
        CommaCategory {
            category,
            members: members.to_vec(),
            underlying,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terminal() -> FiniteCategory {
        FiniteCategory::new(
            vec!["*".into()],
            vec![Morphism {
                name: "id".into(),
                src: 0,
                dst: 0,
            }],
            vec![0],
            HashMap::from([((0, 0), 0)]),
        )
        .unwrap()
    }

    #[test]
    fn terminal_category_is_valid() {
        let c = terminal();
        assert!(c.is_poset());
        assert_eq!(c.compose(0, 0), Some(0));
    }

    #[test]
    fn broken_triple_is_reported() {
        // two parallel endomorphisms with a non-associative table
        let morphisms = vec![
            Morphism {
                name: "id".into(),
                src: 0,
                dst: 0,
            },
            Morphism {
                name: "a".into(),
                src: 0,
                dst: 0,
            },
        ];
        let composition = HashMap::from([((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)]);
        assert!(
            FiniteCategory::new(vec!["x".into()], morphisms.clone(), vec![0], composition).is_ok()
        );
        let bad = HashMap::from([((0, 0), 0), ((0, 1), 0), ((1, 0), 1), ((1, 1), 0)]);
        let err = FiniteCategory::new(vec!["x".into()], morphisms, vec![0], bad).unwrap_err();
        assert!(
            err.to_string().contains("identity law") || err.to_string().contains("associativity")
        );
    }

    #[test]
    fn poset_closure() {
        let c =
            FiniteCategory::from_poset(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2)])
                .unwrap();
        assert_eq!(c.hom(0, 2).len(), 1);
        assert!(c.is_poset());
        c.validate().unwrap();
        assert!(
            FiniteCategory::from_poset(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err()
        );
    }
}
