//! Sieves: sets of morphisms into a fixed object closed under precomposition.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::category::{CommaCategory, FiniteCategory, MorphismId, ObjectId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub target: ObjectId,
    pub members: BTreeSet<MorphismId>,
}

impl Sieve {
    /// Validates the sieve invariants.
    pub fn new(
        cat: &FiniteCategory,
        target: ObjectId,
        members: BTreeSet<MorphismId>,
    ) -> Result<Self> {
        let s = Sieve { target, members };
        if let Some(bad) = s.members.iter().find(|&&m| cat.dst(m) != target) {
            return Err(Error::InvalidSite(format!(
                "sieve member {} does not end at {}",
                cat.morphism(*bad).name,
                cat.object_name(target)
            )));
        }
        if !s.is_closed(cat) {
            return Err(Error::InvalidSite(
                "sieve is not closed under precomposition".into(),
            ));
        }
        Ok(s)
    }

    pub fn empty(target: ObjectId) -> Self {
        Sieve {
            target,
            members: BTreeSet::new(),
        }
    }

    /// The maximal sieve `h_U`.
    pub fn maximal(cat: &FiniteCategory, target: ObjectId) -> Self {
        Sieve {
            target,
            members: cat.morphisms_into(target).iter().copied().collect(),
        }
    }

    /// All morphisms into `target` factoring through one of `generators`.
    pub fn generated(cat: &FiniteCategory, target: ObjectId, generators: &[MorphismId]) -> Self {
        let mut members = BTreeSet::new();
        for &p in generators {
            for &g in cat.morphisms_into(cat.src(p)) {
                members.insert(cat.compose(p, g).expect("composable"));
            }
        }
        Sieve { target, members }
    }

    pub fn is_closed(&self, cat: &FiniteCategory) -> bool {
        self.members.iter().all(|&f| {
            cat.morphisms_into(cat.src(f))
                .iter()
                .all(|&g| self.contains(cat.compose(f, g).expect("composable")))
        })
    }

    pub fn contains(&self, m: MorphismId) -> bool {
        self.members.contains(&m)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.target == other.target && self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Sieve) -> Sieve {
        assert_eq!(self.target, other.target);
        Sieve {
            target: self.target,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    /// `f*R = {g : f ∘ g ∈ R}` on the source of `f`.
    pub fn pullback(&self, cat: &FiniteCategory, f: MorphismId) -> Sieve {
        assert_eq!(cat.dst(f), self.target);
        let v = cat.src(f);
        let members = cat
            .morphisms_into(v)
            .iter()
            .copied()
            .filter(|&g| self.contains(cat.compose(f, g).expect("composable")))
            .collect();
        Sieve { target: v, members }
    }

    /// `f ∘ R` for a sieve on the source of `f`, as a set of morphisms.
    pub fn push(&self, cat: &FiniteCategory, f: MorphismId) -> BTreeSet<MorphismId> {
        assert_eq!(cat.src(f), self.target);
        self.members
            .iter()
            .map(|&g| cat.compose(f, g).expect("composable"))
            .collect()
    }

    /// The comma category `C_R`.
    pub fn comma(&self, cat: &FiniteCategory) -> CommaCategory {
        let members: Vec<MorphismId> = self.members.iter().copied().collect();
        CommaCategory::build(cat, &members)
    }

    pub fn member_names(&self, cat: &FiniteCategory) -> Vec<String> {
        self.members
            .iter()
            .map(|&m| cat.morphism(m).name.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// U ⊇ V1, V2 ⊇ W
    fn diamond() -> FiniteCategory {
        FiniteCategory::from_poset(
            vec!["U".into(), "V1".into(), "V2".into(), "W".into()],
            &[(1, 0), (2, 0), (3, 1), (3, 2)],
        )
        .unwrap()
    }

    #[test]
    fn generated_sieve_of_two_pieces() {
        let c = diamond();
        let v1 = c.hom(1, 0)[0];
        let v2 = c.hom(2, 0)[0];
        let s = Sieve::generated(&c, 0, &[v1, v2]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(c.hom(3, 0)[0]));
        assert!(!s.contains(c.identity(0)));
        assert!(s.is_closed(&c));
    }

    #[test]
    fn maximal_comma_is_down_set() {
        let c = diamond();
        let m = Sieve::maximal(&c, 0);
        let comma = m.comma(&c);
        assert_eq!(comma.category.object_count(), 4);
        comma.category.validate().unwrap();
        assert_eq!(
            comma.category.morphism_count(),
            c.morphisms_into(0)
                .iter()
                .map(|&x| c.morphisms_into(c.src(x)).len())
                .sum::<usize>()
        );
    }

    #[test]
    fn comma_of_cover_sieve_is_cospan() {
        let c = diamond();
        let s = Sieve::generated(&c, 0, &[c.hom(1, 0)[0], c.hom(2, 0)[0]]);
        let comma = s.comma(&c);
        comma.category.validate().unwrap();
        // three identities plus W → V1, W → V2
        assert_eq!(comma.category.morphism_count(), 5);
        let empty = Sieve::empty(0).comma(&c);
        assert_eq!(empty.category.object_count(), 0);
    }

    #[test]
    fn pullback_of_maximal_is_maximal() {
        let c = diamond();
        let m = Sieve::maximal(&c, 0);
        let f = c.hom(3, 0)[0];
        assert_eq!(m.pullback(&c, f), Sieve::maximal(&c, 3));
    }
}
