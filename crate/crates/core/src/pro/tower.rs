//! Towers: inverse sequences `X₀ ← X₁ ← ... ← X_N`, read as constant
//! beyond the stored depth.

use crate::error::{Error, Result};
use crate::value::ValueCategory;

#[derive(Clone, Debug)]
pub struct Tower<K: ValueCategory> {
    levels: Vec<K::Obj>,
    /// `bonds[k]: X_{k+1} → X_k`.
    bonds: Vec<K::Map>,
}

impl<K: ValueCategory> Tower<K> {
    pub fn new(levels: Vec<K::Obj>, bonds: Vec<K::Map>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidValue("tower without levels".into()));
        }
        if bonds.len() + 1 != levels.len() {
            return Err(Error::InvalidValue(format!(
                "{} levels need {} bonds",
                levels.len(),
                levels.len() - 1
            )));
        }
        for (k, b) in bonds.iter().enumerate() {
            if K::src(b) != &levels[k + 1] || K::dst(b) != &levels[k] {
                return Err(Error::InvalidValue(format!(
                    "bond {} → {k} has wrong endpoints",
                    k + 1
                )));
            }
        }
        Ok(Tower { levels, bonds })
    }

    /// A single object as a constant tower of depth 0.
    pub fn rudimentary(x: K::Obj) -> Self {
        Tower {
            levels: vec![x],
            bonds: Vec::new(),
        }
    }

    /// Builds a tower from a level count and a bond function.
    pub fn from_fn(levels: Vec<K::Obj>, bond: impl Fn(usize) -> K::Map) -> Result<Self> {
        let bonds = (0..levels.len().saturating_sub(1)).map(bond).collect();
        Self::new(levels, bonds)
    }

    /// Number of stored levels minus one.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_rudimentary(&self) -> bool {
        self.levels.len() == 1
    }

    /// Level `k`, clamped to the deepest stored level.
    pub fn level(&self, k: usize) -> &K::Obj {
        &self.levels[k.min(self.depth())]
    }

    pub fn levels(&self) -> &[K::Obj] {
        &self.levels
    }

    pub fn bonds(&self) -> &[K::Map] {
        &self.bonds
    }

    /// The bond composite `X_m → X_k` for `m ≥ k` after clamping both
    /// levels to the stored depth.
    pub fn bond(&self, m: usize, k: usize) -> K::Map {
        let (m, k) = (m.min(self.depth()), k.min(self.depth()));
        assert!(m >= k, "bond from level {m} to deeper level {k}");
        let mut acc = K::identity(&self.levels[m]);
        for i in (k..m).rev() {
            acc = K::compose(&self.bonds[i], &acc);
        }
        acc
    }

    /// Keeps levels `0..=d`.
    pub fn truncate(&self, d: usize) -> Self {
        let n = d.min(self.depth());
        Tower {
            levels: self.levels[..=n].to_vec(),
            bonds: self.bonds[..n].to_vec(),
        }
    }

    /// Stores levels up to `d`, repeating the last level with identities.
    pub fn extend_to(&self, d: usize) -> Self {
        let mut t = self.clone();
        while t.depth() < d {
            let last = t.levels.last().expect("nonempty").clone();
            t.bonds.push(K::identity(&last));
            t.levels.push(last);
        }
        t
    }

    /// Drops trailing levels that repeat the previous level under an
    /// identity bond; the clamped reading is unchanged.
    pub fn compact(&self) -> Self {
        let mut t = self.clone();
        while t.depth() > 0 {
            let n = t.depth();
            if t.levels[n] != t.levels[n - 1]
                || !K::maps_equal(&t.bonds[n - 1], &K::identity(&t.levels[n]))
            {
                break;
            }
            t.levels.pop();
            t.bonds.pop();
        }
        t
    }

    /// Same stored levels and equal bonds.
    pub fn structurally_equal(&self, other: &Self) -> bool {
        self.levels == other.levels
            && self
                .bonds
                .iter()
                .zip(&other.bonds)
                .all(|(a, b)| K::maps_equal(a, b))
    }

    pub fn describe(&self) -> Vec<String> {
        self.levels.iter().map(K::describe).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{FinSet, FinSetCat, FinSetMap};

    /// Sizes 1, 2, ..., with the bond merging the top two elements.
    pub fn merging(depth: usize) -> Tower<FinSetCat> {
        let levels: Vec<FinSet> = (0..=depth).map(|k| FinSet::new(k + 1)).collect();
        Tower::from_fn(levels, |k| {
            FinSetMap::from_fn(FinSet::new(k + 2), FinSet::new(k + 1), move |x| x.min(k))
        })
        .unwrap()
    }

    #[test]
    fn bonds_compose_and_clamp() {
        let t = merging(3);
        let b = t.bond(3, 0);
        assert_eq!(b.table(), &[0, 0, 0, 0]);
        assert_eq!(t.bond(7, 3).table(), &[0, 1, 2, 3]);
        assert_eq!(t.level(9).len(), 4);
        assert_eq!(t.truncate(1).depth(), 1);
        assert_eq!(t.extend_to(5).depth(), 5);
        assert_eq!(t.extend_to(5).compact().depth(), 3);
    }

    #[test]
    fn endpoint_mismatch_rejected() {
        let bad = FinSetMap::from_fn(FinSet::new(1), FinSet::new(1), |_| 0);
        assert!(Tower::<FinSetCat>::new(vec![FinSet::new(2), FinSet::new(1)], vec![bad]).is_err());
    }
}
