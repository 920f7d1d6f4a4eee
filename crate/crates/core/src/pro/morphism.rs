//! Level morphisms: a shift `φ` and components `f_j: X_{φ(j)} → Y_j`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::value::ValueCategory;

use super::tower::Tower;

#[derive(Clone, Debug)]
pub struct LevelMorphism<K: ValueCategory> {
    src: Arc<Tower<K>>,
    dst: Arc<Tower<K>>,
    shift: Vec<usize>,
    components: Vec<K::Map>,
}

impl<K: ValueCategory> LevelMorphism<K> {
    /// One component per stored level of the target. Checks endpoints,
    /// monotonicity of the shift and the commuting squares.
    pub fn new(
        src: Arc<Tower<K>>,
        dst: Arc<Tower<K>>,
        shift: Vec<usize>,
        components: Vec<K::Map>,
    ) -> Result<Self> {
        let f = Self::unchecked(src, dst, shift, components)?;
        f.check_squares()?;
        Ok(f)
    }

    pub(crate) fn unchecked(
        src: Arc<Tower<K>>,
        dst: Arc<Tower<K>>,
        shift: Vec<usize>,
        components: Vec<K::Map>,
    ) -> Result<Self> {
        if shift.len() != dst.depth() + 1 || components.len() != shift.len() {
            return Err(Error::InvalidValue(format!(
                "level morphism needs {} components, got {}",
                dst.depth() + 1,
                components.len()
            )));
        }
        if shift.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidValue("shift is not nondecreasing".into()));
        }
        for (j, c) in components.iter().enumerate() {
            if K::src(c) != src.level(shift[j]) || K::dst(c) != dst.level(j) {
                return Err(Error::InvalidValue(format!(
                    "component {j} has wrong endpoints"
                )));
            }
        }
        Ok(LevelMorphism {
            src,
            dst,
            shift,
            components,
        })
    }

    fn check_squares(&self) -> Result<()> {
        for j in 0..self.dst.depth() {
            let lhs = K::compose(
                &self.components[j],
                &self.src.bond(self.shift[j + 1], self.shift[j]),
            );
            let rhs = K::compose(&self.dst.bond(j + 1, j), &self.components[j + 1]);
            if !K::maps_equal(&lhs, &rhs) {
                return Err(Error::InvalidValue(format!(
                    "commuting square fails at level {j}"
                )));
            }
        }
        Ok(())
    }

    /// The commuting-square invariant.
    pub fn is_valid(&self) -> bool {
        self.check_squares().is_ok()
    }

    pub fn identity(x: Arc<Tower<K>>) -> Self {
        let shift = (0..=x.depth()).collect();
        let components = x.levels().iter().map(K::identity).collect();
        LevelMorphism {
            src: x.clone(),
            dst: x,
            shift,
            components,
        }
    }

    /// A single map between rudimentary towers.
    pub fn rudimentary(f: K::Map) -> Self {
        let src = Arc::new(Tower::rudimentary(K::src(&f).clone()));
        let dst = Arc::new(Tower::rudimentary(K::dst(&f).clone()));
        LevelMorphism {
            src,
            dst,
            shift: vec![0],
            components: vec![f],
        }
    }

    /// Levelwise components with the identity shift (clamped to the
    /// source depth).
    pub fn levelwise(
        src: Arc<Tower<K>>,
        dst: Arc<Tower<K>>,
        components: Vec<K::Map>,
    ) -> Result<Self> {
        let shift = (0..=dst.depth()).map(|j| j.min(src.depth())).collect();
        Self::new(src, dst, shift, components)
    }

    pub fn src(&self) -> &Arc<Tower<K>> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Tower<K>> {
        &self.dst
    }

    /// `φ(j)`, clamped past the target depth.
    pub fn shift(&self, j: usize) -> usize {
        self.shift[j.min(self.dst.depth())]
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shift
    }

    /// `f_j`, clamped past the target depth.
    pub fn component(&self, j: usize) -> &K::Map {
        &self.components[j.min(self.dst.depth())]
    }

    pub fn components(&self) -> &[K::Map] {
        &self.components
    }

    /// `f_j ∘ b(i → φ(j))` for `i ≥ φ(j)`.
    pub fn component_from(&self, j: usize, i: usize) -> K::Map {
        let p = self.shift(j);
        K::compose(self.component(j), &self.src.bond(i.max(p), p))
    }

    /// `g ∘ f` for `f: X → Y` (self) and `g: Y → Z`.
    pub fn then(&self, g: &LevelMorphism<K>) -> LevelMorphism<K> {
        let shift: Vec<usize> = (0..=g.dst.depth())
            .map(|j| self.shift(g.shift(j)))
            .collect();
        let components = (0..=g.dst.depth())
            .map(|j| K::compose(g.component(j), self.component(g.shift(j))))
            .collect();
        LevelMorphism {
            src: self.src.clone(),
            dst: g.dst.clone(),
            shift,
            components,
        }
    }

    /// Equivalent morphism with `φ(j) ≥ j` wherever the source has level
    /// `j` stored.
    pub fn normalized(&self) -> LevelMorphism<K> {
        let shift: Vec<usize> = (0..=self.dst.depth())
            .map(|j| self.shift(j).max(j.min(self.src.depth())))
            .collect();
        let components = (0..=self.dst.depth())
            .map(|j| self.component_from(j, shift[j]))
            .collect();
        LevelMorphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            shift,
            components,
        }
    }

    /// The same morphism with the target stored to at least depth `d`.
    pub fn extended(&self, d: usize) -> LevelMorphism<K> {
        if d <= self.dst.depth() {
            return self.clone();
        }
        let dst = Arc::new(self.dst.extend_to(d));
        let shift = (0..=d).map(|j| self.shift(j)).collect();
        let components = (0..=d).map(|j| self.component(j).clone()).collect();
        LevelMorphism {
            src: self.src.clone(),
            dst,
            shift,
            components,
        }
    }

    /// Re-targets onto compacted (or otherwise clamp-equivalent) towers,
    /// dropping components past the new target depth.
    pub fn reseated(&self, src: Arc<Tower<K>>, dst: Arc<Tower<K>>) -> Result<LevelMorphism<K>> {
        let n = dst.depth() + 1;
        let shift = (0..n).map(|j| self.shift(j)).collect();
        let components = (0..n).map(|j| self.component(j).clone()).collect();
        Self::unchecked(src, dst, shift, components)
    }

    /// Replaces the target tower with a structurally equal one.
    pub fn with_dst(&self, dst: Arc<Tower<K>>) -> LevelMorphism<K> {
        LevelMorphism {
            dst,
            ..self.clone()
        }
    }

    pub fn with_src(&self, src: Arc<Tower<K>>) -> LevelMorphism<K> {
        LevelMorphism {
            src,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{FinSet, FinSetCat, FinSetMap, ValueCategory};

    fn merging(depth: usize) -> Arc<Tower<FinSetCat>> {
        let levels: Vec<FinSet> = (0..=depth).map(|k| FinSet::new(k + 1)).collect();
        Arc::new(
            Tower::from_fn(levels, |k| {
                FinSetMap::from_fn(FinSet::new(k + 2), FinSet::new(k + 1), move |x| x.min(k))
            })
            .unwrap(),
        )
    }

    #[test]
    fn identity_is_valid_and_composes() {
        let x = merging(3);
        let id = LevelMorphism::identity(x.clone());
        assert!(id.is_valid());
        let c = id.then(&id);
        assert_eq!(c.shifts(), &[0, 1, 2, 3]);
        assert!(c.is_valid());
    }

    #[test]
    fn map_to_point_with_shift() {
        let x = merging(3);
        let pt = Arc::new(Tower::rudimentary(FinSet::new(1)));
        let f = LevelMorphism::new(
            x.clone(),
            pt,
            vec![2],
            vec![FinSetMap::from_fn(FinSet::new(3), FinSet::new(1), |_| 0)],
        )
        .unwrap();
        let n = f.normalized();
        assert_eq!(n.shift(0), 2);
        let id = LevelMorphism::identity(x);
        let c = id.then(&f);
        assert!(c.is_valid());
    }

    #[test]
    fn broken_square_rejected() {
        let two = FinSet::new(2);
        let x = Arc::new(
            Tower::<FinSetCat>::from_fn(vec![two.clone(), two.clone()], |_| {
                FinSetCat::identity(&two)
            })
            .unwrap(),
        );
        let swap = FinSetMap::from_fn(two.clone(), two.clone(), |v| 1 - v);
        let id = FinSetCat::identity(&two);
        assert!(LevelMorphism::new(
            x.clone(),
            x.clone(),
            vec![0, 1],
            vec![id.clone(), swap.clone()]
        )
        .is_err());
        assert!(LevelMorphism::new(x.clone(), x, vec![0, 1], vec![swap.clone(), swap]).is_ok());
    }
}
