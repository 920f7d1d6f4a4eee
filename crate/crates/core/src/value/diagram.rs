//! Finite diagrams in a value category and their (co)cones.

use crate::error::{Error, Result};
use crate::site::FiniteCategory;

use super::ValueCategory;

/// A diagram presented by a graph: nodes carry objects, edges carry maps.
/// The colimit or limit of a functor on a finite category equals that of
/// its underlying graph, so the shape category is optional.
#[derive(Clone, Debug)]
pub struct FiniteDiagram<K: ValueCategory> {
    pub nodes: Vec<K::Obj>,
    pub edges: Vec<(usize, usize, K::Map)>,
}

impl<K: ValueCategory> FiniteDiagram<K> {
    pub fn new(nodes: Vec<K::Obj>, edges: Vec<(usize, usize, K::Map)>) -> Self {
        FiniteDiagram { nodes, edges }
    }

    pub fn discrete(nodes: Vec<K::Obj>) -> Self {
        FiniteDiagram {
            nodes,
            edges: Vec::new(),
        }
    }

    /// A functor on `shape`. Identity morphisms are skipped as edges; the
    /// functor laws are checked exactly.
    pub fn from_functor(
        shape: &FiniteCategory,
        nodes: Vec<K::Obj>,
        action: Vec<K::Map>,
    ) -> Result<Self> {
        if nodes.len() != shape.object_count() || action.len() != shape.morphism_count() {
            return Err(Error::ShapeMismatch(
                "functor tables do not match the shape".into(),
            ));
        }
        for (m, f) in action.iter().enumerate() {
            let mor = shape.morphism(m);
            if K::src(f) != &nodes[mor.src] || K::dst(f) != &nodes[mor.dst] {
                return Err(Error::ShapeMismatch(format!(
                    "map for {} has wrong endpoints",
                    mor.name
                )));
            }
        }
        for o in 0..shape.object_count() {
            if !K::maps_equal(&action[shape.identity(o)], &K::identity(&nodes[o])) {
                return Err(Error::ShapeMismatch(format!(
                    "identity of {} not preserved",
                    shape.object_name(o)
                )));
            }
        }
        for ((g, f), gf) in shape.composition_table() {
            if !K::maps_equal(&K::compose(&action[g], &action[f]), &action[gf]) {
                return Err(Error::ShapeMismatch(format!(
                    "composition {} ∘ {} not preserved",
                    shape.morphism(g).name,
                    shape.morphism(f).name
                )));
            }
        }
        let edges = action
            .into_iter()
            .enumerate()
            .filter(|(m, _)| !shape.is_identity(*m))
            .map(|(m, f)| (shape.src(m), shape.dst(m), f))
            .collect();
        Ok(FiniteDiagram { nodes, edges })
    }
}

#[derive(Clone, Debug)]
pub struct Cocone<K: ValueCategory> {
    pub apex: K::Obj,
    pub legs: Vec<K::Map>,
    pub data: K::CoconeData,
}

#[derive(Clone, Debug)]
pub struct Cone<K: ValueCategory> {
    pub apex: K::Obj,
    pub legs: Vec<K::Map>,
    pub data: K::ConeData,
}

impl<K: ValueCategory> Cocone<K> {
    pub fn factor(&self, target: &K::Obj, legs: &[K::Map]) -> K::Map {
        K::factor_colimit(self, target, legs)
    }

    /// Every edge triangle commutes.
    pub fn commutes(&self, d: &FiniteDiagram<K>) -> bool {
        d.edges
            .iter()
            .all(|(s, t, f)| K::maps_equal(&K::compose(&self.legs[*t], f), &self.legs[*s]))
    }
}

impl<K: ValueCategory> Cone<K> {
    pub fn factor(&self, source: &K::Obj, legs: &[K::Map]) -> K::Map {
        K::factor_limit(self, source, legs)
    }

    pub fn commutes(&self, d: &FiniteDiagram<K>) -> bool {
        d.edges
            .iter()
            .all(|(s, t, f)| K::maps_equal(&K::compose(f, &self.legs[*s]), &self.legs[*t]))
    }
}
