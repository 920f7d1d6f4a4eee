//! Finite colimits of towers, computed levelwise after reindexing.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::value::{Cocone, FiniteDiagram, ValueCategory};

use super::morphism::LevelMorphism;
use super::tower::Tower;

/// An edge `s → t` of a diagram of towers.
pub type TowerEdge<K> = (usize, usize, LevelMorphism<K>);

#[derive(Clone, Debug)]
pub struct TowerCocone<K: ValueCategory> {
    pub apex: Arc<Tower<K>>,
    pub legs: Vec<LevelMorphism<K>>,
    /// `psi[v][k]`: the level of node `v` used at apex level `k`.
    pub psi: Vec<Vec<usize>>,
    /// The levelwise colimit cocones.
    pub level_cocones: Vec<Cocone<K>>,
}

/// Nondecreasing level choices `ψ_v(k) ≥ k` with `ψ_s(k) ≥ φ_e(ψ_t(k))`
/// for every edge `e: s → t`, so that each edge has a component at every
/// apex level. Values are capped at the deepest stored level.
pub fn reindex<K: ValueCategory>(
    nodes: &[Arc<Tower<K>>],
    edges: &[TowerEdge<K>],
    depth: usize,
) -> Vec<Vec<usize>> {
    let cap = nodes
        .iter()
        .map(|x| x.depth())
        .max()
        .unwrap_or(0)
        .max(depth);
    let mut psi: Vec<Vec<usize>> = nodes.iter().map(|_| (0..=depth).collect()).collect();
    loop {
        let mut changed = false;
        for (s, t, e) in edges {
            for k in 0..=depth {
                let want = e.shift(psi[*t][k]).min(e.src().depth()).min(cap);
                if psi[*s][k] < want {
                    psi[*s][k] = want;
                    changed = true;
                }
            }
        }
        for p in psi.iter_mut() {
            for k in 1..=depth {
                if p[k] < p[k - 1] {
                    p[k] = p[k - 1];
                    changed = true;
                }
            }
        }
        if !changed {
            return psi;
        }
    }
}

/// Colimit of a finite diagram of towers, stored to `depth` (at least the
/// deepest node).
pub fn tower_colimit<K: ValueCategory>(
    nodes: &[Arc<Tower<K>>],
    edges: &[TowerEdge<K>],
    depth: usize,
) -> Result<TowerCocone<K>> {
    let depth = nodes
        .iter()
        .map(|x| x.depth())
        .max()
        .unwrap_or(0)
        .max(depth);
    let psi = reindex(nodes, edges, depth);
    tower_colimit_with(nodes, edges, psi)
}

/// Levelwise colimit along a given reindexing.
pub fn tower_colimit_with<K: ValueCategory>(
    nodes: &[Arc<Tower<K>>],
    edges: &[TowerEdge<K>],
    psi: Vec<Vec<usize>>,
) -> Result<TowerCocone<K>> {
    let depth = psi.first().map_or(0, |p| p.len() - 1);
    if psi.len() != nodes.len() || psi.iter().any(|p| p.len() != depth + 1) {
        return Err(Error::ShapeMismatch(
            "reindexing does not match the diagram".into(),
        ));
    }
    for (s, t, e) in edges {
        if e.src().levels() != nodes[*s].levels() || e.dst().levels() != nodes[*t].levels() {
            return Err(Error::HeterogeneousDiagram(format!(
                "edge {s} → {t} has wrong endpoints"
            )));
        }
    }
    let level_cocones: Vec<Cocone<K>> = (0..=depth)
        .map(|k| {
            let objs = nodes
                .iter()
                .zip(&psi)
                .map(|(x, p)| x.level(p[k]).clone())
                .collect();
            let maps = edges
                .iter()
                .map(|(s, t, e)| (*s, *t, e.component_from(psi[*t][k], psi[*s][k])))
                .collect();
            K::colimit(&FiniteDiagram::new(objs, maps))
        })
        .collect();
    let bonds: Vec<K::Map> = (0..depth)
        .map(|k| {
            let legs: Vec<K::Map> = nodes
                .iter()
                .enumerate()
                .map(|(v, x)| {
                    K::compose(&level_cocones[k].legs[v], &x.bond(psi[v][k + 1], psi[v][k]))
                })
                .collect();
            K::factor_colimit(&level_cocones[k + 1], &level_cocones[k].apex, &legs)
        })
        .collect();
    let apex = Arc::new(Tower::new(
        level_cocones.iter().map(|c| c.apex.clone()).collect(),
        bonds,
    )?);
    let legs = nodes
        .iter()
        .enumerate()
        .map(|(v, x)| {
            let comps = level_cocones.iter().map(|c| c.legs[v].clone()).collect();
            LevelMorphism::unchecked(x.clone(), apex.clone(), psi[v].clone(), comps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerCocone {
        apex,
        legs,
        psi,
        level_cocones,
    })
}

impl<K: ValueCategory> TowerCocone<K> {
    /// The map out of the apex induced by compatible level morphisms
    /// `g_v: X_v → T`. Target level `j` is computed at the least apex level
    /// `i` whose reindexing reaches every `φ_{g_v}(j)`.
    pub fn factor(
        &self,
        target: &Arc<Tower<K>>,
        legs: &[LevelMorphism<K>],
    ) -> Result<LevelMorphism<K>> {
        if legs.len() != self.legs.len() {
            return Err(Error::ShapeMismatch("one leg per node required".into()));
        }
        let depth = self.apex.depth();
        let mut shift = Vec::with_capacity(target.depth() + 1);
        let mut comps = Vec::with_capacity(target.depth() + 1);
        for j in 0..=target.depth() {
            let i = (0..=depth)
                .find(|&i| {
                    legs.iter()
                        .enumerate()
                        .all(|(v, g)| self.psi[v][i] >= g.shift(j).min(g.src().depth()))
                })
                .ok_or_else(|| {
                    Error::InsufficientDepth(format!("no apex level reaches target level {j}"))
                })?;
            let level_legs: Vec<K::Map> = legs
                .iter()
                .enumerate()
                .map(|(v, g)| g.component_from(j, self.psi[v][i]))
                .collect();
            shift.push(i);
            comps.push(K::factor_colimit(
                &self.level_cocones[i],
                target.level(j),
                &level_legs,
            ));
        }
        LevelMorphism::new(self.apex.clone(), target.clone(), shift, comps)
    }
}
