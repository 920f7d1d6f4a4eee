//! Tensor and power pairings with finite sets, and the end/coend pairing of
//! functors on a finite category.

use crate::error::{Error, Result};
use crate::site::FiniteCategory;

use super::{Cocone, Cone, FinSet, FinSetCat, FiniteDiagram, ValueCategory};

/// A functor from a finite category into a value category. When
/// `contravariant` is set, `action[α]` for `α: U → V` goes `F(V) → F(U)`.
#[derive(Clone, Debug)]
pub struct Functor<K: ValueCategory> {
    pub values: Vec<K::Obj>,
    pub action: Vec<K::Map>,
    pub contravariant: bool,
}

impl<K: ValueCategory> Functor<K> {
    pub fn covariant(values: Vec<K::Obj>, action: Vec<K::Map>) -> Self {
        Functor {
            values,
            action,
            contravariant: false,
        }
    }

    pub fn contravariant(values: Vec<K::Obj>, action: Vec<K::Map>) -> Self {
        Functor {
            values,
            action,
            contravariant: true,
        }
    }

    /// The functor laws, checked exactly.
    pub fn validate(&self, cat: &FiniteCategory) -> Result<()> {
        if self.values.len() != cat.object_count() || self.action.len() != cat.morphism_count() {
            return Err(Error::ShapeMismatch(
                "functor tables do not match the category".into(),
            ));
        }
        for (m, f) in self.action.iter().enumerate() {
            let (s, t) = (cat.src(m), cat.dst(m));
            let (s, t) = if self.contravariant { (t, s) } else { (s, t) };
            if K::src(f) != &self.values[s] || K::dst(f) != &self.values[t] {
                return Err(Error::ShapeMismatch(format!(
                    "map for {} has wrong endpoints",
                    cat.morphism(m).name
                )));
            }
        }
        for o in 0..cat.object_count() {
            if !K::maps_equal(&self.action[cat.identity(o)], &K::identity(&self.values[o])) {
                return Err(Error::ShapeMismatch(format!(
                    "identity of {} not preserved",
                    cat.object_name(o)
                )));
            }
        }
        for ((g, f), gf) in cat.composition_table() {
            let lhs = if self.contravariant {
                K::compose(&self.action[f], &self.action[g])
            } else {
                K::compose(&self.action[g], &self.action[f])
            };
            if !K::maps_equal(&lhs, &self.action[gf]) {
                return Err(Error::ShapeMismatch(format!(
                    "composite {} ∘ {} not preserved",
                    cat.morphism(g).name,
                    cat.morphism(f).name
                )));
            }
        }
        Ok(())
    }
}

/// `G ⊗ Z = ∐_Z G` with its injections and `Hom(Z, G) = ∏_Z G` with its
/// projections.
pub fn set_pairings<K: ValueCategory>(g: &K::Obj, z: &FinSet) -> (Cocone<K>, Cone<K>) {
    let copies = vec![g.clone(); z.len()];
    (super::coproduct::<K>(&copies), super::product::<K>(&copies))
}

/// Result of [`functor_pairings`]. Node `i` of the end diagram is the
/// factor `A(U)` indexed by `end_index[i] = (U, b ∈ B(U))`; likewise for the
/// coend with `(U, x ∈ F(U))`.
#[derive(Clone, Debug)]
pub struct Pairings<K: ValueCategory> {
    pub end: Cone<K>,
    pub end_index: Vec<(usize, usize)>,
    pub coend: Cocone<K>,
    pub coend_index: Vec<(usize, usize)>,
}

/// `Hom_{Set^C}(B, A)` as the equalizer of
/// `∏_U Hom(B(U), A(U)) ⇉ ∏_{α: U→V} Hom(B(U), A(V))`, and `A ⊗_{Set^C} F`
/// as the coequalizer of `∐_{α: U→V} A(U) ⊗ F(V) ⇉ ∐_U A(U) ⊗ F(U)`.
/// Both are computed as the (co)limit of the graph whose nodes are the
/// factors of the middle term and whose edges encode the parallel pair.
pub fn functor_pairings<K: ValueCategory>(
    cat: &FiniteCategory,
    a: &Functor<K>,
    b: &Functor<FinSetCat>,
    f: &Functor<FinSetCat>,
) -> Result<Pairings<K>> {
    if a.contravariant || b.contravariant || !f.contravariant {
        return Err(Error::ShapeMismatch(
            "expected A and B covariant, F contravariant".into(),
        ));
    }
    a.validate(cat)?;
    b.validate(cat)?;
    f.validate(cat)?;

    let mut end_index = Vec::new();
    let mut end_node = vec![Vec::new(); cat.object_count()];
    for u in 0..cat.object_count() {
        for e in 0..b.values[u].len() {
            end_node[u].push(end_index.len());
            end_index.push((u, e));
        }
    }
    let mut end_edges = Vec::new();
    for m in 0..cat.morphism_count() {
        if cat.is_identity(m) {
            continue;
        }
        let (u, v) = (cat.src(m), cat.dst(m));
        for e in 0..b.values[u].len() {
            let e2 = b.action[m].apply(e);
            end_edges.push((end_node[u][e], end_node[v][e2], a.action[m].clone()));
        }
    }
    let end_nodes = end_index
        .iter()
        .map(|&(u, _)| a.values[u].clone())
        .collect();
    let end = K::limit(&FiniteDiagram::new(end_nodes, end_edges));

    let mut coend_index = Vec::new();
    let mut coend_node = vec![Vec::new(); cat.object_count()];
    for u in 0..cat.object_count() {
        for x in 0..f.values[u].len() {
            coend_node[u].push(coend_index.len());
            coend_index.push((u, x));
        }
    }
    let mut coend_edges = Vec::new();
    for m in 0..cat.morphism_count() {
        if cat.is_identity(m) {
            continue;
        }
        let (u, v) = (cat.src(m), cat.dst(m));
        for x in 0..f.values[v].len() {
            let x2 = f.action[m].apply(x);
            coend_edges.push((coend_node[u][x2], coend_node[v][x], a.action[m].clone()));
        }
    }
    let coend_nodes = coend_index
        .iter()
        .map(|&(u, _)| a.values[u].clone())
        .collect();
    let coend = K::colimit(&FiniteDiagram::new(coend_nodes, coend_edges));
    Ok(Pairings {
        end,
        end_index,
        coend,
        coend_index,
    })
}

/// All natural transformations `B ⇒ A` between functors of the same
/// variance, by backtracking with naturality pruning. `None` when some
/// hom-set is not enumerable.
pub fn natural_transformations<K: ValueCategory>(
    cat: &FiniteCategory,
    b: &Functor<K>,
    a: &Functor<K>,
) -> Option<Vec<Vec<K::Map>>> {
    let n = cat.object_count();
    let homs: Vec<Vec<K::Map>> = (0..n)
        .map(|u| K::enumerate_homs(&b.values[u], &a.values[u]))
        .collect::<Option<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut chosen: Vec<K::Map> = Vec::with_capacity(n);
    fn natural_so_far<K: ValueCategory>(
        cat: &FiniteCategory,
        b: &Functor<K>,
        a: &Functor<K>,
        chosen: &[K::Map],
    ) -> bool {
        let k = chosen.len() - 1;
        for m in 0..cat.morphism_count() {
            let (s, t) = (cat.src(m), cat.dst(m));
            let (s, t) = if b.contravariant { (t, s) } else { (s, t) };
            if s.max(t) != k {
                continue;
            }
            let lhs = K::compose(&a.action[m], &chosen[s]);
            let rhs = K::compose(&chosen[t], &b.action[m]);
            if !K::maps_equal(&lhs, &rhs) {
                return false;
            }
        }
        true
    }
    fn go<K: ValueCategory>(
        cat: &FiniteCategory,
        b: &Functor<K>,
        a: &Functor<K>,
        homs: &[Vec<K::Map>],
        chosen: &mut Vec<K::Map>,
        out: &mut Vec<Vec<K::Map>>,
    ) {
        let k = chosen.len();
        if k == homs.len() {
            out.push(chosen.clone());
            return;
        }
        for h in &homs[k] {
            chosen.push(h.clone());
            if natural_so_far(cat, b, a, chosen) {
                go(cat, b, a, homs, chosen, out);
            }
            chosen.pop();
        }
    }
    go(cat, b, a, &homs, &mut chosen, &mut out);
    Some(out)
}
