//! Colimits over sieves and covers, with their comparison maps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pro::{
    equal_at_depth, is_epi_at_depth, is_iso_at_depth, tower_colimit, tower_colimit_with,
    LevelMorphism, Tower, TowerCocone, TowerEdge,
};
use crate::site::{Cover, FiniteCategory, MorphismId, Sieve};
use crate::value::ValueCategory;

use super::precosheaf::Precosheaf;

/// `A ⊗ R`: the colimit of `A` over the comma category of `R`, with the
/// comparison map into `A(target)`.
#[derive(Clone, Debug)]
pub struct SieveColimit<K: ValueCategory> {
    pub sieve: Sieve,
    /// Comma object `i` is the member `members[i]`.
    pub members: Vec<MorphismId>,
    pub cocone: TowerCocone<K>,
    pub comparison: LevelMorphism<K>,
}

impl<K: ValueCategory> SieveColimit<K> {
    pub fn apex(&self) -> &Arc<Tower<K>> {
        &self.cocone.apex
    }

    /// Position of a member morphism among the comma objects.
    pub fn index_of(&self, m: MorphismId) -> Option<usize> {
        self.members.binary_search(&m).ok()
    }
}

/// Morphisms of the comma category that are not identities and not
/// composites of two non-identity comma morphisms. They generate the
/// comma category, so the colimit over them is the full colimit.
pub fn comma_generators(
    cat: &FiniteCategory,
    members: &[MorphismId],
) -> Vec<(usize, usize, MorphismId)> {
    let mut all = Vec::new();
    for (i, &mi) in members.iter().enumerate() {
        for (j, &mj) in members.iter().enumerate() {
            for &beta in cat.hom(cat.src(mi), cat.src(mj)) {
                if (i != j || !cat.is_identity(beta)) && cat.compose(mj, beta) == Some(mi) {
                    all.push((i, j, beta));
                }
            }
        }
    }
    all.iter()
        .filter(|&&(i, j, beta)| {
            !all.iter().any(|&(i1, k, b1)| {
                i1 == i
                    && all.iter().any(|&(k2, j2, b2)| {
                        k2 == k && j2 == j && cat.compose(b2, b1) == Some(beta)
                    })
            })
        })
        .copied()
        .collect()
}

/// `A ⊗ R` along site-wide level choices `psi` (see
/// [`Precosheaf::reindexing`]).
pub fn sieve_colimit<K: ValueCategory>(
    a: &Precosheaf<K>,
    sieve: &Sieve,
    psi: &[Vec<usize>],
) -> Result<SieveColimit<K>> {
    let cat = &a.site.category;
    let members: Vec<MorphismId> = sieve.members.iter().copied().collect();
    let nodes: Vec<Arc<Tower<K>>> = members
        .iter()
        .map(|&m| a.values[cat.src(m)].clone())
        .collect();
    let edges: Vec<TowerEdge<K>> = comma_generators(cat, &members)
        .into_iter()
        .map(|(i, j, b)| (i, j, a.action[b].clone()))
        .collect();
    let node_psi = members.iter().map(|&m| psi[cat.src(m)].clone()).collect();
    let cocone = tower_colimit_with(&nodes, &edges, node_psi)?;
    let u = sieve.target;
    let target = a.values[u].clone();
    let e = cocone.apex.depth();
    let mut shift = Vec::new();
    let mut comps = Vec::new();
    for j in 0..=target.depth() {
        let i = j.min(e);
        let legs: Vec<K::Map> = members
            .iter()
            .map(|&m| {
                let level = psi
                    .get(cat.src(m))
                    .and_then(|p| p.get(i).copied())
                    .unwrap_or(i);
                a.action[m].component_from(j, level)
            })
            .collect();
        shift.push(i);
        comps.push(K::factor_colimit(
            &cocone.level_cocones[i],
            target.level(j),
            &legs,
        ));
    }
    let comparison = LevelMorphism::new(cocone.apex.clone(), target, shift, comps)?;
    Ok(SieveColimit {
        sieve: sieve.clone(),
        members,
        cocone,
        comparison,
    })
}

/// `A ⊗ R` with level choices computed from `A` itself.
pub fn tensor_with_sieve<K: ValueCategory>(
    a: &Precosheaf<K>,
    sieve: &Sieve,
) -> Result<SieveColimit<K>> {
    if sieve.target >= a.site.object_count() {
        return Err(Error::InvalidSite(format!(
            "sieve target {} not in site",
            sieve.target
        )));
    }
    let psi = a.reindexing(a.max_depth());
    sieve_colimit(a, sieve, &psi)
}

/// A node of the cover diagram: a piece or a declared intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverNode {
    Piece(usize),
    Meet(usize, usize),
}

/// The comparison map of a cover, computed by the cokernel formula when
/// intersections are declared (fast path) and by the sieve colimit
/// otherwise.
#[derive(Clone, Debug)]
pub struct Defect<K: ValueCategory> {
    pub cover: Cover,
    pub fast_path: bool,
    pub nodes: Vec<CoverNode>,
    pub cocone: TowerCocone<K>,
    pub comparison: LevelMorphism<K>,
}

impl<K: ValueCategory> Defect<K> {
    pub fn apex(&self) -> &Arc<Tower<K>> {
        &self.cocone.apex
    }
}

/// Declared intersections are complete for the cokernel formula: every
/// unordered pair of pieces, and diagonal pairs too outside posets.
fn fast_path_nodes(a_is_poset: bool, cover: &Cover) -> Option<Vec<CoverNode>> {
    let ix = cover.intersections.as_ref()?;
    let n = cover.pieces.len();
    let mut nodes: Vec<CoverNode> = (0..n).map(CoverNode::Piece).collect();
    for i in 0..n {
        for j in i..n {
            if i == j && a_is_poset {
                continue;
            }
            if ix.contains_key(&(i, j)) {
                nodes.push(CoverNode::Meet(i, j));
            } else if ix.contains_key(&(j, i)) {
                nodes.push(CoverNode::Meet(j, i));
            } else {
                return None;
            }
        }
    }
    Some(nodes)
}

/// The defect `coker(∐ A(U_i ×_U U_j) ⇉ ∐ A(U_i)) → A(U)` of a cover.
pub fn cosheaf_defect<K: ValueCategory>(a: &Precosheaf<K>, cover: &Cover) -> Result<Defect<K>> {
    cover.validate(&a.site.category)?;
    match fast_path_nodes(a.site.poset, cover) {
        Some(nodes) => fast_defect(a, cover, nodes),
        None => slow_defect(a, cover),
    }
}

fn fast_defect<K: ValueCategory>(
    a: &Precosheaf<K>,
    cover: &Cover,
    nodes: Vec<CoverNode>,
) -> Result<Defect<K>> {
    let cat = &a.site.category;
    let ix = cover
        .intersections
        .as_ref()
        .expect("fast path has intersections");
    let mut towers = Vec::with_capacity(nodes.len());
    let mut edges: Vec<TowerEdge<K>> = Vec::new();
    let mut legs = Vec::with_capacity(nodes.len());
    for (n, node) in nodes.iter().enumerate() {
        match *node {
            CoverNode::Piece(i) => {
                let p = cover.pieces[i];
                towers.push(a.values[cat.src(p)].clone());
                legs.push(a.action[p].clone());
            }
            CoverNode::Meet(i, j) => {
                let x = &ix[&(i, j)];
                towers.push(a.values[x.object].clone());
                edges.push((n, i, a.action[x.to_left].clone()));
                edges.push((n, j, a.action[x.to_right].clone()));
                let via = cat
                    .compose(cover.pieces[i], x.to_left)
                    .expect("intersection composes");
                legs.push(a.action[via].clone());
            }
        }
    }
    let cocone = tower_colimit(&towers, &edges, a.max_depth())?;
    let comparison = cocone.factor(&a.values[cover.target], &legs)?;
    Ok(Defect {
        cover: cover.clone(),
        fast_path: true,
        nodes,
        cocone,
        comparison,
    })
}

fn slow_defect<K: ValueCategory>(a: &Precosheaf<K>, cover: &Cover) -> Result<Defect<K>> {
    let s = tensor_with_sieve(a, &cover.sieve(&a.site.category))?;
    let nodes = (0..cover.pieces.len()).map(CoverNode::Piece).collect();
    Ok(Defect {
        cover: cover.clone(),
        fast_path: false,
        nodes,
        cocone: s.cocone,
        comparison: s.comparison,
    })
}

/// The explicit comparison `φ` from the cokernel formula to the sieve
/// colimit, with the verdicts that it is an isomorphism and that it
/// commutes with the two maps into `A(U)`.
#[derive(Clone, Debug)]
pub struct FastSlowComparison<K: ValueCategory> {
    pub map: LevelMorphism<K>,
    pub is_iso: bool,
    pub commutes: bool,
}

pub fn fast_slow_comparison<K: ValueCategory>(
    a: &Precosheaf<K>,
    cover: &Cover,
    depth: usize,
) -> Result<Option<FastSlowComparison<K>>> {
    let fast = cosheaf_defect(a, cover)?;
    if !fast.fast_path {
        return Ok(None);
    }
    let cat = &a.site.category;
    let slow = tensor_with_sieve(a, &cover.sieve(cat))?;
    let ix = cover
        .intersections
        .as_ref()
        .expect("fast path has intersections");
    let legs = fast
        .nodes
        .iter()
        .map(|node| {
            let m = match *node {
                CoverNode::Piece(i) => cover.pieces[i],
                CoverNode::Meet(i, j) => cat
                    .compose(cover.pieces[i], ix[&(i, j)].to_left)
                    .expect("composes"),
            };
            slow.index_of(m)
                .map(|k| slow.cocone.legs[k].clone())
                .ok_or_else(|| Error::InvalidSite("cover piece outside its sieve".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let map = fast.cocone.factor(slow.apex(), &legs)?;
    let is_iso = is_iso_at_depth(&map, depth).iso;
    let commutes = equal_at_depth(&map.then(&slow.comparison), &fast.comparison, depth)?;
    Ok(Some(FastSlowComparison {
        map,
        is_iso,
        commutes,
    }))
}

/// Epi and iso verdicts of a comparison map: exact for single objects,
/// at depth for towers.
pub fn classify_comparison<K: ValueCategory>(f: &LevelMorphism<K>, depth: usize) -> (bool, bool) {
    if f.src().is_rudimentary() && f.dst().is_rudimentary() {
        let c = K::classify(f.component(0));
        (c.epi, c.iso)
    } else {
        let iso = is_iso_at_depth(f, depth).iso;
        (iso || is_epi_at_depth(f, depth, None).epi, iso)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosheaf::constant_precosheaf;
    use crate::site::{Coverage, FiniteCategory, Sieve, SiteSpec};
    use crate::topo::{open_site, pi0_precosheaf, CoverPolicy, FiniteSpace};
    use crate::value::{FinSet, FinSetCat};

    fn pseudocircle() -> crate::topo::OpenSite {
        open_site(
            &FiniteSpace::pseudocircle(),
            CoverPolicy::AllIrredundant,
            10,
        )
        .unwrap()
    }

    /// The cover of the whole space by the minimal opens of `c` and `d`.
    fn arcs_cover(os: &crate::topo::OpenSite) -> Cover {
        let cat = &os.site.category;
        let x = os.object_of(&(0..4).collect()).unwrap();
        let arcs = |c: &&Cover| {
            c.pieces.len() == 2
                && c.pieces
                    .iter()
                    .all(|&p| os.opens[cat.morphism(p).src].len() == 3)
        };
        os.site.covers_of(x).into_iter().find(arcs).unwrap().clone()
    }

    #[test]
    fn maximal_sieve_gives_an_isomorphism() {
        let os = pseudocircle();
        let a = pi0_precosheaf(&os);
        for u in 0..os.site.object_count() {
            let t = tensor_with_sieve(&a, &Sieve::maximal(&os.site.category, u)).unwrap();
            assert!(classify_comparison(&t.comparison, 0).1);
        }
    }

    #[test]
    fn arcs_of_the_pseudocircle_glue_to_one_component() {
        let os = pseudocircle();
        let a = pi0_precosheaf(&os);
        let cover = arcs_cover(&os);
        let t = tensor_with_sieve(&a, &cover.sieve(&os.site.category)).unwrap();
        assert_eq!(t.apex().level(0).len(), 1);
        assert!(classify_comparison(&t.comparison, 0).1);
        let d = cosheaf_defect(&a, &cover).unwrap();
        assert!(d.fast_path);
        assert_eq!(d.apex().level(0).len(), 1);
        assert!(classify_comparison(&d.comparison, 0).1);
    }

    #[test]
    fn disjoint_pieces_without_a_common_lower_bound_stay_apart() {
        let names = vec!["a1".into(), "a2".into(), "a3".into(), "U".into()];
        let cat = FiniteCategory::from_poset(names, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let mut cov = Coverage::empty(4);
        for o in 0..4 {
            cov.covers[o].push(Cover::trivial(&cat, o));
        }
        let pieces: Vec<_> = (0..3).map(|i| cat.hom(i, 3)[0]).collect();
        let sieve = Sieve::generated(&cat, 3, &pieces);
        let site = Arc::new(SiteSpec::new("fan", cat, cov, vec![]).unwrap());
        let pt = constant_precosheaf::<FinSetCat>(site, FinSet::new(1));
        let t = tensor_with_sieve(&pt, &sieve).unwrap();
        assert_eq!(t.apex().level(0).len(), 3);
        assert!(!classify_comparison(&t.comparison, 0).1);
    }

    #[test]
    fn trivial_cover_has_an_iso_defect() {
        let os = pseudocircle();
        let a = pi0_precosheaf(&os);
        for u in 0..os.site.object_count() {
            let d = cosheaf_defect(&a, &Cover::trivial(&os.site.category, u)).unwrap();
            assert!(classify_comparison(&d.comparison, 0).1);
        }
    }

    #[test]
    fn empty_cover_defect_is_iso_exactly_when_the_value_is_initial() {
        let os = pseudocircle();
        let empty = os.object_of(&Default::default()).unwrap();
        let cover = Cover::new(empty, vec![]);
        let pi0 = pi0_precosheaf(&os);
        let d = cosheaf_defect(&pi0, &cover).unwrap();
        assert!(d.apex().level(0).is_empty());
        assert!(classify_comparison(&d.comparison, 0).1);
        let pt = constant_precosheaf::<FinSetCat>(os.site.clone(), FinSet::new(1));
        let d = cosheaf_defect(&pt, &cover).unwrap();
        assert_eq!(classify_comparison(&d.comparison, 0), (false, false));
    }

    #[test]
    fn fast_and_slow_paths_agree_on_the_arcs() {
        let os = pseudocircle();
        let cmp = fast_slow_comparison(&pi0_precosheaf(&os), &arcs_cover(&os), 0)
            .unwrap()
            .unwrap();
        assert!(cmp.is_iso && cmp.commutes);
    }
}
