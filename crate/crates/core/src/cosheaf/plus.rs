//! The plus construction `A₊` and cosheafification `A₊₊`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pro::{LevelMorphism, Tower};
use crate::site::{MorphismId, ObjectId, Sieve};
use crate::value::{Cocone, FiniteDiagram, ValueCategory};

use super::check::cosheaf_status;
use super::precosheaf::{Precosheaf, PrecosheafMorphism};
use super::tensor::comma_generators;

/// `A₊` with its counit `λ: A₊ → A`.
#[derive(Clone, Debug)]
pub struct Plus<K: ValueCategory> {
    pub value: Arc<Precosheaf<K>>,
    pub counit: PrecosheafMorphism<K>,
}

/// The colimit of one level of `A` over one sieve.
struct LevelColimit<K: ValueCategory> {
    members: Vec<MorphismId>,
    cocone: Cocone<K>,
}

impl<K: ValueCategory> LevelColimit<K> {
    fn leg(&self, m: MorphismId) -> Option<&K::Map> {
        self.members
            .binary_search(&m)
            .ok()
            .map(|i| &self.cocone.legs[i])
    }
}

/// The sieve presenting `A₊(U)` at output level `j`: the chain level on
/// chain objects, the least covering sieve otherwise.
fn presenting_sieve<K: ValueCategory>(a: &Precosheaf<K>, u: ObjectId, j: usize) -> Sieve {
    if a.site.has_chain(u) {
        a.site.chain_sieve(u, j)
    } else {
        a.site.minimal_covering_sieves()[u].clone()
    }
}

/// Number of output levels minus one: enough for the values of `A` and for
/// chains up to one level past `depth`.
pub fn plus_depth<K: ValueCategory>(a: &Precosheaf<K>, depth: usize) -> usize {
    let chains = (0..a.site.object_count())
        .map(|u| a.site.chain_depth(u))
        .max()
        .unwrap_or(0);
    a.max_depth().max(chains.min(depth + 1))
}

/// `A₊(U) = lim_R A ⊗ R`, evaluated on the cofinal presenting sieves. Tower
/// values are read along the diagonal: output level `j` is level `j` of the
/// colimit over the level-`j` sieve.
pub fn plus_cosheaf<K: ValueCategory>(a: &Arc<Precosheaf<K>>, depth: usize) -> Result<Plus<K>> {
    let cat = &a.site.category;
    let n = cat.object_count();
    for u in 0..n {
        if a.site.covers_of(u).is_empty() {
            return Err(Error::NoCofinalPresentation(format!(
                "{} has no covers",
                cat.object_name(u)
            )));
        }
    }
    let e = plus_depth(a, depth);
    let psi = a.reindexing(e);
    let mut generators: HashMap<Vec<MorphismId>, Vec<(usize, usize, MorphismId)>> = HashMap::new();
    let mut sieves: Vec<Vec<Sieve>> = Vec::with_capacity(n);
    let mut colims: Vec<Vec<LevelColimit<K>>> = Vec::with_capacity(n);
    for u in 0..n {
        let mut us = Vec::with_capacity(e + 1);
        let mut uc = Vec::with_capacity(e + 1);
        for j in 0..=e {
            let sieve = presenting_sieve(a, u, j);
            let members: Vec<MorphismId> = sieve.members.iter().copied().collect();
            let gens = generators
                .entry(members.clone())
                .or_insert_with(|| comma_generators(cat, &members));
            let nodes = members
                .iter()
                .map(|&m| a.values[cat.src(m)].level(psi[cat.src(m)][j]).clone())
                .collect();
            let edges = gens
                .iter()
                .map(|&(s, t, b)| {
                    let (vs, vt) = (cat.src(members[s]), cat.src(members[t]));
                    (s, t, a.action[b].component_from(psi[vt][j], psi[vs][j]))
                })
                .collect();
            let cocone = K::colimit(&FiniteDiagram::new(nodes, edges));
            us.push(sieve);
            uc.push(LevelColimit { members, cocone });
        }
        sieves.push(us);
        colims.push(uc);
    }
    // Restriction of A between output levels, along the reindexing.
    let down = |m: MorphismId, i: usize, j: usize| -> K::Map {
        let v = cat.src(m);
        a.values[v].bond(psi[v][i], psi[v][j])
    };
    let mut values = Vec::with_capacity(n);
    for u in 0..n {
        let levels: Vec<K::Obj> = colims[u].iter().map(|c| c.cocone.apex.clone()).collect();
        let bonds = (0..e)
            .map(|j| {
                let (hi, lo) = (&colims[u][j + 1], &colims[u][j]);
                let legs: Vec<K::Map> = hi
                    .members
                    .iter()
                    .map(|&m| {
                        K::compose(
                            lo.leg(m).expect("chain sieves decrease"),
                            &down(m, j + 1, j),
                        )
                    })
                    .collect();
                K::factor_colimit(&hi.cocone, &lo.cocone.apex, &legs)
            })
            .collect();
        values.push(Arc::new(Tower::new(levels, bonds)?));
    }
    let mut action = Vec::with_capacity(cat.morphism_count());
    for f in 0..cat.morphism_count() {
        let (v, u) = (cat.src(f), cat.dst(f));
        let mut shift = Vec::with_capacity(e + 1);
        let mut comps = Vec::with_capacity(e + 1);
        for j in 0..=e {
            let target = &colims[u][j];
            let i = (j..=e)
                .find(|&i| {
                    sieves[v][i]
                        .members
                        .iter()
                        .all(|&m| cat.compose(f, m).is_some_and(|fm| target.leg(fm).is_some()))
                })
                .ok_or_else(|| {
                    Error::NoCofinalPresentation(format!(
                        "no cover of {} transports into level {j} of {}",
                        cat.object_name(v),
                        cat.object_name(u)
                    ))
                })?;
            let source = &colims[v][i];
            let legs: Vec<K::Map> = source
                .members
                .iter()
                .map(|&m| {
                    let fm = cat.compose(f, m).expect("composable");
                    K::compose(target.leg(fm).expect("checked above"), &down(m, i, j))
                })
                .collect();
            shift.push(i);
            comps.push(K::factor_colimit(
                &source.cocone,
                &target.cocone.apex,
                &legs,
            ));
        }
        action.push(LevelMorphism::unchecked(
            values[v].clone(),
            values[u].clone(),
            shift,
            comps,
        )?);
    }
    let plus = Precosheaf::new_unchecked(a.site.clone(), values, action)?;
    let mut counit = Vec::with_capacity(n);
    for u in 0..n {
        let target = a.values[u].clone();
        let comps = (0..=target.depth())
            .map(|j| {
                let c = &colims[u][j];
                let legs: Vec<K::Map> = c
                    .members
                    .iter()
                    .map(|&m| a.action[m].component_from(j, psi[cat.src(m)][j]))
                    .collect();
                K::factor_colimit(&c.cocone, target.level(j), &legs)
            })
            .collect();
        counit.push(LevelMorphism::unchecked(
            plus.values[u].clone(),
            target,
            (0..=a.values[u].depth()).collect(),
            comps,
        )?);
    }
    let compact = Arc::new(plus.compacted()?);
    let counit = counit
        .iter()
        .enumerate()
        .map(|(u, c)| c.reseated(compact.values[u].clone(), a.values[u].clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Plus {
        value: compact.clone(),
        counit: PrecosheafMorphism::new_unchecked(compact, a.clone(), counit)?,
    })
}

/// `A₊₊` with the composite counit, and the postconditions on the
/// intermediate steps.
#[derive(Clone, Debug)]
pub struct Cosheafification<K: ValueCategory> {
    pub plus: Plus<K>,
    pub value: Arc<Precosheaf<K>>,
    /// `A₊₊ → A₊ → A`.
    pub counit: PrecosheafMorphism<K>,
    pub plus_coseparated: bool,
    pub result_is_cosheaf: bool,
}

pub fn cosheafify<K: ValueCategory>(
    a: &Arc<Precosheaf<K>>,
    depth: usize,
) -> Result<Cosheafification<K>> {
    let first = plus_cosheaf(a, depth)?;
    let second = plus_cosheaf(&first.value, depth)?;
    let counit = second.counit.then(&first.counit);
    let plus_coseparated = cosheaf_status(&first.value, depth)?.coseparated;
    let result_is_cosheaf = cosheaf_status(&second.value, depth)?.cosheaf;
    Ok(Cosheafification {
        value: second.value.clone(),
        counit,
        plus: first,
        plus_coseparated,
        result_is_cosheaf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosheaf::{check_cosheaf, constant_precosheaf};
    use crate::pro::is_iso_at_depth;
    use crate::site::{Cover, Coverage, FiniteCategory, SiteSpec};
    use crate::topo::{
        converging_sequence_site, open_site, pi0_precosheaf, ConvergingLayout, CoverPolicy,
        FiniteSpace,
    };
    use crate::value::{FinSet, FinSetCat};

    fn counit_is_iso<K: ValueCategory>(f: &PrecosheafMorphism<K>, depth: usize) -> bool {
        f.components.iter().all(|c| is_iso_at_depth(c, depth).iso)
    }

    #[test]
    fn counit_of_a_cosheaf_is_an_isomorphism() {
        let os = open_site(
            &FiniteSpace::pseudocircle(),
            CoverPolicy::AllIrredundant,
            10,
        )
        .unwrap();
        let a = Arc::new(pi0_precosheaf(&os));
        assert!(counit_is_iso(&plus_cosheaf(&a, 6).unwrap().counit, 6));
        let c = cosheafify(&a, 6).unwrap();
        assert!(counit_is_iso(&c.counit, 6));
        assert!(c.plus_coseparated && c.result_is_cosheaf);
    }

    #[test]
    fn one_point_on_a_connected_finite_space_cosheafifies_to_components() {
        let os = open_site(
            &FiniteSpace::pseudocircle(),
            CoverPolicy::AllIrredundant,
            10,
        )
        .unwrap();
        let pt = Arc::new(constant_precosheaf::<FinSetCat>(
            os.site.clone(),
            FinSet::new(1),
        ));
        let sharp = cosheafify(&pt, 6).unwrap().value;
        let pi0 = pi0_precosheaf(&os);
        for u in 0..os.site.object_count() {
            assert!(sharp.values[u].is_rudimentary());
            assert_eq!(sharp.values[u].level(0).len(), pi0.values[u].level(0).len());
        }
        assert!(check_cosheaf(&sharp, 6).unwrap().is_pass());
    }

    #[test]
    fn converging_point_cosheafifies_to_growing_towers() {
        let n = 6;
        let l = ConvergingLayout { n };
        let pt = Arc::new(constant_precosheaf::<FinSetCat>(
            converging_sequence_site(n).unwrap(),
            FinSet::new(1),
        ));
        let c = cosheafify(&pt, 6).unwrap();
        assert!(c.plus_coseparated);
        let x = &c.value.values[l.v(1)];
        let sizes: Vec<usize> = x.levels().iter().map(FinSet::len).collect();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
        for m in 0..x.depth() {
            assert!(FinSetCat::classify(&x.bonds()[m]).epi);
        }
        for k in 1..n {
            assert!(!c.value.values[l.v(k)].is_rudimentary());
        }
        assert_eq!(c.value.values[l.s(1)].level(0).len(), 1);
    }

    #[test]
    fn object_with_only_the_trivial_cover_keeps_its_value() {
        let cat = FiniteCategory::from_poset(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        let mut cov = Coverage::empty(2);
        for o in 0..2 {
            cov.covers[o].push(Cover::trivial(&cat, o));
        }
        let site = Arc::new(SiteSpec::new("two", cat, cov, vec![]).unwrap());
        let a = Arc::new(constant_precosheaf::<FinSetCat>(site, FinSet::new(3)));
        let p = plus_cosheaf(&a, 6).unwrap();
        for u in 0..2 {
            assert_eq!(p.value.values[u].level(0).len(), 3);
        }
        assert!(counit_is_iso(&p.counit, 6));
    }
}
