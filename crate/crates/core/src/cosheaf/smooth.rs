//! Smoothness and the universal property of cosheafification.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::pro::{is_rudimentary_at_depth, LevelMorphism, DEFAULT_WINDOW};
use crate::report::{CheckReport, Witness};
use crate::value::pairing::{natural_transformations, Functor};
use crate::value::ValueCategory;

use super::check::cosheaf_status;
use super::plus::{cosheafify, plus_cosheaf, Plus};
use super::precosheaf::{Precosheaf, PrecosheafMorphism};
use super::tensor::tensor_with_sieve;

/// PASS iff every value of `A₊₊` is rudimentary at `depth`. Tower-valued
/// inputs are smooth by definition and pass with a note.
pub fn is_smooth<K: ValueCategory>(a: &Arc<Precosheaf<K>>, depth: usize) -> Result<CheckReport> {
    if !a.is_rudimentary() {
        return Ok(CheckReport::pass("smooth", "SMOOTH").with_trace(
            "smoothness is defined for K-valued precosheaves; Pro-valued precosheaves are smooth",
        ));
    }
    let sharp = cosheafify(a, depth)?;
    let cat = &a.site.category;
    let mut qualified = false;
    for u in 0..cat.object_count() {
        let value = &sharp.value.values[u];
        qualified |= !value.is_rudimentary();
        let v = is_rudimentary_at_depth(value, depth, DEFAULT_WINDOW);
        if !v.rudimentary {
            let w = Witness::new("growth-profile")
                .object(cat.object_name(u))
                .level(v.failing_level.unwrap_or(0))
                .detail(json!({"profile": v.profile_json(), "reason": v.reason}));
            return Ok(CheckReport::fail("smooth", "NOT-SMOOTH", w).at_depth(depth));
        }
    }
    let r = CheckReport::pass("smooth", "SMOOTH");
    Ok(if qualified { r.at_depth(depth) } else { r })
}

fn require_plain<K: ValueCategory>(a: &Precosheaf<K>, what: &str) -> Result<()> {
    if a.is_rudimentary() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{what} has tower values; the factorization check needs plain values"
        )))
    }
}

/// `f₊: B₊ → A₊` for plain-valued `f: B → A` whose plus constructions are
/// plain-valued.
pub fn plus_morphism<K: ValueCategory>(
    f: &PrecosheafMorphism<K>,
    pb: &Plus<K>,
    pa: &Plus<K>,
) -> Result<PrecosheafMorphism<K>> {
    require_plain(&f.src, "source")?;
    require_plain(&f.dst, "target")?;
    require_plain(&pb.value, "plus of the source")?;
    require_plain(&pa.value, "plus of the target")?;
    let site = &f.src.site;
    let mut comps = Vec::with_capacity(site.object_count());
    for u in 0..site.object_count() {
        let sieve = site.minimal_covering_sieves()[u].clone();
        let sb = tensor_with_sieve(&f.src, &sieve)?;
        let sa = tensor_with_sieve(&f.dst, &sieve)?;
        let target = pa.value.values[u].level(0);
        if &sa.cocone.apex.levels()[0] != target {
            return Err(Error::Unsupported(
                "plus value is not presented by the least covering sieve".into(),
            ));
        }
        let legs: Vec<K::Map> = sa
            .members
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                K::compose(
                    &sa.cocone.level_cocones[0].legs[i],
                    f.components[site.category.src(m)].component(0),
                )
            })
            .collect();
        let map = K::factor_colimit(&sb.cocone.level_cocones[0], target, &legs);
        comps.push(LevelMorphism::new(
            pb.value.values[u].clone(),
            pa.value.values[u].clone(),
            vec![0],
            vec![map],
        )?);
    }
    PrecosheafMorphism::new_unchecked(pb.value.clone(), pa.value.clone(), comps)
}

fn as_functor<K: ValueCategory>(a: &Precosheaf<K>) -> Functor<K> {
    Functor::covariant(
        a.values.iter().map(|v| v.level(0).clone()).collect(),
        a.action.iter().map(|f| f.component(0).clone()).collect(),
    )
}

fn factors_at<K: ValueCategory>(
    eps: &PrecosheafMorphism<K>,
    f: &PrecosheafMorphism<K>,
    u: usize,
    g: &K::Map,
) -> bool {
    K::maps_equal(
        &K::compose(eps.components[u].component(0), g),
        f.components[u].component(0),
    )
}

/// For a cosheaf `B` and `f: B → A`, builds `g = f₊₊ ∘ ε_B⁻¹: B → A₊₊`,
/// checks `ε_A ∘ g = f` and, when hom-sets are enumerable, that `g` is the
/// only natural transformation with that property.
pub fn universal_factorization_check<K: ValueCategory>(
    a: &Arc<Precosheaf<K>>,
    b: &Arc<Precosheaf<K>>,
    f: &PrecosheafMorphism<K>,
    depth: usize,
) -> Result<CheckReport> {
    if !cosheaf_status(b, depth)?.cosheaf {
        return Err(Error::InvalidPrecosheaf(
            "the source of the factorization must be a cosheaf".into(),
        ));
    }
    let cat = &a.site.category;
    let (a1, b1) = (plus_cosheaf(a, depth)?, plus_cosheaf(b, depth)?);
    let (a2, b2) = (
        plus_cosheaf(&a1.value, depth)?,
        plus_cosheaf(&b1.value, depth)?,
    );
    let f1 = plus_morphism(f, &b1, &a1)?;
    let f2 = plus_morphism(&f1, &b2, &a2)?;
    let eps_a = a2.counit.then(&a1.counit);
    let eps_b = b2.counit.then(&b1.counit);
    let mut g = Vec::with_capacity(cat.object_count());
    for u in 0..cat.object_count() {
        let inv = K::inverse(eps_b.components[u].component(0)).ok_or_else(|| {
            Error::InvalidPrecosheaf(format!(
                "counit of the cosheaf is not invertible at {}",
                cat.object_name(u)
            ))
        })?;
        g.push(K::compose(f2.components[u].component(0), &inv));
    }
    let factors = |h: &[K::Map]| {
        h.iter()
            .enumerate()
            .all(|(u, hu)| factors_at(&eps_a, f, u, hu))
    };
    if let Some(u) = (0..cat.object_count()).find(|&u| !factors_at(&eps_a, f, u, &g[u])) {
        return Ok(CheckReport::fail(
            "universal-factorization",
            "NO-FACTORIZATION",
            Witness::new("factorization-mismatch").object(cat.object_name(u)),
        ));
    }
    let mut report = CheckReport::pass("universal-factorization", "FACTORS");
    match natural_transformations(cat, &as_functor(b), &as_functor(&a2.value)) {
        Some(all) => {
            let count = all.iter().filter(|h| factors(h)).count();
            report = report.with_trace(format!(
                "{count} of {} natural transformations factor f",
                all.len()
            ));
            if count != 1 {
                return Ok(CheckReport::fail(
                    "universal-factorization",
                    "NOT-UNIQUE",
                    Witness::new("factorization-count").detail(json!({"count": count})),
                ));
            }
        }
        None => report = report.with_trace("hom-sets not enumerable; uniqueness not enumerated"),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosheaf::constant_precosheaf;
    use crate::topo::{
        converging_sequence_site, open_site, pi0_precosheaf, CoverPolicy, FiniteSpace,
    };
    use crate::value::{FinAb, FinAbCat, FinSet, FinSetCat, FinSetMap};

    #[test]
    fn smoothness_verdicts_on_the_model_spaces() {
        let os = open_site(
            &FiniteSpace::pseudocircle(),
            CoverPolicy::AllIrredundant,
            10,
        )
        .unwrap();
        assert!(is_smooth(&Arc::new(pi0_precosheaf(&os)), 6)
            .unwrap()
            .is_pass());
        let conv = converging_sequence_site(6).unwrap();
        let pt = Arc::new(constant_precosheaf::<FinSetCat>(
            conv.clone(),
            FinSet::new(1),
        ));
        let r = is_smooth(&pt, 6).unwrap();
        assert_eq!(r.label, "NOT-SMOOTH");
        assert_eq!(r.witnesses[0].object.as_deref(), Some("X"));
        let z = Arc::new(constant_precosheaf::<FinAbCat>(conv, FinAb::free(1)));
        assert!(!is_smooth(&z, 6).unwrap().is_pass());
    }

    #[test]
    fn tower_valued_inputs_are_smooth_with_a_note() {
        let pt = Arc::new(constant_precosheaf::<FinSetCat>(
            converging_sequence_site(4).unwrap(),
            FinSet::new(1),
        ));
        let sharp = cosheafify(&pt, 4).unwrap().value;
        let r = is_smooth(&sharp, 4).unwrap();
        assert!(r.is_pass());
        assert!(r.trace[0].contains("Pro-valued"));
    }

    fn to_point(
        b: &Arc<Precosheaf<FinSetCat>>,
        a: &Arc<Precosheaf<FinSetCat>>,
    ) -> PrecosheafMorphism<FinSetCat> {
        let maps = (0..b.values.len())
            .map(|u| {
                FinSetMap::from_fn(
                    b.values[u].level(0).clone(),
                    a.values[u].level(0).clone(),
                    |_| 0,
                )
            })
            .collect();
        PrecosheafMorphism::rudimentary(b.clone(), a.clone(), maps).unwrap()
    }

    #[test]
    fn components_factor_uniquely_through_the_cosheafified_point() {
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
        let pi0 = Arc::new(pi0_precosheaf(&os));
        let r = universal_factorization_check(&pt, &pi0, &to_point(&pi0, &pt), 6).unwrap();
        assert!(r.is_pass(), "{r:?}");
        let initial = Arc::new(constant_precosheaf::<FinSetCat>(
            os.site.clone(),
            FinSet::new(0),
        ));
        assert!(
            universal_factorization_check(&pt, &initial, &to_point(&initial, &pt), 6)
                .unwrap()
                .is_pass()
        );
    }

    #[test]
    fn factorization_requires_a_cosheaf_source() {
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
        let id = PrecosheafMorphism::identity(pt.clone());
        assert!(universal_factorization_check(&pt, &pt, &id, 6).is_err());
    }
}
