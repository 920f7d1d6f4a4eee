//! The cosheaf and coseparation conditions.

use serde_json::json;

use crate::error::Result;
use crate::report::{CheckReport, Witness};
use crate::site::{Cover, ObjectId, SiteSpec};
use crate::value::ValueCategory;

use super::precosheaf::Precosheaf;
use super::tensor::{classify_comparison, cosheaf_defect};

/// Covers examined on `u`: every declared cover, then chain levels up to
/// `depth`, each tagged with its chain level.
pub fn covers_to_check_on(
    site: &SiteSpec,
    u: ObjectId,
    depth: usize,
) -> Vec<(Cover, Option<usize>)> {
    let mut out: Vec<(Cover, Option<usize>)> = site.coverage.covers[u]
        .iter()
        .map(|c| (c.clone(), None))
        .collect();
    if let Some(ch) = &site.coverage.chains[u] {
        out.extend(
            ch.levels
                .iter()
                .take(depth.saturating_add(1))
                .cloned()
                .enumerate()
                .map(|(k, c)| (c, Some(k))),
        );
    }
    out
}

#[derive(Clone, Debug)]
pub struct CosheafStatus {
    pub coseparated: bool,
    pub cosheaf: bool,
    /// Verdicts involve towers or truncated chains.
    pub depth_qualified: bool,
    pub non_epi: Option<Witness>,
    pub non_iso: Option<Witness>,
}

impl CosheafStatus {
    pub fn label(&self) -> &'static str {
        if self.cosheaf {
            "COSHEAF"
        } else if self.coseparated {
            "COSEPARATED"
        } else {
            "NOT-COSEPARATED"
        }
    }
}

/// Classifies the defect map of every cover examined.
pub fn cosheaf_status<K: ValueCategory>(a: &Precosheaf<K>, depth: usize) -> Result<CosheafStatus> {
    let cat = &a.site.category;
    let mut status = CosheafStatus {
        coseparated: true,
        cosheaf: true,
        depth_qualified: !a.is_rudimentary(),
        non_epi: None,
        non_iso: None,
    };
    for u in 0..cat.object_count() {
        if a.site.chain_depth(u) > depth {
            status.depth_qualified = true;
        }
        for (idx, (cover, level)) in covers_to_check_on(&a.site, u, depth)
            .into_iter()
            .enumerate()
        {
            let defect = cosheaf_defect(a, &cover)?;
            let (epi, iso) = classify_comparison(&defect.comparison, depth);
            if iso {
                continue;
            }
            let mut w = Witness::new(if epi {
                "non-iso-defect"
            } else {
                "non-epi-defect"
            })
            .object(cat.object_name(u))
            .cover(idx);
            if let Some(k) = level {
                w = w.level(k);
            }
            let pieces: Vec<&str> = cover
                .pieces
                .iter()
                .map(|&p| cat.object_name(cat.src(p)))
                .collect();
            w = w.detail(json!({
                "pieces": pieces,
                "colimit": defect.apex().describe(),
                "value": a.values[u].describe(),
                "fast_path": defect.fast_path,
            }));
            status.cosheaf = false;
            if status.non_iso.is_none() {
                status.non_iso = Some(w.clone());
            }
            if !epi {
                status.coseparated = false;
                if status.non_epi.is_none() {
                    status.non_epi = Some(w);
                }
            }
        }
    }
    Ok(status)
}

/// PASS iff every defect map is an isomorphism; the label also records
/// coseparation.
pub fn check_cosheaf<K: ValueCategory>(a: &Precosheaf<K>, depth: usize) -> Result<CheckReport> {
    let s = cosheaf_status(a, depth)?;
    let mut r = if s.cosheaf {
        CheckReport::pass("check-cosheaf", s.label())
    } else {
        let w = s
            .non_epi
            .clone()
            .or_else(|| s.non_iso.clone())
            .expect("failure has a witness");
        CheckReport::fail("check-cosheaf", s.label(), w)
    };
    r = r.with_trace(format!(
        "site {}: {} objects",
        a.site.name,
        a.site.object_count()
    ));
    r = r.with_trace(format!(
        "coseparated: {}, cosheaf: {}",
        s.coseparated, s.cosheaf
    ));
    if s.depth_qualified {
        r = r.at_depth(depth);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosheaf::constant_precosheaf;
    use crate::topo::{
        converging_sequence_site, h0_precosheaf, open_site, pi0_precosheaf, CoverPolicy,
        FiniteSpace,
    };
    use crate::value::{FinAb, FinSet, FinSetCat};

    #[test]
    fn components_and_homology_of_the_pseudocircle_are_cosheaves() {
        let os = open_site(
            &FiniteSpace::pseudocircle(),
            CoverPolicy::AllIrredundant,
            10,
        )
        .unwrap();
        let r = check_cosheaf(&pi0_precosheaf(&os), 6).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.label, "COSHEAF");
        assert!(check_cosheaf(&h0_precosheaf(&os, &FinAb::free(1)), 6)
            .unwrap()
            .is_pass());
    }

    #[test]
    fn point_on_the_converging_sequence_fails_only_at_the_empty_open() {
        let site = converging_sequence_site(6).unwrap();
        let pt = constant_precosheaf::<FinSetCat>(site.clone(), FinSet::new(1));
        let r = check_cosheaf(&pt, 6).unwrap();
        assert!(!r.is_pass());
        assert_eq!(r.witnesses[0].object.as_deref(), Some("∅"));
        let chain = site.coverage.chains[0].as_ref().unwrap();
        for j in 1..=chain.depth() {
            let d = cosheaf_defect(&pt, chain.level(j)).unwrap();
            assert_eq!(d.apex().level(0).len(), 1);
            assert!(classify_comparison(&d.comparison, 6).1);
        }
    }
}
