//! Costalks along point filters and strong local isomorphisms.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::pro::{is_iso_at_depth, LevelMorphism, Tower};
use crate::report::{CheckReport, Witness};
use crate::site::{ObjectId, PointFilter};
use crate::value::ValueCategory;

use super::precosheaf::{Precosheaf, PrecosheafMorphism};

/// The costalk tower with the neighbourhood and value level behind each
/// of its levels.
#[derive(Clone, Debug)]
pub struct Costalk<K: ValueCategory> {
    pub tower: Arc<Tower<K>>,
    pub objects: Vec<ObjectId>,
    pub psi: Vec<usize>,
}

fn chain_morphism<K: ValueCategory>(
    a: &Precosheaf<K>,
    from: ObjectId,
    to: ObjectId,
) -> Result<usize> {
    a.site
        .category
        .hom(from, to)
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidPoint(format!("no morphism {} → {}", from, to)))
}

/// `lim_k A(U_k)` as a tower. A bounded filter collapses to the value at
/// its minimal neighbourhood; an unbounded filter with tower values is
/// read along the diagonal.
pub fn costalk<K: ValueCategory>(a: &Precosheaf<K>, p: &PointFilter) -> Result<Costalk<K>> {
    p.validate(&a.site.category)?;
    let last = *p.chain.last().expect("validated filters are nonempty");
    if !p.unbounded {
        let t = a.values[last].clone();
        let d = t.depth();
        return Ok(Costalk {
            tower: t,
            objects: vec![last; d + 1],
            psi: (0..=d).collect(),
        });
    }
    let depth = (p.chain.len() - 1).max(
        p.chain
            .iter()
            .map(|&u| a.values[u].depth())
            .max()
            .unwrap_or(0),
    );
    let objects: Vec<ObjectId> = (0..=depth)
        .map(|k| p.chain[k.min(p.chain.len() - 1)])
        .collect();
    let mut psi = vec![0usize];
    let mut bonds = Vec::with_capacity(depth);
    for k in 0..depth {
        let (lo, hi) = (objects[k], objects[k + 1]);
        let next;
        if lo == hi {
            next = (k + 1).max(psi[k]);
            bonds.push(a.values[lo].bond(next, psi[k]));
        } else {
            let g = &a.action[chain_morphism(a, hi, lo)?];
            next = (k + 1).max(psi[k]).max(g.shift(psi[k]));
            bonds.push(g.component_from(psi[k], next));
        }
        psi.push(next);
    }
    let levels = objects
        .iter()
        .zip(&psi)
        .map(|(&u, &l)| a.values[u].level(l).clone())
        .collect();
    Ok(Costalk {
        tower: Arc::new(Tower::new(levels, bonds)?),
        objects,
        psi,
    })
}

/// The map of costalks induced by `f: A → B`.
pub fn costalk_map<K: ValueCategory>(
    f: &PrecosheafMorphism<K>,
    p: &PointFilter,
) -> Result<(Costalk<K>, Costalk<K>, LevelMorphism<K>)> {
    let (a, b) = (&f.src, &f.dst);
    let ca = costalk(a, p)?;
    let cb = costalk(b, p)?;
    let top = ca.objects.len() - 1;
    let mut shift = Vec::with_capacity(cb.objects.len());
    let mut comps = Vec::with_capacity(cb.objects.len());
    let mut prev = 0;
    for (k, (&u, &lb)) in cb.objects.iter().zip(&cb.psi).enumerate() {
        let fu = &f.components[u];
        let need = fu.shift(lb);
        let reach = |i: usize| -> Result<Option<K::Map>> {
            let (v, la) = (ca.objects[i], ca.psi[i]);
            let within = |t: &Tower<K>, l: usize| l.min(t.depth());
            if v == u {
                if within(&a.values[u], la) >= within(&a.values[u], need) {
                    return Ok(Some(a.values[u].bond(la, need)));
                }
                return Ok(None);
            }
            let g = &a.action[chain_morphism(a, v, u)?];
            if within(&a.values[v], la) >= within(&a.values[v], g.shift(need)) {
                return Ok(Some(g.component_from(need, la)));
            }
            Ok(None)
        };
        let mut found = None;
        for i in prev.max(k.min(top))..=top {
            if let Some(h) = reach(i)? {
                found = Some((i, h));
                break;
            }
        }
        let (i, h) = found
            .ok_or_else(|| Error::InsufficientDepth(format!("costalk level {k} not reached")))?;
        prev = i;
        shift.push(i);
        comps.push(K::compose(fu.component(lb), &h));
    }
    let m = LevelMorphism::new(ca.tower.clone(), cb.tower.clone(), shift, comps)?;
    Ok((ca, cb, m))
}

/// PASS iff every induced costalk map is an isomorphism at `depth`.
/// Without explicit points the site's declared filters are used.
pub fn strong_local_iso_check<K: ValueCategory>(
    f: &PrecosheafMorphism<K>,
    points: &[PointFilter],
    depth: usize,
) -> Result<CheckReport> {
    let points = if points.is_empty() {
        f.src.site.points.as_slice()
    } else {
        points
    };
    if points.is_empty() {
        return Err(Error::InvalidPoint("site declares no points".into()));
    }
    let mut qualified = false;
    let mut trace = Vec::new();
    for p in points {
        let (ca, cb, m) = costalk_map(f, p)?;
        qualified |= !(ca.tower.is_rudimentary() && cb.tower.is_rudimentary());
        let v = is_iso_at_depth(&m, depth);
        trace.push(format!("point {}: {}", p.label, v.label()));
        if !v.iso {
            let w = Witness::new("costalk-not-iso")
                .point(&p.label)
                .level(v.obstruction.unwrap_or(0))
                .detail(json!({
                    "source": ca.tower.describe(),
                    "target": cb.tower.describe(),
                }));
            let mut r =
                CheckReport::fail("strong-local-iso", "NOT-STRONG-LOCAL-ISO", w).at_depth(depth);
            r.trace = trace;
            return Ok(r);
        }
    }
    let mut r = CheckReport::pass("strong-local-iso", "STRONG-LOCAL-ISO");
    r.trace = trace;
    Ok(if qualified { r.at_depth(depth) } else { r })
}
