//! Abelian-valued precosheaves: levelwise kernels and cokernels and the
//! local-zero test.

use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::pro::{descend_along, lift_through, LevelMorphism, Tower};
use crate::report::{CheckReport, Witness};
use crate::site::PointFilter;
use crate::value::finab::{cokernel, kernel};
use crate::value::{FinAb, FinAbCat, FinAbMap, ValueCategory};

use super::costalk::costalk;
use super::precosheaf::{Precosheaf, PrecosheafMorphism};

#[derive(Clone, Copy)]
enum Side {
    Kernel,
    Cokernel,
}

fn is_levelwise(f: &LevelMorphism<FinAbCat>) -> bool {
    (0..=f.dst().depth()).all(|j| f.shift(j) == j.min(f.src().depth()))
}

fn require_levelwise(f: &PrecosheafMorphism<FinAbCat>) -> Result<()> {
    let ok = f.components.iter().all(is_levelwise)
        && f.src.action.iter().all(is_levelwise)
        && f.dst.action.iter().all(is_levelwise)
        && f.src
            .values
            .iter()
            .zip(&f.dst.values)
            .all(|(a, b)| a.depth() == b.depth());
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "kernels and cokernels need levelwise morphisms of equal depth".into(),
        ))
    }
}

/// Transports `g` (a map of the source or target precosheaf) to the
/// kernels or cokernels it connects.
fn transport(side: Side, from: &FinAbMap, to: &FinAbMap, g: &FinAbMap) -> FinAbMap {
    match side {
        Side::Kernel => lift_through::<FinAbCat>(to, &FinAbCat::compose(g, from))
            .expect("natural maps preserve kernels"),
        Side::Cokernel => descend_along::<FinAbCat>(from, &FinAbCat::compose(to, g))
            .expect("natural maps preserve images"),
    }
}

fn levelwise(f: &PrecosheafMorphism<FinAbCat>, side: Side) -> Result<Precosheaf<FinAbCat>> {
    require_levelwise(f)?;
    let site = f.src.site.clone();
    let cat = &site.category;
    let n = cat.object_count();
    let ambient = match side {
        Side::Kernel => &f.src,
        Side::Cokernel => &f.dst,
    };
    let parts: Vec<Vec<(FinAb, FinAbMap)>> = (0..n)
        .map(|u| {
            (0..=f.dst.values[u].depth())
                .map(|j| match side {
                    Side::Kernel => kernel(f.components[u].component(j)),
                    Side::Cokernel => cokernel(f.components[u].component(j)),
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    for (u, levels) in parts.iter().enumerate() {
        let objs = levels.iter().map(|(o, _)| o.clone()).collect();
        let bonds = (0..levels.len() - 1)
            .map(|j| {
                transport(
                    side,
                    &levels[j + 1].1,
                    &levels[j].1,
                    &ambient.values[u].bond(j + 1, j),
                )
            })
            .collect();
        values.push(Arc::new(Tower::new(objs, bonds)?));
    }
    let mut action = Vec::with_capacity(cat.morphism_count());
    for m in 0..cat.morphism_count() {
        let (v, u) = (cat.src(m), cat.dst(m));
        let d = values[u].depth();
        let shift: Vec<usize> = (0..=d).map(|j| j.min(values[v].depth())).collect();
        let comps = (0..=d)
            .map(|j| {
                transport(
                    side,
                    &parts[v][shift[j]].1,
                    &parts[u][j].1,
                    ambient.action[m].component(j),
                )
            })
            .collect();
        action.push(LevelMorphism::new(
            values[v].clone(),
            values[u].clone(),
            shift,
            comps,
        )?);
    }
    Precosheaf::new_unchecked(site, values, action)
}

/// `U ↦ ker(f_U)`, level by level.
pub fn kernel_precosheaf(f: &PrecosheafMorphism<FinAbCat>) -> Result<Precosheaf<FinAbCat>> {
    levelwise(f, Side::Kernel)
}

/// `U ↦ coker(f_U)`, level by level.
pub fn cokernel_precosheaf(f: &PrecosheafMorphism<FinAbCat>) -> Result<Precosheaf<FinAbCat>> {
    levelwise(f, Side::Cokernel)
}

/// A tower is pro-zero at `depth` when every level `k ≤ depth` is killed
/// by some bond `X_m → X_k` within the stored levels. Returns the first
/// level that survives.
pub fn pro_zero_obstruction(x: &Tower<FinAbCat>, depth: usize) -> Option<usize> {
    let top = depth.max(x.depth());
    (0..=depth).find(|&k| !(k..=top).any(|m| x.bond(m, k).is_zero()))
}

/// PASS iff every costalk is pro-zero at `depth`. Without explicit points
/// the site's declared filters are used.
pub fn is_locally_zero(
    a: &Precosheaf<FinAbCat>,
    points: &[PointFilter],
    depth: usize,
) -> Result<CheckReport> {
    let points = if points.is_empty() {
        a.site.points.as_slice()
    } else {
        points
    };
    if points.is_empty() {
        return Err(Error::InvalidPoint("site declares no points".into()));
    }
    for p in points {
        let c = costalk(a, p)?;
        if let Some(k) = pro_zero_obstruction(&c.tower, depth) {
            let w = Witness::new("costalk-not-pro-zero")
                .point(&p.label)
                .level(k)
                .detail(json!({"costalk": c.tower.describe()}));
            return Ok(CheckReport::fail("locally-zero", "NOT-LOCALLY-ZERO", w).at_depth(depth));
        }
    }
    Ok(CheckReport::pass("locally-zero", "LOCALLY-ZERO").at_depth(depth))
}

/// The abelian criterion: `f` is a strong local isomorphism iff its
/// kernel and cokernel are locally zero.
pub fn kernel_cokernel_locally_zero(
    f: &PrecosheafMorphism<FinAbCat>,
    points: &[PointFilter],
    depth: usize,
) -> Result<bool> {
    let k = kernel_precosheaf(f)?;
    let c = cokernel_precosheaf(f)?;
    Ok(is_locally_zero(&k, points, depth)?.is_pass()
        && is_locally_zero(&c, points, depth)?.is_pass())
}
