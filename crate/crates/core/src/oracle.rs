//! Seeded random instances and the cross-checks run over them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cosheaf::check::covers_to_check_on;
use crate::cosheaf::{
    classify_comparison, cosheaf_status, fast_slow_comparison, plus_cosheaf, Precosheaf,
    PrecosheafMorphism,
};
use crate::error::Result;
use crate::report::{CheckReport, Witness};
use crate::sheaf::{hom_presheaf, plus_sheaf, sheaf_status, sheafify, Presheaf};
use crate::site::{validate_site, Cover, Coverage, FiniteCategory, ObjectId, SiteSpec};
use crate::value::{
    FinAb, FinAbCat, FinAbMap, FinSet, FinSetCat, FinSetMap, ValueCategory, ZMatrix,
};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The greatest lower bound of `a` and `b` in a poset category.
pub fn poset_meet(cat: &FiniteCategory, a: ObjectId, b: ObjectId) -> Option<ObjectId> {
    let lower: Vec<ObjectId> = (0..cat.object_count())
        .filter(|&w| !cat.hom(w, a).is_empty() && !cat.hom(w, b).is_empty())
        .collect();
    lower
        .iter()
        .copied()
        .find(|&m| lower.iter().all(|&w| !cat.hom(w, m).is_empty()))
}

/// A cover of `target` by the given objects, with meets declared when
/// every pair has one.
pub fn poset_cover(cat: &FiniteCategory, target: ObjectId, pieces: &[ObjectId]) -> Result<Cover> {
    let morphisms = pieces.iter().map(|&p| cat.hom(p, target)[0]).collect();
    let cover = Cover::new(target, morphisms);
    let mut meets = BTreeMap::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            match poset_meet(cat, pieces[i], pieces[j]) {
                Some(m) => meets.insert((i, j), m),
                None => return Ok(cover),
            };
        }
    }
    cover.with_meets(cat, &meets)
}

/// A random poset with a bottom object `∅` and at most `max_objects`
/// objects. Every object carries its trivial cover, `∅` its empty cover,
/// and random covers by lower objects are kept while the site stays valid.
pub fn random_poset_site(rng: &mut impl Rng, max_objects: usize) -> Result<Arc<SiteSpec>> {
    let n = rng.gen_range(2..=max_objects.max(2));
    let names: Vec<String> = std::iter::once("∅".to_string())
        .chain((1..n).map(|i| format!("U{i}")))
        .collect();
    let mut leq: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
    for i in 1..n {
        for j in i + 1..n {
            if rng.gen_bool(0.45) {
                leq.push((i, j));
            }
        }
    }
    let cat = FiniteCategory::from_poset(names, &leq)?;
    let mut base = Coverage::empty(n);
    base.covers[0].push(Cover::new(0, Vec::new()));
    for u in 1..n {
        base.covers[u].push(Cover::trivial(&cat, u));
    }
    let mut extra = Vec::new();
    for u in 1..n {
        let lower: Vec<ObjectId> = (1..n)
            .filter(|&w| w != u && !cat.hom(w, u).is_empty())
            .collect();
        if lower.is_empty() || !rng.gen_bool(0.7) {
            continue;
        }
        let k = rng.gen_range(1..=lower.len());
        let mut pieces: Vec<ObjectId> = lower.choose_multiple(rng, k).copied().collect();
        pieces.sort_unstable();
        extra.push(poset_cover(&cat, u, &pieces)?);
    }
    loop {
        let mut coverage = base.clone();
        for c in &extra {
            coverage.covers[c.target].push(c.clone());
        }
        let site = SiteSpec::new("random-poset", cat.clone(), coverage, Vec::new())?;
        if validate_site(&site)?.is_pass() {
            return Ok(Arc::new(site));
        }
        extra.pop();
    }
}

/// Union-find representative table over `n` elements.
fn classes(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// A random set-valued precosheaf on a poset site: generators are born at
/// objects and identified in pairs from chosen objects upward, so
/// `A(U)` is the set of generators born below `U` modulo the
/// identifications active below `U`. At most `max_total` generators.
pub fn random_set_precosheaf(
    site: &Arc<SiteSpec>,
    rng: &mut impl Rng,
    max_total: usize,
) -> Result<Precosheaf<FinSetCat>> {
    let cat = &site.category;
    let n = cat.object_count();
    let below = |w: ObjectId, u: ObjectId| !cat.hom(w, u).is_empty();
    let total = rng.gen_range(0..=max_total);
    let birth: Vec<ObjectId> = (0..total).map(|_| rng.gen_range(0..n)).collect();
    let mut glue = Vec::new();
    if total >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            let (a, b) = (rng.gen_range(0..total), rng.gen_range(0..total));
            glue.push((a, b, rng.gen_range(0..n)));
        }
    }
    let mut present = Vec::with_capacity(n);
    let mut rep = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for u in 0..n {
        let here: Vec<usize> = (0..total).filter(|&g| below(birth[g], u)).collect();
        let active: Vec<(usize, usize)> = glue
            .iter()
            .filter(|&&(a, b, w)| below(w, u) && here.contains(&a) && here.contains(&b))
            .map(|&(a, b, _)| (a, b))
            .collect();
        let r = classes(total, &active);
        let reps: Vec<usize> = here.iter().copied().filter(|&g| r[g] == g).collect();
        values.push(FinSet::labeled(reps.iter().map(|g| format!("g{g}"))));
        present.push(reps);
        rep.push(r);
    }
    let action = (0..cat.morphism_count())
        .map(|m| {
            let (v, u) = (cat.src(m), cat.dst(m));
            let table = present[v]
                .iter()
                .map(|&g| {
                    present[u]
                        .iter()
                        .position(|&h| h == rep[u][g])
                        .expect("classes coarsen upward")
                })
                .collect();
            FinSetMap::new(values[v].clone(), values[u].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    Precosheaf::rudimentary(site.clone(), values, action)
}

/// A random set-valued presheaf: `Hom(A(-), G)` for a random precosheaf
/// `A` with at most three generators and `|G| = 2`.
pub fn random_presheaf(site: &Arc<SiteSpec>, rng: &mut impl Rng) -> Result<Presheaf<FinSetCat>> {
    let a = random_set_precosheaf(site, rng, 3)?;
    hom_presheaf(&a, &FinSet::new(2))
}

/// Compares the cokernel formula with the sieve colimit on every cover
/// examined at `depth`. Returns the number of covers compared, or the
/// first disagreement.
pub fn fast_slow_agree<K: ValueCategory>(
    a: &Precosheaf<K>,
    depth: usize,
) -> Result<std::result::Result<usize, Witness>> {
    let cat = &a.site.category;
    let mut compared = 0;
    for u in 0..cat.object_count() {
        for (idx, (cover, _)) in covers_to_check_on(&a.site, u, depth)
            .into_iter()
            .enumerate()
        {
            if let Some(c) = fast_slow_comparison(a, &cover, depth)? {
                compared += 1;
                if !(c.is_iso && c.commutes) {
                    return Ok(Err(Witness::new("fast-slow-mismatch")
                        .object(cat.object_name(u))
                        .cover(idx)
                        .detail(json!({"iso": c.is_iso, "commutes": c.commutes}))));
                }
            }
        }
    }
    Ok(Ok(compared))
}

/// Whether every component of a precosheaf morphism is an isomorphism.
pub fn is_componentwise_iso<K: ValueCategory>(f: &PrecosheafMorphism<K>, depth: usize) -> bool {
    f.components.iter().all(|c| classify_comparison(c, depth).1)
}

/// The laws of the plus construction on one precosheaf; returns the
/// violated laws.
pub fn plus_law_violations<K: ValueCategory>(
    a: &Arc<Precosheaf<K>>,
    depth: usize,
) -> Result<Vec<&'static str>> {
    let mut bad = Vec::new();
    let status = cosheaf_status(a, depth)?;
    let plus = plus_cosheaf(a, depth)?;
    let plus_status = cosheaf_status(&plus.value, depth)?;
    if !plus_status.coseparated {
        bad.push("plus is not coseparated");
    }
    if status.coseparated && !plus_status.cosheaf {
        bad.push("plus of a coseparated precosheaf is not a cosheaf");
    }
    if is_componentwise_iso(&plus.counit, depth) != status.cosheaf {
        bad.push("counit iso disagrees with the cosheaf check");
    }
    Ok(bad)
}

/// The laws of the sheaf-side plus construction; returns the violated
/// laws.
pub fn sheaf_law_violations<K: ValueCategory>(a: &Presheaf<K>) -> Result<Vec<&'static str>> {
    let mut bad = Vec::new();
    let status = sheaf_status(a)?;
    let plus = plus_sheaf(a)?;
    let plus_status = sheaf_status(&plus.value)?;
    if !plus_status.separated {
        bad.push("plus is not separated");
    }
    if status.separated && !plus_status.sheaf {
        bad.push("plus of a separated presheaf is not a sheaf");
    }
    if !sheafify(a)?.result_is_sheaf {
        bad.push("sheafification is not a sheaf");
    }
    let unit_iso = plus.unit.iter().all(|f| K::classify(f).iso);
    if unit_iso != status.sheaf {
        bad.push("unit iso disagrees with the sheaf check");
    }
    Ok(bad)
}

/// Runs the fast/slow comparison, the plus laws and their sheaf-side
/// duals on `cases` seeded random poset sites.
pub fn oracle_suite(seed: u64, cases: usize, depth: usize) -> Result<CheckReport> {
    let mut rng = seeded(seed);
    let (mut covers, mut cosheaves, mut sheaves) = (0, 0, 0);
    for case in 0..cases {
        let site = random_poset_site(&mut rng, 5)?;
        let a = Arc::new(random_set_precosheaf(&site, &mut rng, 4)?);
        let fail = |check: &str, detail: serde_json::Value| {
            CheckReport::fail(
                "oracle-suite",
                "ORACLE-MISMATCH",
                Witness::new(check).detail(json!({"seed": seed, "case": case, "detail": detail})),
            )
        };
        match fast_slow_agree(&a, depth)? {
            Ok(n) => covers += n,
            Err(w) => {
                return Ok(fail(
                    "fast-slow",
                    serde_json::to_value(w).expect("witness serializes"),
                ))
            }
        }
        let bad = plus_law_violations(&a, depth)?;
        if !bad.is_empty() {
            return Ok(fail("plus-laws", json!(bad)));
        }
        cosheaves += usize::from(cosheaf_status(&a, depth)?.cosheaf);
        let p = random_presheaf(&site, &mut rng)?;
        let bad = sheaf_law_violations(&p)?;
        if !bad.is_empty() {
            return Ok(fail("sheaf-laws", json!(bad)));
        }
        sheaves += usize::from(sheaf_status(&p)?.sheaf);
    }
    Ok(CheckReport::pass("oracle-suite", "ORACLES-AGREE")
        .with_trace(format!("seed {seed}, {cases} cases"))
        .with_trace(format!("{covers} covers compared by both colimit formulas"))
        .with_trace(format!("{cosheaves} random precosheaves were cosheaves, {sheaves} random presheaves were sheaves")))
}

/// A small random group: `0`, `Z`, `Z/2` or `Z/3`.
fn random_cyclic(rng: &mut impl Rng) -> FinAb {
    [
        FinAb::zero(),
        FinAb::free(1),
        FinAb::cyclic(2),
        FinAb::cyclic(3),
    ][rng.gen_range(0..4)]
    .clone()
}

fn summands(cat: &FiniteCategory, u: ObjectId) -> Vec<ObjectId> {
    (0..cat.object_count())
        .filter(|&w| !cat.hom(w, u).is_empty())
        .collect()
}

/// The generator offset of the summand `G_W` inside `⊕_{X ≤ U} G_X`.
fn summand_offset(cat: &FiniteCategory, gens: &[FinAb], u: ObjectId, w: ObjectId) -> usize {
    summands(cat, u)
        .into_iter()
        .take_while(|&x| x != w)
        .map(|x| gens[x].gens())
        .sum()
}

/// `U ↦ ⊕_{W ≤ U} G_W` with inclusions of summands.
pub fn free_ab_precosheaf(site: &Arc<SiteSpec>, gens: &[FinAb]) -> Result<Precosheaf<FinAbCat>> {
    let cat = &site.category;
    let n = cat.object_count();
    let values: Vec<FinAb> = (0..n)
        .map(|u| {
            let ws = summands(cat, u);
            let blocks: Vec<&ZMatrix> = ws.iter().map(|&w| gens[w].relations()).collect();
            FinAb::new(
                ws.iter().map(|&w| gens[w].gens()).sum(),
                ZMatrix::block_diag(&blocks),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let action = (0..cat.morphism_count())
        .map(|m| {
            let (v, u) = (cat.src(m), cat.dst(m));
            let mut mat = ZMatrix::zeros(values[u].gens(), values[v].gens());
            for w in summands(cat, v) {
                let (ov, ou) = (
                    summand_offset(cat, gens, v, w),
                    summand_offset(cat, gens, u, w),
                );
                for i in 0..gens[w].gens() {
                    mat[(ou + i, ov + i)] = BigInt::from(1);
                }
            }
            FinAbMap::new(values[v].clone(), values[u].clone(), mat)
        })
        .collect::<Result<Vec<_>>>()?;
    Precosheaf::rudimentary(site.clone(), values, action)
}

/// `c` times the inclusion `G_W → A(W)` of the own summand.
fn scaled_own_inclusion(a: &Precosheaf<FinAbCat>, gens: &[FinAb], w: ObjectId, c: i64) -> FinAbMap {
    let dst = a.plain_value(w).expect("plain values");
    let off = summand_offset(&a.site.category, gens, w, w);
    let mut m = ZMatrix::zeros(dst.gens(), gens[w].gens());
    for i in 0..gens[w].gens() {
        m[(off + i, i)] = BigInt::from(c);
    }
    FinAbMap::new(gens[w].clone(), dst.clone(), m)
        .expect("multiples of an inclusion are well defined")
}

/// The morphism out of a free precosheaf determined by `φ_W: G_W → B(W)`.
pub fn free_ab_morphism(
    a: &Arc<Precosheaf<FinAbCat>>,
    b: &Arc<Precosheaf<FinAbCat>>,
    phi: &[FinAbMap],
) -> Result<PrecosheafMorphism<FinAbCat>> {
    let cat = &a.site.category;
    let maps = (0..cat.object_count())
        .map(|u| {
            let src = a.plain_value(u).expect("plain");
            let dst = b.plain_value(u).expect("plain");
            let mut cols = Vec::new();
            for w in (0..cat.object_count()).filter(|&w| !cat.hom(w, u).is_empty()) {
                let incl = b.action[cat.hom(w, u)[0]].component(0);
                let block = FinAbCat::compose(incl, &phi[w]);
                cols.extend(block.matrix().columns());
            }
            FinAbMap::new(
                src.clone(),
                dst.clone(),
                ZMatrix::from_columns(dst.gens(), &cols),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    PrecosheafMorphism::rudimentary(a.clone(), b.clone(), maps)
}

fn random_map(rng: &mut impl Rng, src: &FinAb, dst: &FinAb) -> FinAbMap {
    for _ in 0..6 {
        let mut m = ZMatrix::zeros(dst.gens(), src.gens());
        for i in 0..dst.gens() {
            for j in 0..src.gens() {
                m[(i, j)] = BigInt::from(rng.gen_range(-2..=2));
            }
        }
        if let Ok(f) = FinAbMap::new(src.clone(), dst.clone(), m) {
            return f;
        }
    }
    FinAbMap::zero(src, dst)
}

/// A random morphism of free abelian precosheaves over a site whose
/// generators sit on `support`; either an endomorphism perturbing the
/// identity or a random map into another free precosheaf.
pub fn random_ab_morphism(
    site: &Arc<SiteSpec>,
    support: &[ObjectId],
    rng: &mut impl Rng,
) -> Result<PrecosheafMorphism<FinAbCat>> {
    let n = site.object_count();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<FinAb> {
        (0..n)
            .map(|w| {
                if support.contains(&w) {
                    random_cyclic(rng)
                } else {
                    FinAb::zero()
                }
            })
            .collect()
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    let ga = draw(&mut local);
    let a = Arc::new(free_ab_precosheaf(site, &ga)?);
    if local.gen_bool(0.5) {
        let phi: Vec<FinAbMap> = (0..n)
            .map(|w| scaled_own_inclusion(&a, &ga, w, [1, 1, -1, 2][local.gen_range(0..4)]))
            .collect();
        return free_ab_morphism(&a, &a, &phi);
    }
    let gb = draw(&mut local);
    let b = Arc::new(free_ab_precosheaf(site, &gb)?);
    let phi: Vec<FinAbMap> = (0..n)
        .map(|w| random_map(&mut local, &ga[w], b.plain_value(w).expect("plain")))
        .collect();
    free_ab_morphism(&a, &b, &phi)
}
