//! Depth-qualified decision procedures on towers and level morphisms.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::value::{FiniteDiagram, ValueCategory};

use super::morphism::LevelMorphism;
use super::tower::Tower;

/// Default trailing window for rudimentarity.
pub const DEFAULT_WINDOW: usize = 3;

/// Whether `g: A → C` factors as `f ∘ h` for some `h: A → B`.
pub fn factors_through<K: ValueCategory>(g: &K::Map, f: &K::Map) -> bool {
    let a = K::src(g);
    let top = K::initial_map(a);
    let left = K::initial_map(K::src(f));
    K::diagonal_fill(&top, f, &left, g).is_some()
}

/// `h` with `mono ∘ h = g`, when `g` lands in the image of `mono`.
pub fn lift_through<K: ValueCategory>(mono: &K::Map, g: &K::Map) -> Option<K::Map> {
    K::diagonal_fill(
        &K::initial_map(K::src(g)),
        mono,
        &K::initial_map(K::src(mono)),
        g,
    )
}

/// `h` with `h ∘ epi = g`, when `g` is constant on the fibres of `epi`.
pub fn descend_along<K: ValueCategory>(epi: &K::Map, g: &K::Map) -> Option<K::Map> {
    K::diagonal_fill(
        epi,
        &K::terminal_map(K::dst(g)),
        g,
        &K::terminal_map(K::dst(epi)),
    )
}

/// `f ~ g`: for each target level `j ≤ depth` the components agree after
/// precomposing with bonds into level `max(φ_f(j), φ_g(j), depth)`.
pub fn equal_at_depth<K: ValueCategory>(
    f: &LevelMorphism<K>,
    g: &LevelMorphism<K>,
    depth: usize,
) -> Result<bool> {
    if f.src().levels() != g.src().levels() || f.dst().levels() != g.dst().levels() {
        return Err(Error::ShapeMismatch(
            "level morphisms with different endpoints".into(),
        ));
    }
    Ok((0..=depth).all(|j| {
        let l = f.shift(j).max(g.shift(j)).max(depth);
        K::maps_equal(&f.component_from(j, l), &g.component_from(j, l))
    }))
}

/// One interleaving map `h: Y_m → X_{φ(k)}` certifying level `k`.
#[derive(Clone, Debug)]
pub struct Fill<K: ValueCategory> {
    pub level: usize,
    pub from_level: usize,
    pub map: K::Map,
}

#[derive(Clone, Debug)]
pub struct IsoVerdict<K: ValueCategory> {
    pub iso: bool,
    pub depth: usize,
    pub fills: Vec<Fill<K>>,
    /// First target level at which no interleaving exists.
    pub obstruction: Option<usize>,
}

impl<K: ValueCategory> IsoVerdict<K> {
    pub fn label(&self) -> String {
        if self.iso {
            "ISO".into()
        } else {
            format!("NOT-ISO-AT-DEPTH({})", self.depth)
        }
    }
}

/// Searches, for every target level `k ≤ depth`, a level `m ≥ k` and a
/// map `h: Y_m → X_{φ(k)}` with `h ∘ f_m = bond` and `f_k ∘ h = bond`,
/// both after precomposition with the deepest stored bonds of `X`.
pub fn is_iso_at_depth<K: ValueCategory>(f: &LevelMorphism<K>, depth: usize) -> IsoVerdict<K> {
    let f = f.extended(depth).normalized();
    let (x, y) = (f.src().clone(), f.dst().clone());
    let top_y = y.depth().max(depth);
    let mut fills = Vec::new();
    for k in 0..=depth {
        let pk = f.shift(k);
        let bottom = f.component(k).clone();
        let found = (k..=top_y).find_map(|m| {
            let dx = x.depth().max(f.shift(m));
            let top = f.component_from(m, dx);
            let left = x.bond(dx, pk);
            let right = y.bond(m, k);
            K::diagonal_fill(&top, &bottom, &left, &right).map(|h| (m, h))
        });
        match found {
            Some((m, h)) => fills.push(Fill {
                level: k,
                from_level: m,
                map: h,
            }),
            None => {
                return IsoVerdict {
                    iso: false,
                    depth,
                    fills,
                    obstruction: Some(k),
                }
            }
        }
    }
    IsoVerdict {
        iso: true,
        depth,
        fills,
        obstruction: None,
    }
}

#[derive(Clone, Debug)]
pub struct EpiWitness<K: ValueCategory> {
    pub level: usize,
    pub test_object: K::Obj,
    pub u: K::Map,
    pub v: K::Map,
}

#[derive(Clone, Debug)]
pub struct EpiVerdict<K: ValueCategory> {
    pub epi: bool,
    pub depth: usize,
    pub witness: Option<EpiWitness<K>>,
}

/// Injectivity of `Hom(Y, G) → Hom(X, G)` for rudimentary `G`: at level
/// `j`, maps `u, v: Y_j → G` that agree on the deepest image of `X` but
/// differ on the deepest image of `Y` witness failure. Without a family,
/// the value category's default family is used, built from the levels and
/// the cokernel pairs of the relevant components.
pub fn is_epi_at_depth<K: ValueCategory>(
    f: &LevelMorphism<K>,
    depth: usize,
    family: Option<&[K::Obj]>,
) -> EpiVerdict<K> {
    let (x, y) = (f.src(), f.dst());
    for j in 0..=depth {
        let p = y.bond(y.depth().max(j), j);
        let q = f.component_from(j, x.depth().max(f.shift(j)));
        let own_family;
        let fam: &[K::Obj] = match family {
            Some(fam) => fam,
            None => {
                let pair = FiniteDiagram::<K>::new(
                    vec![K::src(&q).clone(), y.level(j).clone(), y.level(j).clone()],
                    vec![(0, 1, q.clone()), (0, 2, q.clone())],
                );
                let mut objs: Vec<K::Obj> = y.levels().to_vec();
                objs.extend(x.levels().iter().cloned());
                objs.push(K::colimit(&pair).apex);
                own_family = K::default_test_family(&objs);
                &own_family
            }
        };
        for g in fam {
            if let Some((u, v)) = K::separating_pair(g, &p, &q) {
                return EpiVerdict {
                    epi: false,
                    depth,
                    witness: Some(EpiWitness {
                        level: j,
                        test_object: g.clone(),
                        u,
                        v,
                    }),
                };
            }
        }
    }
    EpiVerdict {
        epi: true,
        depth,
        witness: None,
    }
}

#[derive(Clone, Debug)]
pub struct RudimentaryVerdict {
    pub rudimentary: bool,
    pub depth: usize,
    /// Invariants of the levels `X_0 .. X_top`.
    pub level_profile: Vec<String>,
    /// Invariants of the images `im(X_top → X_k)`.
    pub image_profile: Vec<String>,
    pub failing_level: Option<usize>,
    pub reason: Option<String>,
}

impl RudimentaryVerdict {
    pub fn label(&self) -> String {
        if self.rudimentary {
            "RUDIMENTARY".into()
        } else {
            format!("NOT-RUDIMENTARY-AT-DEPTH({})", self.depth)
        }
    }

    pub fn profile_json(&self) -> Value {
        json!({"levels": self.level_profile, "images": self.image_profile})
    }
}

/// Stabilised image test over a trailing window. With `top` the depth plus
/// one look-ahead level (when stored), `S_k = im(X_top → X_k)`. The tower
/// is declared rudimentary when, for every `k` in the window, the image of
/// `X_{top-1}` equals `S_k` (images have stabilised) and `S_{k+1} → S_k`
/// is injective (hence an isomorphism).
pub fn is_rudimentary_at_depth<K: ValueCategory>(
    x: &Tower<K>,
    depth: usize,
    window: usize,
) -> RudimentaryVerdict {
    let top = if depth < x.depth() { depth + 1 } else { depth };
    let images: Vec<(K::Obj, K::Map)> = (0..=top).map(|k| K::image(&x.bond(top, k))).collect();
    let level_profile = (0..=top).map(|k| K::describe(x.level(k))).collect();
    let image_profile = images.iter().map(|(s, _)| K::describe(s)).collect();
    let mut verdict = RudimentaryVerdict {
        rudimentary: true,
        depth,
        level_profile,
        image_profile,
        failing_level: None,
        reason: None,
    };
    if top == 0 {
        return verdict;
    }
    let lo = top.saturating_sub(window.max(1));
    for k in (lo..top).rev() {
        if !factors_through::<K>(&x.bond(top - 1, k), &x.bond(top, k)) {
            verdict.rudimentary = false;
            verdict.failing_level = Some(k);
            verdict.reason = Some(format!(
                "image of level {} in level {k} has not stabilised",
                top - 1
            ));
            return verdict;
        }
        if k + 1 < top {
            let restricted = K::compose(&x.bond(k + 1, k), &images[k + 1].1);
            if !K::classify(&restricted).mono {
                verdict.rudimentary = false;
                verdict.failing_level = Some(k);
                verdict.reason = Some(format!("stable image map {} → {k} is not injective", k + 1));
                return verdict;
            }
        }
    }
    verdict
}

/// Representatives of `Hom(X, Y)` on the truncations at `depth`: one level
/// morphism for each map `X_depth → Y_depth`.
pub fn pro_hom_at_depth<K: ValueCategory>(
    x: &Tower<K>,
    y: &Tower<K>,
    depth: usize,
) -> Result<Vec<LevelMorphism<K>>> {
    let xt = Arc::new(x.truncate(depth));
    let yt = Arc::new(y.truncate(depth));
    let homs =
        K::enumerate_homs(xt.level(depth), yt.level(depth)).ok_or(Error::NonEnumerableHom)?;
    let s = depth.min(xt.depth());
    homs.into_iter()
        .map(|h| {
            let components = (0..=yt.depth())
                .map(|j| K::compose(&yt.bond(depth, j), &h))
                .collect();
            LevelMorphism::new(xt.clone(), yt.clone(), vec![s; yt.depth() + 1], components)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{FinAb, FinAbCat, FinAbMap, FinSet, FinSetCat, FinSetMap};

    fn merging(depth: usize) -> Arc<Tower<FinSetCat>> {
        let levels: Vec<FinSet> = (0..=depth).map(|k| FinSet::new(k + 1)).collect();
        Arc::new(
            Tower::from_fn(levels, |k| {
                FinSetMap::from_fn(FinSet::new(k + 2), FinSet::new(k + 1), move |x| x.min(k))
            })
            .unwrap(),
        )
    }

    fn to_point(x: &Arc<Tower<FinSetCat>>) -> LevelMorphism<FinSetCat> {
        let pt = Arc::new(Tower::rudimentary(FinSet::new(1)));
        LevelMorphism::new(
            x.clone(),
            pt,
            vec![0],
            vec![FinSetCat::terminal_map(x.level(0))],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_iso() {
        let x = merging(4);
        assert!(is_iso_at_depth(&LevelMorphism::identity(x), 4).iso);
    }

    #[test]
    fn growing_tower_is_not_a_point() {
        let x = merging(4);
        let v = is_iso_at_depth(&to_point(&x), 3);
        assert!(!v.iso);
        assert_eq!(v.obstruction, Some(1));
        assert!(is_epi_at_depth(&to_point(&x), 3, None).epi);
    }

    #[test]
    fn rudimentary_profiles() {
        let x = merging(6);
        let v = is_rudimentary_at_depth(&x, 5, DEFAULT_WINDOW);
        assert!(!v.rudimentary);
        assert_eq!(&v.level_profile[..4], &["1", "2", "3", "4"]);
        let pt = Tower::<FinSetCat>::rudimentary(FinSet::new(3)).extend_to(5);
        assert!(is_rudimentary_at_depth(&pt, 5, DEFAULT_WINDOW).rudimentary);
        // eventually constant after a growing prefix
        let mut levels: Vec<FinSet> = (0..3).map(|k| FinSet::new(k + 1)).collect();
        levels.extend(std::iter::repeat_n(FinSet::new(3), 5));
        let ev = Tower::<FinSetCat>::from_fn(levels, |k| {
            if k < 2 {
                FinSetMap::from_fn(FinSet::new(k + 2), FinSet::new(k + 1), move |x| x.min(k))
            } else {
                FinSetCat::identity(&FinSet::new(3))
            }
        })
        .unwrap();
        assert!(!is_rudimentary_at_depth(&ev, 2, DEFAULT_WINDOW).rudimentary);
        assert!(is_rudimentary_at_depth(&ev, 6, DEFAULT_WINDOW).rudimentary);
    }

    #[test]
    fn doubling_tower_is_not_rudimentary() {
        let z = FinAb::free(1);
        let t =
            Tower::<FinAbCat>::from_fn(vec![z.clone(); 6], |_| FinAbMap::scalar(&z, 2)).unwrap();
        let v = is_rudimentary_at_depth(&t, 4, DEFAULT_WINDOW);
        assert!(!v.rudimentary, "{v:?}");
    }

    #[test]
    fn doubling_is_not_epi() {
        let z = FinAb::free(1);
        let f = LevelMorphism::<FinAbCat>::rudimentary(FinAbMap::scalar(&z, 2));
        let v = is_epi_at_depth(&f, 0, None);
        assert!(!v.epi);
        assert_eq!(FinAbCat::describe(&v.witness.unwrap().test_object), "Z/2");
    }

    #[test]
    fn inclusion_is_not_epi() {
        let f = LevelMorphism::<FinSetCat>::rudimentary(FinSetMap::from_fn(
            FinSet::new(1),
            FinSet::new(2),
            |_| 0,
        ));
        assert!(!is_epi_at_depth(&f, 0, None).epi);
    }

    #[test]
    fn pro_hom_counts() {
        let two = Tower::<FinSetCat>::rudimentary(FinSet::new(2));
        assert_eq!(pro_hom_at_depth(&two, &two, 0).unwrap().len(), 4);
        let x = merging(5);
        assert_eq!(pro_hom_at_depth(&x, &two, 3).unwrap().len(), 16);
        let pt = Tower::<FinSetCat>::rudimentary(FinSet::new(1));
        assert_eq!(pro_hom_at_depth(&x, &pt, 3).unwrap().len(), 1);
        let z = Tower::<FinAbCat>::rudimentary(FinAb::free(1));
        assert!(pro_hom_at_depth(&z, &z, 0).is_err());
    }

    #[test]
    fn distinct_constants_differ() {
        let x = merging(3);
        let two = Arc::new(Tower::rudimentary(FinSet::new(2)));
        let c = |v: usize| {
            LevelMorphism::new(
                x.clone(),
                two.clone(),
                vec![0],
                vec![FinSetMap::from_fn(
                    FinSet::new(1),
                    FinSet::new(2),
                    move |_| v,
                )],
            )
            .unwrap()
        };
        for d in 0..3 {
            assert!(!equal_at_depth(&c(0), &c(1), d).unwrap());
            assert!(equal_at_depth(&c(1), &c(1), d).unwrap());
        }
    }
}
