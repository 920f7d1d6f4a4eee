//! Finite T0 spaces as posets, their open-set sites and the π₀ and H₀
//! precosheaves.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::cosheaf::Precosheaf;
use crate::error::{Error, Result};
use crate::sheaf::Presheaf;
use crate::site::{Cover, Coverage, FiniteCategory, ObjectId, PointFilter, SiteSpec};
use crate::value::{FinAb, FinAbCat, FinAbMap, FinSet, FinSetCat, FinSetMap, ZMatrix};

/// Default bound on the number of points for enumerating all opens.
pub const DEFAULT_POINT_BOUND: usize = 10;

/// A finite space given by its specialization order. Opens are the
/// down-sets; the minimal open neighbourhood of `x` is the down-set of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    pub points: Vec<String>,
    /// `leq[x][y]`: `x ≤ y`.
    leq: Vec<Vec<bool>>,
}

impl FiniteSpace {
    /// Takes generating relations `x ≤ y` and closes them reflexively and
    /// transitively; rejects cycles (T0 spaces only).
    pub fn new(points: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = points.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in relations {
            if x >= n || y >= n {
                return Err(Error::InvalidSite(format!(
                    "relation ({x}, {y}) names a missing point"
                )));
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(Error::InvalidSite(format!(
                        "points {} and {} are not separated",
                        points[x], points[y]
                    )));
                }
            }
        }
        Ok(FiniteSpace { points, leq })
    }

    pub fn discrete(n: usize) -> Self {
        FiniteSpace::new((0..n).map(|i| format!("p{i}")).collect(), &[]).expect("discrete order")
    }

    /// Four points `a, b, c, d` with `a, b < c, d`: a finite model of the
    /// circle.
    pub fn pseudocircle() -> Self {
        let pts = ["a", "b", "c", "d"].map(String::from).to_vec();
        FiniteSpace::new(pts, &[(0, 2), (1, 2), (0, 3), (1, 3)]).expect("pseudocircle order")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn minimal_open(&self, x: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    pub fn is_open(&self, s: &BTreeSet<usize>) -> bool {
        s.iter()
            .all(|&x| (0..self.len()).all(|y| !self.leq[y][x] || s.contains(&y)))
    }

    /// All opens, ordered by size and then lexicographically.
    pub fn opens(&self) -> Vec<BTreeSet<usize>> {
        let n = self.len();
        let mut out: Vec<BTreeSet<usize>> = (0u32..1 << n)
            .map(|mask| {
                (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .collect::<BTreeSet<usize>>()
            })
            .filter(|s| self.is_open(s))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        out
    }

    /// Connected components of a subset under comparability adjacency.
    pub fn components(&self, s: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &x in s {
            if seen.contains(&x) {
                continue;
            }
            let mut comp = BTreeSet::from([x]);
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                for &z in s {
                    if !comp.contains(&z) && (self.leq[y][z] || self.leq[z][y]) {
                        comp.insert(z);
                        stack.push(z);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// Every minimal open is connected.
    pub fn is_locally_connected(&self) -> bool {
        (0..self.len()).all(|x| self.components(&self.minimal_open(x)).len() == 1)
    }

    pub fn is_connected(&self) -> bool {
        self.components(&(0..self.len()).collect()).len() <= 1
    }

    fn name_of(&self, s: &BTreeSet<usize>) -> String {
        if s.is_empty() {
            "∅".into()
        } else if s.len() == self.len() {
            "X".into()
        } else {
            let names: Vec<&str> = s.iter().map(|&x| self.points[x].as_str()).collect();
            format!("{{{}}}", names.join(","))
        }
    }
}

/// Which covers an open-set site declares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverPolicy {
    /// Every inclusion-irredundant family of opens with union `U`.
    AllIrredundant,
    /// The minimal opens of the maximal points of `U`.
    Generated,
}

/// The open sets of a finite space with a site structure.
#[derive(Clone, Debug)]
pub struct OpenSite {
    pub space: FiniteSpace,
    pub opens: Vec<BTreeSet<usize>>,
    pub site: Arc<SiteSpec>,
}

impl OpenSite {
    pub fn object_of(&self, s: &BTreeSet<usize>) -> Option<ObjectId> {
        self.opens.iter().position(|o| o == s)
    }
}

fn irredundant_covers(opens: &[BTreeSet<usize>], u: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let below: Vec<usize> = (0..opens.len())
        .filter(|&i| opens[i].is_subset(u) && !opens[i].is_empty())
        .collect();
    let mut out = Vec::new();
    fn go(
        opens: &[BTreeSet<usize>],
        u: &BTreeSet<usize>,
        below: &[usize],
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let union: BTreeSet<usize> = chosen
            .iter()
            .flat_map(|&i| opens[i].iter().copied())
            .collect();
        if &union == u {
            let irredundant = chosen.iter().all(|&i| {
                let rest: BTreeSet<usize> = chosen
                    .iter()
                    .filter(|&&j| j != i)
                    .flat_map(|&j| opens[j].iter().copied())
                    .collect();
                &rest != u
            });
            if irredundant {
                out.push(chosen.clone());
            }
            return;
        }
        if chosen.len() >= u.len() {
            return;
        }
        for k in start..below.len() {
            let i = below[k];
            if opens[i].is_subset(&union) {
                continue;
            }
            chosen.push(i);
            go(opens, u, below, k + 1, chosen, out);
            chosen.pop();
        }
    }
    go(opens, u, &below, 0, &mut Vec::new(), &mut out);
    out
}

/// Objects are the opens, morphisms the inclusions, meets the
/// intersections; each point's filter is its minimal open.
pub fn open_site(space: &FiniteSpace, policy: CoverPolicy, bound: usize) -> Result<OpenSite> {
    if space.len() > bound {
        return Err(Error::Unsupported(format!(
            "{} points exceed the bound {bound}",
            space.len()
        )));
    }
    let opens = space.opens();
    let names: Vec<String> = opens.iter().map(|o| space.name_of(o)).collect();
    let mut leq = Vec::new();
    for (i, a) in opens.iter().enumerate() {
        for (j, b) in opens.iter().enumerate() {
            if i != j && a.is_subset(b) {
                leq.push((i, j));
            }
        }
    }
    let cat = FiniteCategory::from_poset(names, &leq)?;
    let index = |s: &BTreeSet<usize>| {
        opens
            .iter()
            .position(|o| o == s)
            .expect("opens are closed under meets")
    };
    let mut coverage = Coverage::empty(opens.len());
    for (u, uset) in opens.iter().enumerate() {
        let families: Vec<Vec<usize>> = match policy {
            CoverPolicy::AllIrredundant => irredundant_covers(&opens, uset),
            CoverPolicy::Generated => {
                let maximal: BTreeSet<usize> = uset
                    .iter()
                    .copied()
                    .filter(|&x| uset.iter().all(|&y| y == x || !space.leq(x, y)))
                    .collect();
                let pieces: BTreeSet<usize> = maximal
                    .iter()
                    .map(|&x| index(&space.minimal_open(x)))
                    .collect();
                vec![pieces.into_iter().collect()]
            }
        };
        for fam in families {
            let pieces = fam.iter().map(|&p| cat.hom(p, u)[0]).collect();
            let mut meets = BTreeMap::new();
            for i in 0..fam.len() {
                for j in i + 1..fam.len() {
                    let m: BTreeSet<usize> = opens[fam[i]]
                        .intersection(&opens[fam[j]])
                        .copied()
                        .collect();
                    meets.insert((i, j), index(&m));
                }
            }
            coverage.covers[u].push(Cover::new(u, pieces).with_meets(&cat, &meets)?);
        }
    }
    let points = (0..space.len())
        .map(|x| PointFilter::bounded(space.points[x].clone(), vec![index(&space.minimal_open(x))]))
        .collect();
    let site = Arc::new(SiteSpec::new(
        format!("open-site({})", space.points.join(",")),
        cat,
        coverage,
        points,
    )?);
    Ok(OpenSite {
        space: space.clone(),
        opens,
        site,
    })
}

/// Component of `comps` containing `x`.
fn component_index(comps: &[BTreeSet<usize>], x: usize) -> usize {
    comps
        .iter()
        .position(|c| c.contains(&x))
        .expect("point lies in a component")
}

fn component_maps(os: &OpenSite) -> (Vec<Vec<BTreeSet<usize>>>, Vec<Vec<usize>>) {
    let cat = &os.site.category;
    let comps: Vec<Vec<BTreeSet<usize>>> =
        os.opens.iter().map(|o| os.space.components(o)).collect();
    let maps = (0..cat.morphism_count())
        .map(|m| {
            let (v, u) = (cat.src(m), cat.dst(m));
            comps[v]
                .iter()
                .map(|c| component_index(&comps[u], *c.iter().next().expect("nonempty")))
                .collect()
        })
        .collect();
    (comps, maps)
}

/// `U ↦ π₀(U)`, labelled by the points of each component.
pub fn pi0_precosheaf(os: &OpenSite) -> Precosheaf<FinSetCat> {
    let (comps, maps) = component_maps(os);
    let cat = &os.site.category;
    let values: Vec<FinSet> = comps
        .iter()
        .map(|cs| {
            FinSet::labeled(cs.iter().map(|c| {
                c.iter()
                    .map(|&x| os.space.points[x].as_str())
                    .collect::<Vec<_>>()
                    .join("")
            }))
        })
        .collect();
    let action = (0..cat.morphism_count())
        .map(|m| {
            FinSetMap::new(
                values[cat.src(m)].clone(),
                values[cat.dst(m)].clone(),
                maps[m].clone(),
            )
            .expect("component map")
        })
        .collect();
    Precosheaf::rudimentary(os.site.clone(), values, action).expect("π₀ is functorial")
}

/// `U ↦ G^{π₀(U)}`: the free abelian group on components tensored with
/// `G`.
pub fn h0_precosheaf(os: &OpenSite, g: &FinAb) -> Precosheaf<FinAbCat> {
    let (comps, maps) = component_maps(os);
    let cat = &os.site.category;
    let k = g.gens();
    let values: Vec<FinAb> = comps
        .iter()
        .map(|cs| {
            let blocks: Vec<&ZMatrix> = cs.iter().map(|_| g.relations()).collect();
            FinAb::new(k * cs.len(), ZMatrix::block_diag(&blocks)).expect("direct sum")
        })
        .collect();
    let action = (0..cat.morphism_count())
        .map(|m| {
            let (v, u) = (cat.src(m), cat.dst(m));
            let mut mat = ZMatrix::zeros(values[u].gens(), values[v].gens());
            for (c, &target) in maps[m].iter().enumerate() {
                for i in 0..k {
                    mat[(target * k + i, c * k + i)] = BigInt::from(1);
                }
            }
            FinAbMap::new(values[v].clone(), values[u].clone(), mat)
                .expect("block map respects relations")
        })
        .collect();
    Precosheaf::rudimentary(os.site.clone(), values, action).expect("H₀ is functorial")
}

/// `U ↦ functions(U, G)` with restriction of functions.
pub fn functions_presheaf(os: &OpenSite, g: &FinSet) -> Result<Presheaf<FinSetCat>> {
    let cat = &os.site.category;
    let q = g.len();
    let values: Vec<FinSet> = os
        .opens
        .iter()
        .map(|o| FinSet::new(q.pow(o.len() as u32)))
        .collect();
    // A function on an open is encoded in base |G| along the sorted points.
    let action = (0..cat.morphism_count())
        .map(|m| {
            let (v, u) = (cat.src(m), cat.dst(m));
            let (vs, us): (Vec<usize>, Vec<usize>) = (
                os.opens[v].iter().copied().collect(),
                os.opens[u].iter().copied().collect(),
            );
            FinSetMap::from_fn(values[u].clone(), values[v].clone(), |code| {
                let digit = |x: usize| {
                    let pos = us
                        .iter()
                        .position(|&y| y == x)
                        .expect("restriction to a subset");
                    (code / q.pow(pos as u32)) % q
                };
                vs.iter()
                    .enumerate()
                    .map(|(i, &x)| digit(x) * q.pow(i as u32))
                    .sum()
            })
        })
        .collect();
    Presheaf::new(os.site.clone(), values, action)
}
