//! Covers, refinements and coverages with optional rule-generated chains.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::category::{FiniteCategory, MorphismId, ObjectId};
use super::sieve::Sieve;

/// Declared intersection of pieces `i` and `j`: an object with morphisms
/// into both pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub object: ObjectId,
    pub to_left: MorphismId,
    pub to_right: MorphismId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub target: ObjectId,
    pub pieces: Vec<MorphismId>,
    pub intersections: Option<BTreeMap<(usize, usize), Intersection>>,
}

impl Cover {
    pub fn new(target: ObjectId, pieces: Vec<MorphismId>) -> Self {
        Cover {
            target,
            pieces,
            intersections: None,
        }
    }

    pub fn trivial(cat: &FiniteCategory, target: ObjectId) -> Self {
        Cover::new(target, vec![cat.identity(target)])
    }

    pub fn with_intersections(mut self, ix: BTreeMap<(usize, usize), Intersection>) -> Self {
        self.intersections = Some(ix);
        self
    }

    /// For poset sites: intersections given by meet objects; the
    /// morphisms are the unique inclusions.
    pub fn with_meets(
        self,
        cat: &FiniteCategory,
        meets: &BTreeMap<(usize, usize), ObjectId>,
    ) -> Result<Self> {
        let mut ix = BTreeMap::new();
        for (&(i, j), &w) in meets {
            let (pi, pj) = (self.pieces[i], self.pieces[j]);
            let l = *cat.hom(w, cat.src(pi)).first().ok_or_else(|| {
                Error::InvalidSite(format!(
                    "meet {} is not below piece {i}",
                    cat.object_name(w)
                ))
            })?;
            let r = *cat.hom(w, cat.src(pj)).first().ok_or_else(|| {
                Error::InvalidSite(format!(
                    "meet {} is not below piece {j}",
                    cat.object_name(w)
                ))
            })?;
            ix.insert(
                (i, j),
                Intersection {
                    object: w,
                    to_left: l,
                    to_right: r,
                },
            );
        }
        Ok(self.with_intersections(ix))
    }

    /// The sieve generated by the pieces.
    pub fn sieve(&self, cat: &FiniteCategory) -> Sieve {
        Sieve::generated(cat, self.target, &self.pieces)
    }

    /// Structural checks: pieces end at the target, the empty cover only on
    /// initial objects, and declared intersections commute over the target.
    pub fn validate(&self, cat: &FiniteCategory) -> Result<()> {
        for &p in &self.pieces {
            if p >= cat.morphism_count() || cat.dst(p) != self.target {
                return Err(Error::InvalidSite(format!(
                    "cover piece {p} does not end at {}",
                    cat.object_name(self.target)
                )));
            }
        }
        if self.pieces.is_empty() && !is_initial_object(cat, self.target) {
            return Err(Error::InvalidSite(format!(
                "empty cover of {}, which is not an empty object",
                cat.object_name(self.target)
            )));
        }
        if let Some(ix) = &self.intersections {
            for (&(i, j), x) in ix {
                if i >= self.pieces.len() || j >= self.pieces.len() {
                    return Err(Error::InvalidSite(format!(
                        "intersection ({i}, {j}) names a missing piece"
                    )));
                }
                let (pi, pj) = (self.pieces[i], self.pieces[j]);
                if cat.src(x.to_left) != x.object
                    || cat.dst(x.to_left) != cat.src(pi)
                    || cat.src(x.to_right) != x.object
                    || cat.dst(x.to_right) != cat.src(pj)
                    || cat.compose(pi, x.to_left) != cat.compose(pj, x.to_right)
                {
                    return Err(Error::InvalidSite(format!(
                        "intersection ({i}, {j}) of {} does not commute over the target",
                        cat.object_name(self.target)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An initial object: exactly one morphism into every object.
pub fn is_initial_object(cat: &FiniteCategory, o: ObjectId) -> bool {
    (0..cat.object_count()).all(|t| cat.hom(o, t).len() == 1)
}

/// A refinement `fine → coarse`: for each fine piece, the index of a coarse
/// piece and a factorizing morphism `g` with `coarse[c] ∘ g = fine[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub assignment: Vec<(usize, MorphismId)>,
}

impl Refinement {
    /// `self: a → b` followed by `next: b → c`.
    pub fn then(&self, cat: &FiniteCategory, next: &Refinement) -> Refinement {
        let assignment = self
            .assignment
            .iter()
            .map(|&(b, g1)| {
                let (c, g2) = next.assignment[b];
                (c, cat.compose(g2, g1).expect("refinement factors compose"))
            })
            .collect();
        Refinement { assignment }
    }

    /// Checks every factorization against the composition table.
    pub fn is_valid(&self, cat: &FiniteCategory, fine: &Cover, coarse: &Cover) -> bool {
        self.assignment.len() == fine.pieces.len()
            && self
                .assignment
                .iter()
                .zip(&fine.pieces)
                .all(|(&(c, g), &p)| {
                    c < coarse.pieces.len() && cat.compose(coarse.pieces[c], g) == Some(p)
                })
    }
}

/// Finds a refinement of `coarse` by `fine`, choosing for each fine piece
/// the smallest coarse piece index and then the smallest morphism id.
pub fn find_refinement(cat: &FiniteCategory, fine: &Cover, coarse: &Cover) -> Option<Refinement> {
    if fine.target != coarse.target {
        return None;
    }
    let mut assignment = Vec::with_capacity(fine.pieces.len());
    for &p in &fine.pieces {
        let found = coarse.pieces.iter().enumerate().find_map(|(c, &q)| {
            cat.hom(cat.src(p), cat.src(q))
                .iter()
                .find(|&&g| cat.compose(q, g) == Some(p))
                .map(|&g| (c, g))
        })?;
        assignment.push(found);
    }
    Some(Refinement { assignment })
}

/// How a chain was specified, kept for serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainRule {
    Explicit,
    /// The converging-sequence rule on objects named `V{k}` and `S{n}`.
    Converging,
}

/// A refinement-monotone sequence of covers presenting infinitely many
/// covers up to a depth bound. `refinements[k]` witnesses that level
/// `k + 1` refines level `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverChain {
    pub rule: ChainRule,
    pub levels: Vec<Cover>,
    pub refinements: Vec<Refinement>,
}

impl CoverChain {
    pub fn new(cat: &FiniteCategory, rule: ChainRule, levels: Vec<Cover>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSite("cover chain without levels".into()));
        }
        let mut refinements = Vec::with_capacity(levels.len() - 1);
        for k in 0..levels.len() - 1 {
            let r = find_refinement(cat, &levels[k + 1], &levels[k]).ok_or_else(|| {
                Error::InvalidSite(format!(
                    "chain level {} of {} does not refine level {k}",
                    k + 1,
                    cat.object_name(levels[k].target)
                ))
            })?;
            refinements.push(r);
        }
        Ok(CoverChain {
            rule,
            levels,
            refinements,
        })
    }

    /// Number of stored levels minus one.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Level `k`, clamped to the deepest stored level.
    pub fn level(&self, k: usize) -> &Cover {
        &self.levels[k.min(self.depth())]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub covers: Vec<Vec<Cover>>,
    pub chains: Vec<Option<CoverChain>>,
}

impl Coverage {
    pub fn empty(objects: usize) -> Self {
        Coverage {
            covers: vec![Vec::new(); objects],
            chains: vec![None; objects],
        }
    }

    /// Every declared cover and every chain level on `u`.
    pub fn all_covers(&self, u: ObjectId) -> Vec<&Cover> {
        let mut out: Vec<&Cover> = self.covers[u].iter().collect();
        if let Some(ch) = &self.chains[u] {
            out.extend(ch.levels.iter());
        }
        out
    }
}
