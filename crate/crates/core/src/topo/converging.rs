//! The convergent sequence `{0} ∪ {1/n}` truncated to `N` isolated points.
//!
//! Objects are `X = V1`, the tails `V2..VN` (`V_k` contains `0` and every
//! `1/n` with `n ≥ k`), the singletons `S1..SN` and `∅`. Each `V_k` carries
//! the chain whose level `j` splits off the isolated points below `m = j+1`:
//! the trivial cover while `m ≤ k`, afterwards `{V_m, S_k, .., S_{m-1}}`
//! with every meet empty.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::site::{
    ChainRule, Cover, CoverChain, Coverage, FiniteCategory, ObjectId, PointFilter, SiteSpec,
};

/// Object ids on the converging site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvergingLayout {
    pub n: usize,
}

impl ConvergingLayout {
    /// `V_k` for `1 ≤ k ≤ n`; `V_1` is `X`.
    pub fn v(&self, k: usize) -> ObjectId {
        k - 1
    }

    /// `S_k` for `1 ≤ k ≤ n`.
    pub fn s(&self, k: usize) -> ObjectId {
        self.n + k - 1
    }

    pub fn empty(&self) -> ObjectId {
        2 * self.n
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.n)
            .map(|k| if k == 1 { "X".into() } else { format!("V{k}") })
            .collect();
        names.extend((1..=self.n).map(|k| format!("S{k}")));
        names.push("∅".into());
        names
    }
}

/// The poset of the objects above under inclusion.
pub fn converging_category(n: usize) -> Result<FiniteCategory> {
    let l = ConvergingLayout { n };
    let mut leq = Vec::new();
    for k in 1..=n {
        for m in k + 1..=n {
            leq.push((l.v(m), l.v(k)));
        }
        for s in k..=n {
            leq.push((l.s(s), l.v(k)));
        }
        leq.push((l.empty(), l.v(k)));
        leq.push((l.empty(), l.s(k)));
    }
    FiniteCategory::from_poset(l.names(), &leq)
}

/// The chain cover of `V_k` at `m = j + 1`.
pub fn converging_cover(
    cat: &FiniteCategory,
    l: ConvergingLayout,
    k: usize,
    m: usize,
) -> Result<Cover> {
    let target = l.v(k);
    if m <= k {
        return Ok(Cover::trivial(cat, target));
    }
    let mut pieces_obj = vec![l.v(m)];
    pieces_obj.extend((k..m).map(|s| l.s(s)));
    let pieces = pieces_obj.iter().map(|&p| cat.hom(p, target)[0]).collect();
    let mut meets = BTreeMap::new();
    for i in 0..pieces_obj.len() {
        for j in i + 1..pieces_obj.len() {
            meets.insert((i, j), l.empty());
        }
    }
    Cover::new(target, pieces).with_meets(cat, &meets)
}

/// The site with `n ≥ 1` isolated points, chains of depth `n − 1` on the
/// tails, the unbounded point `0` and bounded points `1/k`.
pub fn converging_sequence_site(n: usize) -> Result<Arc<SiteSpec>> {
    if n < 1 {
        return Err(Error::InvalidSite(
            "the converging site needs at least one isolated point".into(),
        ));
    }
    let l = ConvergingLayout { n };
    let cat = converging_category(n)?;
    let mut coverage = Coverage::empty(cat.object_count());
    for k in 1..=n {
        coverage.covers[l.s(k)].push(Cover::trivial(&cat, l.s(k)));
        let levels = (1..=n)
            .map(|m| converging_cover(&cat, l, k, m))
            .collect::<Result<Vec<_>>>()?;
        coverage.chains[l.v(k)] = Some(CoverChain::new(&cat, ChainRule::Converging, levels)?);
    }
    coverage.covers[l.empty()].push(Cover::new(l.empty(), Vec::new()));
    let mut points = vec![PointFilter::unbounded(
        "0",
        (1..=n).map(|k| l.v(k)).collect(),
    )];
    points.extend((1..=n).map(|k| PointFilter::bounded(format!("1/{k}"), vec![l.v(1), l.s(k)])));
    Ok(Arc::new(SiteSpec::new(
        format!("converging({n})"),
        cat,
        coverage,
        points,
    )?))
}

/// Rebuilds the chain of a tail object from its name (`X` or `V{k}`) on a
/// category laid out as above; used when reading the `converging` rule.
pub fn converging_chain_for(cat: &FiniteCategory, name: &str) -> Result<CoverChain> {
    let n = cat.objects().iter().filter(|o| o.starts_with('S')).count();
    let l = ConvergingLayout { n };
    if l.names() != cat.objects() {
        return Err(Error::InvalidSite(
            "the converging rule needs objects X, V2.., S1.., ∅ in that order".into(),
        ));
    }
    let k = if name == "X" {
        1
    } else {
        name.strip_prefix('V')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&k| (2..=n).contains(&k))
            .ok_or_else(|| {
                Error::InvalidSite(format!("the converging rule does not apply to {name}"))
            })?
    };
    let levels = (1..=n)
        .map(|m| converging_cover(cat, l, k, m))
        .collect::<Result<Vec<_>>>()?;
    CoverChain::new(cat, ChainRule::Converging, levels)
}
